use crate::schemes::ButcherTableau;
use crate::systems::{vector_field, PlanarPoint, SingularityKind, SystemParams};

/// Forward Euler: `p + h·f(p)`.
pub fn euler_step(kind: SingularityKind, params: &SystemParams, p: &PlanarPoint) -> PlanarPoint {
    let v = vector_field(kind, &params.epsilon, p);
    PlanarPoint::new(&p.x + &params.h * v.x, &p.y + &params.h * v.y)
}

/// Explicit Runge-Kutta step with stages `k_i = f(p + h Σ_{j<i} a_ij k_j)`.
pub fn rk_step(
    tableau: &ButcherTableau,
    kind: SingularityKind,
    params: &SystemParams,
    p: &PlanarPoint,
) -> PlanarPoint {
    let h = &params.h;
    let mut stages: Vec<PlanarPoint> = Vec::with_capacity(tableau.stages());
    for i in 0..tableau.stages() {
        let mut x = p.x.clone();
        let mut y = p.y.clone();
        for (a, k) in tableau.row(i).iter().zip(&stages) {
            if a.is_zero() {
                continue;
            }
            let ha = h * a;
            x += &ha * &k.x;
            y += &ha * &k.y;
        }
        stages.push(vector_field(kind, &params.epsilon, &PlanarPoint::new(x, y)));
    }
    let mut dx = p.x.constant(0, 1);
    let mut dy = dx.clone();
    for (w, k) in tableau.alpha().iter().zip(&stages) {
        dx += w * &k.x;
        dy += w * &k.y;
    }
    PlanarPoint::new(&p.x + h * dx, &p.y + h * dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{approx_eq, PrecisionContext};

    fn setup(h: &str, eps: &str) -> (PrecisionContext, SystemParams) {
        let c = PrecisionContext::new(50).unwrap();
        let params = SystemParams::relaxed(c.parse(eps).unwrap(), c.parse(h).unwrap());
        (c, params)
    }

    #[test]
    fn euler_examples() {
        let (c, params) = setup("0.1", "0.01");
        let tol = c.tolerance();
        let p = euler_step(SingularityKind::Transcritical, &params, &PlanarPoint::new(c.int(-1), c.int(-1)));
        assert!(approx_eq(&p.x, &c.parse("-0.999").unwrap(), &tol));
        assert_eq!(p.x, p.y);
        let p = euler_step(SingularityKind::Pitchfork, &params, &PlanarPoint::new(c.zero(), c.int(-1)));
        assert!(p.x.is_zero());
        assert!(approx_eq(&p.y, &c.parse("-0.999").unwrap(), &tol));

        let (c, params) = setup("0.1", "0");
        let p = euler_step(SingularityKind::Transcritical, &params, &PlanarPoint::new(c.one(), c.zero()));
        assert!(approx_eq(&p.x, &c.parse("1.1").unwrap(), &tol));
        assert!(p.y.is_zero());
    }

    #[test]
    fn rk1_reduces_to_euler() {
        let (c, params) = setup("0.1", "0.01");
        let euler = ButcherTableau::shipped(&c, "euler").unwrap();
        for kind in SingularityKind::ALL {
            let p = PlanarPoint::new(c.parse("-0.3").unwrap(), c.parse("0.7").unwrap());
            assert_eq!(rk_step(&euler, kind, &params, &p), euler_step(kind, &params, &p));
        }
    }

    #[test]
    fn kutta3_matches_hand_recursion() {
        let (c, params) = setup("0.1", "0");
        let t = ButcherTableau::shipped(&c, "kutta3").unwrap();
        let got = rk_step(&t, SingularityKind::Transcritical, &params, &PlanarPoint::new(c.one(), c.zero()));
        // With eps = 0 and y = 0 the fast equation is x' = x².
        let h = c.parse("0.1").unwrap();
        let x = c.one();
        let k1 = x.square();
        let k2 = (&x + &h * &k1 / 2).square();
        let k3 = (&x - &h * &k1 + &h * &k2 * 2).square();
        let want = &x + &h * (k1 / 6 + k2 * 2 / 3 + k3 / 6);
        assert!(approx_eq(&got.x, &want, &c.tolerance()));
        assert!(got.y.is_zero());
    }
}
