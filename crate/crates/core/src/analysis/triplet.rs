//! Critical triplets `(ρ*, h*, ε*)`: parameters at which the first
//! multiplier on the canard vanishes, either from the linearization or
//! bracketed from the nonlinear jump behavior.

use crate::analysis::jump::{classify_jump, default_max_n, JumpClass};
use crate::error::{Error, Result};
use crate::linearization::{jacobian_factor, q_s};
use crate::precision::Scalar;
use crate::schemes::{ButcherTableau, Scheme, Stepper};
use crate::systems::{SingularityKind, SystemParams};

const SCAN_POINTS: i32 = 2000;

#[derive(Clone, Debug, PartialEq)]
pub enum TripletSource {
    Linearized,
    BisectionBracket { lo: Scalar, hi: Scalar },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalTriplet {
    pub rho_star: Scalar,
    pub h_star: Scalar,
    pub eps_star: Scalar,
    pub source: TripletSource,
}

/// Root of `f` in `[lo, hi]` where `f(lo)` and `f(hi)` differ in sign, by
/// the Illinois variant of regula falsi with bisection safeguards.
pub(crate) fn solve_bracketed<F>(mut f: F, lo: Scalar, hi: Scalar) -> Scalar
where
    F: FnMut(&Scalar) -> Scalar,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(&a), f(&b));
    if fa.is_zero() {
        return a;
    }
    if fb.is_zero() {
        return b;
    }
    let tol = a.tolerance() * a.constant(1, 1_000_000);
    let mut side = 0i32;
    let max_iter = 20 * a.digits() as usize + 200;
    for iter in 0..max_iter {
        let width = (&b - &a).abs();
        let scale = a.abs().max(b.abs()).max(a.constant(1, 1_000_000));
        if width <= &tol * &scale {
            break;
        }
        let c = if iter % 8 == 7 {
            (&a + &b) / 2
        } else {
            let c = (&a * &fb - &b * &fa) / (&fb - &fa);
            let inside = (c > a && c < b) || (c > b && c < a);
            if inside { c } else { (&a + &b) / 2 }
        };
        let fc = f(&c);
        if fc.is_zero() {
            return c;
        }
        if fc.signum_i32() == fb.signum_i32() {
            b = c;
            fb = fc;
            if side == -1 {
                fa /= 2;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb /= 2;
            }
            side = 1;
        }
        // Once the bracket is tight, secant steps from the ends are exact to
        // working precision; settle on the end with the smaller residual.
        if (&b - &a).abs() <= &tol * &scale {
            break;
        }
    }
    if fa.abs() <= fb.abs() {
        a
    } else {
        b
    }
}

/// Smallest root of `f` on `(0, max]`, located on a uniform scan and refined.
pub(crate) fn first_root<F>(mut f: F, max: &Scalar) -> Option<Scalar>
where
    F: FnMut(&Scalar) -> Scalar,
{
    let step = max / SCAN_POINTS;
    let mut prev_x = max.constant(0, 1);
    let mut prev_f: Option<Scalar> = None;
    for i in 1..=SCAN_POINTS {
        let x = &step * i;
        let fx = f(&x);
        if fx.is_zero() {
            return Some(x);
        }
        if let Some(pf) = &prev_f {
            if pf.signum_i32() != fx.signum_i32() {
                return Some(solve_bracketed(&mut f, prev_x, x));
            }
        }
        prev_f = Some(fx);
        prev_x = x;
    }
    None
}

/// Smallest `ρ ∈ (0, ρ_max]` with `1 + h·Q_s(−ρ) = 0`; `ρ_max` defaults to `10/h`.
pub fn critical_triplet_linearized(
    tableau: &ButcherTableau,
    h: &Scalar,
    eps: &Scalar,
    rho_max: Option<&Scalar>,
) -> Option<CriticalTriplet> {
    let params = SystemParams::relaxed(eps.clone(), h.clone());
    let rho_max = rho_max.cloned().unwrap_or_else(|| 10 / h);
    let rho = first_root(|rho| 1 + h * q_s(tableau, &params, &-rho.clone()), &rho_max)?;
    Some(CriticalTriplet {
        rho_star: rho,
        h_star: h.clone(),
        eps_star: eps.clone(),
        source: TripletSource::Linearized,
    })
}

/// Smallest `h ∈ (0, h_max]` at which the entry multiplier `J(−ρ)` vanishes;
/// `h_max` defaults to `5/ρ`.
pub fn linearized_h_star(
    kind: SingularityKind,
    scheme: &Scheme,
    rho: &Scalar,
    eps: &Scalar,
    h_max: Option<&Scalar>,
) -> Result<Option<Scalar>> {
    let h_max = h_max.cloned().unwrap_or_else(|| 5 / rho);
    let neg_rho = -rho.clone();
    let mut failure = None;
    let root = first_root(
        |h| {
            let params = SystemParams::relaxed(eps.clone(), h.clone());
            match jacobian_factor(kind, scheme, &params, &neg_rho) {
                Ok(j) => j,
                Err(e) => {
                    failure.get_or_insert(e);
                    rho.constant(1, 1)
                }
            }
        },
        &h_max,
    );
    match failure {
        Some(e @ (Error::NoCanard { .. } | Error::Unsupported(_))) => Err(e),
        _ => Ok(root),
    }
}

/// Settings for the nonlinear critical step-size search.
#[derive(Clone, Debug)]
pub struct BisectionConfig {
    pub delta: Scalar,
    /// Stop once `(hi − lo)/hi < 10^(−target_digits)`.
    pub target_digits: u32,
    /// Relative half-widths tried around the linearized `h*`, tightest first
    /// so the bracket isolates the first change of jump class.
    pub bracket_widths: Vec<Scalar>,
    /// Deviation modulus counted as having left the canard; defaults to `ρ`.
    pub escape: Option<Scalar>,
}

impl BisectionConfig {
    pub fn new(delta: Scalar, target_digits: u32) -> Self {
        let widths = [-8, -6, -4, -3, -2]
            .iter()
            .map(|&e| delta.constant(1, 1) / delta.constant(10, 1).powi(-e))
            .chain(std::iter::once(delta.constant(1, 20)))
            .collect();
        Self {
            delta,
            target_digits,
            bracket_widths: widths,
            escape: None,
        }
    }
}

fn classify_at(kind: SingularityKind, scheme: &Scheme, rho: &Scalar, eps: &Scalar, h: &Scalar, cfg: &BisectionConfig) -> Result<JumpClass> {
    let params = SystemParams::new(eps.clone(), h.clone())?;
    let stepper = Stepper::new(kind, scheme.clone(), params)?;
    let escape = cfg.escape.clone().unwrap_or_else(|| rho.clone());
    let max_n = default_max_n(&stepper.params, rho);
    classify_jump(&stepper, rho, &cfg.delta, &escape, max_n)
}

/// Brackets the step size at which the jump class of the orbit from the
/// perturbed entry changes, starting around the linearized `h*`.
///
/// Past the first change the class alternates in windows of relative width
/// about `2h²ε` as further multipliers turn negative, so brackets are tried
/// tightest first. Endpoints whose orbit stays stuck (deviation lost to
/// rounding) never form a bracket; a stuck midpoint is reported as
/// [`Error::Unresolved`].
pub fn critical_h_bisection(
    kind: SingularityKind,
    scheme: &Scheme,
    rho: &Scalar,
    eps: &Scalar,
    cfg: &BisectionConfig,
) -> Result<CriticalTriplet> {
    let center = linearized_h_star(kind, scheme, rho, eps, None)?.ok_or_else(|| Error::NoBracket {
        h_center: "none (no linearized root)".into(),
    })?;
    let mut bracket = None;
    for w in &cfg.bracket_widths {
        let lo = &center * (1 - w);
        let hi = &center * (1 + w);
        let c_lo = classify_at(kind, scheme, rho, eps, &lo, cfg)?;
        let c_hi = classify_at(kind, scheme, rho, eps, &hi, cfg)?;
        let stuck = matches!(c_lo, JumpClass::Stuck { .. }) || matches!(c_hi, JumpClass::Stuck { .. });
        if !stuck && c_lo != c_hi {
            bracket = Some((lo, c_lo, hi));
            break;
        }
    }
    let (mut lo, c_lo, mut hi) = bracket.ok_or_else(|| Error::NoBracket {
        h_center: center.to_decimal(12),
    })?;
    let target = center.constant(1, 1) / center.constant(10, 1).powi(cfg.target_digits as i32);
    while (&hi - &lo) / &hi >= target {
        let mid = (&lo + &hi) / 2;
        let c_mid = classify_at(kind, scheme, rho, eps, &mid, cfg)?;
        if let JumpClass::Stuck { max_n } = c_mid {
            return Err(Error::Unresolved { max_n });
        }
        if c_mid == c_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalTriplet {
        rho_star: rho.clone(),
        h_star: (&lo + &hi) / 2,
        eps_star: eps.clone(),
        source: TripletSource::BisectionBracket { lo, hi },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{approx_eq, PrecisionContext};

    #[test]
    fn euler_triplet_is_half_inverse_step() {
        let c = PrecisionContext::new(60).unwrap();
        let t = ButcherTableau::shipped(&c, "euler").unwrap();
        for h in ["0.01", "0.05", "0.1"] {
            let h = c.parse(h).unwrap();
            let tr = critical_triplet_linearized(&t, &h, &c.parse("0.3").unwrap(), None).unwrap();
            assert!(approx_eq(&tr.rho_star, &(1 / (&h * 2)), &c.tolerance()));
            assert_eq!(tr.source, TripletSource::Linearized);
        }
    }

    #[test]
    fn heun2_has_no_triplet_without_drift() {
        let c = PrecisionContext::new(40).unwrap();
        let t = ButcherTableau::shipped(&c, "heun2").unwrap();
        assert!(critical_triplet_linearized(&t, &c.parse("0.1").unwrap(), &c.zero(), None).is_none());
    }

    #[test]
    fn kutta3_triplet_matches_stability_polynomial_root() {
        let c = PrecisionContext::new(40).unwrap();
        let t = ButcherTableau::shipped(&c, "kutta3").unwrap();
        let h = c.parse("0.0998").unwrap();
        let tr = critical_triplet_linearized(&t, &h, &c.zero(), None).unwrap();
        let z = -(&tr.rho_star * 2 * &h);
        let poly = 1 + &z + z.square() / 2 + z.powi(3) / 6;
        assert!(poly.abs() <= c.tolerance());
        assert!((z.to_f64() + 1.5961).abs() < 1e-4);
        assert!((tr.rho_star.to_f64() - 8.0).abs() < 0.01);
    }

    #[test]
    fn linearized_h_star_examples() {
        let c = PrecisionContext::new(40).unwrap();
        let eps = c.parse("0.5").unwrap();
        let h = linearized_h_star(SingularityKind::Transcritical, &Scheme::Euler, &c.int(5), &eps, None).unwrap().unwrap();
        assert!(approx_eq(&h, &c.parse("0.1").unwrap(), &c.tolerance()));
        let h = linearized_h_star(SingularityKind::Transcritical, &Scheme::Euler, &c.int(50), &eps, None).unwrap().unwrap();
        assert!(approx_eq(&h, &c.parse("0.01").unwrap(), &c.tolerance()));
        let err = linearized_h_star(SingularityKind::Fold, &Scheme::Euler, &c.int(5), &eps, None);
        assert!(matches!(err, Err(Error::NoCanard { .. })));
    }

    #[test]
    fn bracketed_solver_handles_linear_and_cubic() {
        let c = PrecisionContext::new(80).unwrap();
        let r = solve_bracketed(|x| x * 3 - 1, c.zero(), c.one());
        assert!(approx_eq(&r, &c.ratio(1, 3), &c.tolerance()));
        let r = solve_bracketed(|x| x.powi(3) - 2, c.zero(), c.int(2));
        assert!(approx_eq(&r, &c.int(2).cbrt(), &c.tolerance()));
    }
}
