//! Lower bounds `K*` on the number of canard steps needed before the
//! accumulated expansion compensates the contraction collected since entry.

use crate::analysis::{lambert_w0, wayout};
use crate::error::{Error, Result};
use crate::linearization::q_s;
use crate::precision::Scalar;
use crate::schemes::{ButcherTableau, Scheme};
use crate::systems::{SingularityKind, SystemParams};

fn check_positive(name: &str, v: &Scalar) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive")))
    }
}

/// `(1/(h²ε))·(−1 + c·hρ + exp(W(−h²ε·ln(1 − c·hρ))))`.
fn euler_bound(rho: &Scalar, h: &Scalar, eps: &Scalar, c: i32) -> Result<Scalar> {
    check_positive("rho", rho)?;
    check_positive("h", h)?;
    check_positive("epsilon", eps)?;
    let chr = h * rho * c;
    let theta0 = 1 - &chr;
    if !theta0.is_positive() {
        return Err(Error::PastCriticality);
    }
    let h2e = h.square() * eps;
    let w = lambert_w0(&(-(&h2e) * theta0.ln()))?;
    Ok((chr - 1 + w.exp()) / h2e)
}

/// Forward Euler on the transcritical canard; needs `1 − 2hρ > 0`.
pub fn kstar_transcritical_euler(rho: &Scalar, h: &Scalar, eps: &Scalar) -> Result<Scalar> {
    euler_bound(rho, h, eps, 2)
}

/// Forward Euler on the pitchfork canard; needs `1 − hρ > 0`.
pub fn kstar_pitchfork_euler(rho: &Scalar, h: &Scalar, eps: &Scalar) -> Result<Scalar> {
    euler_bound(rho, h, eps, 1)
}

/// `1 + exp(W(−ln θ₀ / (C̄ (s + 1))))` for `θ₀ ∈ (0, 1]`.
pub fn kstar_rk(theta0: &Scalar, cbar: &Scalar, s: usize) -> Result<Scalar> {
    if !theta0.is_positive() {
        return Err(Error::PastCriticality);
    }
    if *theta0 > 1 {
        return Err(Error::NotContracting(theta0.to_decimal(20)));
    }
    check_positive("cbar", cbar)?;
    if s == 0 {
        return Err(Error::InvalidParams("stage count must be at least 1".into()));
    }
    let arg = -theta0.ln() / (cbar * (s as i32 + 1));
    Ok(1 + lambert_w0(&arg)?.exp())
}

/// Coefficients `θ_0..θ_s` of `k ↦ 1 + h·Q_s(−ρ + khε)`, a polynomial of
/// degree at most `s` in the step index.
pub fn rk_theta(tableau: &ButcherTableau, params: &SystemParams, rho: &Scalar) -> Vec<Scalar> {
    let s = tableau.stages();
    let eh = &params.epsilon * &params.h;
    let samples: Vec<Scalar> = (0..=s)
        .map(|k| 1 + &params.h * q_s(tableau, params, &(&eh * k as i32 - rho)))
        .collect();
    interpolate_integer_nodes(&samples)
}

/// Monomial coefficients of the polynomial through `(k, v[k])`, `k = 0..n`.
fn interpolate_integer_nodes(values: &[Scalar]) -> Vec<Scalar> {
    let n = values.len();
    // Newton divided differences on nodes 0..n-1.
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / level as i32;
        }
    }
    let zero = values[0].constant(0, 1);
    let mut coeffs = vec![zero; n];
    // Horner expansion of Σ dd[i] Π_{j<i} (k − j).
    for i in (0..n).rev() {
        let mut next = vec![values[0].constant(0, 1); n];
        for d in 0..n {
            if coeffs[d].is_zero() {
                continue;
            }
            if d + 1 < n {
                next[d + 1] += &coeffs[d];
            }
            next[d] -= &coeffs[d] * i as i32;
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

/// Bernoulli numbers `B_0..B_4` with `B_1 = +1/2`.
fn bernoulli(j: usize, like: &Scalar) -> Scalar {
    match j {
        0 => like.constant(1, 1),
        1 => like.constant(1, 2),
        2 => like.constant(1, 6),
        3 => like.constant(0, 1),
        4 => like.constant(-1, 30),
        _ => panic!("Bernoulli numbers are tabulated up to B_4"),
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Coefficients `C_p`, `p = 0..s`, of
/// `Σ_{i≥1} θ_i/(i+1) Σ_{j≤i} binom(i+1, j) B_j (K−1)^{i−j}`.
pub fn rk_c_coefficients(theta: &[Scalar]) -> Vec<Scalar> {
    let s = theta.len() - 1;
    assert!(s <= 4, "Faulhaber expansion is tabulated for s ≤ 4");
    let like = &theta[0];
    let mut c = vec![like.constant(0, 1); s + 1];
    for (i, th) in theta.iter().enumerate().skip(1) {
        for j in 0..=i {
            let term = th * bernoulli(j, like) * binomial(i + 1, j) as i32 / (i as i32 + 1);
            c[i - j] += term;
        }
    }
    c
}

/// `C̄ = |ln max|C_p|| / ln 2 + 1`.
pub fn rk_cbar(theta: &[Scalar]) -> Scalar {
    let c = rk_c_coefficients(theta);
    let max = c.into_iter().map(|v| v.abs()).reduce(Scalar::max).expect("s ≥ 1");
    max.ln().abs() / theta[0].constant(2, 1).ln() + 1
}

/// Everything entering the Runge-Kutta bound at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct RkBound {
    pub theta0: Scalar,
    pub cbar: Scalar,
    pub kstar: Scalar,
}

/// `K*` for an explicit Runge-Kutta method on the transcritical canard.
pub fn kstar_rk_for(tableau: &ButcherTableau, params: &SystemParams, rho: &Scalar) -> Result<RkBound> {
    let theta = rk_theta(tableau, params, rho);
    let theta0 = theta[0].clone();
    let cbar = rk_cbar(&theta);
    let kstar = kstar_rk(&theta0, &cbar, tableau.stages())?;
    Ok(RkBound { theta0, cbar, kstar })
}

/// Smallest `K` with `|Π_{k<K} J(−ρ + k·spacing)| ≥ 1`, by direct
/// multiplication; the quantity every `K*` bounds from below.
pub fn brute_force_k(
    kind: SingularityKind,
    scheme: &Scheme,
    params: &SystemParams,
    rho: &Scalar,
    max_n: usize,
) -> Result<usize> {
    Ok(wayout(kind, scheme, params, rho, max_n)?.exit_k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{approx_eq, PrecisionContext};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(50).unwrap()
    }

    #[test]
    fn euler_transcritical_reference_value() {
        let c = ctx();
        let k = kstar_transcritical_euler(&c.int(4), &c.parse("0.1").unwrap(), &c.parse("0.01").unwrap()).unwrap();
        assert!((k.to_f64() - 8001.6).abs() < 0.05, "{k:?}");
    }

    #[test]
    fn euler_reference_value_is_a_lower_bound() {
        let c = ctx();
        let (rho, h, eps) = (c.int(4), c.parse("0.1").unwrap(), c.parse("0.01").unwrap());
        let params = SystemParams::new(eps.clone(), h.clone()).unwrap();
        let bound = kstar_transcritical_euler(&rho, &h, &eps).unwrap();
        let k = brute_force_k(SingularityKind::Transcritical, &Scheme::Euler, &params, &rho, 100_000).unwrap();
        assert!(bound <= k as i32, "{k} vs {bound:?}");
    }

    #[test]
    fn past_criticality_is_an_error() {
        let c = ctx();
        let h = c.parse("0.1").unwrap();
        let e = c.parse("0.01").unwrap();
        assert_eq!(kstar_transcritical_euler(&c.int(5), &h, &e), Err(Error::PastCriticality));
        assert_eq!(kstar_pitchfork_euler(&c.int(10), &h, &e), Err(Error::PastCriticality));
        assert!(kstar_pitchfork_euler(&c.int(5), &h, &e).is_ok());
    }

    #[test]
    fn rk_bound_edges() {
        let c = ctx();
        let k = kstar_rk(&c.one(), &c.int(3), 3).unwrap();
        assert_eq!(k, 2);
        assert_eq!(kstar_rk(&c.zero(), &c.one(), 2), Err(Error::PastCriticality));
        assert!(matches!(kstar_rk(&c.parse("1.5").unwrap(), &c.one(), 2), Err(Error::NotContracting(_))));
        let near = kstar_rk(&c.pow10(-30), &c.int(2), 3).unwrap();
        let far = kstar_rk(&c.parse("0.5").unwrap(), &c.int(2), 3).unwrap();
        assert!(near > far);
    }

    #[test]
    fn interpolation_recovers_monomials() {
        let c = ctx();
        // 2 − k + 3k³
        let vals: Vec<Scalar> = (0..4).map(|k: i64| c.int(2 - k + 3 * k * k * k)).collect();
        let coeffs = interpolate_integer_nodes(&vals);
        for (got, want) in coeffs.iter().zip([2, -1, 0, 3]) {
            assert!(approx_eq(got, &c.int(want), &c.tolerance()));
        }
    }

    #[test]
    fn euler_theta_is_linear() {
        let c = ctx();
        let t = ButcherTableau::shipped(&c, "euler").unwrap();
        let params = SystemParams::new(c.parse("0.01").unwrap(), c.parse("0.1").unwrap()).unwrap();
        let rho = c.int(4);
        let theta = rk_theta(&t, &params, &rho);
        assert!(approx_eq(&theta[0], &c.parse("0.2").unwrap(), &c.tolerance()));
        assert!(approx_eq(&theta[1], &c.parse("0.0002").unwrap(), &c.tolerance()));
    }

    #[test]
    fn faulhaber_coefficients_sum_powers() {
        // Σ_{k=1}^{K-1} (θ1 k + θ2 k²) = (K-1) Σ_p C_p (K-1)^p.
        let c = ctx();
        let theta = vec![c.one(), c.parse("0.3").unwrap(), c.parse("-0.7").unwrap()];
        let coeffs = rk_c_coefficients(&theta);
        for big_k in 2..9i32 {
            let m = c.int(i64::from(big_k - 1));
            let mut direct = c.zero();
            for k in 1..big_k {
                let k = c.int(i64::from(k));
                direct += &theta[1] * &k + &theta[2] * k.square();
            }
            let mut series = c.zero();
            for (p, cp) in coeffs.iter().enumerate() {
                series += cp * m.powi(p as i32);
            }
            assert!(approx_eq(&direct, &(series * &m), &c.tolerance()));
        }
    }
}
