//! Transversal multipliers along discrete canards and their products.
//!
//! On the canard the variational map has a neutral direction along the
//! invariant set; the remaining multiplier `J(s) = ∂x̃/∂x` at slow position
//! `s` decides contraction (`|J| < 1`) or expansion (`|J| > 1`).

use crate::error::{Error, Result};
use crate::precision::Scalar;
use crate::schemes::{ButcherTableau, Scheme};
use crate::systems::{fold_parabola_offset, PlanarPoint, SingularityKind, SystemParams};

/// `Σ_i α_i ∂κ_i` from `∂κ_i = c·(base + hεA_i)·(1 + h Σ_j a_ij ∂κ_j)`.
fn stage_derivative_sum(tableau: &ButcherTableau, params: &SystemParams, base: &Scalar, c: i32) -> Scalar {
    let SystemParams { epsilon, h } = params;
    let eh = epsilon * h;
    let mut dk: Vec<Scalar> = Vec::with_capacity(tableau.stages());
    for i in 0..tableau.stages() {
        let mut inner = base.constant(1, 1);
        for (a, d) in tableau.row(i).iter().zip(&dk) {
            inner += h * a * d;
        }
        let stage_pos = base + &eh * tableau.row_sum(i);
        dk.push(stage_pos * inner * c);
    }
    let mut q = base.constant(0, 1);
    for (w, d) in tableau.alpha().iter().zip(&dk) {
        q += w * d;
    }
    q
}

/// `Q_s(x)`: the weighted stage derivative on the transcritical diagonal,
/// so that the multiplier is `1 + h·Q_s(x)`.
pub fn q_s(tableau: &ButcherTableau, params: &SystemParams, x: &Scalar) -> Scalar {
    stage_derivative_sum(tableau, params, x, 2)
}

/// Pitchfork counterpart of [`q_s`] on the line `x = 0` at height `y`.
pub fn q_s_pitchfork(tableau: &ButcherTableau, params: &SystemParams, y: &Scalar) -> Scalar {
    stage_derivative_sum(tableau, params, y, 1)
}

/// Distance between consecutive canard positions: `εh`, or `εh/2` on the fold.
pub fn canard_spacing(kind: SingularityKind, params: &SystemParams) -> Scalar {
    let eh = &params.epsilon * &params.h;
    match kind {
        SingularityKind::Fold => eh / 2,
        _ => eh,
    }
}

/// Position where the Kahan-type multipliers equal one: `−εh/2`, or `0` on the fold.
pub fn symmetry_center(kind: SingularityKind, params: &SystemParams) -> Scalar {
    match kind {
        SingularityKind::Fold => params.h.constant(0, 1),
        _ => -(&params.epsilon * &params.h) / 2,
    }
}

/// The canard point at slow position `s`.
pub fn canard_point(kind: SingularityKind, params: &SystemParams, s: &Scalar) -> PlanarPoint {
    match kind {
        SingularityKind::Transcritical => PlanarPoint::new(s.clone(), s.clone()),
        SingularityKind::Pitchfork => PlanarPoint::new(s.constant(0, 1), s.clone()),
        SingularityKind::Fold => PlanarPoint::new(s.clone(), s.square() - fold_parabola_offset(params)),
    }
}

fn checked_div(num: Scalar, den: Scalar) -> Result<Scalar> {
    if den.is_zero() {
        Err(Error::pole())
    } else {
        Ok(num / den)
    }
}

fn explicit_fold(scheme: &Scheme) -> Error {
    Error::NoCanard { scheme: scheme.label() }
}

/// `J(s) = ∂x̃/∂x` on the canard at slow position `s`.
pub fn jacobian_factor(kind: SingularityKind, scheme: &Scheme, params: &SystemParams, s: &Scalar) -> Result<Scalar> {
    let SystemParams { epsilon, h } = params;
    match (kind, scheme) {
        (SingularityKind::Transcritical, Scheme::Euler) => Ok(1 + h * s * 2),
        (SingularityKind::Pitchfork, Scheme::Euler) => Ok(1 + h * s),
        (SingularityKind::Transcritical, Scheme::RungeKutta(t)) => Ok(1 + h * q_s(t, params, s)),
        (SingularityKind::Pitchfork, Scheme::RungeKutta(t)) => Ok(1 + h * q_s_pitchfork(t, params, s)),
        (SingularityKind::Fold, Scheme::Euler | Scheme::RungeKutta(_)) => Err(explicit_fold(scheme)),
        (SingularityKind::Transcritical, Scheme::Kahan) => {
            let hh = h.square();
            let num = 1 - &hh * s * (s + epsilon * h) + epsilon * &hh;
            checked_div(num, (1 - h * s).square())
        }
        (SingularityKind::Pitchfork, Scheme::Kahan | Scheme::AFamily(_)) => {
            let a = scheme.pitchfork_a(h).expect("implicit scheme");
            let q = h.square() * epsilon / 4;
            let num = 1 + h * s / 2 + &q * (1 - &a * 2);
            let den = 1 - h * s / 2 - &q * (1 + &a * 2);
            checked_div(num, den)
        }
        (SingularityKind::Fold, Scheme::Kahan) => {
            let q = 1 + h.square() * epsilon / 4;
            let num = q.square() - (h * s).square();
            let den = (q - h * s).square();
            checked_div(num, den)
        }
        (_, Scheme::AFamily(_)) => Err(Error::Unsupported(format!("the a-family step on the {kind}"))),
    }
}

/// Full 2×2 variational matrix `∂(x̃, ỹ)/∂(x, y)` at the canard point of `s`.
pub fn variational_matrix(
    kind: SingularityKind,
    scheme: &Scheme,
    params: &SystemParams,
    s: &Scalar,
) -> Result<[[Scalar; 2]; 2]> {
    let j = jacobian_factor(kind, scheme, params, s)?;
    let SystemParams { epsilon, h } = params;
    let zero = s.constant(0, 1);
    let one = s.constant(1, 1);
    Ok(match (kind, scheme) {
        (SingularityKind::Transcritical, Scheme::Kahan) => {
            let off = checked_div(-(h * s * 2) - epsilon * h.square(), 1 - h * s)?;
            [[j, off], [zero, one]]
        }
        (SingularityKind::Transcritical, _) => {
            // The stage derivatives in y are the negatives of those in x.
            let off = 1 - &j;
            [[j, off], [zero, one]]
        }
        (SingularityKind::Pitchfork, _) => [[j, zero.clone()], [zero, one]],
        (SingularityKind::Fold, _) => {
            let x = s;
            let y = x.square() - fold_parabola_offset(params);
            let q = h.square() * epsilon / 4;
            let den = 1 - h * x + &q;
            let den2 = den.square();
            let j12 = checked_div(-h.clone(), den.clone())?;
            let j21 = h * epsilon - h.square() * epsilon * x
                + h.powi(3) * epsilon / 4 * (x.square() * 2 - &y * 2 + epsilon)
                - h.powi(4) * epsilon.square() / 4 * x;
            let j21 = checked_div(j21, den2)?;
            let j22 = checked_div(1 - h * x - &q, den)?;
            [[j, j12], [j21, j22]]
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LedgerEntry {
    pub k: usize,
    pub s_pos: Scalar,
    pub factor: Scalar,
    /// `Π_{i≤k} factor_i`.
    pub running_product: Scalar,
    /// `Σ_{i≤k} ln|factor_i|`.
    pub log_running_product: Scalar,
}

/// Factors and inclusive running products along the canard entering at `−ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionLedger {
    pub rho: Scalar,
    pub entries: Vec<LedgerEntry>,
}

impl ContractionLedger {
    pub fn factors(&self) -> impl Iterator<Item = &Scalar> {
        self.entries.iter().map(|e| &e.factor)
    }

    pub fn running_product(&self, n: usize) -> &Scalar {
        &self.entries[n].running_product
    }
}

/// Ledger for `k = 0..=n` at positions `−ρ + k·spacing`.
pub fn contraction_product(
    kind: SingularityKind,
    scheme: &Scheme,
    params: &SystemParams,
    rho: &Scalar,
    n: usize,
) -> Result<ContractionLedger> {
    if !rho.is_positive() {
        return Err(Error::InvalidParams("rho must be positive".into()));
    }
    let spacing = canard_spacing(kind, params);
    let mut entries = Vec::with_capacity(n + 1);
    let mut product = rho.constant(1, 1);
    let mut log = rho.constant(0, 1);
    for k in 0..=n {
        let s_pos = -rho.clone() + &spacing * k as i32;
        let factor = jacobian_factor(kind, scheme, params, &s_pos).map_err(|e| e.at_index(k))?;
        product *= &factor;
        log += factor.abs().ln();
        entries.push(LedgerEntry {
            k,
            s_pos,
            factor,
            running_product: product.clone(),
            log_running_product: log.clone(),
        });
    }
    Ok(ContractionLedger { rho: rho.clone(), entries })
}

/// `|J(c + d)·J(c − d) − 1|` with `c` the symmetry center and `d = s − c`.
pub fn symmetry_defect(kind: SingularityKind, scheme: &Scheme, params: &SystemParams, s: &Scalar) -> Result<Scalar> {
    if !matches!(scheme, Scheme::Kahan | Scheme::AFamily(_)) {
        return Err(Error::Unsupported(format!("the pairing identity for {scheme}")));
    }
    let c = symmetry_center(kind, params);
    let mirror = &c * 2 - s;
    let product = jacobian_factor(kind, scheme, params, s)? * jacobian_factor(kind, scheme, params, &mirror)?;
    Ok((product - 1).abs())
}
