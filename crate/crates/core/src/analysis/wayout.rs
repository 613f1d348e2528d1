use crate::error::{Error, Result};
use crate::linearization::{canard_spacing, jacobian_factor, symmetry_center};
use crate::precision::Scalar;
use crate::schemes::Scheme;
use crate::systems::{SingularityKind, SystemParams};

/// Exit of a canard entering at `−ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct WayOutResult {
    /// Entry index `N`: steps from `−ρ` to the symmetry center.
    pub n_in: i64,
    /// `ψ = exit_k − N`.
    pub psi: i64,
    /// First `k` with `|Π_{i≤k} J(−ρ + i·spacing)| ≥ 1`.
    pub exit_k: usize,
    pub product_at_exit: Scalar,
}

/// `N = floor((ρ + c)/spacing)` with `c` the symmetry center, so the
/// position `−ρ + N·spacing` is the last one not past the center. Ratios
/// within rounding of an integer snap to it so lattice entries are exact.
pub fn entry_index(kind: SingularityKind, params: &SystemParams, rho: &Scalar) -> i64 {
    let spacing = canard_spacing(kind, params);
    let center = symmetry_center(kind, params);
    let ratio = (rho + center) / spacing;
    let nearest = ratio.round_i64().expect("entry index fits in i64");
    let snap = ratio.tolerance() * ratio.abs().max(ratio.constant(1, 1));
    if (&ratio - ratio.constant(nearest, 1)).abs() <= snap {
        nearest
    } else {
        ratio.floor_i64().expect("entry index fits in i64")
    }
}

/// Smallest `k ≤ max_n` at which the inclusive multiplier product from the
/// entry reaches modulus one, reported relative to the entry index.
///
/// Products are accumulated as log-sums; the comparison allows the
/// working tolerance so an exactly compensating product counts as one.
pub fn wayout(
    kind: SingularityKind,
    scheme: &Scheme,
    params: &SystemParams,
    rho: &Scalar,
    max_n: usize,
) -> Result<WayOutResult> {
    if !rho.is_positive() {
        return Err(Error::InvalidParams("rho must be positive".into()));
    }
    let spacing = canard_spacing(kind, params);
    let tol = -rho.tolerance();
    let mut log = rho.constant(0, 1);
    let mut product = rho.constant(1, 1);
    for k in 0..=max_n {
        let s = &spacing * k as i32 - rho;
        let j = jacobian_factor(kind, scheme, params, &s).map_err(|e| e.at_index(k))?;
        log += j.abs().ln();
        product *= &j;
        if log >= tol {
            let n_in = entry_index(kind, params, rho);
            return Ok(WayOutResult {
                n_in,
                psi: k as i64 - n_in,
                exit_k: k,
                product_at_exit: product,
            });
        }
    }
    Err(Error::Unresolved { max_n })
}
