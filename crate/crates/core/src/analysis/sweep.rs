use rayon::prelude::*;

use crate::analysis::triplet::{critical_h_bisection, linearized_h_star, BisectionConfig, TripletSource};
use crate::error::Result;
use crate::precision::Scalar;
use crate::schemes::{ButcherTableau, Scheme};
use crate::systems::SingularityKind;

#[derive(Clone, Debug)]
pub enum SweepMode {
    Linearized,
    Bisection(BisectionConfig),
}

impl SweepMode {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Linearized => "linearized",
            Self::Bisection(_) => "bisection",
        }
    }
}

/// One `(ρ, ε)` grid cell; `h_star` is `None` where no critical step exists.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub rho: Scalar,
    pub eps: Scalar,
    pub h_star: Option<Scalar>,
}

/// Critical step sizes of the transcritical canard over a `(ρ, ε)` grid,
/// cells evaluated in parallel. Errors from the nonlinear search mark the
/// cell empty; the linearized solve cannot fail for explicit tableaux.
pub fn sweep_surface(
    tableau: &ButcherTableau,
    rho_grid: &[Scalar],
    eps_grid: &[Scalar],
    mode: &SweepMode,
) -> Result<Vec<SweepCell>> {
    let scheme = Scheme::RungeKutta(tableau.clone());
    let cells: Vec<(Scalar, Scalar)> = rho_grid
        .iter()
        .flat_map(|r| eps_grid.iter().map(move |e| (r.clone(), e.clone())))
        .collect();
    cells
        .into_par_iter()
        .map(|(rho, eps)| {
            let h_star = match mode {
                SweepMode::Linearized => linearized_h_star(SingularityKind::Transcritical, &scheme, &rho, &eps, None)?,
                SweepMode::Bisection(cfg) => {
                    match critical_h_bisection(SingularityKind::Transcritical, &scheme, &rho, &eps, cfg) {
                        Ok(t) => match t.source {
                            TripletSource::BisectionBracket { .. } => Some(t.h_star),
                            TripletSource::Linearized => None,
                        },
                        Err(_) => None,
                    }
                }
            };
            Ok(SweepCell { rho, eps, h_star })
        })
        .collect()
}
