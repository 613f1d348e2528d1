//! One-step maps and orbit iteration.

mod afamily;
mod explicit;
mod iterate;
mod kahan;
mod tableau;

use std::fmt;

pub use afamily::{a_family_residual, a_family_step_pitchfork, BranchInfo, BranchSelection, StepResult};
pub use explicit::{euler_step, rk_step};
pub use iterate::{escape_rule, iterate, iterate_until};
pub use kahan::{kahan_step_fold, kahan_step_general, kahan_step_transcritical, QuadraticField};
pub use tableau::{ButcherTableau, SHIPPED, SURFACE_SET};

use crate::error::{Error, Result};
use crate::precision::{PrecisionContext, Scalar};
use crate::systems::{CanardScheme, PlanarPoint, SingularityKind, SystemParams};

/// Which discretization to apply.
///
/// `Kahan` on the pitchfork is the implicit family with `a = −1/2`; the
/// implicit family itself is only defined for the pitchfork.
#[derive(Clone, Debug, PartialEq)]
pub enum Scheme {
    Euler,
    RungeKutta(ButcherTableau),
    Kahan,
    AFamily(Scalar),
}

impl Scheme {
    /// Resolves a CLI-style name: `euler`, `kahan`, `afamily`, or a shipped
    /// tableau name. `a` is required for `afamily`.
    pub fn from_name(ctx: &PrecisionContext, name: &str, a: Option<&Scalar>) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "euler" => Ok(Self::Euler),
            "kahan" => Ok(Self::Kahan),
            "afamily" | "a-family" => a
                .cloned()
                .map(Self::AFamily)
                .ok_or_else(|| Error::InvalidParams("the a-family scheme needs --a".into())),
            other => ButcherTableau::shipped(ctx, other).map(Self::RungeKutta),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Euler => "euler".into(),
            Self::RungeKutta(t) => t.name().to_string(),
            Self::Kahan => "kahan".into(),
            Self::AFamily(a) => format!("afamily(a={})", a.to_decimal(12)),
        }
    }

    pub fn canard_scheme(&self) -> CanardScheme {
        match self {
            Self::Euler => CanardScheme::Euler,
            Self::RungeKutta(_) => CanardScheme::RungeKutta,
            Self::Kahan | Self::AFamily(_) => CanardScheme::KahanOrAFamily,
        }
    }

    /// The implicit-family parameter used on the pitchfork, if any.
    pub fn pitchfork_a(&self, like: &Scalar) -> Option<Scalar> {
        match self {
            Self::Kahan => Some(like.constant(-1, 2)),
            Self::AFamily(a) => Some(a.clone()),
            _ => None,
        }
    }

    /// Whether the set carrying the canard is mapped into itself bit-for-bit
    /// in floating point, so that a start exactly on it can never leave.
    pub fn preserves_canard_exactly(&self, kind: SingularityKind) -> bool {
        match (kind, self) {
            (SingularityKind::Fold, _) => false,
            (_, Self::Euler | Self::RungeKutta(_)) => true,
            (SingularityKind::Pitchfork, _) => true,
            (SingularityKind::Transcritical, _) => false,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A scheme bound to a singularity and parameters.
#[derive(Clone, Debug)]
pub struct Stepper {
    pub kind: SingularityKind,
    pub scheme: Scheme,
    pub params: SystemParams,
}

impl Stepper {
    /// Checks that the scheme is defined for the singularity.
    pub fn new(kind: SingularityKind, scheme: Scheme, params: SystemParams) -> Result<Self> {
        if matches!(scheme, Scheme::AFamily(_)) && kind != SingularityKind::Pitchfork {
            return Err(Error::Unsupported(format!("the a-family step on the {kind}")));
        }
        Ok(Self { kind, scheme, params })
    }

    pub fn step(&self, p: &PlanarPoint) -> Result<PlanarPoint> {
        let params = &self.params;
        match (&self.scheme, self.kind) {
            (Scheme::Euler, kind) => Ok(euler_step(kind, params, p)),
            (Scheme::RungeKutta(t), kind) => Ok(rk_step(t, kind, params, p)),
            (Scheme::Kahan, SingularityKind::Transcritical) => kahan_step_transcritical(params, p),
            (Scheme::Kahan, SingularityKind::Fold) => kahan_step_fold(params, p),
            (scheme, SingularityKind::Pitchfork) => {
                let a = scheme.pitchfork_a(&params.h).expect("implicit schemes carry a");
                Ok(a_family_step_pitchfork(&a, params, p)?.point)
            }
            (Scheme::AFamily(_), kind) => Err(Error::Unsupported(format!("the a-family step on the {kind}"))),
        }
    }

    /// The same stepper run with `−h`.
    pub fn reversed(&self) -> Self {
        Self {
            kind: self.kind,
            scheme: self.scheme.clone(),
            params: self.params.reversed(),
        }
    }
}
