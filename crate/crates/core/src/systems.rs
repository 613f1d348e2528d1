//! Canonical planar fast-slow vector fields and their canards.
//!
//! The three normal forms are fixed:
//!
//! | kind          | x'          | y'   | canard set                 |
//! |---------------|-------------|------|----------------------------|
//! | transcritical | x² − y² + ε | ε    | diagonal `y = x`           |
//! | pitchfork     | x(y − x²)   | ε    | line `x = 0`               |
//! | fold          | x² − y      | εx   | parabola `y = x² − ε/2`    |
//!
//! The fold uses `x' = x² − y`; some texts write `−y + x²`, which is the
//! same field.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::precision::Scalar;
use crate::schemes::ButcherTableau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingularityKind {
    Transcritical,
    Pitchfork,
    Fold,
}

impl SingularityKind {
    pub const ALL: [SingularityKind; 3] = [Self::Transcritical, Self::Pitchfork, Self::Fold];

    pub fn name(self) -> &'static str {
        match self {
            Self::Transcritical => "transcritical",
            Self::Pitchfork => "pitchfork",
            Self::Fold => "fold",
        }
    }
}

impl fmt::Display for SingularityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SingularityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "transcritical" | "trans" => Ok(Self::Transcritical),
            "pitchfork" | "pitch" => Ok(Self::Pitchfork),
            "fold" => Ok(Self::Fold),
            _ => Err(Error::InvalidParams(format!("unknown singularity {s:?}"))),
        }
    }
}

/// Time-scale separation `epsilon` and step size `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub epsilon: Scalar,
    pub h: Scalar,
}

impl SystemParams {
    /// Parameters for the canard analysis: `epsilon > 0` and `h > 0`.
    pub fn new(epsilon: Scalar, h: Scalar) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::InvalidParams(format!("epsilon must be positive, got {epsilon:?}")));
        }
        if !h.is_positive() {
            return Err(Error::InvalidParams(format!("h must be positive, got {h:?}")));
        }
        Ok(Self { epsilon, h })
    }

    /// Unchecked parameters for stepping alone: `epsilon = 0` gives the
    /// layer problem and a negative `h` runs a reversible map backwards.
    pub fn relaxed(epsilon: Scalar, h: Scalar) -> Self {
        Self { epsilon, h }
    }

    /// The same system with step `-h`.
    pub fn reversed(&self) -> Self {
        Self {
            epsilon: self.epsilon.clone(),
            h: -&self.h,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanarPoint {
    pub x: Scalar,
    pub y: Scalar,
}

impl PlanarPoint {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Self { x, y }
    }

    /// Largest coordinate distance to `other`.
    pub fn distance_max(&self, other: &PlanarPoint) -> Scalar {
        (&self.x - &other.x).abs().max((&self.y - &other.y).abs())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Iterates `points[0], points[1], ...` of a one-step map.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub points: Vec<PlanarPoint>,
    /// Index of the first point that triggered the stop rule, if any.
    pub stopped_at: Option<usize>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> &PlanarPoint {
        self.points.last().expect("an orbit holds its initial condition")
    }
}

/// Scheme families with distinct closed-form canards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanardScheme {
    Euler,
    RungeKutta,
    KahanOrAFamily,
}

/// `(x', y')` of the canonical form.
pub fn vector_field(kind: SingularityKind, epsilon: &Scalar, p: &PlanarPoint) -> PlanarPoint {
    let PlanarPoint { x, y } = p;
    match kind {
        SingularityKind::Transcritical => {
            PlanarPoint::new(x.square() - y.square() + epsilon, epsilon.clone())
        }
        SingularityKind::Pitchfork => PlanarPoint::new(x * (y - x.square()), epsilon.clone()),
        SingularityKind::Fold => PlanarPoint::new(x.square() - y, epsilon * x),
    }
}

/// Distance-like residual to the set carrying the canard: `x² − y²`
/// (transcritical), `x` (pitchfork) or `y − x²` (fold).
pub fn critical_set_residual(kind: SingularityKind, p: &PlanarPoint) -> Scalar {
    match kind {
        SingularityKind::Transcritical => p.x.square() - p.y.square(),
        SingularityKind::Pitchfork => p.x.clone(),
        SingularityKind::Fold => &p.y - p.x.square(),
    }
}

/// The `n`-th point of the discrete canard through `start`.
///
/// `start` is the x-coordinate for the transcritical and fold canards and
/// the y-coordinate for the pitchfork canard. Negative `n` is admitted only
/// for the birational schemes.
pub fn canard_trajectory(
    kind: SingularityKind,
    scheme: CanardScheme,
    params: &SystemParams,
    start: &Scalar,
    n: i64,
) -> Result<PlanarPoint> {
    if kind == SingularityKind::Fold && scheme != CanardScheme::KahanOrAFamily {
        let name = match scheme {
            CanardScheme::Euler => "Euler",
            _ => "explicit Runge-Kutta",
        };
        return Err(Error::NoCanard {
            scheme: name.to_string(),
        });
    }
    if n < 0 && scheme != CanardScheme::KahanOrAFamily {
        return Err(Error::InvalidParams(
            "explicit schemes are not invertible: n must be non-negative".to_string(),
        ));
    }
    let n = i32::try_from(n)
        .map_err(|_| Error::InvalidParams(format!("iterate index {n} out of range")))?;
    let drift = &params.epsilon * &params.h * n;
    Ok(match kind {
        SingularityKind::Transcritical => {
            let s = start + drift;
            PlanarPoint::new(s.clone(), s)
        }
        SingularityKind::Pitchfork => PlanarPoint::new(start.constant(0, 1), start + drift),
        SingularityKind::Fold => {
            let x = start + drift / 2;
            let y = x.square() - fold_parabola_offset(params);
            PlanarPoint::new(x, y)
        }
    })
}

/// `ε/2 + ε²h²/8`, the downward shift of the Kahan-invariant parabola.
pub fn fold_parabola_offset(params: &SystemParams) -> Scalar {
    let eh = &params.epsilon * &params.h;
    &params.epsilon / 2 + eh.square() / 8
}

/// Slow positions `y` with `x² + xh = y²`, i.e. the candidates the Euler
/// fold map offers for a singular canard over `x`. `None` on the gap
/// `x ∈ (−h, 0)`. The pair is ordered `(−r, r)`.
pub fn fold_slow_solutions(x: &Scalar, h: &Scalar) -> Option<(Scalar, Scalar)> {
    let disc = x.square() + x * h;
    if disc.is_negative() {
        return None;
    }
    let r = disc.sqrt();
    Some((-&r, r))
}

/// `H = ½·exp(−2y/ε)·(y − x² + ε/2)`, conserved by the fold ODE.
pub fn fold_first_integral(p: &PlanarPoint, epsilon: &Scalar) -> Scalar {
    let weight = (-(&p.y * 2) / epsilon).exp();
    weight * (&p.y - p.x.square() + epsilon / 2) / 2
}

/// Whether the reduced explicit Runge-Kutta fold map is defined at `x`:
/// false exactly on the gap `x ∈ (−h·a₂₁, 0)`.
pub fn fold_rk_reduced_gap(tableau: &ButcherTableau, x: &Scalar, h: &Scalar) -> Result<bool> {
    if tableau.stages() < 2 {
        return Err(Error::InvalidTableau(format!(
            "{} has a single stage; the reduced map needs a₂₁",
            tableau.name()
        )));
    }
    let value = x.square() + h * tableau.a(1, 0) * x;
    Ok(!value.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{approx_eq, PrecisionContext};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(50).unwrap()
    }

    fn pt(c: &PrecisionContext, x: &str, y: &str) -> PlanarPoint {
        PlanarPoint::new(c.parse(x).unwrap(), c.parse(y).unwrap())
    }

    #[test]
    fn vector_field_examples() {
        let c = ctx();
        let eps = c.parse("0.01").unwrap();
        let v = vector_field(SingularityKind::Transcritical, &eps, &pt(&c, "-1", "-1"));
        assert_eq!(v, PlanarPoint::new(eps.clone(), eps.clone()));
        let v = vector_field(SingularityKind::Pitchfork, &eps, &pt(&c, "0", "-1"));
        assert_eq!(v, PlanarPoint::new(c.zero(), eps.clone()));
        let v = vector_field(SingularityKind::Fold, &eps, &pt(&c, "0", "0"));
        assert_eq!(v, PlanarPoint::new(c.zero(), c.zero()));
    }

    #[test]
    fn residual_examples() {
        let c = ctx();
        assert!(critical_set_residual(SingularityKind::Transcritical, &pt(&c, "2", "2")).is_zero());
        assert!(critical_set_residual(SingularityKind::Fold, &pt(&c, "3", "9")).is_zero());
        assert_eq!(critical_set_residual(SingularityKind::Fold, &pt(&c, "1", "0")), -1);
    }

    #[test]
    fn canard_examples() {
        let c = ctx();
        let params = SystemParams::new(c.parse("0.01").unwrap(), c.parse("0.1").unwrap()).unwrap();
        let p = canard_trajectory(
            SingularityKind::Transcritical,
            CanardScheme::Euler,
            &params,
            &c.int(-1),
            10,
        )
        .unwrap();
        let tol = c.tolerance();
        assert!(approx_eq(&p.x, &c.parse("-0.99").unwrap(), &tol));
        assert_eq!(p.x, p.y);

        let p = canard_trajectory(
            SingularityKind::Fold,
            CanardScheme::KahanOrAFamily,
            &params,
            &c.zero(),
            0,
        )
        .unwrap();
        assert!(p.x.is_zero());
        assert!(approx_eq(&p.y, &c.parse("-0.005000125").unwrap(), &tol));

        let p = canard_trajectory(
            SingularityKind::Pitchfork,
            CanardScheme::KahanOrAFamily,
            &params,
            &c.parse("-0.0005").unwrap(),
            1,
        )
        .unwrap();
        assert!(p.x.is_zero());
        assert!(approx_eq(&p.y, &c.parse("0.0005").unwrap(), &tol));
    }

    #[test]
    fn explicit_fold_has_no_canard() {
        let c = ctx();
        let params = SystemParams::new(c.parse("0.01").unwrap(), c.parse("0.1").unwrap()).unwrap();
        for scheme in [CanardScheme::Euler, CanardScheme::RungeKutta] {
            let err = canard_trajectory(SingularityKind::Fold, scheme, &params, &c.zero(), 1);
            assert!(matches!(err, Err(Error::NoCanard { .. })));
        }
        let err = canard_trajectory(
            SingularityKind::Transcritical,
            CanardScheme::Euler,
            &params,
            &c.zero(),
            -1,
        );
        assert!(matches!(err, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn fold_slow_solution_examples() {
        let c = ctx();
        let h = c.parse("0.1").unwrap();
        let (lo, hi) = fold_slow_solutions(&c.zero(), &h).unwrap();
        assert!(lo.is_zero() && hi.is_zero());
        assert!(fold_slow_solutions(&c.parse("-0.05").unwrap(), &h).is_none());
        let (lo, hi) = fold_slow_solutions(&c.one(), &h).unwrap();
        let r = c.parse("1.1").unwrap().sqrt();
        assert_eq!(hi, r);
        assert_eq!(lo, -r);
    }

    #[test]
    fn first_integral_examples() {
        let c = ctx();
        let one = c.one();
        assert_eq!(fold_first_integral(&pt(&c, "0", "0"), &one), c.ratio(1, 4));
        assert!(fold_first_integral(&pt(&c, "1", "0.5"), &one).is_zero());
        let eps = c.parse("0.01").unwrap();
        for x in ["-2", "-0.3", "0", "0.7"] {
            let x = c.parse(x).unwrap();
            let y = x.square() - &eps / 2;
            let value = fold_first_integral(&PlanarPoint::new(x, y), &eps);
            assert!(value.abs() <= c.tolerance());
        }
    }

    #[test]
    fn params_validation() {
        let c = ctx();
        assert!(SystemParams::new(c.zero(), c.one()).is_err());
        assert!(SystemParams::new(c.one(), c.int(-1)).is_err());
        assert_eq!(SystemParams::relaxed(c.zero(), c.one()).epsilon, 0);
    }

    #[test]
    fn kind_round_trips_through_text() {
        for kind in SingularityKind::ALL {
            assert_eq!(kind.to_string().parse::<SingularityKind>().unwrap(), kind);
        }
        assert!("saddle".parse::<SingularityKind>().is_err());
    }
}
