//! Which way an orbit started just off the canard leaves it.

use std::fmt;

use crate::error::Result;
use crate::precision::Scalar;
use crate::schemes::Stepper;
use crate::systems::{fold_parabola_offset, PlanarPoint, SingularityKind, SystemParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JumpClass {
    Left,
    Right,
    /// Never left the canard within `max_n` steps, or sat on it exactly.
    Stuck { max_n: usize },
}

impl JumpClass {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Left => "left",
            Self::Right => "right",
            Self::Stuck { .. } => "stuck",
        }
    }

    /// The side a start with transversal deviation of sign `sign` should
    /// leave towards when the discretization respects the continuous flow.
    pub fn expected(sign: i32) -> Option<JumpClass> {
        match sign {
            1 => Some(Self::Right),
            -1 => Some(Self::Left),
            _ => None,
        }
    }
}

impl fmt::Display for JumpClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Signed distance from the canard set, transversal to it: `x − y`
/// (transcritical), `x` (pitchfork), `x² − ε/2 − ε²h²/8 − y` (fold).
pub fn transversal_deviation(kind: SingularityKind, params: &SystemParams, p: &PlanarPoint) -> Scalar {
    match kind {
        SingularityKind::Transcritical => &p.x - &p.y,
        SingularityKind::Pitchfork => p.x.clone(),
        SingularityKind::Fold => p.x.square() - fold_parabola_offset(params) - &p.y,
    }
}

/// Perturbed entry point: `(−ρ, −ρ + δ)`, `(δ, −ρ)` or `(−ρ, canard + δ)`
/// on the transcritical, pitchfork and fold canards respectively. Each
/// choice places the start on the side of negative deviation for `δ > 0`
/// except the pitchfork, where it is positive.
pub fn jump_start(kind: SingularityKind, params: &SystemParams, rho: &Scalar, delta: &Scalar) -> PlanarPoint {
    match kind {
        SingularityKind::Transcritical => PlanarPoint::new(-rho.clone(), delta - rho),
        SingularityKind::Pitchfork => PlanarPoint::new(delta.clone(), -rho.clone()),
        SingularityKind::Fold => {
            let x = -rho.clone();
            let y = x.square() - fold_parabola_offset(params) + delta;
            PlanarPoint::new(x, y)
        }
    }
}

/// `10·⌈2ρ/(hε)⌉` steps: ten canard passages from `−ρ` to `+ρ`.
pub fn default_max_n(params: &SystemParams, rho: &Scalar) -> usize {
    let raw = (rho * 2 / (&params.h * &params.epsilon)).to_f64();
    let passage = if (raw - raw.round()).abs() < 1e-9 { raw.round() } else { raw.ceil() };
    (10.0 * passage.max(1.0)).min(usize::MAX as f64 / 2.0) as usize
}

/// Iterates from `start` until the transversal deviation reaches `escape`
/// in modulus, then reports its sign. A start exactly on an invariant set
/// that the scheme maps into itself bit-for-bit is stuck at once.
pub fn classify_from(stepper: &Stepper, start: PlanarPoint, escape: &Scalar, max_n: usize) -> Result<JumpClass> {
    classify_visiting(stepper, start, escape, max_n, |_, _| {})
}

/// [`classify_from`], handing every visited point with its index to `visit`.
pub fn classify_visiting<V>(
    stepper: &Stepper,
    start: PlanarPoint,
    escape: &Scalar,
    max_n: usize,
    mut visit: V,
) -> Result<JumpClass>
where
    V: FnMut(usize, &PlanarPoint),
{
    let kind = stepper.kind;
    let exact = stepper.scheme.preserves_canard_exactly(kind);
    let mut p = start;
    for k in 0..=max_n {
        visit(k, &p);
        let d = transversal_deviation(kind, &stepper.params, &p);
        if d.abs() >= *escape {
            return Ok(if d.is_positive() { JumpClass::Right } else { JumpClass::Left });
        }
        if exact && d.is_zero() {
            return Ok(JumpClass::Stuck { max_n });
        }
        if k == max_n {
            break;
        }
        p = stepper.step(&p).map_err(|e| e.at_index(k))?;
    }
    Ok(JumpClass::Stuck { max_n })
}

/// Classifies the orbit from [`jump_start`].
pub fn classify_jump(
    stepper: &Stepper,
    rho: &Scalar,
    delta: &Scalar,
    escape: &Scalar,
    max_n: usize,
) -> Result<JumpClass> {
    let start = jump_start(stepper.kind, &stepper.params, rho, delta);
    classify_from(stepper, start, escape, max_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::PrecisionContext;
    use crate::schemes::Scheme;

    fn stepper(c: &PrecisionContext, kind: SingularityKind, scheme: Scheme, h: &str, eps: &str) -> Stepper {
        let params = SystemParams::new(c.parse(eps).unwrap(), c.parse(h).unwrap()).unwrap();
        Stepper::new(kind, scheme, params).unwrap()
    }

    #[test]
    fn small_step_keeps_the_side_of_the_start() {
        let c = PrecisionContext::new(50).unwrap();
        let s = stepper(&c, SingularityKind::Transcritical, Scheme::Euler, "0.01", "1");
        let rho = c.int(2);
        let delta = c.parse("1e-4").unwrap();
        let start = jump_start(s.kind, &s.params, &rho, &delta);
        let sign = transversal_deviation(s.kind, &s.params, &start).signum_i32();
        let class = classify_jump(&s, &rho, &delta, &rho, default_max_n(&s.params, &rho)).unwrap();
        assert_eq!(Some(class), JumpClass::expected(sign));
        let class = classify_jump(&s, &rho, &-delta.clone(), &rho, default_max_n(&s.params, &rho)).unwrap();
        assert_eq!(Some(class), JumpClass::expected(-sign));
    }

    #[test]
    fn exact_canard_start_is_stuck() {
        let c = PrecisionContext::new(30).unwrap();
        let s = stepper(&c, SingularityKind::Pitchfork, Scheme::Kahan, "0.1", "0.1");
        let class = classify_jump(&s, &c.int(1), &c.zero(), &c.int(1), 100).unwrap();
        assert_eq!(class, JumpClass::Stuck { max_n: 100 });
    }

    #[test]
    fn budget_exhaustion_is_stuck() {
        let c = PrecisionContext::new(30).unwrap();
        let s = stepper(&c, SingularityKind::Fold, Scheme::Kahan, "0.1", "0.01");
        let class = classify_jump(&s, &c.int(1), &c.parse("1e-6").unwrap(), &c.int(1), 10).unwrap();
        assert_eq!(class, JumpClass::Stuck { max_n: 10 });
    }

    #[test]
    fn default_budget() {
        let c = PrecisionContext::new(30).unwrap();
        let params = SystemParams::new(c.parse("0.01").unwrap(), c.parse("0.1").unwrap()).unwrap();
        assert_eq!(default_max_n(&params, &c.int(5)), 100_000);
    }
}
