//! The symmetric implicit family
//! `(x̃ − x)/h = a f(x) + (1 − 2a) f((x + x̃)/2) + a f(x̃)` on the pitchfork.
//!
//! `a = 1/2` is the trapezoid rule, `a = 0` the midpoint rule and
//! `a = −1/2` the Kahan method. The y-update is always `ỹ = y + εh`, leaving
//! a scalar cubic relation in `x̃`.

use crate::error::{Error, Result};
use crate::precision::Scalar;
use crate::systems::{PlanarPoint, SystemParams};

const MAX_NEWTON: usize = 200;

/// How the returned root of the cubic relation was chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum BranchSelection {
    /// `x = 0` maps to `x̃ = 0`, the invariant canard line.
    CanardLine,
    /// Newton from the explicit Euler predictor converged.
    Newton { iterations: usize },
    /// Real root of the cleared cubic nearest the predictor.
    CubicRoot { real_roots: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchInfo {
    pub selection: BranchSelection,
    pub predictor: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepResult {
    pub point: PlanarPoint,
    pub branch_info: Option<BranchInfo>,
}

struct Relation<'a> {
    a: &'a Scalar,
    h: &'a Scalar,
    x: &'a Scalar,
    y: &'a Scalar,
    y_next: Scalar,
    y_mid: Scalar,
}

impl<'a> Relation<'a> {
    fn new(a: &'a Scalar, params: &'a SystemParams, p: &'a PlanarPoint) -> Self {
        let y_next = &p.y + &params.epsilon * &params.h;
        let y_mid = (&p.y + &y_next) / 2;
        Self {
            a,
            h: &params.h,
            x: &p.x,
            y: &p.y,
            y_next,
            y_mid,
        }
    }

    /// Right-hand side of the scheme evaluated at candidate `t = x̃`.
    fn rhs(&self, t: &Scalar) -> Scalar {
        let a = self.a;
        let x = self.x;
        let m = (x + t) / 2;
        let outer = a * (x * self.y - x.powi(3) + t * &self.y_next - t.powi(3));
        let inner = (1 - a * 2) * (&m * &self.y_mid - m.powi(3));
        outer + inner
    }

    /// `G(t) = t − x − h·rhs(t)`.
    fn g(&self, t: &Scalar) -> Scalar {
        t - self.x - self.h * self.rhs(t)
    }

    fn dg(&self, t: &Scalar) -> Scalar {
        let a = self.a;
        let m = (self.x + t) / 2;
        let inner = (1 - a * 2) * (&self.y_mid / 2 - m.square() * 3 / 2);
        let outer = a * (&self.y_next - t.square() * 3);
        1 - self.h * (inner + outer)
    }

    /// Coefficients `[c3, c2, c1, c0]` of `G` as a polynomial in `t`.
    fn cubic(&self) -> [Scalar; 4] {
        let a = self.a;
        let h = self.h;
        let x = self.x;
        let b = 1 - a * 2;
        let c3 = h * (1 + a * 6) / 8;
        let c2 = h * x * &b * 3 / 8;
        let c1 = 1 - h * (&b * (&self.y_mid / 2 - x.square() * 3 / 8) + a * &self.y_next);
        let c0 = -x.clone()
            - h * (a * (x * self.y - x.powi(3)) + &b * (x * &self.y_mid / 2 - x.powi(3) / 8));
        [c3, c2, c1, c0]
    }

    fn newton(&self, seed: &Scalar, max_iter: usize) -> Option<(Scalar, usize)> {
        let tol = seed.tolerance();
        let mut t = seed.clone();
        for iteration in 1..=max_iter {
            let slope = self.dg(&t);
            if slope.is_zero() || !slope.is_finite() {
                return None;
            }
            let delta = self.g(&t) / slope;
            t -= &delta;
            if !t.is_finite() {
                return None;
            }
            if delta.abs() <= &tol * t.abs().max(seed.constant(1, 1)) {
                return Some((t, iteration));
            }
        }
        None
    }
}

/// One step of the implicit family on `x' = x(y − x²)`, `y' = ε`.
pub fn a_family_step_pitchfork(a: &Scalar, params: &SystemParams, p: &PlanarPoint) -> Result<StepResult> {
    let rel = Relation::new(a, params, p);
    if p.x.is_zero() {
        return Ok(StepResult {
            point: PlanarPoint::new(p.x.constant(0, 1), rel.y_next),
            branch_info: Some(BranchInfo {
                selection: BranchSelection::CanardLine,
                predictor: p.x.constant(0, 1),
            }),
        });
    }
    let predictor = &p.x + &params.h * &p.x * (&p.y - p.x.square());
    let (x_next, selection) = match rel.newton(&predictor, MAX_NEWTON) {
        Some((t, iterations)) => (t, BranchSelection::Newton { iterations }),
        None => {
            let roots = real_roots(&rel.cubic());
            let count = roots.len();
            let best = roots
                .into_iter()
                .map(|r| rel.newton(&r, 8).map(|(t, _)| t).unwrap_or(r))
                .min_by(|l, r| {
                    let dl = (l - &predictor).abs();
                    let dr = (r - &predictor).abs();
                    dl.partial_cmp(&dr).expect("finite roots")
                })
                .ok_or(Error::NoRealBranch)?;
            (best, BranchSelection::CubicRoot { real_roots: count })
        }
    };
    Ok(StepResult {
        point: PlanarPoint::new(x_next, rel.y_next),
        branch_info: Some(BranchInfo { selection, predictor }),
    })
}

/// `(x̃ − x)/h − [a f(x) + (1 − 2a) f(mid) + a f(x̃)]` for the x-component.
pub fn a_family_residual(a: &Scalar, params: &SystemParams, p: &PlanarPoint, x_next: &Scalar) -> Scalar {
    let rel = Relation::new(a, params, p);
    (x_next - &p.x) / &params.h - rel.rhs(x_next)
}

/// Real roots of `c3 t³ + c2 t² + c1 t + c0`, degenerating gracefully to
/// lower degree.
pub(crate) fn real_roots(coeffs: &[Scalar; 4]) -> Vec<Scalar> {
    let [c3, c2, c1, c0] = coeffs;
    if c3.is_zero() {
        if c2.is_zero() {
            if c1.is_zero() {
                return Vec::new();
            }
            return vec![-(c0 / c1)];
        }
        let disc = c1.square() - c2 * c0 * 4;
        if disc.is_negative() {
            return Vec::new();
        }
        let sq = disc.sqrt();
        // Cancellation-free pairing of the two roots.
        let q = if c1.is_negative() { -(c1 - &sq) / 2 } else { -(c1 + &sq) / 2 };
        if q.is_zero() {
            return vec![q];
        }
        return vec![&q / c2, c0 / &q];
    }
    let b = c2 / c3;
    let c = c1 / c3;
    let d = c0 / c3;
    let shift = &b / 3;
    let p = &c - b.square() / 3;
    let q = b.powi(3) * 2 / 27 - &b * &c / 3 + &d;
    let disc = q.square() / 4 + p.powi(3) / 27;
    let roots: Vec<Scalar> = if disc.is_positive() {
        let sq = disc.sqrt();
        let half_q = &q / 2;
        let u = (-&half_q + &sq).cbrt() + (-&half_q - &sq).cbrt();
        vec![u]
    } else if p.is_zero() {
        vec![(-q).cbrt()]
    } else {
        let r = (-&p / 3).sqrt();
        let mut arg = (&q * 3) / (&p * 2) * (p.constant(-3, 1) / &p).sqrt();
        let one = p.constant(1, 1);
        if arg > one {
            arg = one.clone();
        } else if arg < -&one {
            arg = -one.clone();
        }
        let theta = arg.acos() / 3;
        let two_pi_3 = (-one).acos() * 2 / 3;
        (0..3)
            .map(|k| &r * 2 * (&theta - &two_pi_3 * k).cos())
            .collect()
    };
    roots.into_iter().map(|u| u - &shift).collect()
}
