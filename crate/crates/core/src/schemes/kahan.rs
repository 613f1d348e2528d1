use crate::error::{Error, Result};
use crate::precision::Scalar;
use crate::systems::{PlanarPoint, SystemParams};

/// A planar quadratic field `f(z) = Q(z) + B z + c`.
///
/// `q[k] = [q_xx, q_xy, q_yy]` gives component `k` of `Q` as
/// `q_xx x² + q_xy xy + q_yy y²`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticField {
    pub q: [[Scalar; 3]; 2],
    pub b: [[Scalar; 2]; 2],
    pub c: [Scalar; 2],
}

impl QuadraticField {
    /// `(x² − y² + ε, ε)`.
    pub fn transcritical(epsilon: &Scalar) -> Self {
        let z = epsilon.constant(0, 1);
        let one = epsilon.constant(1, 1);
        Self {
            q: [[one.clone(), z.clone(), -one], [z.clone(), z.clone(), z.clone()]],
            b: [[z.clone(), z.clone()], [z.clone(), z]],
            c: [epsilon.clone(), epsilon.clone()],
        }
    }

    /// `(x² − y, εx)`.
    pub fn fold(epsilon: &Scalar) -> Self {
        let z = epsilon.constant(0, 1);
        let one = epsilon.constant(1, 1);
        Self {
            q: [[one.clone(), z.clone(), z.clone()], [z.clone(), z.clone(), z.clone()]],
            b: [[z.clone(), -one], [epsilon.clone(), z.clone()]],
            c: [z.clone(), z],
        }
    }

    pub fn eval(&self, p: &PlanarPoint) -> [Scalar; 2] {
        let xx = p.x.square();
        let xy = &p.x * &p.y;
        let yy = p.y.square();
        let row = |k: usize| {
            let [a, b, c] = &self.q[k];
            a * &xx + b * &xy + c * &yy + &self.b[k][0] * &p.x + &self.b[k][1] * &p.y + &self.c[k]
        };
        [row(0), row(1)]
    }

    pub fn jacobian(&self, p: &PlanarPoint) -> [[Scalar; 2]; 2] {
        let row = |k: usize| {
            let [a, b, c] = &self.q[k];
            [
                a * &p.x * 2 + b * &p.y + &self.b[k][0],
                b * &p.x + c * &p.y * 2 + &self.b[k][1],
            ]
        };
        [row(0), row(1)]
    }
}

/// `p + h (I − (h/2) Df(p))⁻¹ f(p)`.
pub fn kahan_step_general(field: &QuadraticField, h: &Scalar, p: &PlanarPoint) -> Result<PlanarPoint> {
    let f = field.eval(p);
    let df = field.jacobian(p);
    let half_h = h / 2;
    let m00 = 1 - &half_h * &df[0][0];
    let m01 = -(&half_h * &df[0][1]);
    let m10 = -(&half_h * &df[1][0]);
    let m11 = 1 - &half_h * &df[1][1];
    let det = &m00 * &m11 - &m01 * &m10;
    if det.is_zero() {
        return Err(Error::pole());
    }
    let dx = (&m11 * &f[0] - &m01 * &f[1]) / &det;
    let dy = (&m00 * &f[1] - &m10 * &f[0]) / &det;
    Ok(PlanarPoint::new(&p.x + h * dx, &p.y + h * dy))
}

/// `((x + εh − hy(y + εh)) / (1 − hx), y + εh)`.
pub fn kahan_step_transcritical(params: &SystemParams, p: &PlanarPoint) -> Result<PlanarPoint> {
    let SystemParams { epsilon, h } = params;
    let den = 1 - h * &p.x;
    if den.is_zero() {
        return Err(Error::pole());
    }
    let eh = epsilon * h;
    let y_next = &p.y + &eh;
    let x_next = (&p.x + &eh - h * &p.y * &y_next) / den;
    Ok(PlanarPoint::new(x_next, y_next))
}

/// The birational Kahan map of the fold; the inverse is the same map with `-h`.
pub fn kahan_step_fold(params: &SystemParams, p: &PlanarPoint) -> Result<PlanarPoint> {
    let SystemParams { epsilon, h } = params;
    let PlanarPoint { x, y } = p;
    let quarter = h.square() * epsilon / 4;
    let den = 1 - h * x + &quarter;
    if den.is_zero() {
        return Err(Error::pole());
    }
    let x_next = (x - h * y - &quarter * x) / &den;
    let y_next = (y - h * y * x - &quarter * x.square() * 2 + h * epsilon * x - &quarter * y) / &den;
    Ok(PlanarPoint::new(x_next, y_next))
}
