use crate::error::{Error, Result};
use crate::precision::Scalar;

/// Principal branch `W₀(x)` for `x ≥ 0`, by Halley iteration from `ln(1 + x)`.
pub fn lambert_w0(x: &Scalar) -> Result<Scalar> {
    if x.is_negative() {
        return Err(Error::OutOfDomain(x.to_decimal(20)));
    }
    if x.is_zero() {
        return Ok(x.constant(0, 1));
    }
    let stop = x.tolerance() * x.constant(1, 100_000_000);
    let mut w = (1 + x).ln();
    let mut polished = false;
    for _ in 0..1000 {
        let ew = w.exp();
        let f = &w * &ew - x;
        let wp1 = &w + 1;
        let denom = &ew * &wp1 - (&w + 2) * &f / (&wp1 * 2);
        let delta = f / denom;
        w -= &delta;
        if delta.abs() <= &stop * w.abs() {
            // Cubic convergence: one more pass lands on the last digits.
            if polished {
                break;
            }
            polished = true;
        }
    }
    Ok(w)
}
