//! Configurable-precision scalars.
//!
//! Every number in the laboratory is a [`Scalar`], a binary floating-point
//! value backed by MPFR with correct rounding (round to nearest, ties to
//! even). The working precision is chosen once through a
//! [`PrecisionContext`] in *decimal* digits and translated to the smallest
//! binary precision that represents at least that many digits.
//!
//! Scalars created by one context all share its precision. Binary operators
//! produce a result at the larger of the two operand precisions, so mixing
//! contexts never silently loses digits; [`PrecisionContext::adopt`] rounds a
//! foreign scalar into a context explicitly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision shared by all scalars created through it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    /// Smallest admissible precision, roughly that of an IEEE double.
    pub const MIN_DIGITS: u32 = 16;
    /// Default for plain orbit simulations.
    pub const SIMULATION_DIGITS: u32 = 50;
    /// Default for bisections and parameter sweeps.
    pub const SWEEP_DIGITS: u32 = 5000;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::InvalidPrecision { digits });
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision in bits: the least `b` with `b >= digits * log2(10)`.
    pub fn bits(&self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32
    }

    pub fn zero(&self) -> Scalar {
        Scalar(Float::new(self.bits()))
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, value: i64) -> Scalar {
        Scalar(Float::with_val(self.bits(), value))
    }

    /// The correctly rounded value of `num / den`.
    pub fn ratio(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar(Float::with_val(self.bits(), Rational::from((num, den))))
    }

    /// `10^exp`, correctly rounded.
    pub fn pow10(&self, exp: i32) -> Scalar {
        let ten = Float::with_val(self.bits(), 10);
        Scalar(ten.pow(exp))
    }

    /// The default comparison tolerance `10^(10 - digits)`.
    pub fn tolerance(&self) -> Scalar {
        self.pow10(10 - self.digits as i32)
    }

    /// Parses a decimal (`"0.1"`, `"-1e-4"`) or an exact rational (`"1/6"`)
    /// directly at this precision, without passing through `f64`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let err = || Error::Parse {
            input: text.to_string(),
        };
        if text.is_empty() {
            return Err(err());
        }
        if let Some((num, den)) = text.split_once('/') {
            if let Ok(q) = Rational::from_str(&format!("{}/{}", num.trim(), den.trim())) {
                return Ok(Scalar(Float::with_val(self.bits(), q)));
            }
            let num = self.parse(num)?;
            let den = self.parse(den)?;
            if den.is_zero() {
                return Err(err());
            }
            return Ok(num / den);
        }
        let parsed = Float::parse(text).map_err(|_| err())?;
        let value = Float::with_val(self.bits(), parsed);
        if !value.is_finite() {
            return Err(err());
        }
        Ok(Scalar(value))
    }

    /// Exact conversion of a binary double (which may itself be inexact
    /// relative to the decimal the caller had in mind).
    pub fn from_f64(&self, value: f64) -> Scalar {
        Scalar(Float::with_val(self.bits(), value))
    }

    /// Rounds `value` to this context's precision.
    pub fn adopt(&self, value: &Scalar) -> Scalar {
        Scalar(Float::with_val(self.bits(), &value.0))
    }

    pub fn pi(&self) -> Scalar {
        Scalar(Float::with_val(self.bits(), rug::float::Constant::Pi))
    }
}

/// `|a - b| <= tol`.
pub fn approx_eq(a: &Scalar, b: &Scalar, tol: &Scalar) -> bool {
    (a - b).abs() <= *tol
}

/// A real number at a fixed binary precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Scalar(Float);

impl Scalar {
    pub fn precision_bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    /// Decimal digits carried by the binary precision.
    pub fn digits(&self) -> u32 {
        (f64::from(self.0.prec()) / LOG2_10).floor() as u32
    }

    /// `num / den` at this scalar's precision.
    pub fn constant(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar(Float::with_val(self.0.prec(), Rational::from((num, den))))
    }

    /// `10^(10 - digits)` at this scalar's precision.
    pub fn tolerance(&self) -> Scalar {
        let ten = Float::with_val(self.0.prec(), 10);
        Scalar(ten.pow(10 - self.digits() as i32))
    }

    fn unary(&self, f: impl FnOnce(Float) -> Float) -> Scalar {
        Scalar(f(self.0.clone()))
    }

    pub fn abs(&self) -> Scalar {
        self.unary(Float::abs)
    }

    pub fn sqrt(&self) -> Scalar {
        self.unary(Float::sqrt)
    }

    pub fn cbrt(&self) -> Scalar {
        self.unary(Float::cbrt)
    }

    pub fn ln(&self) -> Scalar {
        self.unary(Float::ln)
    }

    pub fn exp(&self) -> Scalar {
        self.unary(Float::exp)
    }

    pub fn cos(&self) -> Scalar {
        self.unary(Float::cos)
    }

    pub fn acos(&self) -> Scalar {
        self.unary(Float::acos)
    }

    pub fn recip(&self) -> Scalar {
        self.unary(Float::recip)
    }

    pub fn square(&self) -> Scalar {
        self.unary(Float::square)
    }

    pub fn powi(&self, exp: i32) -> Scalar {
        Scalar(self.0.clone().pow(exp))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Greater)
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Less)
    }

    /// -1, 0 or 1.
    pub fn signum_i32(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    }

    /// Largest integer not above the value, if it fits in an `i64`.
    pub fn floor_i64(&self) -> Option<i64> {
        self.0.clone().floor().to_integer()?.to_i64()
    }

    /// Nearest integer, if it fits in an `i64`.
    pub fn round_i64(&self) -> Option<i64> {
        self.0.clone().round().to_integer()?.to_i64()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with `significant` significant digits.
    pub fn to_decimal(&self, significant: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        self.0.to_string_radix(10, Some(significant.max(1)))
    }
}

impl fmt::Display for Scalar {
    /// Renders all digits carried by the precision unless a precision is
    /// given (`{:.20}` prints 20 significant digits).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| (f64::from(self.0.prec()) / LOG2_10).floor() as usize);
        f.write_str(&self.to_decimal(digits))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.to_decimal(20))
    }
}

impl PartialEq<i32> for Scalar {
    fn eq(&self, other: &i32) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i32> for Scalar {
    fn partial_cmp(&self, other: &i32) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

fn max_prec(a: &Float, b: &Float) -> u32 {
    a.prec().max(b.prec())
}

macro_rules! scalar_binop {
    ($Op:ident, $op:ident, $OpAssign:ident, $op_assign:ident) => {
        impl $Op<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $op(self, rhs: &Scalar) -> Scalar {
                Scalar(Float::with_val(
                    max_prec(&self.0, &rhs.0),
                    $Op::$op(&self.0, &rhs.0),
                ))
            }
        }

        impl $Op<Scalar> for &Scalar {
            type Output = Scalar;
            fn $op(self, rhs: Scalar) -> Scalar {
                $Op::$op(self, &rhs)
            }
        }

        impl $Op<&Scalar> for Scalar {
            type Output = Scalar;
            fn $op(mut self, rhs: &Scalar) -> Scalar {
                if self.0.prec() >= rhs.0.prec() {
                    $OpAssign::$op_assign(&mut self.0, &rhs.0);
                    self
                } else {
                    $Op::$op(&self, rhs)
                }
            }
        }

        impl $Op<Scalar> for Scalar {
            type Output = Scalar;
            fn $op(self, rhs: Scalar) -> Scalar {
                $Op::$op(self, &rhs)
            }
        }

        impl $OpAssign<&Scalar> for Scalar {
            fn $op_assign(&mut self, rhs: &Scalar) {
                if self.0.prec() < rhs.0.prec() {
                    self.0.set_prec(rhs.0.prec());
                }
                $OpAssign::$op_assign(&mut self.0, &rhs.0);
            }
        }

        impl $OpAssign<Scalar> for Scalar {
            fn $op_assign(&mut self, rhs: Scalar) {
                $OpAssign::$op_assign(self, &rhs);
            }
        }

        impl $OpAssign<i32> for Scalar {
            fn $op_assign(&mut self, rhs: i32) {
                $OpAssign::$op_assign(&mut self.0, rhs);
            }
        }

        impl $Op<i32> for &Scalar {
            type Output = Scalar;
            fn $op(self, rhs: i32) -> Scalar {
                Scalar(Float::with_val(self.0.prec(), $Op::$op(&self.0, rhs)))
            }
        }

        impl $Op<i32> for Scalar {
            type Output = Scalar;
            fn $op(mut self, rhs: i32) -> Scalar {
                $OpAssign::$op_assign(&mut self.0, rhs);
                self
            }
        }

        impl $Op<&Scalar> for i32 {
            type Output = Scalar;
            fn $op(self, rhs: &Scalar) -> Scalar {
                Scalar(Float::with_val(rhs.0.prec(), $Op::$op(self, &rhs.0)))
            }
        }

        impl $Op<Scalar> for i32 {
            type Output = Scalar;
            fn $op(self, rhs: Scalar) -> Scalar {
                $Op::$op(self, &rhs)
            }
        }
    };
}

scalar_binop!(Add, add, AddAssign, add_assign);
scalar_binop!(Sub, sub, SubAssign, sub_assign);
scalar_binop!(Mul, mul, MulAssign, mul_assign);
scalar_binop!(Div, div, DivAssign, div_assign);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    #[test]
    fn make_context_accepts_minimum_and_high_precisions() {
        for d in [16, 50, 5000] {
            assert_eq!(ctx(d).digits(), d);
        }
        assert_eq!(ctx(16).bits(), 54);
        assert_eq!(ctx(5000).bits(), 16610);
    }

    #[test]
    fn make_context_rejects_low_precision() {
        assert_eq!(
            PrecisionContext::new(15),
            Err(Error::InvalidPrecision { digits: 15 })
        );
    }

    #[test]
    fn approx_eq_examples() {
        let c = ctx(50);
        let one = c.one();
        let tol = c.pow10(-30);
        assert!(approx_eq(&one, &one, &tol));
        let nudged = &one + c.pow10(-20);
        assert!(!approx_eq(&one, &nudged, &tol));

        let coarse = c.parse("0.1").unwrap();
        let fine = ctx(100).parse("0.1").unwrap();
        assert!(approx_eq(&coarse, &fine, &ctx(100).pow10(-45)));
    }

    #[test]
    fn parses_decimals_rationals_and_rejects_garbage() {
        let c = ctx(30);
        let sixth = c.parse("1/6").unwrap();
        assert!(approx_eq(&(sixth * 6), &c.one(), &c.pow10(-29)));
        assert_eq!(c.parse("-1e-4").unwrap(), c.ratio(-1, 10_000));
        assert_eq!(c.parse(" 2.5 ").unwrap(), c.ratio(5, 2));
        assert!(c.parse("abc").is_err());
        assert!(c.parse("").is_err());
        assert!(c.parse("1/0").is_err());
    }

    #[test]
    fn decimal_tenth_is_not_the_binary_double() {
        let c = ctx(50);
        assert_ne!(c.parse("0.1").unwrap(), c.from_f64(0.1));
    }

    #[test]
    fn mixed_precision_results_keep_the_larger_precision() {
        let a = ctx(20).one();
        let b = ctx(60).parse("1/3").unwrap();
        assert_eq!((&a + &b).precision_bits(), ctx(60).bits());
        assert_eq!((a + b).precision_bits(), ctx(60).bits());
    }

    #[test]
    fn integer_helpers() {
        let c = ctx(20);
        assert_eq!(c.parse("-2.5").unwrap().floor_i64(), Some(-3));
        assert_eq!(c.parse("2.5001").unwrap().round_i64(), Some(3));
        assert_eq!(c.parse("-0.0").unwrap().signum_i32(), 0);
        assert!(c.parse("1e-300").unwrap().is_positive());
    }

    #[test]
    fn display_respects_requested_digits() {
        let c = ctx(30);
        let third = c.ratio(1, 3);
        assert_eq!(format!("{third:.5}"), "3.3333e-1");
    }
}
