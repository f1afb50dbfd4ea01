//! Values in one of two numeric regimes: exact rationals or binary64 floats
//! with a tolerance-aware comparison rule.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default relative comparison tolerance in float mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Default cap on the decimal digit count of exact denominators.
pub const DEFAULT_MAX_DENOMINATOR_DIGITS: u64 = 1_000_000;
/// Significand bits of the float regime (IEEE binary64).
pub const FLOAT_PRECISION_BITS: u32 = 53;

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn from_integer(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => rational_to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    /// Exact ordering when both sides are rational, IEEE ordering otherwise.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(p), Scalar::Exact(q)) => p.cmp(q),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }

    pub fn max_value(self, other: Scalar) -> Scalar {
        if other.cmp_value(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// Renders `p/q` (or `p`) for exact values, shortest round-trip decimal for floats.
    pub fn to_decimal_string(&self) -> String {
        self.to_string()
    }

    /// Six-decimal rendering used by human-readable tables; exact values keep fraction form.
    pub fn to_display_string(&self) -> String {
        match self {
            Scalar::Exact(q) => q.to_string(),
            Scalar::Float(x) => format!("{:.6}", normalize_zero(*x)),
        }
    }
}

fn normalize_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{}", q),
            Scalar::Float(x) => write!(f, "{}", normalize_zero(*x)),
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Exact(q)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(p), Scalar::Exact(q)) => Scalar::Exact(p $op q),
                    _ => Scalar::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);
binary_op!(Mul, mul, *);
binary_op!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(-q),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

/// Numeric regime plus the comparison rule that goes with it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NumericMode {
    ExactRational { max_denominator_digits: u64 },
    Float { precision_bits: u32, tolerance: f64 },
}

impl Default for NumericMode {
    fn default() -> Self {
        NumericMode::float()
    }
}

impl NumericMode {
    pub fn exact() -> Self {
        NumericMode::ExactRational {
            max_denominator_digits: DEFAULT_MAX_DENOMINATOR_DIGITS,
        }
    }

    pub fn float() -> Self {
        NumericMode::Float {
            precision_bits: FLOAT_PRECISION_BITS,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn exact_with_limit(max_denominator_digits: u64) -> Result<Self> {
        if max_denominator_digits == 0 {
            return Err(Error::InvalidMode(
                "denominator digit limit must be positive".into(),
            ));
        }
        Ok(NumericMode::ExactRational {
            max_denominator_digits,
        })
    }

    /// Float mode with a caller-chosen tolerance. Zero is rejected: a zero
    /// tolerance is reserved for the exact regime.
    pub fn float_with_tolerance(tolerance: f64) -> Result<Self> {
        Self::float_with(FLOAT_PRECISION_BITS, tolerance)
    }

    pub fn float_with(precision_bits: u32, tolerance: f64) -> Result<Self> {
        let mode = NumericMode::Float {
            precision_bits,
            tolerance,
        };
        mode.validate()?;
        Ok(mode)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NumericMode::ExactRational {
                max_denominator_digits,
            } => {
                if max_denominator_digits == 0 {
                    return Err(Error::InvalidMode(
                        "denominator digit limit must be positive".into(),
                    ));
                }
            }
            NumericMode::Float {
                precision_bits,
                tolerance,
            } => {
                if precision_bits < FLOAT_PRECISION_BITS {
                    return Err(Error::InvalidMode(format!(
                        "float precision {precision_bits} bits is below {FLOAT_PRECISION_BITS}"
                    )));
                }
                if precision_bits > FLOAT_PRECISION_BITS {
                    return Err(Error::ModeUnsupported(format!(
                        "float precision of {precision_bits} bits (only binary64 is available)"
                    )));
                }
                if !(tolerance.is_finite() && tolerance > 0.0) {
                    return Err(Error::InvalidMode(format!(
                        "float mode needs a positive finite tolerance, got {tolerance}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumericMode::ExactRational { .. })
    }

    pub fn tolerance(&self) -> f64 {
        match *self {
            NumericMode::ExactRational { .. } => 0.0,
            NumericMode::Float { tolerance, .. } => tolerance,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NumericMode::ExactRational { .. } => "exact",
            NumericMode::Float { .. } => "float",
        }
    }

    /// Moves a rational constant into this regime.
    pub fn lift(&self, q: &BigRational) -> Scalar {
        match self {
            NumericMode::ExactRational { .. } => Scalar::Exact(q.clone()),
            NumericMode::Float { .. } => Scalar::Float(rational_to_f64(q)),
        }
    }

    pub fn lift_integer(&self, v: u64) -> Scalar {
        match self {
            NumericMode::ExactRational { .. } => {
                Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
            }
            NumericMode::Float { .. } => Scalar::Float(v as f64),
        }
    }

    pub fn lift_ratio(&self, num: u64, den: u64) -> Scalar {
        match self {
            NumericMode::ExactRational { .. } => {
                Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
            }
            NumericMode::Float { .. } => Scalar::Float(num as f64 / den as f64),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.lift_integer(0)
    }

    /// Rejects exact values whose denominators exceed the configured digit budget.
    pub fn check_size(&self, value: &Scalar) -> Result<()> {
        if let (
            NumericMode::ExactRational {
                max_denominator_digits,
            },
            Scalar::Exact(q),
        ) = (self, value)
        {
            let digits = decimal_digits_upper(q.denom());
            if digits > *max_denominator_digits {
                return Err(Error::Overflow {
                    digits,
                    limit: *max_denominator_digits,
                });
            }
        }
        Ok(())
    }

    /// `lhs ≤ rhs` under this mode's rule. Exact operands compare exactly;
    /// otherwise the comparison passes iff `lhs ≤ rhs + tol·max(1, |lhs|, |rhs|)`,
    /// and strictness needs `rhs − lhs > tol·max(1, |lhs|, |rhs|)`.
    pub fn compare_le(&self, lhs: &Scalar, rhs: &Scalar) -> Comparison {
        let gap = rhs - lhs;
        match (lhs, rhs) {
            (Scalar::Exact(p), Scalar::Exact(q)) => Comparison {
                holds: p <= q,
                strict: p < q,
                exact: true,
                gap,
            },
            _ => {
                let (x, y) = (lhs.to_f64(), rhs.to_f64());
                let slack = self.tolerance() * 1f64.max(x.abs()).max(y.abs());
                let g = y - x;
                Comparison {
                    holds: g >= -slack,
                    strict: g > slack,
                    exact: false,
                    gap,
                }
            }
        }
    }

    /// Equality under this mode's rule (`|lhs − rhs| ≤ tol·max(1, |lhs|, |rhs|)`).
    pub fn approx_eq(&self, lhs: &Scalar, rhs: &Scalar) -> bool {
        let c = self.compare_le(lhs, rhs);
        let d = self.compare_le(rhs, lhs);
        c.holds && d.holds
    }
}

/// Outcome of a `lhs ≤ rhs` check.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub holds: bool,
    /// `lhs < rhs` certified (exactly, or by more than the tolerance).
    pub strict: bool,
    /// Both sides were rational and compared without rounding.
    pub exact: bool,
    /// `rhs − lhs`.
    pub gap: Scalar,
}

/// Upper estimate of the decimal digit count of a big integer.
pub(crate) fn decimal_digits_upper(v: &BigInt) -> u64 {
    (v.bits() as f64 * std::f64::consts::LOG10_2).ceil() as u64
}
