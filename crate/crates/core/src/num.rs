//! Scalar abstraction for probabilities.
//!
//! Every probability in a model, a language measure or a degree is carried by
//! a type implementing [`Probability`]. The exact instantiation ([`Rational`])
//! is the default for model files; `f64`/`f32` are available for quick
//! approximate runs.

use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational.
pub type Rational = BigRational;

/// Tolerance used when checking that floating-point distributions are normalized.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-9;

pub trait Probability:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether arithmetic on this type is exact.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// `true` when `self` equals one, exactly for rationals and within
    /// [`FLOAT_SUM_TOLERANCE`] for floats.
    fn is_unit(&self) -> bool;

    /// Best-effort exact representation; floats convert through their binary value.
    fn to_rational(&self) -> Option<Rational>;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

impl Probability for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn is_unit(&self) -> bool {
        self.is_one()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

macro_rules! impl_float_probability {
    ($f:ty) => {
        impl Probability for $f {
            const EXACT: bool = false;

            fn from_rational(r: &Rational) -> Self {
                ratio_to_f64(r) as $f
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_unit(&self) -> bool {
                ((*self as f64) - 1.0).abs() <= FLOAT_SUM_TOLERANCE
            }

            fn to_rational(&self) -> Option<Rational> {
                Rational::from_float(*self)
            }
        }
    };
}

impl_float_probability!(f32);
impl_float_probability!(f64);

/// Converts a big rational to the nearest `f64`, also for numerators and
/// denominators that individually overflow.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both sides down to 64 significant bits before dividing.
    let shift = |x: &BigInt| x.bits().saturating_sub(64);
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (shift(n), shift(d));
    let nf = (n >> sn).to_f64().unwrap_or(0.0);
    let df = (d >> sd).to_f64().unwrap_or(1.0);
    nf / df * 2f64.powi(sn as i32 - sd as i32)
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.25` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().ok()?;
        let magnitude = int_part.abs() * &scale + frac_part;
        let numer = if negative { -magnitude } else { magnitude };
        return Some(Rational::new(numer, scale));
    }
    let n: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Renders a float with 12 significant digits, in fixed notation when the
/// magnitude allows it.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-7..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

/// Display adapter writing a probability as `p/q` when exact, else as a float.
pub struct Exact<'a, P>(pub &'a P);

impl<P: Probability> fmt::Display for Exact<'_, P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if P::EXACT {
            match self.0.to_rational() {
                Some(r) if r.is_integer() => write!(f, "{}", r.numer()),
                Some(r) => write!(f, "{}/{}", r.numer(), r.denom()),
                None => write!(f, "{}", self.0.to_f64()),
            }
        } else {
            write!(f, "{}", self.0.to_f64())
        }
    }
}
