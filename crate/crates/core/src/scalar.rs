//! Scalar abstractions.
//!
//! Geometry on the torus runs on any IEEE float through [`Real`]. The hexagonal
//! tiling optimizer only needs an ordered field, so it is written against
//! [`Field`], which is implemented for both floats and exact rationals.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Floating point scalar used by the torus geometry: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal. Panics only if the value is unrepresentable,
    /// which cannot happen for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ordered field with exact or approximate division.
pub trait Field: Clone + PartialOrd + Num + Signed + Debug + Display {
    fn from_int(v: i64) -> Self;
    fn to_f64_lossy(&self) -> f64;
    /// Largest integer not above `self`.
    fn floor_value(&self) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_int(numer) / Self::from_int(denom)
    }
}

impl Field for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
    fn floor_value(&self) -> Self {
        self.floor()
    }
}

impl Field for f32 {
    fn from_int(v: i64) -> Self {
        v as f32
    }
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
    fn floor_value(&self) -> Self {
        self.floor()
    }
}

impl Field for Ratio<i64> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn floor_value(&self) -> Self {
        self.floor()
    }
}

impl Field for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            // ToPrimitive for big ratios can fail when both parts overflow f64.
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
    fn floor_value(&self) -> Self {
        self.floor()
    }
}

/// Formats a length as a fixed-notation decimal with 17 significant digits.
pub fn decimal_string(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.17}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).clamp(1, 40) as usize;
    format!("{x:.decimals$}")
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn fraction_string(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q` or an integer into an exact rational.
pub fn parse_fraction(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}
