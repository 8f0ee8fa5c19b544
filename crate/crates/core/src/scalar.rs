//! Scalar abstraction shared by every distance computation in the crate.
//!
//! All geometry is written against [`Scalar`], which `f32` and `f64`
//! implement. Exact rational scalars are not supported: euclidean and
//! snowflake metrics need `sqrt` and `powf`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point type usable as a distance value.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Relative slack applied when a computed quantity is compared against
    /// an upper bound (`value <= bound * (1 + REL_SLACK)`).
    const REL_SLACK: f64;
}

impl Scalar for f64 {
    const REL_SLACK: f64 = 1e-9;
}

impl Scalar for f32 {
    const REL_SLACK: f64 = 1e-5;
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an integer count into `T`.
#[inline]
pub fn count<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// `value <= bound`, allowing the scalar's relative slack.
#[inline]
pub fn within<T: Scalar>(value: T, bound: T) -> bool {
    value <= bound + bound.abs() * lit::<T>(T::REL_SLACK)
}

/// Lossy conversion for reports and error payloads.
#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// A positive quantity stored by its natural logarithm, for constants such
/// as `(1/2)(5L)^(-M)` that underflow any floating type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct LogValue {
    /// Natural logarithm of the value.
    pub ln: f64,
    /// Decimal mantissa in `[1, 10)`.
    pub mantissa: f64,
    /// Decimal exponent.
    pub exponent: i64,
}

impl LogValue {
    pub fn from_ln(ln: f64) -> Self {
        let log10 = ln / std::f64::consts::LN_10;
        let exponent = log10.floor();
        let mantissa = 10f64.powf(log10 - exponent);
        Self {
            ln,
            mantissa,
            exponent: exponent as i64,
        }
    }

    /// The value in `T`; zero when it underflows.
    pub fn value<T: Scalar>(&self) -> T {
        let v = self.ln.exp();
        T::from_f64(v).unwrap_or_else(T::zero)
    }

    pub fn ge<T: Scalar>(&self, other: T) -> bool {
        let o = to_f64(other);
        o <= 0.0 || self.ln >= o.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_value_round_trips_representable_values() {
        let v = LogValue::from_ln((0.004_f64).ln());
        assert!((v.mantissa - 4.0).abs() < 1e-12);
        assert_eq!(v.exponent, -3);
        assert!((v.value::<f64>() - 0.004).abs() < 1e-15);
    }

    #[test]
    fn log_value_underflow_is_zero_but_comparable() {
        let v = LogValue::from_ln(-5000.0);
        assert_eq!(v.value::<f64>(), 0.0);
        assert!(!v.ge(1e-300_f64));
        assert!(v.ge(0.0_f64));
    }

    #[test]
    fn within_uses_relative_slack() {
        assert!(within(1.0 + 1e-12, 1.0));
        assert!(!within(1.0 + 1e-6, 1.0));
        assert!(within(1.000_001_f32, 1.0_f32));
    }
}
