//! Scalar abstraction shared by the kinematic and linear-algebra code.
//!
//! Tree sums and eliminations are written once over [`Scalar`] and used with
//! exact rationals (zero tests must be exact) as well as with `f64` for quick
//! numerical cross-checks.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar: Clone + Debug + Num + Signed + FromPrimitive + ToPrimitive {
    /// Lossy conversion used only for reporting and numerical comparison.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Clone + Debug + Num + Signed + FromPrimitive + ToPrimitive {}

pub fn rational_from_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Formats a rational as `num/den`, or just `num` when the denominator is 1.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
