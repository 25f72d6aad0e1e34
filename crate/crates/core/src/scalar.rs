//! Scalar traits shared by the generic matrix code.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::interval::Interval;

/// A commutative ring element usable as a matrix entry.
pub trait Scalar:
    Clone
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

/// Scalars that also support division by nonzero elements.
pub trait Field: Scalar + Div<Output = Self> {}

/// Scalars with an absolute value.
pub trait Magnitude: Scalar {
    fn magnitude(&self) -> Self;
}

/// Ordered fields with rounding to the nearest integer (lattice reduction).
pub trait OrderedField: Field + PartialOrd {
    fn round_to_int(&self) -> BigInt;
    fn from_bigint(n: &BigInt) -> Self;
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
        }
        impl Field for $t {}
        impl Magnitude for $t {
            fn magnitude(&self) -> Self {
                self.abs()
            }
        }
        impl OrderedField for $t {
            fn round_to_int(&self) -> BigInt {
                BigInt::from_f64(self.round() as f64).unwrap_or_default()
            }
            fn from_bigint(n: &BigInt) -> Self {
                n.to_f64().unwrap_or(f64::NAN) as $t
            }
        }
    )*};
}
float_scalar!(f32, f64);

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl Magnitude for BigInt {
    fn magnitude(&self) -> Self {
        self.abs()
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

impl Field for BigRational {}

impl Magnitude for BigRational {
    fn magnitude(&self) -> Self {
        self.abs()
    }
}

impl OrderedField for BigRational {
    fn round_to_int(&self) -> BigInt {
        let two = BigInt::from(2);
        // floor(x + 1/2)
        (self.numer() * &two + self.denom()).div_floor(&(self.denom() * two))
    }
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

impl Scalar for Interval {
    fn from_i64(v: i64) -> Self {
        Interval::from_i64(v)
    }
}

impl Field for Interval {}

impl Magnitude for Interval {
    fn magnitude(&self) -> Self {
        self.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rounding_is_nearest() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(r(7, 2).round_to_int(), BigInt::from(4));
        assert_eq!(r(-7, 2).round_to_int(), BigInt::from(-3));
        assert_eq!(r(-8, 3).round_to_int(), BigInt::from(-3));
        assert_eq!(2.4f64.round_to_int(), BigInt::from(2));
    }
}
