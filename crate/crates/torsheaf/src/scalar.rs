use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Signed};

/// Exact ring scalars usable as polynomial coefficients.
pub trait Scalar: Clone + Debug + Display + PartialEq + Signed + FromPrimitive {}

impl<T> Scalar for T where T: Clone + Debug + Display + PartialEq + Signed + FromPrimitive {}

/// Exact fields: subspaces and formal logarithms live over these.
pub trait Field: Scalar + Eq + Hash {}

impl Field for BigRational {}
impl Field for Ratio<i64> {}
impl Field for Ratio<i128> {}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// The exact integer value of `q`, if it is one.
pub fn as_integer(q: &BigRational) -> Option<BigInt> {
    if q.is_integer() {
        Some(q.to_integer())
    } else {
        None
    }
}
