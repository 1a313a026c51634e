//! Integer scalars the exact linear algebra is generic over.
//!
//! Fixed-width types are used on the fast path; every arithmetic step is
//! checked, and an overflow surfaces as [`Overflow`] so the caller can retry
//! the same computation with [`BigInt`].

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{
    CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, One, Signed, ToPrimitive, Zero,
};

/// Raised when a fixed-width scalar cannot hold an intermediate value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("integer overflow in fixed-width arithmetic")]
pub struct Overflow;

/// An exact integer type usable as a matrix entry.
pub trait Scalar:
    Clone
    + Default
    + Debug
    + Display
    + Eq
    + Ord
    + Hash
    + Zero
    + One
    + Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Bit length of the absolute value.
    fn bits(&self) -> u64;

    fn to_bigint(&self) -> BigInt;

    /// `None` when the value does not fit.
    fn from_bigint(value: &BigInt) -> Option<Self>;

    fn try_add(&self, rhs: &Self) -> Result<Self, Overflow> {
        self.checked_add(rhs).ok_or(Overflow)
    }

    fn try_sub(&self, rhs: &Self) -> Result<Self, Overflow> {
        self.checked_sub(rhs).ok_or(Overflow)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self, Overflow> {
        self.checked_mul(rhs).ok_or(Overflow)
    }

    /// `self - f * b`, the elimination kernel.
    fn sub_mul(&self, f: &Self, b: &Self) -> Result<Self, Overflow> {
        self.try_sub(&f.try_mul(b)?)
    }

    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("every scalar holds an i64")
    }

    /// Residue in `0..m`.
    fn rem_u64(&self, m: u64) -> u64;
}

macro_rules! impl_fixed_scalar {
    ($($t:ty),*) => {
        $(
            impl Scalar for $t {
                fn bits(&self) -> u64 {
                    (<$t>::BITS - self.unsigned_abs().leading_zeros()) as u64
                }

                fn to_bigint(&self) -> BigInt {
                    BigInt::from(*self)
                }

                fn from_bigint(value: &BigInt) -> Option<Self> {
                    <$t>::try_from(value).ok()
                }

                fn rem_u64(&self, m: u64) -> u64 {
                    (*self as i128).rem_euclid(m as i128) as u64
                }
            }
        )*
    };
}

impl_fixed_scalar!(i64, i128);

impl Scalar for BigInt {
    fn bits(&self) -> u64 {
        self.magnitude().bits()
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_bigint(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }

    fn rem_u64(&self, m: u64) -> u64 {
        self.mod_floor(&BigInt::from(m))
            .to_u64()
            .expect("residue below modulus")
    }
}

/// Converts between scalar types, failing when the target is too narrow.
pub fn convert<S: Scalar, T: Scalar>(value: &S) -> Result<T, Overflow> {
    T::from_bigint(&value.to_bigint()).ok_or(Overflow)
}
