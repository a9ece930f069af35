//! Exact nonnegative counts.
//!
//! Tables are generic over [`Count`]: `u128` is the fast path and fails loudly on
//! overflow, [`BigUint`] never overflows.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub trait Count: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_checked(&mut self, other: &Self) -> Result<()>;
    fn mul_small(&self, factor: usize) -> Result<Self>;
    fn mul_checked(&self, other: &Self) -> Result<Self>;
    fn to_biguint(&self) -> BigUint;
}

impl Count for u128 {
    #[inline]
    fn zero() -> Self {
        0
    }

    #[inline]
    fn one() -> Self {
        1
    }

    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0
    }

    #[inline]
    fn add_assign_checked(&mut self, other: &Self) -> Result<()> {
        *self = self.checked_add(*other).ok_or(Error::Overflow)?;
        Ok(())
    }

    #[inline]
    fn mul_small(&self, factor: usize) -> Result<Self> {
        self.checked_mul(factor as u128).ok_or(Error::Overflow)
    }

    #[inline]
    fn mul_checked(&self, other: &Self) -> Result<Self> {
        self.checked_mul(*other).ok_or(Error::Overflow)
    }

    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Count for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_assign_checked(&mut self, other: &Self) -> Result<()> {
        *self += other;
        Ok(())
    }

    fn mul_small(&self, factor: usize) -> Result<Self> {
        Ok(self * BigUint::from(factor))
    }

    fn mul_checked(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }

    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}

/// Natural logarithm of an exact count; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if Zero::is_zero(x) {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        let f: f64 = num_traits::ToPrimitive::to_f64(x).expect("fits in f64 below 2^1000");
        return f.ln();
    }
    let shift = bits - 64;
    let head: f64 = num_traits::ToPrimitive::to_f64(&(x >> shift)).expect("64-bit head");
    head.ln() + shift as f64 * std::f64::consts::LN_2
}
