//! The coefficient-ring interface shared by every series and matrix type.

use std::fmt;

use num_bigint::BigInt;

use crate::error::Result;
use crate::valuation::Valuation;

/// An element of a commutative ring with p-adic precision tracking.
///
/// Every element knows its ring (`Self::Ring`), so series and matrices can
/// create zeros and integer constants without a separate context argument.
/// Arithmetic between elements of different rings is a logic error and
/// panics; fallible entry points check ring equality up front.
pub trait Coefficient: Clone + fmt::Debug + Send + Sync + 'static {
    type Ring: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn ring(&self) -> Self::Ring;

    /// The exact zero.
    fn zero(ring: &Self::Ring) -> Self;

    fn from_int(ring: &Self::Ring, n: &BigInt) -> Self;

    fn one(ring: &Self::Ring) -> Self {
        Self::from_int(ring, &BigInt::from(1))
    }

    fn from_i64(ring: &Self::Ring, n: i64) -> Self {
        Self::from_int(ring, &BigInt::from(n))
    }

    fn add(&self, rhs: &Self) -> Self;

    fn neg(&self) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self;

    fn mul_int(&self, n: &BigInt) -> Self {
        self.mul(&Self::from_int(&self.ring(), n))
    }

    /// Multiplicative inverse of a unit.
    fn inv(&self) -> Result<Self>;

    /// Valuation in half-digits; `Infinite` when zero at the tracked precision.
    fn valuation(&self) -> Valuation;

    /// Absolute precision in half-digits; `Infinite` for exact values.
    fn precision(&self) -> Valuation;

    fn is_zero(&self) -> bool {
        self.valuation() == Valuation::Infinite
    }

    /// How closely this element is known to vanish: its valuation when it is
    /// distinguishable from zero, its precision otherwise.
    fn residual(&self) -> Valuation {
        if self.is_zero() {
            self.precision()
        } else {
            self.valuation()
        }
    }
}

/// Residual of `a - b`, see [`Coefficient::residual`].
pub fn residual_between<C: Coefficient>(a: &C, b: &C) -> Valuation {
    a.sub(b).residual()
}
