//! Truncated power series in one and two variables over any [`Coefficient`]
//! ring, together with the cyclotomic quotient rings used to evaluate them at
//! finite-order characters.
//!
//! [`Coefficient`]: crate::ring::Coefficient

mod cyclo;
mod one;
mod two;

use std::fmt;

pub use cyclo::{
    cyclotomic_poly, cyclotomic_poly_truncated, cyclotomic_product, euler_phi_prime_power, reduce_with_tail,
    tail_bound, Cyclo, CycloRing, CycloValue, GrowthClass, TailBound,
};
pub use one::{log1p_over_x, Quotient, Series1};
pub use two::Series2;

/// Variable tag: `X = γ_p - 1` on the p-side, `Y = γ_p̄ - 1` on the p̄-side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "X"),
            Var::Y => write!(f, "Y"),
        }
    }
}
