//! Exact capped-precision arithmetic in Q_p and in the ramified quadratic
//! extension `E = Q_p[θ]/(θ² - a_p θ + ε p)` cut out by the Hecke polynomial.

mod qp;
mod quad;

pub use qp::{Padic, PadicRing};
pub(crate) use qp::split_valuation;
pub use quad::{hecke_root, hecke_root_power, root_power, HeckeRing, QuadExtElem, Root};

use crate::error::{Error, Result};
use crate::valuation::Valuation;

pub const DEFAULT_PRECISION: u32 = 60;

/// The arithmetic datum `(p, a_p, ε(p))` of a weight-2 form that is
/// non-ordinary at `p`, plus the working relative precision.
///
/// The roots of `X² - a_p X + ε(p) p` are represented as `α = θ` and
/// `β = a_p - θ`; since `p | a_p` both have valuation 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormParams {
    p: u32,
    a_p: i64,
    eps: i64,
    prec: u32,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl FormParams {
    pub fn new(p: u32, a_p: i64, eps: i64) -> Result<Self> {
        FormParams::with_precision(p, a_p, eps, DEFAULT_PRECISION)
    }

    pub fn with_precision(p: u32, a_p: i64, eps: i64, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if p == 2 {
            return Err(Error::InvalidParams("p = 2 is not supported".into()));
        }
        if a_p % p as i64 != 0 {
            return Err(Error::InvalidParams(format!(
                "a_p = {a_p} is a unit at p = {p}: the ordinary case is not supported"
            )));
        }
        if eps % p as i64 == 0 {
            return Err(Error::InvalidParams(format!("eps = {eps} is not coprime to p = {p}")));
        }
        if prec == 0 {
            return Err(Error::InvalidParams("precision must be at least one digit".into()));
        }
        Ok(FormParams { p, a_p, eps, prec })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn a_p(&self) -> i64 {
        self.a_p
    }

    pub fn eps(&self) -> i64 {
        self.eps
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn base_ring(&self) -> PadicRing {
        PadicRing::new(self.p, self.prec)
    }

    /// `ε(p)·p = αβ`.
    pub fn root_product(&self) -> i64 {
        self.eps * self.p as i64
    }

    /// Common valuation of α and β (both 1/2 in the supported case).
    pub fn root_valuation(&self) -> Valuation {
        Valuation::from_twice(1)
    }

    pub fn alpha(&self) -> QuadExtElem {
        QuadExtElem::theta(*self)
    }

    pub fn beta(&self) -> QuadExtElem {
        QuadExtElem::theta(*self).conj()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(FormParams::new(9, 0, 1).is_err());
        assert!(FormParams::new(2, 2, 1).is_err());
        assert!(FormParams::new(3, 1, 1).is_err());
        assert!(FormParams::new(5, 5, 10).is_err());
        assert!(FormParams::with_precision(5, 5, 1, 0).is_err());
        assert!(FormParams::new(7, -14, 2).is_ok());
        assert!(FormParams::new(3, 0, -1).is_ok());
    }
}
