//! Exact arithmetic in `Q(θ)` with `θ² = a_p θ - ε p`.
//!
//! Used as the zero-tolerance route for identities that are pure polynomial
//! algebra, and as an oracle for the precision-tracked types.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{split_valuation, FormParams, HeckeRing, Padic, QuadExtElem};
use crate::ring::Coefficient;
use crate::valuation::Valuation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalQuad {
    params: FormParams,
    a: BigRational,
    b: BigRational,
}

/// p-adic valuation of a rational, `None` for zero.
pub fn rational_valuation(x: &BigRational, p: u32) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (vn, _) = split_valuation(x.numer(), p);
    let (vd, _) = split_valuation(x.denom(), p);
    Some(vn - vd)
}

/// Converts an exact rational into Q_p at the ring's precision cap.
pub fn rational_to_padic(x: &BigRational, ring: crate::padic::PadicRing) -> Padic {
    if x.is_zero() {
        return Padic::zero(&ring);
    }
    Padic::from_rational(ring, x.numer(), x.denom()).expect("nonzero denominator")
}

impl RationalQuad {
    pub fn new(params: FormParams, a: BigRational, b: BigRational) -> Self {
        RationalQuad { params, a, b }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn conj(&self) -> Self {
        let a_p = BigRational::from_integer(BigInt::from(self.params.a_p()));
        RationalQuad { params: self.params, a: &self.a + &a_p * &self.b, b: -&self.b }
    }

    pub fn norm(&self) -> BigRational {
        let a_p = BigRational::from_integer(BigInt::from(self.params.a_p()));
        let ep = BigRational::from_integer(BigInt::from(self.params.root_product()));
        &self.a * &self.a + a_p * &self.a * &self.b + ep * &self.b * &self.b
    }

    pub fn to_padic(&self) -> QuadExtElem {
        let ring = self.params.base_ring();
        QuadExtElem::new(self.params, rational_to_padic(&self.a, ring), rational_to_padic(&self.b, ring))
            .expect("same base ring")
    }

    pub fn is_exact_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl HeckeRing for RationalQuad {
    fn theta(params: &FormParams) -> Self {
        RationalQuad { params: *params, a: BigRational::zero(), b: BigRational::from_integer(1.into()) }
    }
}

impl Coefficient for RationalQuad {
    type Ring = FormParams;

    fn ring(&self) -> FormParams {
        self.params
    }

    fn zero(params: &FormParams) -> Self {
        RationalQuad { params: *params, a: BigRational::zero(), b: BigRational::zero() }
    }

    fn from_int(params: &FormParams, n: &BigInt) -> Self {
        RationalQuad { params: *params, a: BigRational::from_integer(n.clone()), b: BigRational::zero() }
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.params, rhs.params);
        RationalQuad { params: self.params, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }

    fn neg(&self) -> Self {
        RationalQuad { params: self.params, a: -&self.a, b: -&self.b }
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.params, rhs.params);
        let bd = &self.b * &rhs.b;
        let ep = BigRational::from_integer(BigInt::from(self.params.root_product()));
        let a_p = BigRational::from_integer(BigInt::from(self.params.a_p()));
        RationalQuad {
            params: self.params,
            a: &self.a * &rhs.a - &ep * &bd,
            b: &self.a * &rhs.b + &self.b * &rhs.a + a_p * bd,
        }
    }

    fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero { precision: Valuation::Infinite });
        }
        let c = self.conj();
        Ok(RationalQuad { params: self.params, a: &c.a / &n, b: &c.b / &n })
    }

    fn valuation(&self) -> Valuation {
        let p = self.params.p();
        let va = rational_valuation(&self.a, p).map(|v| Valuation::from_twice(2 * v));
        let vb = rational_valuation(&self.b, p).map(|v| Valuation::from_twice(2 * v + 1));
        va.unwrap_or(Valuation::Infinite).min(vb.unwrap_or(Valuation::Infinite))
    }

    fn precision(&self) -> Valuation {
        Valuation::Infinite
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn inverse_of_theta_squared() {
        let pr = FormParams::new(3, 3, 1).unwrap();
        let t = RationalQuad::new(pr, q(0, 1), q(1, 1));
        let inv = t.mul(&t).inv().unwrap();
        assert_eq!(inv, RationalQuad::new(pr, q(2, 3), q(-1, 3)));
        assert_eq!(inv.mul(&t).mul(&t), RationalQuad::one(&pr));
    }

    #[test]
    fn valuations_follow_the_newton_polygon() {
        let pr = FormParams::new(5, 0, 1).unwrap();
        assert_eq!(RationalQuad::new(pr, q(0, 1), q(1, 1)).valuation(), Valuation::from_twice(1));
        assert_eq!(RationalQuad::new(pr, q(1, 25), q(1, 1)).valuation(), Valuation::digits(-2));
        assert_eq!(rational_valuation(&q(3, 50), 5), Some(-2));
        assert!(RationalQuad::one(&pr).sub(&RationalQuad::one(&pr)).is_exact_zero());
    }
}
