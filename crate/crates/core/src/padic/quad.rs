use std::fmt;

use num_bigint::BigInt;

use super::{FormParams, Padic};
use crate::error::{Error, Result};
use crate::ring::Coefficient;
use crate::valuation::Valuation;

/// `a + bθ` in `E = Q_p[θ]/(θ² - a_p θ + ε p)`.
#[derive(Clone, Debug)]
pub struct QuadExtElem {
    params: FormParams,
    a: Padic,
    b: Padic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Root {
    Alpha,
    Beta,
}

impl QuadExtElem {
    pub fn new(params: FormParams, a: Padic, b: Padic) -> Result<Self> {
        if a.ring() != params.base_ring() || b.ring() != params.base_ring() {
            return Err(Error::RingMismatch);
        }
        Ok(QuadExtElem { params, a, b })
    }

    pub fn from_base(params: FormParams, a: Padic) -> Self {
        assert_eq!(a.ring(), params.base_ring(), "coordinate outside Q_p");
        QuadExtElem { params, a, b: Padic::zero(&params.base_ring()) }
    }

    pub fn theta(params: FormParams) -> Self {
        let ring = params.base_ring();
        QuadExtElem { params, a: Padic::zero(&ring), b: Padic::one(&ring) }
    }

    pub fn from_i64_pair(params: FormParams, a: i64, b: i64) -> Self {
        let ring = params.base_ring();
        QuadExtElem { params, a: Padic::from_i64(&ring, a), b: Padic::from_i64(&ring, b) }
    }

    pub fn params(&self) -> FormParams {
        self.params
    }

    pub fn a(&self) -> &Padic {
        &self.a
    }

    pub fn b(&self) -> &Padic {
        &self.b
    }

    /// The nontrivial automorphism, swapping α and β.
    pub fn conj(&self) -> Self {
        let ring = self.params.base_ring();
        let a_p = Padic::from_i64(&ring, self.params.a_p());
        QuadExtElem { params: self.params, a: self.a.add(&a_p.mul(&self.b)), b: self.b.neg() }
    }

    /// `x · conj(x) = a² + a_p ab + ε p b²`.
    pub fn norm(&self) -> Padic {
        let ring = self.params.base_ring();
        let a_p = Padic::from_i64(&ring, self.params.a_p());
        let ep = Padic::from_i64(&ring, self.params.root_product());
        let ab = self.a.mul(&self.b);
        self.a.mul(&self.a).add(&a_p.mul(&ab)).add(&ep.mul(&self.b.mul(&self.b)))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.params != rhs.params {
            return Err(Error::RingMismatch);
        }
        Ok(self.mul(rhs))
    }

    pub fn scale(&self, c: &Padic) -> Self {
        QuadExtElem { params: self.params, a: self.a.mul(c), b: self.b.mul(c) }
    }

    /// Whether `self - other` vanishes at the tracked precision.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Relative precision in half-digits, or `None` when zero at precision.
    pub fn relative_precision(&self) -> Option<i64> {
        match (self.valuation(), self.precision()) {
            (Valuation::Finite(v), Valuation::Finite(p)) => Some(p - v),
            (Valuation::Finite(_), Valuation::Infinite) => Some(i64::MAX),
            (Valuation::Infinite, _) => None,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = QuadExtElem::one(&self.params);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

/// `α^k` or `β^k` for any integer `k`.
pub fn root_power(params: FormParams, which: Root, k: i64) -> Result<QuadExtElem> {
    hecke_root_power(&params, which, k)
}

/// Rings containing the roots of the Hecke polynomial.
pub trait HeckeRing: Coefficient<Ring = FormParams> {
    /// The class of `θ`, identified with `α`.
    fn theta(params: &FormParams) -> Self;
}

impl HeckeRing for QuadExtElem {
    fn theta(params: &FormParams) -> Self {
        QuadExtElem::theta(*params)
    }
}

pub fn hecke_root<C: HeckeRing>(params: &FormParams, which: Root) -> C {
    match which {
        Root::Alpha => C::theta(params),
        Root::Beta => C::from_i64(params, params.a_p()).sub(&C::theta(params)),
    }
}

/// Generic `α^k` / `β^k` by square-and-multiply; negative powers go through
/// a single inversion of the root.
pub fn hecke_root_power<C: HeckeRing>(params: &FormParams, which: Root, k: i64) -> Result<C> {
    let root: C = hecke_root(params, which);
    let mut base = if k >= 0 { root } else { root.inv()? };
    let mut result = C::one(params);
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    let significant = match (result.valuation(), result.precision()) {
        (Valuation::Finite(v), Valuation::Finite(p)) => p - v >= 2,
        (Valuation::Finite(_), Valuation::Infinite) => true,
        (Valuation::Infinite, _) => false,
    };
    if !significant {
        return Err(Error::PrecisionExhausted(format!(
            "{which:?}^{k} has fewer than one significant digit at precision {}",
            params.precision()
        )));
    }
    Ok(result)
}

impl Coefficient for QuadExtElem {
    type Ring = FormParams;

    fn ring(&self) -> FormParams {
        self.params
    }

    fn zero(params: &FormParams) -> Self {
        let ring = params.base_ring();
        QuadExtElem { params: *params, a: Padic::zero(&ring), b: Padic::zero(&ring) }
    }

    fn from_int(params: &FormParams, n: &BigInt) -> Self {
        QuadExtElem::from_base(*params, Padic::from_int(&params.base_ring(), n))
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.params, rhs.params, "mixed quadratic extensions");
        QuadExtElem { params: self.params, a: self.a.add(&rhs.a), b: self.b.add(&rhs.b) }
    }

    fn neg(&self) -> Self {
        QuadExtElem { params: self.params, a: self.a.neg(), b: self.b.neg() }
    }

    fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.params, rhs.params, "mixed quadratic extensions");
        QuadExtElem { params: self.params, a: self.a.sub(&rhs.a), b: self.b.sub(&rhs.b) }
    }

    // (a + bθ)(c + dθ) = (ac - εp·bd) + (ad + bc + a_p·bd)θ
    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.params, rhs.params, "mixed quadratic extensions");
        let bd = self.b.mul(&rhs.b);
        let a = self.a.mul(&rhs.a).sub(&bd.mul_int(&BigInt::from(self.params.root_product())));
        let mut b = self.a.mul(&rhs.b).add(&self.b.mul(&rhs.a));
        if self.params.a_p() != 0 {
            b = b.add(&bd.mul_int(&BigInt::from(self.params.a_p())));
        }
        QuadExtElem { params: self.params, a, b }
    }

    fn mul_int(&self, n: &BigInt) -> Self {
        let c = Padic::from_int(&self.params.base_ring(), n);
        self.scale(&c)
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero { precision: self.precision() });
        }
        let norm_inv = self.norm().inv()?;
        Ok(self.conj().scale(&norm_inv))
    }

    /// `min(v(a), v(b) + 1/2)`; the candidates never tie.
    fn valuation(&self) -> Valuation {
        let v = self.a.valuation().min(self.b.valuation() + Valuation::from_twice(1));
        if v >= self.precision() {
            Valuation::Infinite
        } else {
            v
        }
    }

    fn precision(&self) -> Valuation {
        self.a.precision().min(self.b.precision() + Valuation::from_twice(1))
    }
}

impl fmt::Display for QuadExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*θ", self.a, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> FormParams {
        FormParams::new(3, 3, 1).unwrap()
    }

    #[test]
    fn vieta_product_and_sum() {
        let pr = params();
        let prod = pr.alpha().mul(&pr.beta());
        assert!(prod.approx_eq(&QuadExtElem::from_i64(&pr, 3)));
        let sum = pr.alpha().add(&pr.beta());
        assert!(sum.approx_eq(&QuadExtElem::from_i64(&pr, 3)));
    }

    #[test]
    fn defining_relation() {
        let pr = params();
        let t = pr.alpha();
        assert!(t.mul(&t).approx_eq(&QuadExtElem::from_i64_pair(pr, -3, 3)));
    }

    #[test]
    fn identity_and_conjugation() {
        let pr = params();
        let x = QuadExtElem::from_i64_pair(pr, 1, 1);
        assert!(x.mul(&QuadExtElem::one(&pr)).approx_eq(&x));
        assert!(pr.alpha().conj().approx_eq(&QuadExtElem::from_i64_pair(pr, 3, -1)));
        assert!(x.conj().conj().approx_eq(&x));
        let five = QuadExtElem::from_i64(&pr, 5);
        assert!(five.conj().approx_eq(&five));
    }

    #[test]
    fn inverses() {
        let pr = params();
        let inv_theta = pr.alpha().inv().unwrap();
        // (a_p - θ)/(εp) = (3 - θ)/3 = 1 - θ/3
        let ring = pr.base_ring();
        let expected = QuadExtElem::new(
            pr,
            Padic::from_i64(&ring, 1),
            Padic::from_rational(ring, &BigInt::from(-1), &BigInt::from(3)).unwrap(),
        )
        .unwrap();
        assert!(inv_theta.approx_eq(&expected));
        assert!(QuadExtElem::one(&pr).inv().unwrap().approx_eq(&QuadExtElem::one(&pr)));
        let z = QuadExtElem::zero(&pr);
        assert!(matches!(z.inv(), Err(Error::DivisionByZero { .. })));
    }

    #[test]
    fn valuations() {
        let pr = params();
        assert_eq!(pr.alpha().valuation(), Valuation::from_twice(1));
        assert_eq!(QuadExtElem::from_i64(&pr, 3).valuation(), Valuation::digits(1));
        assert_eq!(QuadExtElem::from_i64_pair(pr, 1, 1).valuation(), Valuation::ZERO);
        assert_eq!(QuadExtElem::zero(&pr).valuation(), Valuation::Infinite);
    }

    #[test]
    fn root_powers() {
        let pr = params();
        assert!(root_power(pr, Root::Alpha, 1).unwrap().approx_eq(&pr.alpha()));
        assert!(root_power(pr, Root::Alpha, 2)
            .unwrap()
            .approx_eq(&QuadExtElem::from_i64_pair(pr, -3, 3)));
        let neg2 = root_power(pr, Root::Alpha, -2).unwrap();
        assert_eq!(neg2.valuation(), Valuation::from_twice(-2));
    }

    #[test]
    fn mismatched_params_are_rejected() {
        let other = FormParams::new(5, 0, 1).unwrap();
        assert_eq!(params().alpha().checked_mul(&other.alpha()).unwrap_err(), Error::RingMismatch);
    }
}
