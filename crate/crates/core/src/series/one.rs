use num_bigint::BigInt;

use super::Var;
use crate::error::{Error, Result};
use crate::padic::{Padic, PadicRing};
use crate::poly::IntPoly;
use crate::ring::Coefficient;
use crate::valuation::Valuation;

/// `Σ c_n var^n` for `n < deg`.
#[derive(Clone, Debug)]
pub struct Series1<C: Coefficient> {
    var: Var,
    ring: C::Ring,
    coeffs: Vec<C>,
}

/// Result of [`Series1::divide`].
#[derive(Clone, Debug)]
pub struct Quotient<C: Coefficient> {
    pub series: Series1<C>,
    /// Digits (in halves) lost relative to the least precise input coefficient,
    /// after accounting for the valuation of the divisor's constant term.
    pub loss: i64,
}

impl<C: Coefficient> Series1<C> {
    pub fn new(var: Var, ring: C::Ring, coeffs: Vec<C>) -> Self {
        Series1 { var, ring, coeffs }
    }

    pub fn zero(var: Var, ring: &C::Ring, deg: usize) -> Self {
        Series1 { var, ring: ring.clone(), coeffs: vec![C::zero(ring); deg] }
    }

    pub fn constant(var: Var, c: C, deg: usize) -> Self {
        let ring = c.ring();
        let mut coeffs = vec![C::zero(&ring); deg];
        if deg > 0 {
            coeffs[0] = c;
        }
        Series1 { var, ring, coeffs }
    }

    pub fn one(var: Var, ring: &C::Ring, deg: usize) -> Self {
        Series1::constant(var, C::one(ring), deg)
    }

    pub fn from_ints(var: Var, ring: &C::Ring, coeffs: &[i64]) -> Self {
        Series1 { var, ring: ring.clone(), coeffs: coeffs.iter().map(|&c| C::from_i64(ring, c)).collect() }
    }

    pub fn from_int_poly(var: Var, ring: &C::Ring, poly: &IntPoly, deg: usize) -> Self {
        let coeffs = (0..deg)
            .map(|i| match poly.coeffs().get(i) {
                Some(c) => C::from_int(ring, c),
                None => C::zero(ring),
            })
            .collect();
        Series1 { var, ring: ring.clone(), coeffs }
    }

    pub fn from_fn(var: Var, ring: &C::Ring, deg: usize, f: impl FnMut(usize) -> C) -> Self {
        Series1 { var, ring: ring.clone(), coeffs: (0..deg).map(f).collect() }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &C {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, c: C) {
        self.coeffs[i] = c;
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn check_compatible(&self, rhs: &Self) -> Result<()> {
        if self.var != rhs.var {
            return Err(Error::VariableMismatch { expected: self.var.to_string(), found: rhs.var.to_string() });
        }
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn truncate(&self, deg: usize) -> Self {
        Series1 { var: self.var, ring: self.ring.clone(), coeffs: self.coeffs.iter().take(deg).cloned().collect() }
    }

    pub fn map<D: Coefficient>(&self, ring: D::Ring, f: impl FnMut(&C) -> D) -> Series1<D> {
        Series1 { var: self.var, ring, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        Ok(self.zip(rhs, |a, b| a.add(b)))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        Ok(self.zip(rhs, |a, b| a.sub(b)))
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| f(a, b)).collect();
        Series1 { var: self.var, ring: self.ring.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        Series1 { var: self.var, ring: self.ring.clone(), coeffs: self.coeffs.iter().map(C::neg).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series1 { var: self.var, ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    /// Cauchy product truncated to the smaller of the two degrees.
    pub fn mul_trunc(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let d = self.deg().min(rhs.deg());
        let mut out = vec![C::zero(&self.ring); d];
        for (i, a) in self.coeffs.iter().enumerate().take(d) {
            for (j, b) in rhs.coeffs.iter().enumerate().take(d - i) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Ok(Series1 { var: self.var, ring: self.ring.clone(), coeffs: out })
    }

    /// Formal derivative; the degree drops by one.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_int(&BigInt::from(k)))
            .collect();
        Series1 { var: self.var, ring: self.ring.clone(), coeffs }
    }

    /// Power-series quotient `self / den`, to the smaller of the two degrees.
    pub fn divide(&self, den: &Self) -> Result<Quotient<C>> {
        self.check_compatible(den)?;
        let d = self.deg().min(den.deg());
        if d == 0 {
            return Ok(Quotient { series: self.truncate(0), loss: 0 });
        }
        let lead = &den.coeffs[0];
        let lead_inv = lead.inv().map_err(|e| match e {
            Error::DivisionByZero { precision } => {
                Error::NotInvertible(format!("constant term of the divisor is O(p^{precision})"))
            }
            other => other,
        })?;
        let mut q: Vec<C> = Vec::with_capacity(d);
        for k in 0..d {
            let mut acc = self.coeffs[k].clone();
            for (i, qi) in q.iter().enumerate() {
                acc = acc.sub(&qi.mul(&den.coeffs[k - i]));
            }
            q.push(acc.mul(&lead_inv));
        }
        let reference = self.coeffs[..d]
            .iter()
            .chain(&den.coeffs[..d])
            .map(C::precision)
            .min()
            .unwrap_or(Valuation::Infinite);
        let achieved = q.iter().map(C::precision).min().unwrap_or(Valuation::Infinite);
        let loss = match (reference, achieved, lead.valuation()) {
            (Valuation::Finite(r), Valuation::Finite(a), Valuation::Finite(v)) => (r - v - a).max(0),
            _ => 0,
        };
        Ok(Quotient { series: Series1 { var: self.var, ring: self.ring.clone(), coeffs: q }, loss })
    }

    /// Remainder modulo a monic integer polynomial, as a coefficient vector of
    /// length `deg(modulus)`. Only integer multiples are subtracted, so no
    /// precision is lost beyond that of the inputs.
    pub fn rem_monic(&self, modulus: &IntPoly) -> Vec<C> {
        rem_monic(self.coeffs.clone(), modulus, &self.ring)
    }

    /// Least absolute precision among the coefficients.
    pub fn precision(&self) -> Valuation {
        self.coeffs.iter().map(C::precision).min().unwrap_or(Valuation::Infinite)
    }

    /// Least valuation among the coefficients.
    pub fn valuation(&self) -> Valuation {
        self.coeffs.iter().map(C::valuation).min().unwrap_or(Valuation::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    /// How closely `self` and `rhs` agree on their common degree: the least
    /// per-coefficient residual of the difference.
    pub fn residual_against(&self, rhs: &Self) -> Result<Valuation> {
        Ok(self.sub(rhs)?.coeffs.iter().map(C::residual).min().unwrap_or(Valuation::Infinite))
    }
}

pub(crate) fn rem_monic<C: Coefficient>(mut coeffs: Vec<C>, modulus: &IntPoly, ring: &C::Ring) -> Vec<C> {
    let m = modulus.degree().expect("nonzero modulus");
    assert!(modulus.coeffs()[m] == BigInt::from(1), "modulus must be monic");
    let lifted: Vec<C> = modulus.coeffs()[..m].iter().map(|c| C::from_int(ring, c)).collect();
    rem_monic_lifted(&mut coeffs, &lifted);
    coeffs.truncate(m);
    coeffs.resize(m, C::zero(ring));
    coeffs
}

/// In-place reduction by `X^m + Σ_{j<m} lifted[j] X^j`; entries at and above
/// `m` are left stale.
pub(crate) fn rem_monic_lifted<C: Coefficient>(coeffs: &mut [C], lifted: &[C]) {
    let m = lifted.len();
    for k in (m..coeffs.len()).rev() {
        let top = coeffs[k].clone();
        if top.is_zero() && !top.precision().is_finite() {
            continue;
        }
        for (j, c) in lifted.iter().enumerate() {
            coeffs[k - m + j] = coeffs[k - m + j].sub(&top.mul(c));
        }
    }
}

/// Coefficients of `log(1 + X)/X = Σ (-1)^n X^n/(n+1)` below degree `deg`.
pub fn log1p_over_x(ring: PadicRing, deg: usize) -> Series1<Padic> {
    Series1::from_fn(Var::X, &ring, deg, |n| {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        Padic::from_rational(ring, &BigInt::from(sign), &BigInt::from(n + 1)).expect("n + 1 is nonzero")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PadicRing {
        PadicRing::new(3, 20)
    }

    fn s(coeffs: &[i64]) -> Series1<Padic> {
        Series1::from_ints(Var::X, &ring(), coeffs)
    }

    fn assert_close(a: &Series1<Padic>, b: &Series1<Padic>) {
        assert_eq!(a.deg(), b.deg());
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!(x.approx_eq(y), "{x} != {y}");
        }
    }

    #[test]
    fn truncated_products() {
        assert_close(&s(&[1, 1, 0]).mul_trunc(&s(&[1, -1, 0])).unwrap(), &s(&[1, 0, -1]));
        assert_close(&s(&[3, 3, 1, 0, 0]).mul_trunc(&s(&[1, 1, 0, 0, 0])).unwrap(), &s(&[3, 6, 4, 1, 0]));
        assert_close(&s(&[2, 5, 7]).mul_trunc(&s(&[1, 0, 0])).unwrap(), &s(&[2, 5, 7]));
        assert_eq!(s(&[1, 2, 3]).mul_trunc(&s(&[1, 2])).unwrap().deg(), 2);
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        let y = s(&[1, 1]).with_var(Var::Y);
        assert!(matches!(s(&[1, 1]).mul_trunc(&y), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn division() {
        let q = s(&[3, 6, 4, 1]).divide(&s(&[3, 3, 1, 0])).unwrap();
        assert_close(&q.series, &s(&[1, 1, 0, 0]));
        let num = s(&[1, 4, 9]);
        assert_close(&num.divide(&s(&[1, 0, 0])).unwrap().series, &num);
        assert_close(&num.divide(&num).unwrap().series, &s(&[1, 0, 0]));
        assert!(matches!(num.divide(&s(&[0, 1, 0])), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn derivative_drops_degree() {
        assert_close(&s(&[5, 1, 1, 2]).derivative(), &s(&[1, 2, 6]));
        assert_eq!(s(&[5]).derivative().deg(), 0);
    }

    #[test]
    fn log_coefficients() {
        let l = log1p_over_x(ring(), 30);
        assert!(l.coeff(0).approx_eq(&Padic::from_i64(&ring(), 1)));
        let minus_half = Padic::from_rational(ring(), &BigInt::from(-1), &BigInt::from(2)).unwrap();
        assert!(l.coeff(1).approx_eq(&minus_half));
        assert_eq!(l.coeff(2).int_valuation(), Some(-1));
        assert_eq!(l.coeff(26).int_valuation(), Some(-3));
    }
}
