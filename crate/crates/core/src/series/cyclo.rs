//! Cyclotomic polynomials `Φ_{p^m}(1 + X)` and the quotient rings
//! `R_m = C[X]/Φ_{p^m}(1 + X)` in which a series is evaluated at a character
//! sending `γ` to a primitive `p^m`-th root of unity.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::Series1;
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::ring::Coefficient;
use crate::valuation::Valuation;

/// `φ(p^m) = p^(m-1)(p - 1)`.
pub fn euler_phi_prime_power(p: u32, m: u32) -> usize {
    assert!(m >= 1);
    (p as usize).pow(m - 1) * (p as usize - 1)
}

/// `Φ_{p^m}(1 + X)` as the exact quotient `((1+X)^{p^m} - 1)/((1+X)^{p^(m-1)} - 1)`.
pub fn cyclotomic_poly(p: u32, m: u32) -> Result<IntPoly> {
    if m < 1 {
        return Err(Error::InvalidLevel(m));
    }
    let big = IntPoly::one_plus_x_pow((p as u64).pow(m), None).sub(&IntPoly::one());
    let small = IntPoly::one_plus_x_pow((p as u64).pow(m - 1), None).sub(&IntPoly::one());
    Ok(big.div_exact(&small).expect("x^(p^(m-1)) - 1 divides x^(p^m) - 1"))
}

/// `Φ_{p^m}(1 + X) mod X^limit`, via `Σ_{j<p} (1+X)^{j p^(m-1)}`.
pub fn cyclotomic_poly_truncated(p: u32, m: u32, limit: usize) -> Result<IntPoly> {
    if m < 1 {
        return Err(Error::InvalidLevel(m));
    }
    let step = (p as u64).pow(m - 1);
    Ok((0..p as u64).fold(IntPoly::zero(), |acc, j| acc.add(&IntPoly::one_plus_x_pow(j * step, Some(limit)))))
}

/// `Π_{k=1..n} Φ_{p^k}(1 + X) = ((1+X)^{p^n} - 1)/X`.
pub fn cyclotomic_product(p: u32, n: u32) -> IntPoly {
    let full = IntPoly::one_plus_x_pow((p as u64).pow(n), None);
    IntPoly::new(full.coeffs()[1..].to_vec())
}

struct CycloCtx<C: Coefficient> {
    base: C::Ring,
    p: u32,
    level: u32,
    modulus: IntPoly,
    /// Non-leading coefficients of the modulus, lifted into the base ring.
    lifted: Vec<C>,
}

/// The ring `R_m ⊗ C = C[X]/Φ_{p^m}(1 + X)`.
pub struct CycloRing<C: Coefficient>(Arc<CycloCtx<C>>);

impl<C: Coefficient> Clone for CycloRing<C> {
    fn clone(&self) -> Self {
        CycloRing(Arc::clone(&self.0))
    }
}

impl<C: Coefficient> PartialEq for CycloRing<C> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.level == other.0.level && self.0.base == other.0.base)
    }
}

impl<C: Coefficient> fmt::Debug for CycloRing<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CycloRing")
            .field("p", &self.0.p)
            .field("level", &self.0.level)
            .field("base", &self.0.base)
            .finish()
    }
}

impl<C: Coefficient> CycloRing<C> {
    pub fn new(base: C::Ring, p: u32, level: u32) -> Result<Self> {
        let modulus = cyclotomic_poly(p, level)?;
        let phi = modulus.degree().unwrap();
        let lifted = modulus.coeffs()[..phi].iter().map(|c| C::from_int(&base, c)).collect();
        Ok(CycloRing(Arc::new(CycloCtx { base, p, level, modulus, lifted })))
    }

    pub fn base(&self) -> &C::Ring {
        &self.0.base
    }

    pub fn prime(&self) -> u32 {
        self.0.p
    }

    pub fn level(&self) -> u32 {
        self.0.level
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.0.modulus
    }

    /// Dimension of the ring over the base, `φ(p^m)`.
    pub fn phi(&self) -> usize {
        self.0.lifted.len()
    }

    /// Remainder of `Σ c_k X^k` modulo the cyclotomic polynomial.
    fn reduce(&self, mut coeffs: Vec<C>) -> Vec<C> {
        let phi = self.phi();
        super::one::rem_monic_lifted(&mut coeffs, &self.0.lifted);
        coeffs.truncate(phi);
        coeffs.resize(phi, C::zero(&self.0.base));
        coeffs
    }

    /// The class of `X`, i.e. `ω(γ) - 1`.
    pub fn generator(&self) -> Cyclo<C> {
        let mut coeffs = vec![C::zero(&self.0.base); self.phi()];
        if self.phi() > 1 {
            coeffs[1] = C::one(&self.0.base);
            Cyclo { ring: self.clone(), coeffs }
        } else {
            Cyclo { ring: self.clone(), coeffs: self.reduce(vec![C::zero(&self.0.base), C::one(&self.0.base)]) }
        }
    }
}

/// An element of `R_m ⊗ C` in the basis `1, X, …, X^(φ-1)`.
#[derive(Clone, Debug)]
pub struct Cyclo<C: Coefficient> {
    ring: CycloRing<C>,
    coeffs: Vec<C>,
}

impl<C: Coefficient> Cyclo<C> {
    pub fn from_poly(ring: &CycloRing<C>, coeffs: Vec<C>) -> Self {
        Cyclo { ring: ring.clone(), coeffs: ring.reduce(coeffs) }
    }

    pub fn constant(ring: &CycloRing<C>, c: C) -> Self {
        Cyclo::from_poly(ring, vec![c])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn level(&self) -> u32 {
        self.ring.level()
    }

    pub fn scale(&self, c: &C) -> Self {
        Cyclo { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    /// Solves `self · y = 1` by Gaussian elimination on the multiplication
    /// matrix, pivoting on the least valuation.
    fn solve_inverse(&self) -> Result<Self> {
        let n = self.ring.phi();
        let base = self.ring.base().clone();
        // columns[i] = self · X^i
        let mut rows: Vec<Vec<C>> = vec![Vec::with_capacity(n + 1); n];
        let mut column = self.coeffs.clone();
        for i in 0..n {
            if i > 0 {
                let mut shifted = vec![C::zero(&base)];
                shifted.extend(column.iter().cloned());
                column = self.ring.reduce(shifted);
            }
            for (r, row) in rows.iter_mut().enumerate() {
                row.push(column[r].clone());
            }
        }
        for (r, row) in rows.iter_mut().enumerate() {
            row.push(if r == 0 { C::one(&base) } else { C::zero(&base) });
        }
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !rows[r][col].is_zero())
                .min_by_key(|&r| rows[r][col].valuation())
                .ok_or_else(|| Error::NotInvertible("element of the cyclotomic ring is a zero divisor".into()))?;
            rows.swap(col, pivot);
            let inv = rows[col][col].inv()?;
            let pivot_row: Vec<C> = rows[col].iter().map(|x| x.mul(&inv)).collect();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == col {
                    continue;
                }
                let factor = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub(&factor.mul(y));
                }
            }
            rows[col] = pivot_row;
        }
        Ok(Cyclo { ring: self.ring.clone(), coeffs: rows.into_iter().map(|mut r| r.pop().unwrap()).collect() })
    }
}

impl<C: Coefficient> Coefficient for Cyclo<C> {
    type Ring = CycloRing<C>;

    fn ring(&self) -> CycloRing<C> {
        self.ring.clone()
    }

    fn zero(ring: &CycloRing<C>) -> Self {
        Cyclo { ring: ring.clone(), coeffs: vec![C::zero(ring.base()); ring.phi()] }
    }

    fn from_int(ring: &CycloRing<C>, n: &BigInt) -> Self {
        Cyclo::constant(ring, C::from_int(ring.base(), n))
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.ring, rhs.ring, "mixed cyclotomic rings");
        Cyclo { ring: self.ring.clone(), coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    fn neg(&self) -> Self {
        Cyclo { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(C::neg).collect() }
    }

    fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.ring, rhs.ring, "mixed cyclotomic rings");
        Cyclo { ring: self.ring.clone(), coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ring, rhs.ring, "mixed cyclotomic rings");
        let n = self.coeffs.len();
        let mut out = vec![C::zero(self.ring.base()); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Cyclo { ring: self.ring.clone(), coeffs: self.ring.reduce(out) }
    }

    fn mul_int(&self, n: &BigInt) -> Self {
        if n.is_one() {
            return self.clone();
        }
        Cyclo { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| c.mul_int(n)).collect() }
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero { precision: self.precision() });
        }
        self.solve_inverse()
    }

    /// Least coefficient valuation in the basis `1, X, …` (a Gauss norm; not
    /// multiplicative, but zero exactly when the element is).
    fn valuation(&self) -> Valuation {
        self.coeffs.iter().map(C::valuation).min().unwrap_or(Valuation::Infinite)
    }

    fn precision(&self) -> Valuation {
        self.coeffs.iter().map(C::precision).min().unwrap_or(Valuation::Infinite)
    }
}

impl<C: Coefficient> Series1<C> {
    /// Evaluation at a character of level `m`: the remainder modulo
    /// `Φ_{p^m}(1 + X)` of the truncated polynomial.
    pub fn reduce_mod_cyclo(&self, ring: &CycloRing<C>) -> Result<Cyclo<C>> {
        if ring.base() != self.ring() {
            return Err(Error::RingMismatch);
        }
        Ok(Cyclo::from_poly(ring, self.coeffs().to_vec()))
    }
}

/// Growth hypothesis `v(c_n) ≥ -(u·log_p n + c)` for the discarded tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthClass {
    pub u: f64,
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    /// Lower bound for the valuation of the discarded tail at the character.
    pub valuation: f64,
    /// The bound carries no information (it is not positive).
    pub vacuous: bool,
}

#[derive(Clone, Debug)]
pub struct CycloValue<C: Coefficient> {
    pub value: Cyclo<C>,
    pub tail: Option<TailBound>,
}

/// Valuation bound for `Σ_{k≥deg} c_k (ζ - 1)^k` when `ζ` has order `p^m`
/// and the coefficients satisfy `growth`: the minimum over `k ≥ deg` of
/// `k/φ(p^m) - u·log_p k - c`.
pub fn tail_bound(p: u32, m: u32, deg: usize, growth: GrowthClass) -> TailBound {
    let phi = euler_phi_prime_power(p, m) as f64;
    let lnp = (p as f64).ln();
    let turning = growth.u * phi / lnp;
    let k = (deg.max(1) as f64).max(turning);
    let valuation = k / phi - growth.u * k.ln() / lnp - growth.c;
    TailBound { valuation, vacuous: valuation <= 0.0 }
}

/// [`Series1::reduce_mod_cyclo`] together with a bound on what the
/// truncation discarded, under a caller-supplied growth class.
pub fn reduce_with_tail<C: Coefficient>(
    s: &Series1<C>,
    ring: &CycloRing<C>,
    growth: Option<GrowthClass>,
) -> Result<CycloValue<C>> {
    let value = s.reduce_mod_cyclo(ring)?;
    let tail = growth.map(|g| tail_bound(ring.prime(), ring.level(), s.deg(), g));
    Ok(CycloValue { value, tail })
}
