//! Exact dense polynomials over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// A polynomial with integer coefficients, lowest degree first, with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    /// `(1 + X)^n`, truncated below `X^limit` when a limit is given.
    pub fn one_plus_x_pow(n: u64, limit: Option<usize>) -> Self {
        let top = limit.map_or(n as usize, |l| (n as usize).min(l.saturating_sub(1)));
        let mut coeffs = Vec::with_capacity(top + 1);
        let mut c = BigInt::one();
        for k in 0..=top as u64 {
            coeffs.push(c.clone());
            c = c * (n - k) / (k + 1);
        }
        IntPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn add(&self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &IntPoly) -> IntPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        self.mul_trunc(rhs, usize::MAX)
    }

    /// Product modulo `X^limit`.
    pub fn mul_trunc(&self, rhs: &IntPoly, limit: usize) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let len = (self.coeffs.len() + rhs.coeffs.len() - 1).min(limit);
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn truncate(&self, limit: usize) -> IntPoly {
        IntPoly::new(self.coeffs.iter().take(limit).cloned().collect())
    }

    /// Quotient and remainder by a polynomial with leading coefficient ±1.
    pub fn div_rem_monic(&self, modulus: &IntPoly) -> (IntPoly, IntPoly) {
        let m = modulus.degree().expect("division by the zero polynomial");
        let lead = &modulus.coeffs[m];
        assert!(lead.is_one() || (-lead).is_one(), "modulus must be monic up to sign");
        let mut rem = self.coeffs.clone();
        if rem.len() <= m {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - m];
        for k in (m..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] * lead;
            for (j, c) in modulus.coeffs.iter().enumerate() {
                rem[k - m + j] -= &q * c;
            }
            quot[k - m] = q;
        }
        rem.truncate(m);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// Exact quotient over Z, or `None` when `den` does not divide `self`.
    pub fn div_exact(&self, den: &IntPoly) -> Option<IntPoly> {
        let m = den.degree().expect("division by the zero polynomial");
        let lead = &den.coeffs[m];
        let mut rem = self.coeffs.clone();
        if rem.len() <= m {
            return self.is_zero().then(IntPoly::zero);
        }
        let mut quot = vec![BigInt::zero(); rem.len() - m];
        for k in (m..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let (q, r) = rem[k].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in den.coeffs.iter().enumerate() {
                rem[k - m + j] -= &q * c;
            }
            quot[k - m] = q;
        }
        rem.iter().all(|c| c.is_zero()).then(|| IntPoly::new(quot))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_expansion() {
        assert_eq!(IntPoly::one_plus_x_pow(3, None), IntPoly::from_i64s(&[1, 3, 3, 1]));
        assert_eq!(IntPoly::one_plus_x_pow(9, Some(3)), IntPoly::from_i64s(&[1, 9, 36]));
    }

    #[test]
    fn exact_division() {
        let num = IntPoly::from_i64s(&[3, 6, 4, 1]);
        let den = IntPoly::from_i64s(&[3, 3, 1]);
        assert_eq!(num.div_exact(&den), Some(IntPoly::from_i64s(&[1, 1])));
        assert_eq!(IntPoly::from_i64s(&[1, 0, 1]).div_exact(&IntPoly::from_i64s(&[0, 2])), None);
    }

    #[test]
    fn remainder_by_monic() {
        // X³ mod X² + 3X + 3 = 6X + 9
        let (q, r) = IntPoly::from_i64s(&[0, 0, 0, 1]).div_rem_monic(&IntPoly::from_i64s(&[3, 3, 1]));
        assert_eq!(r, IntPoly::from_i64s(&[9, 6]));
        assert_eq!(q, IntPoly::from_i64s(&[-3, 1]));
    }

    #[test]
    fn truncated_product() {
        let a = IntPoly::from_i64s(&[1, 1]);
        let b = IntPoly::from_i64s(&[1, -1]);
        assert_eq!(a.mul_trunc(&b, 3), IntPoly::from_i64s(&[1, 0, -1]));
        assert_eq!(a.mul_trunc(&b, 2), IntPoly::from_i64s(&[1]));
    }
}
