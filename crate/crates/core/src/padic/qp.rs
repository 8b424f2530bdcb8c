//! Capped-relative-precision elements of Q_p.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::Coefficient;
use crate::valuation::Valuation;

thread_local! {
    static POWERS: RefCell<HashMap<u32, Vec<BigInt>>> = RefCell::new(HashMap::new());
}

/// `p^k`, memoised per thread.
pub(crate) fn prime_power(p: u32, k: u32) -> BigInt {
    POWERS.with(|cell| {
        let mut table = cell.borrow_mut();
        let powers = table.entry(p).or_insert_with(|| vec![BigInt::one()]);
        while powers.len() <= k as usize {
            let next = powers.last().unwrap() * p;
            powers.push(next);
        }
        powers[k as usize].clone()
    })
}

/// p-adic valuation of a nonzero integer together with its p-free part.
pub(crate) fn split_valuation(n: &BigInt, p: u32) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut rest = n.clone();
    let big_p = BigInt::from(p);
    loop {
        let (q, r) = rest.div_rem(&big_p);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

/// The field Q_p with a relative precision cap, in digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicRing {
    p: u32,
    cap: u32,
}

impl PadicRing {
    /// `p` is trusted here; [`crate::FormParams`] validates primality.
    pub fn new(p: u32, cap: u32) -> Self {
        assert!(p >= 2 && cap >= 1, "bad p-adic ring ({p}, {cap})");
        PadicRing { p, cap }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }
}

#[derive(Clone, Debug)]
enum Repr {
    /// Zero known modulo `p^absprec`; `None` is the exact zero.
    Zero { absprec: Option<i64> },
    /// `p^val * unit`, with `unit` a p-adic unit known modulo `p^rel`.
    Unit { val: i64, unit: BigInt, rel: u32 },
}

/// An element of Q_p stored as `(valuation, unit mod p^rel)`.
#[derive(Clone, Debug)]
pub struct Padic {
    ring: PadicRing,
    repr: Repr,
}

impl Padic {
    pub fn zero_with_precision(ring: PadicRing, absprec: i64) -> Self {
        Padic { ring, repr: Repr::Zero { absprec: Some(absprec) } }
    }

    pub fn from_rational(ring: PadicRing, num: &BigInt, den: &BigInt) -> Result<Self> {
        Padic::from_int(&ring, num).try_div(&Padic::from_int(&ring, den))
    }

    /// Builds `p^val * unit + O(p^(val + rel))`; `unit` must be coprime to p.
    pub fn from_parts(ring: PadicRing, val: i64, unit: &BigInt, rel: u32) -> Result<Self> {
        if rel == 0 || rel > ring.cap {
            return Err(Error::InvalidParams(format!(
                "relative precision {rel} outside 1..={}",
                ring.cap
            )));
        }
        let modulus = prime_power(ring.p, rel);
        let unit = unit.mod_floor(&modulus);
        if (&unit % ring.p).is_zero() {
            return Err(Error::InvalidParams(format!("{unit} is not a unit mod {}", ring.p)));
        }
        Ok(Padic { ring, repr: Repr::Unit { val, unit, rel } })
    }

    /// Normalises the integer `n * p^val` known modulo `p^absprec`.
    fn normalize(ring: PadicRing, mut val: i64, n: BigInt, absprec: i64) -> Self {
        let rel = absprec - val;
        if rel <= 0 {
            return Padic::zero_with_precision(ring, absprec);
        }
        let rel = rel.min(ring.cap as i64) as u32;
        let mut n = n.mod_floor(&prime_power(ring.p, rel));
        if n.is_zero() {
            return Padic::zero_with_precision(ring, val + rel as i64);
        }
        let (shift, unit) = split_valuation(&n, ring.p);
        val += shift;
        n = unit;
        Padic { ring, repr: Repr::Unit { val, unit: n, rel: rel - shift as u32 } }
    }

    pub fn ring_params(&self) -> PadicRing {
        self.ring
    }

    pub fn prime(&self) -> u32 {
        self.ring.p
    }

    /// Ordinary integer valuation, `None` when zero at precision.
    pub fn int_valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Unit { val, .. } => Some(val),
            Repr::Zero { .. } => None,
        }
    }

    /// Absolute precision in digits, `None` for the exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::Unit { val, rel, .. } => Some(val + rel as i64),
            Repr::Zero { absprec } => absprec,
        }
    }

    pub fn unit(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            Repr::Zero { .. } => None,
        }
    }

    pub fn rel_precision(&self) -> u32 {
        match self.repr {
            Repr::Unit { rel, .. } => rel,
            Repr::Zero { .. } => 0,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { absprec: None })
    }

    pub fn try_div(&self, rhs: &Padic) -> Result<Padic> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Whether `self - other` is zero at the tracked precision.
    pub fn approx_eq(&self, other: &Padic) -> bool {
        self.sub(other).is_zero()
    }

    /// The integer representative `p^val * unit` when `val >= 0`.
    pub fn to_integer(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Zero { .. } => Some(BigInt::zero()),
            Repr::Unit { val, unit, .. } if *val >= 0 => Some(unit * prime_power(self.ring.p, *val as u32)),
            Repr::Unit { .. } => None,
        }
    }

    fn check_ring(&self, rhs: &Padic) {
        assert_eq!(self.ring, rhs.ring, "mixed p-adic rings");
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Coefficient for Padic {
    type Ring = PadicRing;

    fn ring(&self) -> PadicRing {
        self.ring
    }

    fn zero(ring: &PadicRing) -> Self {
        Padic { ring: *ring, repr: Repr::Zero { absprec: None } }
    }

    fn from_int(ring: &PadicRing, n: &BigInt) -> Self {
        if n.is_zero() {
            return Padic::zero(ring);
        }
        let (val, rest) = split_valuation(n, ring.p);
        let unit = rest.mod_floor(&prime_power(ring.p, ring.cap));
        Padic { ring: *ring, repr: Repr::Unit { val, unit, rel: ring.cap } }
    }

    fn add(&self, rhs: &Padic) -> Padic {
        self.check_ring(rhs);
        let ring = self.ring;
        match (&self.repr, &rhs.repr) {
            (Repr::Zero { absprec: a }, Repr::Zero { absprec: b }) => {
                Padic { ring, repr: Repr::Zero { absprec: min_opt(*a, *b) } }
            }
            (Repr::Zero { absprec }, Repr::Unit { val, unit, rel })
            | (Repr::Unit { val, unit, rel }, Repr::Zero { absprec }) => {
                let own = val + *rel as i64;
                match absprec {
                    Some(a) if *a < own => Padic::normalize(ring, *val, unit.clone(), *a),
                    _ => Padic { ring, repr: Repr::Unit { val: *val, unit: unit.clone(), rel: *rel } },
                }
            }
            (
                Repr::Unit { val: vx, unit: ux, rel: rx },
                Repr::Unit { val: vy, unit: uy, rel: ry },
            ) => {
                let absprec = (vx + *rx as i64).min(vy + *ry as i64);
                let v = (*vx).min(*vy);
                let rel = absprec - v;
                if rel <= 0 {
                    return Padic::zero_with_precision(ring, absprec);
                }
                let shifted = |val: i64, unit: &BigInt| -> BigInt {
                    let shift = val - v;
                    if shift >= rel {
                        BigInt::zero()
                    } else if shift == 0 {
                        unit.clone()
                    } else {
                        unit * prime_power(ring.p, shift as u32)
                    }
                };
                let sum = shifted(*vx, ux) + shifted(*vy, uy);
                Padic::normalize(ring, v, sum, absprec)
            }
        }
    }

    fn neg(&self) -> Padic {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit { val, unit, rel } => {
                let unit = prime_power(self.ring.p, *rel) - unit;
                Padic { ring: self.ring, repr: Repr::Unit { val: *val, unit, rel: *rel } }
            }
        }
    }

    fn mul(&self, rhs: &Padic) -> Padic {
        self.check_ring(rhs);
        let ring = self.ring;
        match (&self.repr, &rhs.repr) {
            (Repr::Zero { absprec: None }, _) | (_, Repr::Zero { absprec: None }) => Padic::zero(&ring),
            (Repr::Zero { absprec: Some(a) }, Repr::Zero { absprec: Some(b) }) => {
                Padic::zero_with_precision(ring, a + b)
            }
            (Repr::Zero { absprec: Some(a) }, Repr::Unit { val, .. })
            | (Repr::Unit { val, .. }, Repr::Zero { absprec: Some(a) }) => {
                Padic::zero_with_precision(ring, a + val)
            }
            (
                Repr::Unit { val: vx, unit: ux, rel: rx },
                Repr::Unit { val: vy, unit: uy, rel: ry },
            ) => {
                let rel = (*rx).min(*ry);
                let unit = (ux * uy).mod_floor(&prime_power(ring.p, rel));
                Padic { ring, repr: Repr::Unit { val: vx + vy, unit, rel } }
            }
        }
    }

    fn mul_int(&self, n: &BigInt) -> Padic {
        if n.is_one() {
            return self.clone();
        }
        self.mul(&Padic::from_int(&self.ring, n))
    }

    fn inv(&self) -> Result<Padic> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::DivisionByZero { precision: self.precision() }),
            Repr::Unit { val, unit, rel } => {
                let modulus = prime_power(self.ring.p, *rel);
                let inverse = unit.modinv(&modulus).expect("units are invertible");
                Ok(Padic { ring: self.ring, repr: Repr::Unit { val: -val, unit: inverse, rel: *rel } })
            }
        }
    }

    fn valuation(&self) -> Valuation {
        match self.repr {
            Repr::Unit { val, .. } => Valuation::from_twice(2 * val),
            Repr::Zero { .. } => Valuation::Infinite,
        }
    }

    fn precision(&self) -> Valuation {
        match self.abs_precision() {
            Some(a) => Valuation::from_twice(2 * a),
            None => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.ring.p;
        match &self.repr {
            Repr::Zero { absprec: None } => write!(f, "0"),
            Repr::Zero { absprec: Some(a) } => write!(f, "O({p}^{a})"),
            Repr::Unit { val, unit, rel } => {
                let signed = if unit > &(prime_power(p, *rel) / 2) {
                    unit - prime_power(p, *rel)
                } else {
                    unit.clone()
                };
                let sign = if signed.is_negative() { "-" } else { "" };
                write!(f, "{sign}{p}^{val}*{} + O({p}^{})", signed.abs(), val + *rel as i64)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PadicRing {
        PadicRing::new(3, 10)
    }

    fn int(n: i64) -> Padic {
        Padic::from_i64(&ring(), n)
    }

    #[test]
    fn integer_valuations() {
        assert_eq!(int(18).int_valuation(), Some(2));
        assert_eq!(int(-7).int_valuation(), Some(0));
        assert!(int(0).is_exact_zero());
        assert_eq!(int(18).abs_precision(), Some(12));
    }

    #[test]
    fn cancellation_loses_relative_precision() {
        let x = int(1);
        let y = int(1 + 3i64.pow(4));
        let d = y.sub(&x);
        assert_eq!(d.int_valuation(), Some(4));
        assert_eq!(d.abs_precision(), Some(10));
        assert_eq!(d.rel_precision(), 6);
    }

    #[test]
    fn full_cancellation_is_zero_at_precision() {
        let d = int(5).sub(&int(5));
        assert!(d.is_zero());
        assert_eq!(d.abs_precision(), Some(10));
        assert!(!d.is_exact_zero());
    }

    #[test]
    fn inverse_of_p_power() {
        let x = Padic::from_rational(ring(), &BigInt::from(1), &BigInt::from(9)).unwrap();
        assert_eq!(x.int_valuation(), Some(-2));
        assert!(x.mul(&int(9)).approx_eq(&int(1)));
        let half = Padic::from_rational(ring(), &BigInt::from(1), &BigInt::from(2)).unwrap();
        assert!(half.mul_int(&BigInt::from(2)).approx_eq(&int(1)));
    }

    #[test]
    fn dividing_by_zero_reports_precision() {
        let z = Padic::zero_with_precision(ring(), 7);
        assert_eq!(z.inv().unwrap_err(), Error::DivisionByZero { precision: Valuation::digits(7) });
    }

    #[test]
    fn zero_times_unit_shifts_precision() {
        let z = Padic::zero_with_precision(ring(), 4);
        assert_eq!(z.mul(&int(9)).abs_precision(), Some(6));
        assert!(z.mul(&Padic::zero(&ring())).is_exact_zero());
    }
}
