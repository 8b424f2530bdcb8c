use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A p-adic valuation or absolute precision, stored in half-digits so that the
/// valuations of the ramified quadratic extension are exact integers.
///
/// `Infinite` orders above every finite value; it is the valuation of zero and
/// the precision of an exact value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub const ZERO: Valuation = Valuation::Finite(0);

    pub fn from_twice(twice: i64) -> Self {
        Valuation::Finite(twice)
    }

    /// Whole p-adic digits.
    pub fn digits(n: i64) -> Self {
        Valuation::Finite(2 * n)
    }

    pub fn twice(self) -> Option<i64> {
        match self {
            Valuation::Finite(t) => Some(t),
            Valuation::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Valuation::Finite(t) => t as f64 / 2.0,
            Valuation::Infinite => f64::INFINITY,
        }
    }

    /// Largest whole number of digits not exceeding this value.
    pub fn floor_digits(self) -> Option<i64> {
        self.twice().map(|t| t.div_euclid(2))
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Sub for Valuation {
    type Output = Valuation;
    /// Panics when subtracting an infinite value.
    fn sub(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (v, Valuation::Finite(b)) => v + Valuation::Finite(-b),
            (_, Valuation::Infinite) => panic!("cannot subtract an infinite valuation"),
        }
    }
}

impl Neg for Valuation {
    type Output = Valuation;
    fn neg(self) -> Valuation {
        match self {
            Valuation::Finite(t) => Valuation::Finite(-t),
            Valuation::Infinite => panic!("cannot negate an infinite valuation"),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Valuation::Infinite => write!(f, "inf"),
            Valuation::Finite(t) if t % 2 == 0 => write!(f, "{}", t / 2),
            Valuation::Finite(t) => write!(f, "{}/2", t),
        }
    }
}
