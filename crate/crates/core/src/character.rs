//! Finite-order characters and the constants recovered when evaluating at
//! them.

use crate::error::{Error, Result};
use crate::valuation::Valuation;

/// Which `Z_p`-direction a character ramifies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// The p-side, variable `X`.
    P,
    /// The p̄-side, variable `Y`.
    PBar,
}

/// A character sending the topological generator of one branch to a root of
/// unity of exact order `p^level`. Evaluation is reduction modulo
/// `Φ_{p^level}(1 + var)`; the interpolation exponent is `level + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharSpec {
    pub branch: Branch,
    pub level: u32,
}

impl CharSpec {
    pub fn new(branch: Branch, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidLevel(level));
        }
        Ok(CharSpec { branch, level })
    }

    pub fn exponent(&self) -> u32 {
        self.level + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub label: String,
    pub valuation: Valuation,
}

/// Constants recovered at one character (or one pair of characters), with the
/// residuals of every identity that was checked there.
///
/// `c_omega` is the common interpolation constant, `a_omega`/`b_omega` the
/// rank-one constants of the logarithmic matrix, `d_omega`/`e_omega` the
/// derivative constants and `k_omega` the constant governing the value of
/// the sharp component.
#[derive(Clone, Debug)]
pub struct CharValueReport<V> {
    pub chars: Vec<CharSpec>,
    pub threshold: Valuation,
    pub residuals: Vec<Residual>,
    pub c_omega: Option<V>,
    pub a_omega: Option<V>,
    pub b_omega: Option<V>,
    pub d_omega: Option<V>,
    pub e_omega: Option<V>,
    pub k_omega: Option<V>,
}

impl<V> CharValueReport<V> {
    pub fn new(chars: Vec<CharSpec>, threshold: Valuation) -> Self {
        CharValueReport {
            chars,
            threshold,
            residuals: Vec::new(),
            c_omega: None,
            a_omega: None,
            b_omega: None,
            d_omega: None,
            e_omega: None,
            k_omega: None,
        }
    }

    pub fn push_residual(&mut self, label: impl Into<String>, valuation: Valuation) {
        self.residuals.push(Residual { label: label.into(), valuation });
    }

    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|r| r.valuation >= self.threshold)
    }

    /// Labels of the identities whose residual fell below the threshold.
    pub fn failures(&self) -> Vec<&str> {
        self.residuals.iter().filter(|r| r.valuation < self.threshold).map(|r| r.label.as_str()).collect()
    }

    pub fn min_residual(&self) -> Valuation {
        self.residuals.iter().map(|r| r.valuation).min().unwrap_or(Valuation::Infinite)
    }

    pub fn levels(&self) -> Vec<u32> {
        self.chars.iter().map(|c| c.level).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_is_level_plus_one() {
        assert_eq!(CharSpec::new(Branch::P, 2).unwrap().exponent(), 3);
        assert!(CharSpec::new(Branch::PBar, 0).is_err());
    }

    #[test]
    fn report_flags_low_residuals() {
        let mut r: CharValueReport<()> = CharValueReport::new(vec![], Valuation::digits(10));
        r.push_residual("ok", Valuation::Infinite);
        assert!(r.passed());
        r.push_residual("bad", Valuation::digits(3));
        assert!(!r.passed());
        assert_eq!(r.failures(), vec!["bad"]);
        assert_eq!(r.min_residual(), Valuation::digits(3));
    }
}
