//! Splitting an interpolating pair `(μ_α, μ_β)` into bounded components
//! `(μ_#, μ_♭)` with `(μ_α, μ_β) = (μ_#, μ_♭)·M`, the inverse recombination,
//! checks at characters, growth measurement and seeded synthetic inputs.

use num_bigint::{BigInt, Sign};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::character::{Branch, CharSpec, CharValueReport};
use crate::error::{Error, Result};
use crate::logmatrix::{limit_matrix, MatrixSeries};
use crate::padic::{hecke_root_power, FormParams, HeckeRing, Padic, PadicRing, QuadExtElem, Root};
use crate::ring::Coefficient;
use crate::series::{Cyclo, CycloRing, Series1, Series2, Var};
use crate::valuation::Valuation;

/// Output of [`factor_pair`].
#[derive(Clone, Debug)]
pub struct Factorization<C: Coefficient> {
    pub sharp: Series1<C>,
    pub flat: Series1<C>,
    /// Worst precision loss of the two divisions by `det M`, in half-digits.
    pub loss: i64,
}

fn check_shape<C: Coefficient>(a: &Series1<C>, b: &Series1<C>, m: &MatrixSeries<C>) -> Result<()> {
    a.check_compatible(b)?;
    if a.var() != m.var() {
        return Err(Error::VariableMismatch { expected: m.var().to_string(), found: a.var().to_string() });
    }
    if a.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    for d in [b.deg(), m.deg()] {
        if d != a.deg() {
            return Err(Error::DegreeMismatch { left: a.deg(), right: d });
        }
    }
    Ok(())
}

/// `μ_# = (m22 μ_α - m21 μ_β)/det M`, `μ_♭ = (-m12 μ_α + m11 μ_β)/det M`.
pub fn factor_pair<C: Coefficient>(mu_alpha: &Series1<C>, mu_beta: &Series1<C>, m: &MatrixSeries<C>) -> Result<Factorization<C>> {
    check_shape(mu_alpha, mu_beta, m)?;
    let (sharp_num, flat_num) = numerators(mu_alpha, mu_beta, m)?;
    let det = m.det()?;
    let sharp = sharp_num.divide(&det)?;
    let flat = flat_num.divide(&det)?;
    Ok(Factorization { loss: sharp.loss.max(flat.loss), sharp: sharp.series, flat: flat.series })
}

/// The two numerators `m22 μ_α - m21 μ_β` and `-m12 μ_α + m11 μ_β`.
pub fn numerators<C: Coefficient>(
    mu_alpha: &Series1<C>,
    mu_beta: &Series1<C>,
    m: &MatrixSeries<C>,
) -> Result<(Series1<C>, Series1<C>)> {
    let sharp = m.entry(1, 1).mul_trunc(mu_alpha)?.sub(&m.entry(1, 0).mul_trunc(mu_beta)?)?;
    let flat = m.entry(0, 0).mul_trunc(mu_beta)?.sub(&m.entry(0, 1).mul_trunc(mu_alpha)?)?;
    Ok((sharp, flat))
}

/// `(μ_α, μ_β) = (μ_#, μ_♭)·M`.
pub fn combine_pair<C: Coefficient>(
    sharp: &Series1<C>,
    flat: &Series1<C>,
    m: &MatrixSeries<C>,
) -> Result<(Series1<C>, Series1<C>)> {
    check_shape(sharp, flat, m)?;
    let alpha = sharp.mul_trunc(m.entry(0, 0))?.add(&flat.mul_trunc(m.entry(1, 0))?)?;
    let beta = sharp.mul_trunc(m.entry(0, 1))?.add(&flat.mul_trunc(m.entry(1, 1))?)?;
    Ok((alpha, beta))
}

fn branch_of(var: Var) -> Branch {
    match var {
        Var::X => Branch::P,
        Var::Y => Branch::PBar,
    }
}

/// Checks `α^n μ_α(ω) = β^n μ_β(ω)` at a character of each level `m`
/// (`n = m + 1`) and reports `C_ω = α^n μ_α(ω)`.
pub fn verify_pair<C: HeckeRing>(
    mu_alpha: &Series1<C>,
    mu_beta: &Series1<C>,
    levels: &[u32],
    threshold: Valuation,
) -> Result<Vec<CharValueReport<Cyclo<C>>>> {
    mu_alpha.check_compatible(mu_beta)?;
    let params = *mu_alpha.ring();
    levels
        .iter()
        .map(|&level| {
            let spec = CharSpec::new(branch_of(mu_alpha.var()), level)?;
            let ring = CycloRing::new(params, params.p(), level)?;
            let n = spec.exponent() as i64;
            let an: C = hecke_root_power(&params, Root::Alpha, n)?;
            let bn: C = hecke_root_power(&params, Root::Beta, n)?;
            let ca = mu_alpha.reduce_mod_cyclo(&ring)?.scale(&an);
            let cb = mu_beta.reduce_mod_cyclo(&ring)?.scale(&bn);
            let mut report = CharValueReport::new(vec![spec], threshold);
            report.push_residual("α^n μ_α(ω) = β^n μ_β(ω)", ca.sub(&cb).residual());
            report.c_omega = Some(ca);
            Ok(report)
        })
        .collect()
}

/// Checks that both numerators of [`factor_pair`] vanish at characters of
/// each level, which is what makes the division by `det M` bounded.
pub fn vanish_pair<C: HeckeRing>(
    mu_alpha: &Series1<C>,
    mu_beta: &Series1<C>,
    m: &MatrixSeries<C>,
    levels: &[u32],
    threshold: Valuation,
) -> Result<Vec<CharValueReport<Cyclo<C>>>> {
    check_shape(mu_alpha, mu_beta, m)?;
    let params = *m.ring();
    let (sharp, flat) = numerators(mu_alpha, mu_beta, m)?;
    levels
        .iter()
        .map(|&level| {
            let spec = CharSpec::new(branch_of(m.var()), level)?;
            let ring = CycloRing::new(params, params.p(), level)?;
            let mut report = CharValueReport::new(vec![spec], threshold);
            report.push_residual("m22 μ_α - m21 μ_β vanishes", sharp.reduce_mod_cyclo(&ring)?.residual());
            report.push_residual("m11 μ_β - m12 μ_α vanishes", flat.reduce_mod_cyclo(&ring)?.residual());
            Ok(report)
        })
        .collect()
}

/// `B(u) = max_n (-v(c_n) - u·log_p(max(n, 1)))` over the nonzero
/// coefficients, in digits, compared against an allowance `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthMeasurement {
    pub bound: f64,
    /// Index attaining the bound; `None` when every coefficient is zero.
    pub argmax: Option<(usize, usize)>,
    pub allowance: f64,
}

impl GrowthMeasurement {
    pub fn passed(&self) -> bool {
        self.bound <= self.allowance + 1e-9
    }
}

fn log_p(p: u32, n: usize) -> f64 {
    (n.max(1) as f64).ln() / (p as f64).ln()
}

fn scan_growth<'a, C: Coefficient + 'a>(
    items: impl Iterator<Item = ((usize, usize), &'a C)>,
    weight: impl Fn(usize, usize) -> f64,
    allowance: f64,
) -> GrowthMeasurement {
    let mut best = GrowthMeasurement { bound: f64::NEG_INFINITY, argmax: None, allowance };
    for ((i, j), c) in items {
        if c.is_zero() {
            continue;
        }
        let b = 0.0 - c.valuation().to_f64() - weight(i, j);
        if b > best.bound + 1e-12 {
            best.bound = b;
            best.argmax = Some((i, j));
        }
    }
    best
}

/// Growth of a one-variable series against order `u`; `argmax` is `(n, 0)`.
pub fn growth_order<C: Coefficient>(s: &Series1<C>, p: u32, u: f64, allowance: f64) -> GrowthMeasurement {
    scan_growth(s.coeffs().iter().enumerate().map(|(n, c)| ((n, 0), c)), |n, _| u * log_p(p, n), allowance)
}

/// Growth of a two-variable series against order `(u, v)`.
pub fn growth_order2<C: Coefficient>(s: &Series2<C>, p: u32, u: f64, v: f64, allowance: f64) -> GrowthMeasurement {
    let dy = s.deg(Var::Y);
    scan_growth(
        s.coeffs().iter().enumerate().map(|(k, c)| ((k / dy, k % dy), c)),
        |i, j| u * log_p(p, i) + v * log_p(p, j),
        allowance,
    )
}

/// Integers drawn uniformly (up to negligible bias) from `[0, p^N)`.
fn next_residue(rng: &mut impl RngCore, modulus: &BigInt) -> BigInt {
    let words = (modulus.bits() / 64 + 2) as usize;
    let digits: Vec<u32> = (0..2 * words).map(|_| rng.next_u32()).collect();
    BigInt::from_slice(Sign::Plus, &digits) % modulus
}

fn residue_modulus(ring: PadicRing) -> BigInt {
    BigInt::from(ring.prime()).pow(ring.cap())
}

/// A series over `Z_p` with coefficients drawn from `[0, p^N)` by `rng`;
/// coefficients at index `support` and above are exact zeros.
pub fn random_bounded_with(rng: &mut impl RngCore, ring: PadicRing, var: Var, deg: usize, support: usize) -> Series1<Padic> {
    let modulus = residue_modulus(ring);
    Series1::from_fn(var, &ring, deg, |n| {
        if n < support {
            Padic::from_int(&ring, &next_residue(rng, &modulus))
        } else {
            Padic::zero(&ring)
        }
    })
}

/// [`random_bounded_with`] driven by SplitMix64 seeded with `seed`.
pub fn random_bounded(ring: PadicRing, var: Var, deg: usize, seed: u64) -> Series1<Padic> {
    random_bounded_with(&mut SplitMix64::seed_from_u64(seed), ring, var, deg, deg)
}

/// A bounded series over the quadratic extension, coefficients `a + bθ` with
/// `a`, `b` drawn from `[0, p^N)`.
pub fn random_bounded_quad_with(
    rng: &mut impl RngCore,
    params: &FormParams,
    var: Var,
    deg: usize,
    support: usize,
) -> Series1<QuadExtElem> {
    let ring = params.base_ring();
    let modulus = residue_modulus(ring);
    Series1::from_fn(var, params, deg, |n| {
        if n < support {
            let a = Padic::from_int(&ring, &next_residue(rng, &modulus));
            let b = Padic::from_int(&ring, &next_residue(rng, &modulus));
            QuadExtElem::new(*params, a, b).expect("shared ring")
        } else {
            QuadExtElem::zero(params)
        }
    })
}

pub fn random_bounded_quad(params: &FormParams, var: Var, deg: usize, seed: u64) -> Series1<QuadExtElem> {
    random_bounded_quad_with(&mut SplitMix64::seed_from_u64(seed), params, var, deg, deg)
}

/// A bounded two-variable series over the quadratic extension supported on
/// `i < support.0`, `j < support.1`.
pub fn random_bounded_quad2_with(
    rng: &mut impl RngCore,
    params: &FormParams,
    degs: (usize, usize),
    support: (usize, usize),
) -> Series2<QuadExtElem> {
    let ring = params.base_ring();
    let modulus = residue_modulus(ring);
    Series2::from_fn(params, degs.0, degs.1, |i, j| {
        if i < support.0 && j < support.1 {
            let a = Padic::from_int(&ring, &next_residue(rng, &modulus));
            let b = Padic::from_int(&ring, &next_residue(rng, &modulus));
            QuadExtElem::new(*params, a, b).expect("shared ring")
        } else {
            QuadExtElem::zero(params)
        }
    })
}

/// `(μ_α, μ_β) = (μ_#, μ_♭)·M` for seeded bounded `μ_#`, `μ_♭` supported
/// below `support`. Returns `(μ_#, μ_♭, μ_α, μ_β)`.
pub fn synthesize_pair(
    m: &MatrixSeries<QuadExtElem>,
    support: usize,
    seed: u64,
) -> Result<[Series1<QuadExtElem>; 4]> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let sharp = random_bounded_quad_with(&mut rng, m.ring(), m.var(), m.deg(), support);
    let flat = random_bounded_quad_with(&mut rng, m.ring(), m.var(), m.deg(), support);
    let (mu_a, mu_b) = combine_pair(&sharp, &flat, m)?;
    Ok([sharp, flat, mu_a, mu_b])
}

/// Result of synthesising `(μ_α, μ_β)` from random bounded `(μ_#, μ_♭)` and
/// factoring it again.
#[derive(Clone, Debug)]
pub struct PairRoundTrip {
    pub seed: u64,
    pub level: u32,
    /// Least residual between recovered and original components, i.e. the
    /// absolute precision to which the inputs came back.
    pub recovered: Valuation,
    /// Least residual of `combine(factor(μ)) - μ`.
    pub recombined: Valuation,
    /// Loss reported by the divisions.
    pub division_loss: i64,
    /// Input precision minus recovered precision, in half-digits.
    pub loss: i64,
    pub growth_sharp: GrowthMeasurement,
    pub growth_flat: GrowthMeasurement,
}

pub fn pair_round_trip(params: &FormParams, deg: usize, seed: u64) -> Result<PairRoundTrip> {
    let m = limit_matrix::<QuadExtElem>(params, deg)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let sharp = random_bounded_quad_with(&mut rng, params, Var::X, deg, deg);
    let flat = random_bounded_quad_with(&mut rng, params, Var::X, deg, deg);
    let (mu_a, mu_b) = combine_pair(&sharp, &flat, &m)?;
    let f = factor_pair(&mu_a, &mu_b, &m)?;
    let recovered = f.sharp.residual_against(&sharp)?.min(f.flat.residual_against(&flat)?);
    let (ra, rb) = combine_pair(&f.sharp, &f.flat, &m)?;
    let recombined = ra.residual_against(&mu_a)?.min(rb.residual_against(&mu_b)?);
    let input = Valuation::digits(params.precision() as i64);
    let loss = match (input, recovered) {
        (Valuation::Finite(i), Valuation::Finite(r)) => (i - r).max(0),
        _ => 0,
    };
    let allowance = loss as f64 / 2.0;
    Ok(PairRoundTrip {
        seed,
        level: m.level().unwrap_or(0),
        recovered,
        recombined,
        division_loss: f.loss,
        loss,
        growth_sharp: growth_order(&f.sharp, params.p(), 0.0, allowance),
        growth_flat: growth_order(&f.flat, params.p(), 0.0, allowance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logmatrix::logmatrix_level;

    fn params() -> FormParams {
        FormParams::with_precision(3, 3, 1, 40).unwrap()
    }

    #[test]
    fn unit_vectors_round_trip() {
        let pr = params();
        let m = logmatrix_level::<QuadExtElem>(&pr, 2, 9).unwrap();
        let one = Series1::one(Var::X, &pr, 9);
        let zero = Series1::zero(Var::X, &pr, 9);
        let f = factor_pair(m.entry(0, 0), m.entry(0, 1), &m).unwrap();
        assert!(f.sharp.residual_against(&one).unwrap() >= Valuation::digits(30));
        assert!(f.flat.residual_against(&zero).unwrap() >= Valuation::digits(30));
        let f = factor_pair(m.entry(1, 0), m.entry(1, 1), &m).unwrap();
        assert!(f.sharp.residual_against(&zero).unwrap() >= Valuation::digits(30));
        assert!(f.flat.residual_against(&one).unwrap() >= Valuation::digits(30));
    }

    #[test]
    fn combine_zero_is_zero() {
        let pr = params();
        let m = logmatrix_level::<QuadExtElem>(&pr, 1, 6).unwrap();
        let zero = Series1::zero(Var::X, &pr, 6);
        let (a, b) = combine_pair(&zero, &zero, &m).unwrap();
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn growth_of_constant() {
        let pr = params();
        let one: Series1<QuadExtElem> = Series1::one(Var::X, &pr, 10);
        let g = growth_order(&one, 3, 0.0, 0.0);
        assert_eq!(g.bound, 0.0);
        assert_eq!(g.argmax, Some((0, 0)));
        let zero: Series1<QuadExtElem> = Series1::zero(Var::X, &pr, 10);
        assert_eq!(growth_order(&zero, 3, 0.0, 0.0).bound, f64::NEG_INFINITY);
    }

    #[test]
    fn generator_is_deterministic() {
        let ring = PadicRing::new(5, 20);
        let a = random_bounded(ring, Var::X, 12, 42);
        let b = random_bounded(ring, Var::X, 12, 42);
        assert!(a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| x.approx_eq(y) && x.to_integer() == y.to_integer()));
        let c = random_bounded(ring, Var::X, 12, 43);
        assert!(a.coeffs().iter().zip(c.coeffs()).any(|(x, y)| x.to_integer() != y.to_integer()));
    }

    #[test]
    fn mismatched_variables_rejected() {
        let pr = params();
        let m = logmatrix_level::<QuadExtElem>(&pr, 1, 6).unwrap();
        let y: Series1<QuadExtElem> = Series1::zero(Var::Y, &pr, 6);
        assert!(matches!(factor_pair(&y, &y, &m), Err(Error::VariableMismatch { .. })));
        let short: Series1<QuadExtElem> = Series1::zero(Var::X, &pr, 5);
        assert!(matches!(combine_pair(&short, &short, &m), Err(Error::DegreeMismatch { .. })));
    }
}
