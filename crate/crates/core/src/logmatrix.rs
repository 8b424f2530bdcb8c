//! Finite-level logarithmic matrices `M^(n) = C_1⋯C_n C^(-n-2) A` and the
//! checks that certify them: stabilisation, the determinant formula, the
//! rank-one shape at characters and, for `a_p = 0`, the plus/minus blocks.
//!
//! The integral part `C_1⋯C_n` is always formed exactly over `Z[X]`; the only
//! negative valuations enter through the closed form
//! `C^(-n-2) A = A·diag(α^(-n-2), β^(-n-2))`, applied once at the end.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::character::{Branch, CharSpec, CharValueReport};
use crate::error::{Error, Result};
use crate::exact::RationalQuad;
use crate::padic::{hecke_root, hecke_root_power, FormParams, HeckeRing, Padic, QuadExtElem, Root};
use crate::poly::IntPoly;
use crate::ring::Coefficient;
use crate::series::{
    cyclotomic_poly, cyclotomic_poly_truncated, cyclotomic_product, log1p_over_x, Cyclo, CycloRing, Series1, Var,
};
use crate::valuation::Valuation;

/// A 2×2 matrix of integer polynomials.
pub type IntMatrix = [[IntPoly; 2]; 2];

/// A 2×2 matrix of constants.
pub type ConstMatrix<C> = [[C; 2]; 2];

/// Least `n ≥ 1` with `p^n ≥ deg`: the level whose matrix stands in for the
/// limit when working modulo `X^deg`.
pub fn least_level(p: u32, deg: usize) -> u32 {
    let mut n = 1;
    while (p as u128).pow(n) < deg as u128 {
        n += 1;
    }
    n
}

/// `C_k = [[a_p, 1], [-ε Φ_{p^k}(1+X), 0]]` over Z, reduced modulo `X^limit`
/// when a limit is given.
pub fn companion_int(params: &FormParams, k: u32, limit: Option<usize>) -> Result<IntMatrix> {
    let phi = match limit {
        Some(l) => cyclotomic_poly_truncated(params.p(), k, l)?,
        None => cyclotomic_poly(params.p(), k)?,
    };
    Ok([
        [IntPoly::constant(BigInt::from(params.a_p())), IntPoly::one()],
        [phi.scale(&BigInt::from(-params.eps())), IntPoly::zero()],
    ])
}

pub fn int_matmul(a: &IntMatrix, b: &IntMatrix, limit: Option<usize>) -> IntMatrix {
    let lim = limit.unwrap_or(usize::MAX);
    let entry = |i: usize, j: usize| a[i][0].mul_trunc(&b[0][j], lim).add(&a[i][1].mul_trunc(&b[1][j], lim));
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

fn int_identity() -> IntMatrix {
    [[IntPoly::one(), IntPoly::zero()], [IntPoly::zero(), IntPoly::one()]]
}

/// `C_1 C_2 ⋯ C_n`, folded left to right.
pub fn companion_product(params: &FormParams, n: u32, limit: Option<usize>) -> Result<IntMatrix> {
    (1..=n).try_fold(int_identity(), |acc, k| Ok(int_matmul(&acc, &companion_int(params, k, limit)?, limit)))
}

/// `C_1 C_2 ⋯ C_n`, multiplied as a balanced tree. Equal to
/// [`companion_product`] since integer matrix products associate exactly.
pub fn companion_product_balanced(params: &FormParams, n: u32, limit: Option<usize>) -> Result<IntMatrix> {
    fn range(params: &FormParams, lo: u32, hi: u32, limit: Option<usize>) -> Result<IntMatrix> {
        match hi - lo {
            0 => Ok(int_identity()),
            1 => companion_int(params, lo, limit),
            len => {
                let mid = lo + len / 2;
                Ok(int_matmul(&range(params, lo, mid, limit)?, &range(params, mid, hi, limit)?, limit))
            }
        }
    }
    range(params, 1, n + 1, limit)
}

fn int_det(m: &IntMatrix) -> IntPoly {
    m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]))
}

/// `C = [[a_p, 1], [-εp, 0]]`, the common value of every `C_k` at `X = 0`.
pub fn constant_companion<C: HeckeRing>(params: &FormParams) -> ConstMatrix<C> {
    [
        [C::from_i64(params, params.a_p()), C::one(params)],
        [C::from_i64(params, -params.root_product()), C::zero(params)],
    ]
}

/// `A = [[-1, -1], [β, α]]`, which diagonalises `C`.
pub fn basis_matrix<C: HeckeRing>(params: &FormParams) -> ConstMatrix<C> {
    let minus_one = C::from_i64(params, -1);
    [[minus_one.clone(), minus_one], [hecke_root(params, Root::Beta), hecke_root(params, Root::Alpha)]]
}

/// `C^(-k) A = [[-α^(-k), -β^(-k)], [β α^(-k), α β^(-k)]]`.
pub fn diagonalized_tail<C: HeckeRing>(params: &FormParams, k: u32) -> Result<ConstMatrix<C>> {
    let a_inv: C = hecke_root_power(params, Root::Alpha, -(k as i64))?;
    let b_inv: C = hecke_root_power(params, Root::Beta, -(k as i64))?;
    let alpha: C = hecke_root(params, Root::Alpha);
    let beta: C = hecke_root(params, Root::Beta);
    Ok([[a_inv.neg(), b_inv.neg()], [beta.mul(&a_inv), alpha.mul(&b_inv)]])
}

/// Largest support a pre-image may have so that its product with a level-`n`
/// matrix (of degree `p^n - 1`) is exact modulo `X^deg`.
pub fn exact_support(p: u32, n: u32, deg: usize) -> Option<usize> {
    let h = (p as usize).checked_pow(n)? - 1;
    deg.checked_sub(h).filter(|&s| s > 0)
}

/// A 2×2 matrix of truncated series sharing variable, ring and degree.
#[derive(Clone, Debug)]
pub struct MatrixSeries<C: Coefficient> {
    entries: [[Series1<C>; 2]; 2],
    level: Option<u32>,
}

impl<C: Coefficient> MatrixSeries<C> {
    pub fn new(entries: [[Series1<C>; 2]; 2], level: Option<u32>) -> Result<Self> {
        let first = &entries[0][0];
        for s in entries.iter().flatten() {
            first.check_compatible(s)?;
            if s.deg() != first.deg() {
                return Err(Error::DegreeMismatch { left: first.deg(), right: s.deg() });
            }
        }
        Ok(MatrixSeries { entries, level })
    }

    pub fn from_constants(m: &ConstMatrix<C>, var: Var, deg: usize) -> Self {
        let e = |i: usize, j: usize| Series1::constant(var, m[i][j].clone(), deg);
        MatrixSeries { entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]], level: None }
    }

    pub fn identity(var: Var, ring: &C::Ring, deg: usize) -> Self {
        let m = [[C::one(ring), C::zero(ring)], [C::zero(ring), C::one(ring)]];
        MatrixSeries::from_constants(&m, var, deg)
    }

    /// Lifts an integer matrix, truncating at `deg`.
    pub fn from_int(m: &IntMatrix, var: Var, ring: &C::Ring, deg: usize) -> Self {
        let e = |i: usize, j: usize| Series1::from_int_poly(var, ring, &m[i][j], deg);
        MatrixSeries { entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]], level: None }
    }

    /// Zero-based entry access: `entry(0, 0)` is `m_{1,1}`.
    pub fn entry(&self, i: usize, j: usize) -> &Series1<C> {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[[Series1<C>; 2]; 2] {
        &self.entries
    }

    pub fn set_entry(&mut self, i: usize, j: usize, s: Series1<C>) -> Result<()> {
        self.entries[i][j].check_compatible(&s)?;
        self.entries[i][j] = s;
        Ok(())
    }

    pub fn var(&self) -> Var {
        self.entries[0][0].var()
    }

    pub fn ring(&self) -> &C::Ring {
        self.entries[0][0].ring()
    }

    pub fn deg(&self) -> usize {
        self.entries[0][0].deg()
    }

    pub fn level(&self) -> Option<u32> {
        self.level
    }

    pub fn with_var(self, var: Var) -> Self {
        let [[a, b], [c, d]] = self.entries;
        MatrixSeries { entries: [[a.with_var(var), b.with_var(var)], [c.with_var(var), d.with_var(var)]], level: self.level }
    }

    pub fn truncate(&self, deg: usize) -> Self {
        self.map(|s| Ok(s.truncate(deg))).expect("truncation is infallible")
    }

    fn map(&self, f: impl Fn(&Series1<C>) -> Result<Series1<C>>) -> Result<Self> {
        let e = &self.entries;
        Ok(MatrixSeries { entries: [[f(&e[0][0])?, f(&e[0][1])?], [f(&e[1][0])?, f(&e[1][1])?]], level: self.level })
    }

    pub fn derivative(&self) -> Self {
        self.map(|s| Ok(s.derivative())).expect("derivative is infallible")
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = (&self.entries, &rhs.entries);
        let entry = |i: usize, j: usize| -> Result<Series1<C>> {
            a[i][0].mul_trunc(&b[0][j])?.add(&a[i][1].mul_trunc(&b[1][j])?)
        };
        MatrixSeries::new([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]], None)
    }

    /// Right multiplication by a constant matrix.
    pub fn mul_const(&self, k: &ConstMatrix<C>) -> Self {
        let a = &self.entries;
        let entry = |i: usize, j: usize| a[i][0].scale(&k[0][j]).add(&a[i][1].scale(&k[1][j])).expect("shared ring");
        MatrixSeries { entries: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]], level: self.level }
    }

    pub fn det(&self) -> Result<Series1<C>> {
        let e = &self.entries;
        e[0][0].mul_trunc(&e[1][1])?.sub(&e[0][1].mul_trunc(&e[1][0])?)
    }

    /// Entrywise evaluation at a character of the ring's level.
    pub fn evaluate(&self, ring: &CycloRing<C>) -> Result<[[Cyclo<C>; 2]; 2]> {
        let e = &self.entries;
        let ev = |i: usize, j: usize| e[i][j].reduce_mod_cyclo(ring);
        Ok([[ev(0, 0)?, ev(0, 1)?], [ev(1, 0)?, ev(1, 1)?]])
    }
}

/// `C_k` truncated at degree `deg`.
pub fn companion_matrix<C: HeckeRing>(params: &FormParams, k: u32, deg: usize) -> Result<MatrixSeries<C>> {
    Ok(MatrixSeries::from_int(&companion_int(params, k, Some(deg))?, Var::X, params, deg))
}

/// `M^(n) = C_1⋯C_n C^(-n-2) A` modulo `X^deg`, in the variable `X`.
pub fn logmatrix_level<C: HeckeRing>(params: &FormParams, n: u32, deg: usize) -> Result<MatrixSeries<C>> {
    if n == 0 {
        return Err(Error::InvalidLevel(n));
    }
    if deg == 0 {
        return Err(Error::InvalidParams("degree must be at least 1".into()));
    }
    let h = companion_product(params, n, Some(deg))?;
    let tail = diagonalized_tail::<C>(params, n + 2)?;
    let mut m = MatrixSeries::from_int(&h, Var::X, params, deg).mul_const(&tail);
    m.level = Some(n);
    Ok(m)
}

/// The representative of the limit matrix modulo `X^deg`: level
/// [`least_level`].
pub fn limit_matrix<C: HeckeRing>(params: &FormParams, deg: usize) -> Result<MatrixSeries<C>> {
    logmatrix_level(params, least_level(params.p(), deg), deg)
}

/// Location of a coefficient inside a matrix of series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EntryIndex {
    pub row: usize,
    pub col: usize,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct StabilizationReport {
    pub n: u32,
    pub deg: usize,
    pub passed: bool,
    /// Least precision at which the reduced difference was seen to vanish.
    pub witnessed: Valuation,
    pub offending: Option<EntryIndex>,
}

/// Reduces `upper - lower` modulo `(1+X)^{p^n} - 1` and checks every
/// coefficient vanishes.
pub fn stabilization_between<C: Coefficient>(
    upper: &MatrixSeries<C>,
    lower: &MatrixSeries<C>,
    p: u32,
    n: u32,
) -> Result<StabilizationReport> {
    let modulus = IntPoly::one_plus_x_pow((p as u64).pow(n), None).sub(&IntPoly::one());
    let mut witnessed = Valuation::Infinite;
    let mut offending = None;
    for row in 0..2 {
        for col in 0..2 {
            let diff = upper.entry(row, col).sub(lower.entry(row, col))?;
            for (index, c) in diff.rem_monic(&modulus).iter().enumerate() {
                if !c.is_zero() && offending.is_none() {
                    offending = Some(EntryIndex { row, col, index });
                }
                witnessed = witnessed.min(c.residual());
            }
        }
    }
    Ok(StabilizationReport { n, deg: upper.deg().min(lower.deg()), passed: offending.is_none(), witnessed, offending })
}

/// `M^(n+1) ≡ M^(n) mod (1+X)^{p^n} - 1`. Both matrices are polynomials of
/// degree below `p^(n+1)`, so the degree is raised to at least that to keep
/// the congruence exact.
pub fn stabilization_check(params: &FormParams, n: u32, deg: usize) -> Result<StabilizationReport> {
    let p = params.p();
    if deg <= (p as usize).pow(n) {
        return Err(Error::InvalidParams(format!("stabilisation at level {n} needs degree > {}", p.pow(n))));
    }
    let deg = deg.max((p as usize).pow(n + 1));
    let upper = logmatrix_level::<QuadExtElem>(params, n + 1, deg)?;
    let lower = logmatrix_level::<QuadExtElem>(params, n, deg)?;
    stabilization_between(&upper, &lower, p, n)
}

/// `((1+X)^{p^n} - 1)/X · (β - α)/(ε² p^(n+2))` modulo `X^deg`.
pub fn det_closed_form<C: HeckeRing>(params: &FormParams, n: u32, deg: usize) -> Result<Series1<C>> {
    let beta: C = hecke_root(params, Root::Beta);
    let alpha: C = hecke_root(params, Root::Alpha);
    let denom = BigInt::from(params.eps()).pow(2) * BigInt::from(params.p()).pow(n + 2);
    let constant = beta.sub(&alpha).mul(&C::from_int(params, &denom).inv()?);
    Ok(Series1::from_int_poly(Var::X, params, &cyclotomic_product(params.p(), n), deg).scale(&constant))
}

/// Outcome of comparing `det M` against [`det_closed_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetComparison {
    pub matches: bool,
    pub first_mismatch: Option<usize>,
    pub residual: Valuation,
}

pub fn compare_det<C: HeckeRing>(m: &MatrixSeries<C>, n: u32) -> Result<DetComparison> {
    let det = m.det()?;
    let expected = det_closed_form::<C>(m.ring(), n, m.deg())?.with_var(m.var());
    let diff = det.sub(&expected)?;
    let first_mismatch = diff.coeffs().iter().position(|c| !c.is_zero());
    let residual = diff.coeffs().iter().map(C::residual).min().unwrap_or(Valuation::Infinite);
    Ok(DetComparison { matches: first_mismatch.is_none(), first_mismatch, residual })
}

#[derive(Clone, Debug)]
pub struct DetReport {
    pub n: u32,
    pub deg: usize,
    /// `det(C_1⋯C_n) = ε^n ((1+X)^{p^n} - 1)/X` over Z, untruncated.
    pub integer_identity: bool,
    /// The full identity over `Q(θ)`, exact modulo `X^deg`.
    pub exact: DetComparison,
    /// The full identity in the precision-tracked extension.
    pub padic: DetComparison,
    /// Least valuation of `det_k - λ_k` for `k < min(p, deg)`, where
    /// `λ = log(1+X)/X · (β - α)/(αβ)²` is the limiting determinant.
    pub limit_distance: Valuation,
}

impl DetReport {
    pub fn passed(&self) -> bool {
        self.integer_identity && self.exact.matches && self.padic.matches
    }
}

pub fn det_check(params: &FormParams, n: u32, deg: usize) -> Result<DetReport> {
    let p = params.p();
    let h = companion_product(params, n, None)?;
    let expected_int = cyclotomic_product(p, n).scale(&BigInt::from(params.eps()).pow(n));
    let integer_identity = int_det(&h) == expected_int;

    let exact_m = logmatrix_level::<RationalQuad>(params, n, deg)?;
    let exact = compare_det(&exact_m, n)?;
    let padic = compare_det(&logmatrix_level::<QuadExtElem>(params, n, deg)?, n)?;

    let det = exact_m.det()?;
    let beta: RationalQuad = hecke_root(params, Root::Beta);
    let alpha: RationalQuad = hecke_root(params, Root::Alpha);
    let ep = RationalQuad::from_i64(params, params.root_product());
    let scale = beta.sub(&alpha).mul(&ep.mul(&ep).inv()?);
    let terms = (p as usize).min(deg);
    let limit_distance = (0..terms)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let lambda = RationalQuad::new(
                *params,
                num_rational::BigRational::new(BigInt::from(sign), BigInt::from(k + 1)),
                num_rational::BigRational::zero(),
            )
            .mul(&scale);
            det.coeff(k).sub(&lambda).valuation()
        })
        .min()
        .unwrap_or(Valuation::Infinite);

    Ok(DetReport { n, deg, integer_identity, exact, padic, limit_distance })
}

/// Checks that `M(ω)` has rank one of the shape
/// `[[-α^{-n} A_ω, -β^{-n} A_ω], [-α^{-n} B_ω, -β^{-n} B_ω]]` at a character of
/// level `m` (so `n = m + 1`), and recovers `A_ω`, `B_ω`.
pub fn rank1_at_level(
    m: &MatrixSeries<QuadExtElem>,
    level: u32,
    threshold: Valuation,
) -> Result<CharValueReport<Cyclo<QuadExtElem>>> {
    let params = *m.ring();
    let branch = match m.var() {
        Var::X => Branch::P,
        Var::Y => Branch::PBar,
    };
    let spec = CharSpec::new(branch, level)?;
    let ring = CycloRing::new(params, params.p(), level)?;
    let ev = m.evaluate(&ring)?;
    let n = spec.exponent() as i64;
    let an: QuadExtElem = hecke_root_power(&params, Root::Alpha, n)?;
    let bn: QuadExtElem = hecke_root_power(&params, Root::Beta, n)?;

    let mut report = CharValueReport::new(vec![spec], threshold);
    report.push_residual("row 1: α^n m11 = β^n m12", ev[0][0].scale(&an).sub(&ev[0][1].scale(&bn)).residual());
    report.push_residual("row 2: α^n m21 = β^n m22", ev[1][0].scale(&an).sub(&ev[1][1].scale(&bn)).residual());
    report.push_residual("det M(ω) = 0", ev[0][0].mul(&ev[1][1]).sub(&ev[0][1].mul(&ev[1][0])).residual());
    report.a_omega = Some(ev[0][0].scale(&an).neg());
    report.b_omega = Some(ev[1][0].scale(&an).neg());
    Ok(report)
}

/// Diagonal of `C_1⋯C_{2m}` when `a_p = 0`, compared against
/// `diag((-ε)^m Π_{k≤m} Φ_{p^{2k}}, (-ε)^m Π_{k≤m} Φ_{p^{2k-1}})`.
#[derive(Clone, Debug)]
pub struct PollackBlocks {
    pub pairs: u32,
    pub plus: IntPoly,
    pub minus: IntPoly,
    pub off_diagonal_zero: bool,
    pub matches_closed_form: bool,
}

impl PollackBlocks {
    pub fn passed(&self) -> bool {
        self.off_diagonal_zero && self.matches_closed_form
    }

    /// The two blocks as series over Q_p modulo `X^deg`.
    pub fn series(&self, params: &FormParams, deg: usize) -> (Series1<Padic>, Series1<Padic>) {
        let ring = params.base_ring();
        (
            Series1::from_int_poly(Var::X, &ring, &self.plus, deg),
            Series1::from_int_poly(Var::X, &ring, &self.minus, deg),
        )
    }
}

pub fn pollack_blocks(params: &FormParams, pairs: u32) -> Result<PollackBlocks> {
    if params.a_p() != 0 {
        return Err(Error::Unsupported("pollack requires a_p = 0".into()));
    }
    if pairs == 0 {
        return Err(Error::InvalidLevel(0));
    }
    let h = companion_product(params, 2 * pairs, None)?;
    let sign = BigInt::from(-params.eps()).pow(pairs);
    let mut plus = IntPoly::constant(sign.clone());
    let mut minus = IntPoly::constant(sign);
    for k in 1..=pairs {
        plus = plus.mul(&cyclotomic_poly(params.p(), 2 * k)?);
        minus = minus.mul(&cyclotomic_poly(params.p(), 2 * k - 1)?);
    }
    let off_diagonal_zero = h[0][1].is_zero() && h[1][0].is_zero();
    let matches_closed_form = h[0][0] == plus && h[1][1] == minus;
    let [[p00, _], [_, p11]] = h;
    Ok(PollackBlocks { pairs, plus: p00, minus: p11, off_diagonal_zero, matches_closed_form })
}

/// `log(1+X)/X · (β - α)/(αβ)²` modulo `X^deg`, the limiting determinant.
pub fn limit_det(params: &FormParams, deg: usize) -> Result<Series1<QuadExtElem>> {
    let beta = params.beta();
    let alpha = params.alpha();
    let ab = alpha.mul(&beta);
    let scale = beta.sub(&alpha).mul(&ab.mul(&ab).inv()?);
    let log = log1p_over_x(params.base_ring(), deg);
    Ok(log.map(*params, |c| QuadExtElem::from_base(*params, c.clone()).mul(&scale)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u32, a_p: i64) -> FormParams {
        FormParams::with_precision(p, a_p, 1, 40).unwrap()
    }

    #[test]
    fn least_levels() {
        assert_eq!(least_level(3, 27), 3);
        assert_eq!(least_level(3, 28), 4);
        assert_eq!(least_level(5, 27), 3);
        assert_eq!(least_level(5, 25), 2);
        assert_eq!(least_level(3, 1), 1);
    }

    #[test]
    fn companion_definition() {
        let pr = params(3, 0);
        let c1 = companion_int(&pr, 1, None).unwrap();
        assert!(c1[0][0].is_zero());
        assert_eq!(c1[0][1], IntPoly::one());
        assert_eq!(c1[1][0], IntPoly::from_i64s(&[-3, -3, -1]));
        assert!(c1[1][1].is_zero());
        let det = int_det(&companion_int(&pr, 2, None).unwrap());
        assert_eq!(det, cyclotomic_poly(3, 2).unwrap());
    }

    #[test]
    fn balanced_product_agrees() {
        let pr = params(5, 5);
        for n in 1..=4 {
            assert_eq!(companion_product(&pr, n, Some(40)).unwrap(), companion_product_balanced(&pr, n, Some(40)).unwrap());
        }
    }

    #[test]
    fn pollack_rejects_nonzero_ap() {
        let err = pollack_blocks(&params(3, 3), 1).unwrap_err();
        assert_eq!(err, Error::Unsupported("pollack requires a_p = 0".into()));
    }

    #[test]
    fn stabilisation_needs_room() {
        assert!(stabilization_check(&params(3, 3), 1, 3).is_err());
    }
}
