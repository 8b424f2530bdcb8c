//! Two-variable factorisation: `M_p` is divided out in `X`, then `M_p̄` in
//! `Y`, so that
//! `(L_αα L_βα L_αβ L_ββ) = (L_## L_♭# L_#♭ L_♭♭)·(M_p ⊗ M_p̄)`.
//!
//! A [`Quadruple`] is always laid out with the p-side index varying fastest:
//! `(αα, βα, αβ, ββ)` for interpolating data, `(##, ♭#, #♭, ♭♭)` for the
//! bounded parts and `(#α, ♭α, #β, ♭β)` in between.

use rand_core::SeedableRng;
use rand_xoshiro::SplitMix64;

use crate::character::{Branch, CharSpec, CharValueReport};
use crate::error::{Error, Result};
use crate::factor::{growth_order2, random_bounded_quad2_with, GrowthMeasurement};
use crate::logmatrix::{limit_matrix, MatrixSeries};
use crate::padic::{hecke_root_power, FormParams, QuadExtElem, Root};
use crate::ring::Coefficient;
use crate::series::{Cyclo, CycloRing, Series1, Series2, Var};
use crate::valuation::Valuation;

/// Bi-cyclotomic values: `R_{m_x} ⊗ E` adjoined the `Y`-character.
pub type BiCyclo = Cyclo<Cyclo<QuadExtElem>>;

pub const INPUT_LABELS: [&str; 4] = ["L_αα", "L_βα", "L_αβ", "L_ββ"];
pub const OUTPUT_LABELS: [&str; 4] = ["L_##", "L_♭#", "L_#♭", "L_♭♭"];

#[derive(Clone, Debug)]
pub struct Quadruple<C: Coefficient> {
    parts: [Series2<C>; 4],
}

impl<C: Coefficient> Quadruple<C> {
    pub fn new(parts: [Series2<C>; 4]) -> Result<Self> {
        let (ring, degs) = (parts[0].ring(), parts[0].degs());
        for s in &parts[1..] {
            if s.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if s.degs() != degs {
                return Err(Error::DegreeMismatch { left: degs.0 * degs.1, right: s.degs().0 * s.degs().1 });
            }
        }
        Ok(Quadruple { parts })
    }

    pub fn zero(ring: &C::Ring, dx: usize, dy: usize) -> Self {
        let z = Series2::zero(ring, dx, dy);
        Quadruple { parts: [z.clone(), z.clone(), z.clone(), z] }
    }

    /// The quadruple with a one in slot `index` and zeros elsewhere.
    pub fn unit(ring: &C::Ring, dx: usize, dy: usize, index: usize) -> Self {
        let mut q = Quadruple::zero(ring, dx, dy);
        q.parts[index].set_coeff(0, 0, C::one(ring));
        q
    }

    pub fn parts(&self) -> &[Series2<C>; 4] {
        &self.parts
    }

    pub fn into_parts(self) -> [Series2<C>; 4] {
        self.parts
    }

    pub fn get(&self, index: usize) -> &Series2<C> {
        &self.parts[index]
    }

    pub fn set(&mut self, index: usize, s: Series2<C>) -> Result<()> {
        if s.degs() != self.degs() || s.ring() != self.ring() {
            return Err(Error::RingMismatch);
        }
        self.parts[index] = s;
        Ok(())
    }

    pub fn ring(&self) -> &C::Ring {
        self.parts[0].ring()
    }

    pub fn degs(&self) -> (usize, usize) {
        self.parts[0].degs()
    }

    pub fn precision(&self) -> Valuation {
        self.parts.iter().map(Series2::precision).min().unwrap_or(Valuation::Infinite)
    }

    /// Least residual over all four components.
    pub fn residual_against(&self, rhs: &Self) -> Result<Valuation> {
        self.parts.iter().zip(&rhs.parts).try_fold(Valuation::Infinite, |acc, (a, b)| Ok(acc.min(a.residual_against(b)?)))
    }

    pub fn truncate(&self, dx: usize, dy: usize) -> Self {
        let t = |k: usize| self.parts[k].truncate(dx, dy);
        Quadruple { parts: [t(0), t(1), t(2), t(3)] }
    }
}

/// Index pairs `(first, second)` of the two 2-vectors acted on by a matrix
/// in `axis`.
fn pairs(axis: Var) -> [(usize, usize); 2] {
    match axis {
        Var::X => [(0, 1), (2, 3)],
        Var::Y => [(0, 2), (1, 3)],
    }
}

fn check_matrix<C: Coefficient>(q: &Quadruple<C>, m: &MatrixSeries<C>) -> Result<()> {
    if q.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    let d = q.get(0).deg(m.var());
    if d != m.deg() {
        return Err(Error::DegreeMismatch { left: d, right: m.deg() });
    }
    Ok(())
}

/// `(u, v) ↦ (u, v)·M` on both pairs along the matrix's variable.
pub fn combine_axis<C: Coefficient>(q: &Quadruple<C>, m: &MatrixSeries<C>) -> Result<Quadruple<C>> {
    check_matrix(q, m)?;
    let mut out = q.clone();
    for (a, b) in pairs(m.var()) {
        let (u, v) = (q.get(a), q.get(b));
        out.parts[a] = u.mul_series1(m.entry(0, 0))?.add(&v.mul_series1(m.entry(1, 0))?)?;
        out.parts[b] = u.mul_series1(m.entry(0, 1))?.add(&v.mul_series1(m.entry(1, 1))?)?;
    }
    Ok(out)
}

/// Inverse of [`combine_axis`]: divides `M` out along its variable, fiber by
/// fiber. Returns the quotient and the worst division loss in half-digits.
pub fn factor_axis<C: Coefficient>(q: &Quadruple<C>, m: &MatrixSeries<C>) -> Result<(Quadruple<C>, i64)> {
    check_matrix(q, m)?;
    let det = m.det()?;
    let mut out = q.clone();
    let mut loss = 0;
    for (a, b) in pairs(m.var()) {
        let (u, v) = (q.get(a), q.get(b));
        let sharp = u.mul_series1(m.entry(1, 1))?.sub(&v.mul_series1(m.entry(1, 0))?)?;
        let flat = v.mul_series1(m.entry(0, 0))?.sub(&u.mul_series1(m.entry(0, 1))?)?;
        let (sharp, l1) = sharp.divide_series1(&det)?;
        let (flat, l2) = flat.divide_series1(&det)?;
        out.parts[a] = sharp;
        out.parts[b] = flat;
        loss = loss.max(l1).max(l2);
    }
    Ok((out, loss))
}

fn require_var<C: Coefficient>(m: &MatrixSeries<C>, var: Var) -> Result<()> {
    if m.var() != var {
        return Err(Error::VariableMismatch { expected: var.to_string(), found: m.var().to_string() });
    }
    Ok(())
}

/// `(L_αα, L_βα, L_αβ, L_ββ) ↦ (L_#α, L_♭α, L_#β, L_♭β)`.
pub fn factor_x<C: Coefficient>(q: &Quadruple<C>, mx: &MatrixSeries<C>) -> Result<(Quadruple<C>, i64)> {
    require_var(mx, Var::X)?;
    factor_axis(q, mx)
}

/// `(L_#α, L_♭α, L_#β, L_♭β) ↦ (L_##, L_♭#, L_#♭, L_♭♭)`.
pub fn factor_y<C: Coefficient>(q: &Quadruple<C>, my: &MatrixSeries<C>) -> Result<(Quadruple<C>, i64)> {
    require_var(my, Var::Y)?;
    factor_axis(q, my)
}

pub fn factor_full<C: Coefficient>(
    q: &Quadruple<C>,
    mx: &MatrixSeries<C>,
    my: &MatrixSeries<C>,
) -> Result<(Quadruple<C>, i64)> {
    let (half, l1) = factor_x(q, mx)?;
    let (full, l2) = factor_y(&half, my)?;
    Ok((full, l1 + l2))
}

/// [`factor_full`] with the two directions taken in the opposite order.
pub fn factor_full_yx<C: Coefficient>(
    q: &Quadruple<C>,
    mx: &MatrixSeries<C>,
    my: &MatrixSeries<C>,
) -> Result<(Quadruple<C>, i64)> {
    require_var(mx, Var::X)?;
    require_var(my, Var::Y)?;
    let (half, l1) = factor_axis(q, my)?;
    let (full, l2) = factor_axis(&half, mx)?;
    Ok((full, l1 + l2))
}

/// Row vector times `Mx ⊗ My`, applied one variable at a time.
pub fn combine_full<C: Coefficient>(
    q: &Quadruple<C>,
    mx: &MatrixSeries<C>,
    my: &MatrixSeries<C>,
) -> Result<Quadruple<C>> {
    require_var(mx, Var::X)?;
    require_var(my, Var::Y)?;
    combine_axis(&combine_axis(q, my)?, mx)
}

/// `Mx ⊗ My` as a 4×4 matrix of two-variable series, with composite index
/// `(i, j) ↦ i + 2j` so entry `((i,j),(k,l))` is `mx_{ik}(X)·my_{jl}(Y)`.
pub fn kronecker<C: Coefficient>(mx: &MatrixSeries<C>, my: &MatrixSeries<C>) -> Result<[[Series2<C>; 4]; 4]> {
    if mx.var() == my.var() {
        return Err(Error::VariableMismatch { expected: "distinct variables".into(), found: mx.var().to_string() });
    }
    let (mx, my) = if mx.var() == Var::X { (mx, my) } else { (my, mx) };
    let entry = |row: usize, col: usize| Series2::outer(mx.entry(row % 2, col % 2), my.entry(row / 2, col / 2));
    let row = |r: usize| -> Result<[Series2<C>; 4]> { Ok([entry(r, 0)?, entry(r, 1)?, entry(r, 2)?, entry(r, 3)?]) };
    Ok([row(0)?, row(1)?, row(2)?, row(3)?])
}

/// Literal row-vector product with a 4×4 matrix of two-variable series.
pub fn apply_kronecker<C: Coefficient>(q: &Quadruple<C>, k: &[[Series2<C>; 4]; 4]) -> Result<Quadruple<C>> {
    let col = |c: usize| -> Result<Series2<C>> {
        (1..4).try_fold(q.get(0).mul_trunc(&k[0][c])?, |acc, r| acc.add(&q.get(r).mul_trunc(&k[r][c])?))
    };
    Quadruple::new([col(0)?, col(1)?, col(2)?, col(3)?])
}

/// Characters `ω = ω_p ω_p̄` of levels `(m_x, m_y)` with the root powers
/// used to rescale values there.
struct BiChar {
    specs: Vec<CharSpec>,
    rx: CycloRing<QuadExtElem>,
    ry: CycloRing<Cyclo<QuadExtElem>>,
    alpha_p: QuadExtElem,
    beta_p: QuadExtElem,
    alpha_q: QuadExtElem,
    beta_q: QuadExtElem,
}

impl BiChar {
    fn new(params: &FormParams, (mx, my): (u32, u32)) -> Result<Self> {
        let sx = CharSpec::new(Branch::P, mx)?;
        let sy = CharSpec::new(Branch::PBar, my)?;
        let rx = CycloRing::new(*params, params.p(), mx)?;
        let ry = CycloRing::new(rx.clone(), params.p(), my)?;
        let pow = |which, n: u32| hecke_root_power::<QuadExtElem>(params, which, n as i64);
        Ok(BiChar {
            alpha_p: pow(Root::Alpha, sx.exponent())?,
            beta_p: pow(Root::Beta, sx.exponent())?,
            alpha_q: pow(Root::Alpha, sy.exponent())?,
            beta_q: pow(Root::Beta, sy.exponent())?,
            specs: vec![sx, sy],
            rx,
            ry,
        })
    }

    fn eval(&self, s: &Series2<QuadExtElem>) -> Result<BiCyclo> {
        s.partial_apply(Var::X, &self.rx)?.reduce_mod_cyclo(&self.ry)
    }

    /// A value at `ω_p` alone, viewed in the bi-cyclotomic ring.
    fn lift_x(&self, c: Cyclo<QuadExtElem>) -> BiCyclo {
        Cyclo::constant(&self.ry, c)
    }

    fn scalar(&self, c: &QuadExtElem) -> BiCyclo {
        self.lift_x(Cyclo::constant(&self.rx, c.clone()))
    }
}

/// Checks `α^{n_p}α^{n_p̄}L_αα(ω) = β^{n_p}α^{n_p̄}L_βα(ω) = α^{n_p}β^{n_p̄}L_αβ(ω)
/// = β^{n_p}β^{n_p̄}L_ββ(ω)` at every level pair and reports the common `C_ω`.
pub fn verify_interpolation4(
    q: &Quadruple<QuadExtElem>,
    levels: &[(u32, u32)],
    threshold: Valuation,
) -> Result<Vec<CharValueReport<BiCyclo>>> {
    let params = *q.ring();
    levels
        .iter()
        .map(|&lv| {
            let ch = BiChar::new(&params, lv)?;
            let scales = [
                ch.alpha_p.mul(&ch.alpha_q),
                ch.beta_p.mul(&ch.alpha_q),
                ch.alpha_p.mul(&ch.beta_q),
                ch.beta_p.mul(&ch.beta_q),
            ];
            let values = (0..4).map(|k| Ok(ch.eval(q.get(k))?.mul(&ch.scalar(&scales[k])))).collect::<Result<Vec<_>>>()?;
            let mut report = CharValueReport::new(ch.specs.clone(), threshold);
            for k in 1..4 {
                report.push_residual(INPUT_LABELS[k], values[k].sub(&values[0]).residual());
            }
            report.c_omega = Some(values[0].clone());
            Ok(report)
        })
        .collect()
}

/// Checks `β^{n_p̄}∂_p L_αβ(ω) = α^{n_p̄}∂_p L_αα(ω)` and
/// `β^{n_p̄}∂_p L_ββ(ω) = α^{n_p̄}∂_p L_βα(ω)`, reporting
/// `D_ω = α^{n_p̄}∂_p L_αα(ω)` and `E_ω = α^{n_p̄}∂_p L_βα(ω)`.
pub fn derivative_relation(
    q: &Quadruple<QuadExtElem>,
    levels: &[(u32, u32)],
    threshold: Valuation,
) -> Result<Vec<CharValueReport<BiCyclo>>> {
    let params = *q.ring();
    let d: Vec<_> = q.parts().iter().map(|s| s.derivative(Var::X)).collect();
    levels
        .iter()
        .map(|&lv| {
            let ch = BiChar::new(&params, lv)?;
            let (aq, bq) = (ch.scalar(&ch.alpha_q), ch.scalar(&ch.beta_q));
            let d_omega = ch.eval(&d[0])?.mul(&aq);
            let e_omega = ch.eval(&d[1])?.mul(&aq);
            let mut report = CharValueReport::new(ch.specs.clone(), threshold);
            report.push_residual("∂L_αβ against ∂L_αα", ch.eval(&d[2])?.mul(&bq).sub(&d_omega).residual());
            report.push_residual("∂L_ββ against ∂L_βα", ch.eval(&d[3])?.mul(&bq).sub(&e_omega).residual());
            report.d_omega = Some(d_omega);
            report.e_omega = Some(e_omega);
            Ok(report)
        })
        .collect()
}

/// Checks that the numerators of [`factor_x`] vanish at every level pair.
pub fn vanish_check(
    q: &Quadruple<QuadExtElem>,
    mx: &MatrixSeries<QuadExtElem>,
    levels: &[(u32, u32)],
    threshold: Valuation,
) -> Result<Vec<CharValueReport<BiCyclo>>> {
    require_var(mx, Var::X)?;
    check_matrix(q, mx)?;
    let params = *q.ring();
    let mut numerators = Vec::new();
    for (star, (a, b)) in ["α", "β"].into_iter().zip(pairs(Var::X)) {
        let (u, v) = (q.get(a), q.get(b));
        let sharp = u.mul_series1(mx.entry(1, 1))?.sub(&v.mul_series1(mx.entry(1, 0))?)?;
        let flat = v.mul_series1(mx.entry(0, 0))?.sub(&u.mul_series1(mx.entry(0, 1))?)?;
        numerators.push((format!("# numerator, ⋆ = {star}"), sharp));
        numerators.push((format!("♭ numerator, ⋆ = {star}"), flat));
    }
    levels
        .iter()
        .map(|&lv| {
            let ch = BiChar::new(&params, lv)?;
            let mut report = CharValueReport::new(ch.specs.clone(), threshold);
            for (label, s) in &numerators {
                report.push_residual(label.clone(), ch.eval(s)?.residual());
            }
            Ok(report)
        })
        .collect()
}

/// Value of the sharp components at `ω`: with `C`, `D`, `E` the constants of
/// the interpolation and derivative relations,
/// `⋆^{n_p̄}·L_{#,⋆}(ω)·∂det(Mx)(ω_p) = K_ω` for both `⋆`, where
/// `K_ω = m22 D + ∂m22·α^{-n_p}C - m21 E - ∂m21·β^{-n_p}C` at `ω_p`.
pub fn sharp_value_check(
    q: &Quadruple<QuadExtElem>,
    mx: &MatrixSeries<QuadExtElem>,
    levels: &[(u32, u32)],
    threshold: Valuation,
) -> Result<Vec<CharValueReport<BiCyclo>>> {
    let (half, _) = factor_x(q, mx)?;
    let params = *q.ring();
    let dm = mx.derivative();
    let ddet = mx.det()?.derivative();
    let interp = verify_interpolation4(q, levels, threshold)?;
    let deriv = derivative_relation(q, levels, threshold)?;
    levels
        .iter()
        .zip(interp.into_iter().zip(deriv))
        .map(|(&lv, (ir, dr))| {
            let ch = BiChar::new(&params, lv)?;
            let at = |s: &Series1<QuadExtElem>| -> Result<BiCyclo> { Ok(ch.lift_x(s.reduce_mod_cyclo(&ch.rx)?)) };
            let c = ir.c_omega.expect("interpolation reports C_ω");
            let d = dr.d_omega.expect("derivative reports D_ω");
            let e = dr.e_omega.expect("derivative reports E_ω");
            let a_inv = ch.scalar(&ch.alpha_p.inv()?);
            let b_inv = ch.scalar(&ch.beta_p.inv()?);
            let k = at(mx.entry(1, 1))?
                .mul(&d)
                .add(&at(dm.entry(1, 1))?.mul(&a_inv).mul(&c))
                .sub(&at(mx.entry(1, 0))?.mul(&e))
                .sub(&at(dm.entry(1, 0))?.mul(&b_inv).mul(&c));
            let ddet_w = at(&ddet)?;
            let mut report = CharValueReport::new(ch.specs.clone(), threshold);
            for (label, idx, root) in [("L_#α value", 0, &ch.alpha_q), ("L_#β value", 2, &ch.beta_q)] {
                let v = ch.eval(half.get(idx))?.mul(&ch.scalar(root)).mul(&ddet_w);
                report.push_residual(label, v.sub(&k).residual());
            }
            let nonzero = if ddet_w.is_zero() { Valuation::ZERO } else { Valuation::Infinite };
            report.push_residual("∂det(Mx)(ω_p) nonzero", nonzero);
            report.c_omega = Some(c);
            report.d_omega = Some(d);
            report.e_omega = Some(e);
            report.k_omega = Some(k);
            Ok(report)
        })
        .collect()
}

/// Factoring `X` with the one-variable routine after fixing `Y` at a
/// character of level `level_y` agrees with fixing `Y` after [`factor_x`].
/// Returns the least residual over the four components.
pub fn partial_apply_consistency(
    q: &Quadruple<QuadExtElem>,
    mx: &MatrixSeries<QuadExtElem>,
    level_y: u32,
) -> Result<Valuation> {
    let params = *q.ring();
    let ring = CycloRing::new(params, params.p(), level_y)?;
    let (half, _) = factor_x(q, mx)?;
    let lift = |s: &Series1<QuadExtElem>| s.map(ring.clone(), |c| Cyclo::constant(&ring, c.clone()));
    let e = mx.entries();
    let mx_c = MatrixSeries::new([[lift(&e[0][0]), lift(&e[0][1])], [lift(&e[1][0]), lift(&e[1][1])]], mx.level())?;
    let mut worst = Valuation::Infinite;
    for (a, b) in pairs(Var::X) {
        let u = q.get(a).partial_apply(Var::Y, &ring)?;
        let v = q.get(b).partial_apply(Var::Y, &ring)?;
        let f = crate::factor::factor_pair(&u, &v, &mx_c)?;
        worst = worst.min(f.sharp.residual_against(&half.get(a).partial_apply(Var::Y, &ring)?)?);
        worst = worst.min(f.flat.residual_against(&half.get(b).partial_apply(Var::Y, &ring)?)?);
    }
    Ok(worst)
}

/// Seeded bounded quadruple with coefficients supported on
/// `i < support.0`, `j < support.1`.
pub fn random_quadruple(
    params: &FormParams,
    degs: (usize, usize),
    support: (usize, usize),
    seed: u64,
) -> Quadruple<QuadExtElem> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut part = || random_bounded_quad2_with(&mut rng, params, degs, support);
    Quadruple { parts: [part(), part(), part(), part()] }
}

/// Result of synthesising a quadruple from random bounded parts and
/// factoring it again.
#[derive(Clone, Debug)]
pub struct QuadRoundTrip {
    pub seed: u64,
    pub levels: (u32, u32),
    /// Least residual between recovered and original bounded parts.
    pub recovered: Valuation,
    /// Least residual between the Kronecker recombination of the recovered
    /// parts and the synthesised input.
    pub recombined: Valuation,
    pub division_loss: i64,
    /// Input precision minus recovered precision, in half-digits.
    pub loss: i64,
    pub growth: Vec<GrowthMeasurement>,
}

impl QuadRoundTrip {
    pub fn growth_passed(&self) -> bool {
        self.growth.iter().all(GrowthMeasurement::passed)
    }
}

pub fn quad_round_trip(params: &FormParams, degs: (usize, usize), seed: u64) -> Result<QuadRoundTrip> {
    let mx = limit_matrix::<QuadExtElem>(params, degs.0)?;
    let my = limit_matrix::<QuadExtElem>(params, degs.1)?.with_var(Var::Y);
    let bounded = random_quadruple(params, degs, degs, seed);
    let input = combine_full(&bounded, &mx, &my)?;
    let (recovered_q, division_loss) = factor_full(&input, &mx, &my)?;
    let recovered = recovered_q.residual_against(&bounded)?;
    let recombined = combine_full(&recovered_q, &mx, &my)?.residual_against(&input)?;
    let loss = match (Valuation::digits(params.precision() as i64), recovered) {
        (Valuation::Finite(i), Valuation::Finite(r)) => (i - r).max(0),
        _ => 0,
    };
    let allowance = loss as f64 / 2.0;
    let growth = recovered_q.parts().iter().map(|s| growth_order2(s, params.p(), 0.0, 0.0, allowance)).collect();
    Ok(QuadRoundTrip {
        seed,
        levels: (mx.level().unwrap_or(0), my.level().unwrap_or(0)),
        recovered,
        recombined,
        division_loss,
        loss,
        growth,
    })
}
