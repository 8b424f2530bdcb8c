use super::{Cyclo, CycloRing, Series1, Var};
use crate::error::{Error, Result};
use crate::ring::Coefficient;
use crate::valuation::Valuation;

/// `Σ c_{i,j} X^i Y^j` for `i < deg_x`, `j < deg_y`, stored row-major in `i`.
#[derive(Clone, Debug)]
pub struct Series2<C: Coefficient> {
    ring: C::Ring,
    dx: usize,
    dy: usize,
    coeffs: Vec<C>,
}

impl<C: Coefficient> Series2<C> {
    pub fn zero(ring: &C::Ring, dx: usize, dy: usize) -> Self {
        Series2 { ring: ring.clone(), dx, dy, coeffs: vec![C::zero(ring); dx * dy] }
    }

    pub fn from_fn(ring: &C::Ring, dx: usize, dy: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut coeffs = Vec::with_capacity(dx * dy);
        for i in 0..dx {
            for j in 0..dy {
                coeffs.push(f(i, j));
            }
        }
        Series2 { ring: ring.clone(), dx, dy, coeffs }
    }

    /// `f(X)·g(Y)`.
    pub fn outer(fx: &Series1<C>, gy: &Series1<C>) -> Result<Self> {
        if fx.var() != Var::X || gy.var() != Var::Y {
            return Err(Error::VariableMismatch { expected: "X then Y".into(), found: format!("{} then {}", fx.var(), gy.var()) });
        }
        if fx.ring() != gy.ring() {
            return Err(Error::RingMismatch);
        }
        Ok(Series2::from_fn(fx.ring(), fx.deg(), gy.deg(), |i, j| fx.coeff(i).mul(gy.coeff(j))))
    }

    /// Embeds a one-variable series along its own axis, with degree `other_deg`
    /// in the remaining variable.
    pub fn from_series1(s: &Series1<C>, other_deg: usize) -> Self {
        let zero = C::zero(s.ring());
        match s.var() {
            Var::X => Series2::from_fn(s.ring(), s.deg(), other_deg, |i, j| if j == 0 { s.coeff(i).clone() } else { zero.clone() }),
            Var::Y => Series2::from_fn(s.ring(), other_deg, s.deg(), |i, j| if i == 0 { s.coeff(j).clone() } else { zero.clone() }),
        }
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn degs(&self) -> (usize, usize) {
        (self.dx, self.dy)
    }

    pub fn deg(&self, axis: Var) -> usize {
        match axis {
            Var::X => self.dx,
            Var::Y => self.dy,
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> &C {
        &self.coeffs[i * self.dy + j]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: C) {
        self.coeffs[i * self.dy + j] = c;
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// The one-variable series along `axis` at position `index` of the other
    /// axis: `fiber(X, j) = Σ_i c_{i,j} X^i`.
    pub fn fiber(&self, axis: Var, index: usize) -> Series1<C> {
        match axis {
            Var::X => Series1::from_fn(Var::X, &self.ring, self.dx, |i| self.coeff(i, index).clone()),
            Var::Y => Series1::from_fn(Var::Y, &self.ring, self.dy, |j| self.coeff(index, j).clone()),
        }
    }

    /// Reassembles a series from its fibers along `axis`.
    pub fn from_fibers(ring: &C::Ring, axis: Var, fibers: &[Series1<C>]) -> Self {
        let len = fibers.iter().map(Series1::deg).min().unwrap_or(0);
        match axis {
            Var::X => Series2::from_fn(ring, len, fibers.len(), |i, j| fibers[j].coeff(i).clone()),
            Var::Y => Series2::from_fn(ring, fibers.len(), len, |i, j| fibers[i].coeff(j).clone()),
        }
    }

    pub fn map_fibers(&self, axis: Var, f: impl Fn(&Series1<C>) -> Result<Series1<C>>) -> Result<Self> {
        let count = self.deg(axis.other());
        let fibers = (0..count).map(|k| f(&self.fiber(axis, k))).collect::<Result<Vec<_>>>()?;
        Ok(Series2::from_fibers(&self.ring, axis, &fibers))
    }

    fn check_ring(&self, rhs: &Self) -> Result<()> {
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let dx = self.dx.min(rhs.dx);
        let dy = self.dy.min(rhs.dy);
        Series2::from_fn(&self.ring, dx, dy, |i, j| f(self.coeff(i, j), rhs.coeff(i, j)))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_ring(rhs)?;
        Ok(self.zip(rhs, C::add))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_ring(rhs)?;
        Ok(self.zip(rhs, C::sub))
    }

    pub fn neg(&self) -> Self {
        Series2 { ring: self.ring.clone(), dx: self.dx, dy: self.dy, coeffs: self.coeffs.iter().map(C::neg).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series2 { ring: self.ring.clone(), dx: self.dx, dy: self.dy, coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    /// Full two-variable Cauchy product, truncated to the smaller degree in
    /// each variable.
    pub fn mul_trunc(&self, rhs: &Self) -> Result<Self> {
        self.check_ring(rhs)?;
        let dx = self.dx.min(rhs.dx);
        let dy = self.dy.min(rhs.dy);
        let mut out: Series2<C> = Series2::zero(&self.ring, dx, dy);
        for i1 in 0..dx {
            for j1 in 0..dy {
                let a = self.coeff(i1, j1);
                for i2 in 0..dx - i1 {
                    for j2 in 0..dy - j1 {
                        let idx = (i1 + i2) * dy + j1 + j2;
                        out.coeffs[idx] = out.coeffs[idx].add(&a.mul(rhs.coeff(i2, j2)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product with a one-variable series, fiber by fiber along its variable.
    pub fn mul_series1(&self, s: &Series1<C>) -> Result<Self> {
        self.map_fibers(s.var(), |fiber| fiber.mul_trunc(s))
    }

    /// Division by a one-variable series along its variable, fiber by fiber.
    /// Returns the quotient and the worst per-fiber precision loss.
    pub fn divide_series1(&self, den: &Series1<C>) -> Result<(Self, i64)> {
        let axis = den.var();
        let count = self.deg(axis.other());
        let mut loss = 0;
        let mut fibers = Vec::with_capacity(count);
        for k in 0..count {
            let q = self.fiber(axis, k).divide(den)?;
            loss = loss.max(q.loss);
            fibers.push(q.series);
        }
        Ok((Series2::from_fibers(&self.ring, axis, &fibers), loss))
    }

    /// Formal partial derivative along `axis`.
    pub fn derivative(&self, axis: Var) -> Self {
        self.map_fibers(axis, |f| Ok(f.derivative())).expect("derivative is infallible")
    }

    /// Fixes the `axis` variable at a character of the given level: every
    /// fiber along `axis` is reduced modulo the cyclotomic polynomial, leaving
    /// a series in the other variable with coefficients in `R_m ⊗ C`.
    pub fn partial_apply(&self, axis: Var, ring: &CycloRing<C>) -> Result<Series1<Cyclo<C>>> {
        let rest = axis.other();
        let count = self.deg(rest);
        let coeffs = (0..count)
            .map(|k| self.fiber(axis, k).reduce_mod_cyclo(ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(Series1::new(rest, ring.clone(), coeffs))
    }

    pub fn truncate(&self, dx: usize, dy: usize) -> Self {
        let dx = dx.min(self.dx);
        let dy = dy.min(self.dy);
        Series2::from_fn(&self.ring, dx, dy, |i, j| self.coeff(i, j).clone())
    }

    pub fn precision(&self) -> Valuation {
        self.coeffs.iter().map(C::precision).min().unwrap_or(Valuation::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    pub fn residual_against(&self, rhs: &Self) -> Result<Valuation> {
        Ok(self.sub(rhs)?.coeffs.iter().map(C::residual).min().unwrap_or(Valuation::Infinite))
    }
}
