//! Shared inputs for the benchmarks.

use sharpflat::factor::random_bounded_quad;
use sharpflat::logmatrix::{limit_matrix, MatrixSeries};
use sharpflat::{FormParams, QuadExtElem, Series1, Var};

pub const GRID: [(u32, i64); 3] = [(3, 0), (3, 3), (5, 0)];

pub fn params(p: u32, a_p: i64) -> FormParams {
    FormParams::with_precision(p, a_p, 1, 60).expect("valid parameters")
}

/// A limit matrix and a pair (μ_α, μ_β) of bounded random series of degree `deg`.
pub fn pair_input(params: &FormParams, deg: usize) -> (MatrixSeries<QuadExtElem>, Series1<QuadExtElem>, Series1<QuadExtElem>) {
    let m = limit_matrix(params, deg).expect("matrix builds");
    let a = random_bounded_quad(params, Var::X, deg, 1);
    let b = random_bounded_quad(params, Var::X, deg, 2);
    (m, a, b)
}
