use num_bigint::BigInt;
use num_rational::BigRational;
use sharpflat::exact::RationalQuad;
use sharpflat::logmatrix::{
    companion_matrix, companion_product, compare_det, det_check, limit_det, logmatrix_level, pollack_blocks,
    rank1_at_level, stabilization_between, stabilization_check, MatrixSeries,
};
use sharpflat::poly::IntPoly;
use sharpflat::series::cyclotomic_poly;
use sharpflat::{Coefficient, FormParams, QuadExtElem, Series1, Valuation, Var};

fn params(p: u32, a_p: i64, eps: i64) -> FormParams {
    FormParams::with_precision(p, a_p, eps, 60).unwrap()
}

type Mat = [[RationalQuad; 2]; 2];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

// Inverse by the adjugate, independent of the closed form for C^(-k) A.
fn mat_inv(a: &Mat) -> Mat {
    let det = a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]));
    let d = det.inv().unwrap();
    [[a[1][1].mul(&d), a[0][1].neg().mul(&d)], [a[1][0].neg().mul(&d), a[0][0].mul(&d)]]
}

fn rq(pr: &FormParams, a: i64, b: i64) -> RationalQuad {
    RationalQuad::new(*pr, BigRational::from_integer(BigInt::from(a)), BigRational::from_integer(BigInt::from(b)))
}

/// `C_1⋯C_n · C^(-n-2) · A` built from the raw definitions with explicit
/// matrix inversion.
fn naive_logmatrix(pr: &FormParams, n: u32, deg: usize) -> MatrixSeries<RationalQuad> {
    let c: Mat = [[rq(pr, pr.a_p(), 0), rq(pr, 1, 0)], [rq(pr, -pr.root_product(), 0), rq(pr, 0, 0)]];
    let a: Mat = [[rq(pr, -1, 0), rq(pr, -1, 0)], [rq(pr, pr.a_p(), -1), rq(pr, 0, 1)]];
    let c_inv = mat_inv(&c);
    let mut tail = a;
    for _ in 0..n + 2 {
        tail = mat_mul(&c_inv, &tail);
    }
    let mut m = MatrixSeries::identity(Var::X, pr, deg);
    for k in 1..=n {
        m = m.mul(&companion_matrix(pr, k, deg).unwrap()).unwrap();
    }
    m.mul(&MatrixSeries::from_constants(&tail, Var::X, deg)).unwrap()
}

#[test]
fn closed_form_matches_naive_product() {
    for (p, a_p, eps) in [(3, 0, 1), (3, 3, 1), (3, -3, 2), (5, 5, -1)] {
        let pr = params(p, a_p, eps);
        for n in 1..=2 {
            let fast = logmatrix_level::<RationalQuad>(&pr, n, 12).unwrap();
            let slow = naive_logmatrix(&pr, n, 12);
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(fast.entry(i, j).coeffs(), slow.entry(i, j).coeffs(), "p={p} a_p={a_p} n={n} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn padic_matrix_agrees_with_exact() {
    let pr = params(3, 3, 1);
    let exact = logmatrix_level::<RationalQuad>(&pr, 2, 10).unwrap();
    let padic = logmatrix_level::<QuadExtElem>(&pr, 2, 10).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..10 {
                let e = exact.entry(i, j).coeff(k).to_padic();
                let diff = e.sub(padic.entry(i, j).coeff(k));
                assert!(diff.residual() >= Valuation::digits(40), "({i},{j}) coeff {k}: {}", diff.residual());
            }
        }
    }
}

#[test]
fn level_one_constant_term() {
    // At X = 0 every C_k equals C, so M^(1)(0) = C^(-2) A = A diag(α^-2, β^-2).
    let pr = params(3, 3, 1);
    let m = logmatrix_level::<RationalQuad>(&pr, 1, 4).unwrap();
    let alpha = rq(&pr, 0, 1);
    let inv_sq = alpha.mul(&alpha).inv().unwrap();
    assert_eq!(*m.entry(0, 0).coeff(0), inv_sq.neg());
    // α^-2 = (2 - θ)/3 when θ² = 3θ - 3.
    let expected = RationalQuad::new(
        pr,
        BigRational::new(BigInt::from(2), BigInt::from(3)),
        BigRational::new(BigInt::from(-1), BigInt::from(3)),
    );
    assert_eq!(inv_sq, expected);
}

#[test]
fn stabilisation_grid() {
    for (p, a_p) in [(3, 0), (3, 3), (5, 0), (5, 5)] {
        let pr = params(p, a_p, 1);
        for n in 1..=2 {
            let d = (p as usize).pow(n + 1);
            let report = stabilization_check(&pr, n, d).unwrap();
            assert!(report.passed, "p={p} a_p={a_p} n={n}: {:?}", report.offending);
            assert!(report.witnessed >= Valuation::digits(30));
        }
    }
}

#[test]
fn stabilisation_detects_wrong_level() {
    let pr = params(3, 3, 1);
    let upper = logmatrix_level::<QuadExtElem>(&pr, 3, 27).unwrap();
    let lower = logmatrix_level::<QuadExtElem>(&pr, 1, 27).unwrap();
    let report = stabilization_between(&upper, &lower, 3, 2).unwrap();
    assert!(!report.passed);
    assert!(report.offending.is_some());
}

#[test]
fn stabilisation_detects_perturbation() {
    let pr = params(5, 5, 1);
    let upper = logmatrix_level::<QuadExtElem>(&pr, 2, 25).unwrap();
    let mut lower = logmatrix_level::<QuadExtElem>(&pr, 1, 25).unwrap();
    let mut s = lower.entry(1, 1).clone();
    let bumped = s.coeff(3).add(&QuadExtElem::from_i64(&pr, 1));
    s.set_coeff(3, bumped);
    lower.set_entry(1, 1, s).unwrap();
    let report = stabilization_between(&upper, &lower, 5, 1).unwrap();
    assert!(!report.passed);
    assert_eq!(report.offending.unwrap().row, 1);
}

#[test]
fn determinant_identities() {
    for (p, a_p, eps) in [(3, 0, 1), (3, 3, 1), (5, 0, 2), (5, 5, 1), (3, 6, -1)] {
        let pr = params(p, a_p, eps);
        for n in 1..=2 {
            let report = det_check(&pr, n, 20).unwrap();
            assert!(report.passed(), "p={p} a_p={a_p} eps={eps} n={n}: {report:?}");
            assert_eq!(report.exact.residual, Valuation::Infinite);
        }
    }
}

#[test]
fn determinant_approaches_limit() {
    let pr = params(3, 3, 1);
    let d1 = det_check(&pr, 1, 20).unwrap().limit_distance;
    let d2 = det_check(&pr, 2, 20).unwrap().limit_distance;
    assert!(d2 > d1, "{d1} then {d2}");
}

#[test]
fn limit_det_matches_high_level_determinant() {
    let pr = params(3, 3, 1);
    let lim = limit_det(&pr, 3).unwrap();
    let det = logmatrix_level::<QuadExtElem>(&pr, 4, 3).unwrap().det().unwrap();
    for k in 0..3 {
        let v = det.coeff(k).sub(lim.coeff(k)).residual();
        assert!(v >= Valuation::digits(1), "coeff {k}: {v}");
    }
}

#[test]
fn determinant_check_rejects_perturbation() {
    let pr = params(3, 3, 1);
    let mut m = logmatrix_level::<RationalQuad>(&pr, 1, 8).unwrap();
    let mut s = m.entry(0, 0).clone();
    s.set_coeff(2, s.coeff(2).add(&RationalQuad::from_i64(&pr, 1)));
    m.set_entry(0, 0, s).unwrap();
    let cmp = compare_det(&m, 1).unwrap();
    assert!(!cmp.matches);
    assert_eq!(cmp.first_mismatch, Some(2));
}

#[test]
fn integer_determinant_of_companion_product() {
    let pr = params(5, 5, 3);
    let h = companion_product(&pr, 3, None).unwrap();
    let det = h[0][0].mul(&h[1][1]).sub(&h[0][1].mul(&h[1][0]));
    let mut expected = IntPoly::constant(BigInt::from(27));
    for k in 1..=3 {
        expected = expected.mul(&cyclotomic_poly(5, k).unwrap());
    }
    assert_eq!(det, expected);
}

#[test]
fn rank_one_at_characters() {
    let threshold = Valuation::digits(25);
    for (p, a_p, level_n) in [(3, 0, 3), (3, 3, 3), (5, 0, 2), (5, 5, 2)] {
        let pr = params(p, a_p, 1);
        let deg = (p as usize).pow(level_n);
        let m = logmatrix_level::<QuadExtElem>(&pr, level_n, deg).unwrap();
        for level in 1..=2 {
            let report = rank1_at_level(&m, level, threshold).unwrap();
            assert!(report.passed(), "p={p} a_p={a_p} m={level}: {:?}", report.residuals);
            assert!(report.a_omega.is_some() && report.b_omega.is_some());
        }
    }
}

#[test]
fn rank_one_fails_for_identity() {
    let pr = params(3, 3, 1);
    let m = MatrixSeries::<QuadExtElem>::identity(Var::X, &pr, 9);
    let report = rank1_at_level(&m, 1, Valuation::digits(25)).unwrap();
    assert!(!report.passed());
}

#[test]
fn pollack_blocks_exact() {
    for p in [3, 5] {
        for eps in [1, -2] {
            let pr = params(p, 0, eps);
            for m in 1..=2 {
                let blocks = pollack_blocks(&pr, m).unwrap();
                assert!(blocks.passed(), "p={p} eps={eps} m={m}");
            }
        }
    }
}

#[test]
fn pollack_plus_block_at_one_pair() {
    let pr = params(3, 0, 1);
    let blocks = pollack_blocks(&pr, 1).unwrap();
    assert_eq!(blocks.plus, cyclotomic_poly(3, 2).unwrap().scale(&BigInt::from(-1)));
    assert_eq!(blocks.minus, cyclotomic_poly(3, 1).unwrap().scale(&BigInt::from(-1)));
    let (plus, _) = blocks.series(&pr, 4);
    assert_eq!(plus.deg(), 4);
}

#[test]
fn zero_level_rejected() {
    let pr = params(3, 3, 1);
    assert!(logmatrix_level::<QuadExtElem>(&pr, 0, 5).is_err());
    let s: Series1<QuadExtElem> = Series1::zero(Var::X, &pr, 3);
    assert!(s.is_zero());
}
