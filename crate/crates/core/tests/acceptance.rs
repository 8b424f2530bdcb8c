//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use sharpflat::factor::{growth_order, pair_round_trip};
use sharpflat::logmatrix::{det_check, logmatrix_level, pollack_blocks, rank1_at_level, stabilization_check};
use sharpflat::series::log1p_over_x;
use sharpflat::twovar::{
    combine_full, derivative_relation, quad_round_trip, random_quadruple, sharp_value_check, vanish_check,
    verify_interpolation4,
};
use sharpflat::{FormParams, QuadExtElem, Valuation, Var};

const N: u32 = 60;
const GRID: [(u32, i64); 4] = [(3, 0), (3, 3), (5, 0), (5, 5)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(p: u32, a_p: i64) -> FormParams {
    FormParams::with_precision(p, a_p, 1, N).expect("valid parameters")
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: sharpflat::Error) -> String {
    e.to_string()
}

fn stabilization() -> Outcome {
    let mut least = Valuation::Infinite;
    for (p, a_p) in GRID {
        for n in 1..=2 {
            let d = (p as usize).pow(n + 1);
            let r = stabilization_check(&params(p, a_p), n, d).map_err(err)?;
            require(r.passed && r.witnessed >= Valuation::digits(30), || {
                format!("p={p} a_p={a_p} n={n}: offending {:?}, witnessed {}", r.offending, r.witnessed)
            })?;
            least = least.min(r.witnessed);
        }
    }
    Ok(format!("least witnessed precision {least}"))
}

fn determinant() -> Outcome {
    let mut distances = Vec::new();
    for (p, a_p) in GRID {
        let pr = params(p, a_p);
        let r1 = det_check(&pr, 1, (p as usize).pow(2)).map_err(err)?;
        let r2 = det_check(&pr, 2, (p as usize).pow(3)).map_err(err)?;
        for r in [&r1, &r2] {
            require(r.integer_identity && r.exact.matches && r.exact.residual == Valuation::Infinite, || {
                format!("p={p} a_p={a_p} n={}: exact identity fails at {:?}", r.n, r.exact.first_mismatch)
            })?;
            require(r.padic.matches, || format!("p={p} a_p={a_p} n={}: p-adic residual {}", r.n, r.padic.residual))?;
        }
        require(r2.limit_distance > r1.limit_distance, || {
            format!("p={p} a_p={a_p}: distance to limit {} then {}", r1.limit_distance, r2.limit_distance)
        })?;
        distances.push(format!("{}→{}", r1.limit_distance, r2.limit_distance));
    }
    Ok(format!("zero residual; limit distance {}", distances.join(", ")))
}

fn rank_one() -> Outcome {
    let threshold = Valuation::digits(25);
    let mut least = Valuation::Infinite;
    for (p, a_p) in GRID {
        let n = if p == 3 { 3 } else { 2 };
        let pr = params(p, a_p);
        let m = logmatrix_level::<QuadExtElem>(&pr, n, (p as usize).pow(n)).map_err(err)?;
        for level in 1..=2 {
            let r = rank1_at_level(&m, level, threshold).map_err(err)?;
            require(r.passed(), || format!("p={p} a_p={a_p} m={level}: {:?}", r.failures()))?;
            least = least.min(r.min_residual());
        }
    }
    Ok(format!("least residual {least}"))
}

fn one_variable_round_trip() -> Outcome {
    let (mut least, mut worst_loss) = (Valuation::Infinite, 0);
    for (p, a_p) in GRID {
        let pr = params(p, a_p);
        for seed in 0..20 {
            let r = pair_round_trip(&pr, 27, seed).map_err(err)?;
            require(r.recovered >= Valuation::digits(30) && r.recombined >= Valuation::digits(30), || {
                format!("p={p} a_p={a_p} seed={seed}: recovered {}, recombined {}", r.recovered, r.recombined)
            })?;
            require(r.loss <= 60, || format!("p={p} a_p={a_p} seed={seed}: loss {} half-digits", r.loss))?;
            require(r.growth_sharp.passed() && r.growth_flat.passed(), || format!("p={p} a_p={a_p} seed={seed}: growth"))?;
            least = least.min(r.recovered);
            worst_loss = worst_loss.max(r.loss);
        }
    }
    Ok(format!("80 runs, least recovered precision {least}, worst loss {}", Valuation::from_twice(worst_loss)))
}

fn pollack() -> Outcome {
    for p in [3, 5] {
        for m in 1..=2 {
            let b = pollack_blocks(&params(p, 0), m).map_err(err)?;
            require(b.passed(), || format!("p={p} m={m}: blocks differ from closed form"))?;
        }
    }
    Ok("exact for p ∈ {3, 5}, m ∈ {1, 2}".into())
}

fn two_variable_round_trip() -> Outcome {
    let (mut least, mut least_rec, mut worst_loss) = (Valuation::Infinite, Valuation::Infinite, 0);
    for seed in 0..10u64 {
        let (p, a_p) = GRID[seed as usize % GRID.len()];
        let pr = params(p, a_p);
        let r = quad_round_trip(&pr, (27, 27), seed).map_err(err)?;
        require(r.recovered >= Valuation::digits(25) && r.recombined >= Valuation::digits(25), || {
            format!("p={p} a_p={a_p} seed={seed}: recovered {}, recombined {}", r.recovered, r.recombined)
        })?;
        require(r.growth_passed(), || format!("p={p} a_p={a_p} seed={seed}: growth above loss"))?;
        least = least.min(r.recovered);
        least_rec = least_rec.min(r.recombined);
        worst_loss = worst_loss.max(r.loss);
    }
    Ok(format!(
        "10 runs, least recovered {least}, least recombined {least_rec}, worst loss {}",
        Valuation::from_twice(worst_loss)
    ))
}

fn interpolation() -> Outcome {
    let threshold = Valuation::digits(20);
    let levels = [(1, 1), (1, 2), (2, 1)];
    let d = 27;
    let mut least = Valuation::Infinite;
    for (p, a_p) in GRID {
        let pr = params(p, a_p);
        let mx = logmatrix_level::<QuadExtElem>(&pr, 2, d).map_err(err)?;
        let my = mx.clone().with_var(Var::Y);
        // Pre-images supported below d - deg(C_1 C_2) keep every product exact.
        let support = d - (p as usize * p as usize - 1);
        for seed in 0..3 {
            let bounded = random_quadruple(&pr, (d, d), (support, support), seed);
            let q = combine_full(&bounded, &mx, &my).map_err(err)?;
            let suites = [
                ("interpolation", verify_interpolation4(&q, &levels, threshold).map_err(err)?),
                ("derivative", derivative_relation(&q, &levels, threshold).map_err(err)?),
                ("vanish", vanish_check(&q, &mx, &levels, threshold).map_err(err)?),
                ("sharp value", sharp_value_check(&q, &mx, &levels, threshold).map_err(err)?),
            ];
            for (name, reports) in &suites {
                for r in reports {
                    require(r.passed(), || {
                        format!("p={p} a_p={a_p} seed={seed} {name} at {:?}: {:?}", r.levels(), r.failures())
                    })?;
                    least = least.min(r.min_residual());
                }
            }
        }
    }
    Ok(format!("least residual {least}"))
}

fn growth() -> Outcome {
    let pr = params(3, 0);
    let log = log1p_over_x(pr.base_ring(), 30);
    let b0 = growth_order(&log, 3, 0.0, 3.0);
    let b1 = growth_order(&log, 3, 1.0, 1.0);
    require(b0.bound == 3.0 && b0.argmax == Some((26, 0)), || format!("B(0) = {} at {:?}", b0.bound, b0.argmax))?;
    require(b1.bound <= 1.0, || format!("B(1) = {}", b1.bound))?;
    Ok(format!("B(0) = {} at n = 26, B(1) = {:.3}", b0.bound, b1.bound))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 stabilization", stabilization),
        ("2 determinant", determinant),
        ("3 rank-one evaluation", rank_one),
        ("4 one-variable round trip", one_variable_round_trip),
        ("5 plus/minus blocks", pollack),
        ("6 two-variable round trip", two_variable_round_trip),
        ("7 interpolation and derivative relations", interpolation),
        ("8 growth discrimination", growth),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
