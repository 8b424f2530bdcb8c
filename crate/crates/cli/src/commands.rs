use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use sharpflat::character::CharValueReport;
use sharpflat::factor::{combine_pair, factor_pair, growth_order, growth_order2, pair_round_trip, synthesize_pair,
    vanish_pair, verify_pair, GrowthMeasurement};
use sharpflat::logmatrix::{
    det_check, exact_support, least_level, logmatrix_level, pollack_blocks, rank1_at_level, stabilization_check,
};
use sharpflat::series::log1p_over_x;
use sharpflat::twovar::{
    combine_full, derivative_relation, factor_full, partial_apply_consistency, quad_round_trip, random_quadruple,
    sharp_value_check, vanish_check, verify_interpolation4, Quadruple, OUTPUT_LABELS,
};
use sharpflat::{CycloRing, FormParams, QuadExtElem, Series1, Valuation, Var};

use crate::codec::{decode_series1, decode_series2, params_json, valuation, Encode};
use crate::{CliError, JobArgs, Report};

struct Builder {
    body: Map<String, Value>,
    failures: Vec<String>,
}

impl Builder {
    fn new(params: &FormParams) -> Self {
        let mut body = Map::new();
        body.insert("params".into(), params_json(params));
        Builder { body, failures: Vec::new() }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.body.insert(key.into(), v);
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    /// Records a character report, adding a failure per identity below
    /// threshold.
    fn chars<V>(&mut self, suite: &str, r: &CharValueReport<V>) -> Value {
        for label in r.failures() {
            self.fail(format!("{suite} at levels {:?}: {label}", r.levels()));
        }
        let residuals: Map<String, Value> = r.residuals.iter().map(|x| (x.label.clone(), valuation(x.valuation))).collect();
        json!({"levels": r.levels(), "passed": r.passed(), "residuals": residuals})
    }

    fn finish(self) -> Report {
        Report { body: self.body, failures: self.failures }
    }
}

fn threshold(a: &JobArgs) -> Valuation {
    Valuation::digits(a.threshold)
}

fn growth_json(g: &GrowthMeasurement) -> Value {
    let bound = if g.bound.is_finite() { json!(g.bound) } else { Value::Null };
    json!({"bound": bound, "argmax": g.argmax.map(|(i, j)| vec![i, j]), "allowance": g.allowance, "passed": g.passed()})
}

fn loss_json(half_digits: i64) -> Value {
    valuation(Valuation::from_twice(half_digits))
}

pub fn logmatrix(a: &JobArgs) -> Result<Report, CliError> {
    let params = a.params()?;
    let n = a.level.unwrap_or_else(|| least_level(params.p(), a.deg));
    let m = logmatrix_level::<QuadExtElem>(&params, n, a.deg)?;
    let mut b = Builder::new(&params);
    b.set("level", json!(n));
    b.set("deg", json!(a.deg));
    let e = m.entries();
    b.set("entries", json!([[e[0][0].encode(), e[0][1].encode()], [e[1][0].encode(), e[1][1].encode()]]));
    Ok(b.finish())
}

fn int_coeffs(poly: &sharpflat::poly::IntPoly) -> Value {
    Value::from(poly.coeffs().iter().map(BigInt::to_string).collect::<Vec<_>>())
}

pub fn pollack(a: &JobArgs) -> Result<Report, CliError> {
    let params = a.params()?;
    let mut b = Builder::new(&params);
    let mut blocks = Vec::new();
    for &m in &a.levels {
        let r = pollack_blocks(&params, m)?;
        if !r.passed() {
            b.fail(format!("pollack blocks at m = {m} differ from the cyclotomic products"));
        }
        blocks.push(json!({"m": m, "plus": int_coeffs(&r.plus), "minus": int_coeffs(&r.minus), "passed": r.passed()}));
    }
    b.set("blocks", Value::from(blocks));
    Ok(b.finish())
}

fn matrix_for(params: &FormParams, a: &JobArgs, var: Var, deg: usize) -> Result<sharpflat::logmatrix::MatrixSeries<QuadExtElem>, CliError> {
    let n = a.level.unwrap_or_else(|| least_level(params.p(), deg));
    Ok(logmatrix_level::<QuadExtElem>(params, n, deg)?.with_var(var))
}

fn field<'a>(input: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    input.get(key).ok_or_else(|| CliError::Input(format!("missing field \"{key}\"")))
}

pub fn factor1(a: &JobArgs) -> Result<Report, CliError> {
    let params = a.params()?;
    let input = a.read_input()?;
    let mu_a = decode_series1(field(&input, "mu_alpha")?, &params)?;
    let mu_b = decode_series1(field(&input, "mu_beta")?, &params)?;
    let m = matrix_for(&params, a, mu_a.var(), mu_a.deg())?;
    let f = factor_pair(&mu_a, &mu_b, &m)?;
    let (ra, rb) = combine_pair(&f.sharp, &f.flat, &m)?;
    let residual = ra.residual_against(&mu_a)?.min(rb.residual_against(&mu_b)?);
    let mut b = Builder::new(&params);
    if residual < threshold(a) {
        b.fail(format!("recombination residual {residual} below threshold"));
    }
    b.set("level", json!(m.level()));
    b.set("sharp", f.sharp.encode());
    b.set("flat", f.flat.encode());
    b.set("division_loss", loss_json(f.loss));
    b.set("recombination_residual", valuation(residual));
    Ok(b.finish())
}

fn decode_quadruple(input: &Value, params: &FormParams) -> Result<Quadruple<QuadExtElem>, CliError> {
    let parts = field(input, "parts")?
        .as_array()
        .filter(|p| p.len() == 4)
        .ok_or_else(|| CliError::Input("\"parts\" must hold four two-variable series".into()))?;
    let decoded = parts.iter().map(|p| decode_series2(p, params)).collect::<Result<Vec<_>, _>>()?;
    let arr: [_; 4] = decoded.try_into().map_err(|_| CliError::Input("expected four parts".into()))?;
    Ok(Quadruple::new(arr)?)
}

pub fn factor2(a: &JobArgs) -> Result<Report, CliError> {
    let params = a.params()?;
    let q = decode_quadruple(&a.read_input()?, &params)?;
    let (dx, dy) = q.degs();
    let mx = matrix_for(&params, a, Var::X, dx)?;
    let my = matrix_for(&params, a, Var::Y, dy)?;
    let (out, loss) = factor_full(&q, &mx, &my)?;
    let residual = combine_full(&out, &mx, &my)?.residual_against(&q)?;
    let mut b = Builder::new(&params);
    if residual < threshold(a) {
        b.fail(format!("recombination residual {residual} below threshold"));
    }
    let allowance = loss as f64 / 2.0;
    let growth: Vec<Value> = out.parts().iter().map(|s| growth_json(&growth_order2(s, params.p(), 0.0, 0.0, allowance))).collect();
    b.set("labels", json!(OUTPUT_LABELS));
    b.set("parts", Value::from(out.parts().iter().map(Encode::encode).collect::<Vec<_>>()));
    b.set("division_loss", loss_json(loss));
    b.set("recombination_residual", valuation(residual));
    b.set("growth", Value::from(growth));
    Ok(b.finish())
}

pub fn eval(a: &JobArgs) -> Result<Report, CliError> {
    let params = a.params()?;
    let input = a.read_input()?;
    let series = field(&input, "series")?;
    let mut b = Builder::new(&params);
    let mut values = Vec::new();
    if series.get("degs").is_some() {
        let s = decode_series2(series, &params)?;
        let axis = if a.axis == "Y" { Var::Y } else { Var::X };
        for &m in &a.levels {
            let ring = CycloRing::new(params, params.p(), m)?;
            values.push(json!({"m": m, "axis": axis.to_string(), "value": s.partial_apply(axis, &ring)?.encode()}));
        }
    } else {
        let s = decode_series1(series, &params)?;
        for &m in &a.levels {
            let ring = CycloRing::new(params, params.p(), m)?;
            values.push(json!({"m": m, "value": s.reduce_mod_cyclo(&ring)?.encode()}));
        }
    }
    b.set("values", Value::from(values));
    Ok(b.finish())
}

pub fn verify(a: &JobArgs) -> Result<Report, CliError> {
    let params = a.params()?;
    let p = params.p();
    let t = threshold(a);
    let mut b = Builder::new(&params);
    let mut suites = Map::new();
    let top = a.levels.iter().copied().max().unwrap_or(1);

    let mut stab = Vec::new();
    for &n in &a.levels {
        let d = a.deg.max((p as usize).pow(n + 1));
        let r = stabilization_check(&params, n, d)?;
        if !r.passed {
            b.fail(format!("stabilization at n = {n}: offending entry {:?}", r.offending));
        }
        stab.push(json!({"n": n, "deg": r.deg, "passed": r.passed, "witnessed": valuation(r.witnessed)}));
    }
    suites.insert("stabilization".into(), Value::from(stab));

    let mut det = Vec::new();
    for &n in &a.levels {
        let r = det_check(&params, n, a.deg)?;
        if !r.passed() {
            b.fail(format!("determinant at n = {n}: first mismatch {:?}", r.exact.first_mismatch));
        }
        det.push(json!({
            "n": n,
            "integer_identity": r.integer_identity,
            "exact_identity": r.exact.matches,
            "padic_residual": valuation(r.padic.residual),
            "limit_distance": valuation(r.limit_distance),
        }));
    }
    suites.insert("determinant".into(), Value::from(det));

    let m = logmatrix_level::<QuadExtElem>(&params, top, a.deg.max((p as usize).pow(top)))?;
    let mut rank = Vec::new();
    for &lv in &a.levels {
        let r = rank1_at_level(&m, lv, t)?;
        rank.push(b.chars("rank one", &r));
    }
    suites.insert("rank_one".into(), Value::from(rank));

    if params.a_p() == 0 {
        let mut blocks = Vec::new();
        for &lv in &a.levels {
            let r = pollack_blocks(&params, lv)?;
            if !r.passed() {
                b.fail(format!("pollack blocks at m = {lv}"));
            }
            blocks.push(json!({"m": lv, "passed": r.passed()}));
        }
        suites.insert("pollack".into(), Value::from(blocks));
    }

    match exact_support(p, top, a.deg) {
        Some(support) => {
            let m = logmatrix_level::<QuadExtElem>(&params, top, a.deg)?;
            let [_, _, mu_a, mu_b] = synthesize_pair(&m, support, a.seed)?;
            let mut pair = Vec::new();
            for r in verify_pair(&mu_a, &mu_b, &a.levels, t)? {
                pair.push(b.chars("interpolating pair", &r));
            }
            for r in vanish_pair(&mu_a, &mu_b, &m, &a.levels, t)? {
                pair.push(b.chars("pair numerators vanish", &r));
            }
            suites.insert("pair".into(), Value::from(pair));
        }
        None => {
            suites.insert("pair".into(), json!({"skipped": format!("degree {} too small for level {top}", a.deg)}));
        }
    }

    let degy = a.degy();
    match (exact_support(p, top, a.deg), exact_support(p, top, degy)) {
        (Some(sx), Some(sy)) => {
            let mx = logmatrix_level::<QuadExtElem>(&params, top, a.deg)?;
            let my = logmatrix_level::<QuadExtElem>(&params, top, degy)?.with_var(Var::Y);
            let q = combine_full(&random_quadruple(&params, (a.deg, degy), (sx, sy), a.seed), &mx, &my)?;
            let pairs: Vec<(u32, u32)> = a.levels.iter().flat_map(|&x| a.levels.iter().map(move |&y| (x, y))).collect();
            let mut quad = Vec::new();
            for r in verify_interpolation4(&q, &pairs, t)? {
                quad.push(b.chars("interpolation", &r));
            }
            for r in derivative_relation(&q, &pairs, t)? {
                quad.push(b.chars("derivative relation", &r));
            }
            for r in vanish_check(&q, &mx, &pairs, t)? {
                quad.push(b.chars("vanishing", &r));
            }
            for r in sharp_value_check(&q, &mx, &pairs, t)? {
                quad.push(b.chars("sharp value", &r));
            }
            for &lv in &a.levels {
                let residual = partial_apply_consistency(&q, &mx, lv)?;
                if residual < t {
                    b.fail(format!("partial application at Y-level {lv}: residual {residual}"));
                }
                quad.push(json!({"partial_apply_level": lv, "residual": valuation(residual)}));
            }
            suites.insert("quadruple".into(), Value::from(quad));
        }
        _ => {
            suites.insert("quadruple".into(), json!({"skipped": format!("degrees too small for level {top}")}));
        }
    }

    let (one, two) = round_trips(a, &params, &mut b)?;
    suites.insert("round_trip_one_variable".into(), one);
    suites.insert("round_trip_two_variable".into(), two);
    b.set("suites", Value::Object(suites));
    Ok(b.finish())
}

fn round_trips(a: &JobArgs, params: &FormParams, b: &mut Builder) -> Result<(Value, Value), CliError> {
    let t = threshold(a);
    let one = pair_round_trip(params, a.deg, a.seed)?;
    if one.recovered < t || one.recombined < t {
        b.fail(format!("one-variable round trip: recovered {}, recombined {}", one.recovered, one.recombined));
    }
    if !(one.growth_sharp.passed() && one.growth_flat.passed()) {
        b.fail("one-variable round trip: growth above loss".into());
    }
    let two = quad_round_trip(params, (a.deg, a.degy()), a.seed)?;
    if two.recovered < t || two.recombined < t {
        b.fail(format!("two-variable round trip: recovered {}, recombined {}", two.recovered, two.recombined));
    }
    if !two.growth_passed() {
        b.fail("two-variable round trip: growth above loss".into());
    }
    let one_json = json!({
        "seed": one.seed,
        "level": one.level,
        "recovered": valuation(one.recovered),
        "recombined": valuation(one.recombined),
        "division_loss": loss_json(one.division_loss),
        "loss": loss_json(one.loss),
        "growth": [growth_json(&one.growth_sharp), growth_json(&one.growth_flat)],
    });
    let two_json = json!({
        "seed": two.seed,
        "levels": [two.levels.0, two.levels.1],
        "recovered": valuation(two.recovered),
        "recombined": valuation(two.recombined),
        "division_loss": loss_json(two.division_loss),
        "loss": loss_json(two.loss),
        "growth": two.growth.iter().map(growth_json).collect::<Vec<_>>(),
    });
    b.set("max_loss", loss_json(one.loss.max(two.loss)));
    Ok((one_json, two_json))
}

pub fn roundtrip(a: &JobArgs) -> Result<Report, CliError> {
    let params = a.params()?;
    let mut b = Builder::new(&params);
    let (one, two) = round_trips(a, &params, &mut b)?;
    b.set("one_variable", one);
    b.set("two_variable", two);
    Ok(b.finish())
}

pub fn growth(a: &JobArgs) -> Result<Report, CliError> {
    let params = a.params()?;
    let p = params.p();
    let mut b = Builder::new(&params);
    let g = match &a.input {
        Some(_) => {
            let input = a.read_input()?;
            let series = field(&input, "series")?;
            if series.get("degs").is_some() {
                growth_order2(&decode_series2(series, &params)?, p, a.u, a.v, a.bound)
            } else {
                growth_order(&decode_series1(series, &params)?, p, a.u, a.bound)
            }
        }
        None => {
            b.set("series", json!("log(1+X)/X"));
            let log: Series1<_> = log1p_over_x(params.base_ring(), a.deg);
            growth_order(&log, p, a.u, a.bound)
        }
    };
    if !g.passed() {
        b.fail(format!("growth bound {} exceeds allowance {}", g.bound, g.allowance));
    }
    b.set("u", json!(a.u));
    b.set("growth", growth_json(&g));
    Ok(b.finish())
}
