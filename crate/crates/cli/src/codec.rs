//! JSON encoding of p-adic values and series.
//!
//! A `Q_p` coordinate is `{"v": 2·valuation, "u": "<unit in base 10>", "r": relative precision}`,
//! `{"zero": true, "absprec": n}` when zero to precision `p^n`, or `{"zero": true}` for the
//! exact zero. Plain JSON integers (or decimal strings) are accepted on input as exact
//! integers.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use sharpflat::series::Cyclo;
use sharpflat::{Coefficient, FormParams, Padic, PadicRing, QuadExtElem, Series1, Series2, Valuation, Var};

use crate::CliError;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub trait Encode {
    fn encode(&self) -> Value;
}

impl Encode for Padic {
    fn encode(&self) -> Value {
        match (self.int_valuation(), self.unit()) {
            (Some(v), Some(u)) => json!({"v": 2 * v, "u": u.to_string(), "r": self.rel_precision()}),
            _ => match self.abs_precision() {
                Some(n) => json!({"zero": true, "absprec": n}),
                None => json!({"zero": true}),
            },
        }
    }
}

impl Encode for QuadExtElem {
    fn encode(&self) -> Value {
        json!({"a": self.a().encode(), "b": self.b().encode()})
    }
}

impl<C: Coefficient + Encode> Encode for Cyclo<C> {
    fn encode(&self) -> Value {
        json!({"m": self.level(), "coeffs": self.coeffs().iter().map(Encode::encode).collect::<Vec<_>>()})
    }
}

impl<C: Coefficient + Encode> Encode for Series1<C> {
    fn encode(&self) -> Value {
        json!({
            "var": self.var().to_string(),
            "deg": self.deg(),
            "coeffs": self.coeffs().iter().map(Encode::encode).collect::<Vec<_>>(),
        })
    }
}

/// Exact zeros are omitted; zeros known only to some precision are kept.
impl<C: Coefficient + Encode> Encode for Series2<C> {
    fn encode(&self) -> Value {
        let (dx, dy) = self.degs();
        let mut coeffs = Vec::new();
        for i in 0..dx {
            for j in 0..dy {
                let c = self.coeff(i, j);
                if !(c.is_zero() && c.precision() == Valuation::Infinite) {
                    coeffs.push(json!({"i": i, "j": j, "c": c.encode()}));
                }
            }
        }
        json!({"degs": [dx, dy], "coeffs": coeffs})
    }
}

pub fn valuation(v: Valuation) -> Value {
    Value::String(v.to_string())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn as_object(v: &Value) -> Result<&Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| bad(format!("expected an object, found {v}")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize, CliError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

fn as_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

pub fn decode_padic(v: &Value, ring: PadicRing) -> Result<Padic, CliError> {
    if let Some(n) = as_bigint(v) {
        return Ok(Padic::from_int(&ring, &n));
    }
    let obj = as_object(v)?;
    if obj.get("zero").and_then(Value::as_bool) == Some(true) {
        return Ok(match obj.get("absprec") {
            Some(a) => Padic::zero_with_precision(ring, a.as_i64().ok_or_else(|| bad("absprec must be an integer"))?),
            None => Padic::zero(&ring),
        });
    }
    let twice = field(obj, "v")?.as_i64().ok_or_else(|| bad("\"v\" must be an integer"))?;
    if twice % 2 != 0 {
        return Err(bad(format!("a Q_p coordinate has integral valuation, got v = {twice}/2")));
    }
    let unit = as_bigint(field(obj, "u")?).ok_or_else(|| bad("\"u\" must be a decimal integer string"))?;
    let rel = field(obj, "r")?.as_u64().ok_or_else(|| bad("\"r\" must be a positive integer"))?;
    Padic::from_parts(ring, twice / 2, &unit, rel as u32).map_err(CliError::Core)
}

pub fn decode_quad(v: &Value, params: &FormParams) -> Result<QuadExtElem, CliError> {
    let ring = params.base_ring();
    if let Some(n) = as_bigint(v) {
        return Ok(QuadExtElem::from_int(params, &n));
    }
    let obj = as_object(v)?;
    let a = decode_padic(field(obj, "a")?, ring)?;
    let b = match obj.get("b") {
        Some(b) => decode_padic(b, ring)?,
        None => Padic::zero(&ring),
    };
    QuadExtElem::new(*params, a, b).map_err(CliError::Core)
}

pub fn decode_var(v: &Value) -> Result<Var, CliError> {
    match v.as_str() {
        Some("X") => Ok(Var::X),
        Some("Y") => Ok(Var::Y),
        _ => Err(bad(format!("variable must be \"X\" or \"Y\", found {v}"))),
    }
}

pub fn decode_series1(v: &Value, params: &FormParams) -> Result<Series1<QuadExtElem>, CliError> {
    let obj = as_object(v)?;
    let var = match obj.get("var") {
        Some(x) => decode_var(x)?,
        None => Var::X,
    };
    let coeffs = field(obj, "coeffs")?.as_array().ok_or_else(|| bad("\"coeffs\" must be an array"))?;
    let deg = match obj.get("deg") {
        Some(d) => as_usize(d, "deg")?,
        None => coeffs.len(),
    };
    if coeffs.len() > deg {
        return Err(bad(format!("{} coefficients given for degree {deg}", coeffs.len())));
    }
    let mut out = coeffs.iter().map(|c| decode_quad(c, params)).collect::<Result<Vec<_>, _>>()?;
    out.resize(deg, QuadExtElem::zero(params));
    Ok(Series1::new(var, *params, out))
}

pub fn decode_series2(v: &Value, params: &FormParams) -> Result<Series2<QuadExtElem>, CliError> {
    let obj = as_object(v)?;
    let degs = field(obj, "degs")?.as_array().filter(|d| d.len() == 2).ok_or_else(|| bad("\"degs\" must be [dx, dy]"))?;
    let (dx, dy) = (as_usize(&degs[0], "dx")?, as_usize(&degs[1], "dy")?);
    let mut s = Series2::zero(params, dx, dy);
    for entry in field(obj, "coeffs")?.as_array().ok_or_else(|| bad("\"coeffs\" must be an array"))? {
        let e = as_object(entry)?;
        let (i, j) = (as_usize(field(e, "i")?, "i")?, as_usize(field(e, "j")?, "j")?);
        if i >= dx || j >= dy {
            return Err(bad(format!("coefficient ({i}, {j}) outside degrees ({dx}, {dy})")));
        }
        s.set_coeff(i, j, decode_quad(field(e, "c")?, params)?);
    }
    Ok(s)
}

pub fn params_json(params: &FormParams) -> Value {
    json!({"p": params.p(), "a_p": params.a_p(), "eps": params.eps(), "prec": params.precision()})
}
