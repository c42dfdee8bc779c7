//! JSON encodings of matrices and reports.
//!
//! Matrices are `{"n": int, "kind": "rational"|"float", "entries": [...]}`
//! with row-major entries. Rational entries are strings `"p/q"` or `"p"`;
//! floats are numbers printed with 17 significant digits so that they
//! re-parse to the same `f64`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Number, Value};

use crate::calculus::{DetCertificate, JacobianReport, SignSource};
use crate::error::{Error, Result};
use crate::matrix::{rational_from_f64, AnyMatrix, Matrix, Rational, Scalar, ScalarKind};
use crate::solve::{Method, PathSample, SolveReport};
use crate::word::Word;
use crate::witness::FamilyScan;

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

/// `v` with 17 significant digits; non-finite values become `null`.
pub fn float_value(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    Number::from_str(&format!("{v:.16e}")).map_or(Value::Null, Value::Number)
}

pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, an integer, or a decimal such as `"-1.25e3"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad(format!("bad numerator in `{s}`")))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad(format!("bad denominator in `{s}`")))?;
        if q.is_zero() {
            return Err(bad(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(i) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(i));
    }
    parse_decimal(s).ok_or_else(|| bad(format!("`{s}` is not a rational number")))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int}{frac}");
    let mut v = Rational::from_integer(BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?);
    let shift = exp - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    v = if shift >= 0 { v * scale } else { v / scale };
    Some(if neg { -v } else { v })
}

/// Entry encoding for matrices.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        float_value(*self)
    }
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(rational_string(self))
    }
}

pub fn matrix_to_json<T: JsonScalar>(m: &Matrix<T>) -> Value {
    json!({
        "n": m.rows(),
        "kind": T::KIND.name(),
        "entries": m.data().iter().map(T::to_json).collect::<Vec<_>>(),
    })
}

pub fn any_matrix_to_json(m: &AnyMatrix) -> Value {
    match m {
        AnyMatrix::Rational(r) => matrix_to_json(r),
        AnyMatrix::Float(f) => matrix_to_json(f),
    }
}

fn flatten(entries: &Value) -> Result<(Vec<&Value>, Option<usize>)> {
    let arr = entries.as_array().ok_or_else(|| bad("entries must be an array"))?;
    if arr.iter().all(Value::is_array) && !arr.is_empty() {
        let n = arr.len();
        let mut out = Vec::with_capacity(n * n);
        for row in arr {
            let row = row.as_array().expect("checked");
            if row.len() != n {
                return Err(Error::Dimension(format!("row of length {} in a {n}x{n} matrix", row.len())));
            }
            out.extend(row.iter());
        }
        Ok((out, Some(n)))
    } else {
        Ok((arr.iter().collect(), None))
    }
}

fn entry_is_exact(v: &Value) -> bool {
    match v {
        Value::String(_) => true,
        Value::Number(n) => n.is_i64() || n.is_u64(),
        _ => false,
    }
}

fn entry_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(bad(format!("matrix entry {other} is not a number"))),
    }
}

fn entry_float(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad(format!("bad number {n}"))),
        Value::String(s) => match s.parse::<f64>() {
            Ok(f) => Ok(f),
            Err(_) => Ok(parse_rational(s)?.to_f64()),
        },
        other => Err(bad(format!("matrix entry {other} is not a number"))),
    }
}

/// Reads either the object form or a bare (nested or flat) array. Without
/// an explicit kind, integer and string entries give a rational matrix and
/// any fractional number gives a float matrix.
pub fn matrix_from_json(v: &Value) -> Result<AnyMatrix> {
    let (entries, declared_n, kind) = match v {
        Value::Object(map) => {
            let entries = map.get("entries").ok_or_else(|| bad("missing `entries`"))?;
            let n = match map.get("n") {
                Some(n) => Some(n.as_u64().ok_or_else(|| bad("`n` must be a nonnegative integer"))? as usize),
                None => None,
            };
            let kind = match map.get("kind").map(|k| k.as_str()) {
                None => None,
                Some(Some("rational")) => Some(ScalarKind::Rational),
                Some(Some("float")) => Some(ScalarKind::Float),
                Some(other) => return Err(bad(format!("unknown kind {other:?}"))),
            };
            (entries, n, kind)
        }
        Value::Array(_) => (v, None, None),
        _ => return Err(bad("a matrix is an object or an array")),
    };
    let (flat, nested_n) = flatten(entries)?;
    let n = match (declared_n, nested_n) {
        (Some(d), Some(r)) if d != r => return Err(Error::Dimension(format!("n = {d} but {r} rows"))),
        (Some(d), _) => d,
        (None, Some(r)) => r,
        (None, None) => (flat.len() as f64).sqrt().round() as usize,
    };
    if flat.len() != n * n {
        return Err(Error::Dimension(format!("{} entries for n = {n}", flat.len())));
    }
    let kind = kind.unwrap_or(if flat.iter().all(|e| entry_is_exact(e)) {
        ScalarKind::Rational
    } else {
        ScalarKind::Float
    });
    Ok(match kind {
        ScalarKind::Rational => AnyMatrix::Rational(Matrix::from_vec(
            n,
            n,
            flat.into_iter().map(entry_rational).collect::<Result<_>>()?,
        )?),
        ScalarKind::Float => AnyMatrix::Float(Matrix::from_vec(
            n,
            n,
            flat.into_iter().map(entry_float).collect::<Result<_>>()?,
        )?),
    })
}

pub fn parse_matrix(text: &str) -> Result<AnyMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    matrix_from_json(&v)
}

/// Float view of a parsed matrix; rationals convert, floats pass through.
pub fn float_matrix(m: &AnyMatrix) -> Matrix<f64> {
    m.to_f64()
}

/// Rational view; float entries are taken at their exact binary value.
pub fn rational_matrix(m: &AnyMatrix) -> Result<Matrix<Rational>> {
    match m {
        AnyMatrix::Rational(r) => Ok(r.clone()),
        AnyMatrix::Float(f) => {
            let data = f
                .data()
                .iter()
                .map(|&v| rational_from_f64(v).ok_or_else(|| bad(format!("non-finite entry {v}"))))
                .collect::<Result<Vec<_>>>()?;
            Matrix::from_vec(f.rows(), f.cols(), data)
        }
    }
}

pub fn det_certificate_json(c: &DetCertificate) -> Value {
    json!({ "det": rational_string(&c.det), "sign": c.sign })
}

pub fn jacobian_report_json<T: JsonScalar>(r: &JacobianReport<T>, matrices: bool) -> Value {
    let mut m = Map::new();
    m.insert("word".into(), json!(r.word.to_string()));
    m.insert("n".into(), json!(r.at_x.rows()));
    m.insert("kind".into(), json!(T::KIND.name()));
    m.insert("det".into(), r.det.to_json());
    m.insert("sign".into(), json!(r.sign));
    let source = match &r.source {
        SignSource::Exact => "exact",
        SignSource::Float => "float",
        SignSource::Escalated(_) => "escalated",
    };
    m.insert("sign_source".into(), json!(source));
    if let SignSource::Escalated(d) = &r.source {
        m.insert("det_exact".into(), json!(rational_string(d)));
    }
    if let Some(c) = r.condition {
        m.insert("condition".into(), float_value(c));
    }
    if matrices {
        m.insert("full".into(), rect_json(&r.full));
        m.insert("reduced".into(), rect_json(&r.reduced));
    }
    Value::Object(m)
}

fn rect_json<T: JsonScalar>(m: &Matrix<T>) -> Value {
    if m.rows() == m.cols() {
        matrix_to_json(m)
    } else {
        json!({
            "rows": m.rows(),
            "cols": m.cols(),
            "kind": T::KIND.name(),
            "entries": m.data().iter().map(T::to_json).collect::<Vec<_>>(),
        })
    }
}

fn path_json(p: &PathSample) -> Value {
    json!({ "t": float_value(p.t), "norm_x": float_value(p.norm_x), "det": float_value(p.det) })
}

pub fn solve_report_json(r: &SolveReport) -> Value {
    let mut m = Map::new();
    m.insert("method".into(), json!(r.method.name()));
    m.insert("word".into(), json!(r.word.to_string()));
    m.insert("alphabet".into(), json!(r.word.alphabet_size()));
    m.insert("residual".into(), float_value(r.residual));
    m.insert("iterations".into(), json!(r.iterations));
    m.insert("sign".into(), json!(r.jacobian_sign));
    m.insert("x".into(), matrix_to_json(&r.x));
    if let Some(plan) = &r.plan {
        m.insert("plan".into(), json!(plan));
    }
    if let Some(rank) = r.reduced_rank {
        m.insert("reduced_rank".into(), json!(rank));
    }
    if let Some(path) = &r.path {
        m.insert("path".into(), Value::Array(path.iter().map(path_json).collect()));
    }
    Value::Object(m)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing `{key}`")))
}

fn as_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Null => Ok(f64::NAN),
        _ => v.as_f64().ok_or_else(|| bad(format!("{v} is not a number"))),
    }
}

pub fn solve_report_from_json(v: &Value) -> Result<SolveReport> {
    let method = match field(v, "method")?.as_str() {
        Some("auto") => Method::Auto,
        Some("closed-form") => Method::ClosedForm,
        Some("newton") => Method::Newton,
        Some("homotopy") => Method::Homotopy,
        other => return Err(bad(format!("unknown method {other:?}"))),
    };
    let mut word = Word::parse(field(v, "word")?.as_str().ok_or_else(|| bad("`word` must be a string"))?)?;
    if let Some(k) = v.get("alphabet") {
        word = word.with_alphabet(k.as_u64().ok_or_else(|| bad("bad `alphabet`"))? as usize)?;
    }
    let x = match matrix_from_json(field(v, "x")?)? {
        AnyMatrix::Float(f) => f,
        AnyMatrix::Rational(r) => r.to_f64(),
    };
    let path = match v.get("path") {
        None => None,
        Some(p) => Some(
            p.as_array()
                .ok_or_else(|| bad("`path` must be an array"))?
                .iter()
                .map(|s| {
                    Ok(PathSample {
                        t: as_f64(field(s, "t")?)?,
                        norm_x: as_f64(field(s, "norm_x")?)?,
                        det: as_f64(field(s, "det")?)?,
                    })
                })
                .collect::<Result<_>>()?,
        ),
    };
    Ok(SolveReport {
        method,
        word,
        x,
        residual: as_f64(field(v, "residual")?)?,
        iterations: field(v, "iterations")?.as_u64().ok_or_else(|| bad("bad `iterations`"))? as usize,
        jacobian_sign: field(v, "sign")?.as_i64().ok_or_else(|| bad("bad `sign`"))? as i8,
        plan: v.get("plan").and_then(Value::as_str).map(str::to_owned),
        path,
        reduced_rank: v.get("reduced_rank").and_then(Value::as_u64).map(|r| r as usize),
    })
}

pub fn family_scan_json(rows: &[FamilyScan]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| json!({ "k": r.k, "word": r.word.to_string(), "sign": r.sign, "det": rational_string(&r.det) }))
            .collect(),
    )
}
