//! JSON input records and decimal-string output.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::heights::SUnitContext;
use crate::intlinalg::IntMatrix;
use crate::interval::Interval;
use crate::logpoly::Real;
use crate::matrix::Matrix;
use crate::numbers::{parse_element, parse_log_value, parse_rational, GroupElement, Place};
use crate::precision::PrecisionContext;
use crate::zonoid::{ExactMatrix, RatMatrix, SimpleSystem};

/// Fractional digits of decimal strings in JSON output.
pub const JSON_DIGITS: u32 = 40;

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed JSON: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::invalid(format!("missing field {key:?}")))
}

fn string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        _ => Err(Error::invalid(format!("expected a number string, got {v}"))),
    }
}

fn unsigned(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| Error::invalid(format!("{what} must be a non-negative integer")))
}

/// Element record: `rational`, `factored` or `place_table`; a bare string is
/// read as a rational.
pub fn element_from_json(v: &Value) -> Result<GroupElement> {
    if let Value::String(s) = v {
        return parse_element(s);
    }
    let kind = field(v, "type")?.as_str().ok_or_else(|| Error::invalid("\"type\" must be a string"))?;
    match kind {
        "rational" => parse_element(&string(field(v, "value")?)?),
        "factored" => {
            let obj = field(v, "exponents")?
                .as_object()
                .ok_or_else(|| Error::invalid("\"exponents\" must be an object"))?;
            let mut map = BTreeMap::new();
            for (k, e) in obj {
                let p: u64 = k.trim().parse().map_err(|_| Error::invalid(format!("bad prime {k:?}")))?;
                map.insert(p, parse_rational(&string(e)?)?);
            }
            GroupElement::factored(map)
        }
        "place_table" => {
            let degree = unsigned(field(v, "field_degree")?, "field_degree")? as u32;
            let entries = field(v, "entries")?
                .as_array()
                .ok_or_else(|| Error::invalid("\"entries\" must be an array"))?;
            let mut out = Vec::with_capacity(entries.len());
            for e in entries {
                let place = place_from_json(e, degree)?;
                out.push((place, parse_log_value(&string(field(e, "log_norm")?)?)?));
            }
            GroupElement::tabulated(degree, out)
        }
        other => Err(Error::invalid(format!("unknown element type {other:?}"))),
    }
}

fn place_from_json(e: &Value, degree: u32) -> Result<Place> {
    let label = field(e, "place")?.as_str().ok_or_else(|| Error::invalid("\"place\" must be a string"))?;
    let local = unsigned(field(e, "local_degree")?, "local_degree")? as u32;
    Place::new(label, local, degree)
}

/// `{"generators": [...]}` or a bare array of elements.
pub fn group_from_json(v: &Value) -> Result<Vec<GroupElement>> {
    let list = match v {
        Value::Array(a) => a,
        _ => field(v, "generators")?
            .as_array()
            .ok_or_else(|| Error::invalid("\"generators\" must be an array"))?,
    };
    list.iter().map(element_from_json).collect()
}

fn matrix_with<T: Clone>(v: &Value, mut parse: impl FnMut(&str) -> Result<T>) -> Result<Matrix<T>> {
    let rows = unsigned(field(v, "rows")?, "rows")? as usize;
    let cols = unsigned(field(v, "cols")?, "cols")? as usize;
    let entries = field(v, "entries")?
        .as_array()
        .ok_or_else(|| Error::invalid("\"entries\" must be an array of rows"))?;
    if entries.len() != rows {
        return Err(Error::invalid(format!("expected {rows} rows, found {}", entries.len())));
    }
    let mut data = Vec::with_capacity(rows);
    for r in entries {
        let r = r.as_array().ok_or_else(|| Error::invalid("each row must be an array"))?;
        if r.len() != cols {
            return Err(Error::invalid(format!("expected {cols} columns, found {}", r.len())));
        }
        data.push(r.iter().map(|x| parse(&string(x)?)).collect::<Result<Vec<T>>>()?);
    }
    if rows == 0 {
        return Matrix::new(0, cols, Vec::new());
    }
    Matrix::from_rows(data)
}

pub fn rational_matrix_from_json(v: &Value) -> Result<RatMatrix> {
    matrix_with(v, parse_rational)
}

pub fn int_matrix_from_json(v: &Value) -> Result<IntMatrix> {
    matrix_with(v, |s| {
        let q = parse_rational(s)?;
        if !q.is_integer() {
            return Err(Error::invalid(format!("{s:?} is not an integer")));
        }
        Ok(q.to_integer())
    })
}

/// Entries may be rationals, `log:q` symbols or decimal enclosures.
pub fn exact_matrix_from_json(v: &Value) -> Result<ExactMatrix> {
    matrix_with(v, parse_log_value)
}

/// `{"masses": [...], "coeffs": matrix}`; masses default to 1.
pub fn system_from_json(v: &Value, ctx: &PrecisionContext) -> Result<SimpleSystem> {
    let coeffs = exact_matrix_from_json(field(v, "coeffs")?)?;
    let masses = match v.get("masses") {
        Some(Value::Array(a)) => a.iter().map(|x| parse_rational(&string(x)?)).collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(Error::invalid("\"masses\" must be an array")),
        None => vec![BigRational::from_integer(1.into()); coeffs.cols()],
    };
    if masses.len() != coeffs.cols() {
        return Err(Error::invalid(format!(
            "{} masses for {} atoms",
            masses.len(),
            coeffs.cols()
        )));
    }
    if masses.iter().any(|m| m < &BigRational::from_integer(0.into())) {
        return Err(Error::invalid("masses must be non-negative"));
    }
    SimpleSystem::build(masses, coeffs, ctx)
}

/// `{"field_degree": d, "places": [...], "unit_log_table": matrix}`.
pub fn sunit_from_json(v: &Value) -> Result<SUnitContext> {
    let degree = unsigned(field(v, "field_degree")?, "field_degree")? as u32;
    let places = field(v, "places")?
        .as_array()
        .ok_or_else(|| Error::invalid("\"places\" must be an array"))?
        .iter()
        .map(|p| place_from_json(p, degree))
        .collect::<Result<Vec<_>>>()?;
    let table = exact_matrix_from_json(field(v, "unit_log_table")?)?;
    SUnitContext::new(degree, places, table)
}

pub fn interval_json(iv: &Interval) -> Value {
    json!({
        "lo": iv.lower_decimal(JSON_DIGITS),
        "hi": iv.upper_decimal(JSON_DIGITS),
    })
}

/// Enclosure endpoints, plus the symbolic form of exact values.
pub fn real_json(x: &Real, bits: u32) -> Value {
    let iv = x.to_interval(bits);
    let mut obj = Map::new();
    obj.insert("lo".into(), Value::String(iv.lower_decimal(JSON_DIGITS)));
    obj.insert("hi".into(), Value::String(iv.upper_decimal(JSON_DIGITS)));
    if let Real::Exact(p) = x {
        obj.insert("exact".into(), Value::String(p.to_string()));
    }
    Value::Object(obj)
}

pub fn int_vector_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn certificate_json(c: &Certificate) -> Value {
    let witnesses: Map<String, Value> = c
        .witnesses
        .iter()
        .fold(Map::new(), |mut m, (k, v)| {
            match m.get_mut(k) {
                Some(Value::Array(a)) => a.push(Value::String(v.clone())),
                Some(old) => {
                    let prev = old.take();
                    *old = Value::Array(vec![prev, Value::String(v.clone())]);
                }
                None => {
                    m.insert(k.clone(), Value::String(v.clone()));
                }
            }
            m
        });
    json!({
        "name": c.name,
        "status": c.verdict.to_string(),
        "verdict": c.verdict.label(),
        "lhs_label": c.lhs_label,
        "lhs": interval_json(&c.lhs),
        "rhs_label": c.rhs_label,
        "rhs": interval_json(&c.rhs),
        "precision_bits": c.bits,
        "witnesses": witnesses,
    })
}
