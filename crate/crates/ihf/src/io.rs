//! JSON wire formats.
//!
//! Complexes: `{"dimension": n, "top_simplices": [["v", ...], ...]}` with
//! string vertex ids. Cochains: `{"degree": k, "values": {"v0,v1,...":
//! "p/q"}}`, rationals always as strings, never floats; omitted simplices are
//! zero. Flux files wrap a complex (inline or a path) with values keyed by
//! codimension-one simplex; bundle files carry the base and an integral
//! Euler assignment keyed by triangle. Emission is canonical, so serialize
//! then reparse is the identity bit for bit.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::bundles::CircleBundle;
use crate::cochain::Cochain;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::num::{q_from_str, q_to_string, Q, Z};

pub fn complex_to_json(c: &SimplicialComplex) -> Value {
    let n = c.dimension();
    let tops: Vec<Value> = c
        .simplices(n)
        .iter()
        .map(|t| {
            Value::Array(
                t.iter().map(|&v| Value::String(c.vertex_name(v as usize).to_string())).collect(),
            )
        })
        .collect();
    json!({ "dimension": n, "top_simplices": tops })
}

pub fn complex_from_json(v: &Value) -> Result<SimplicialComplex> {
    let obj = v.as_object().ok_or_else(|| parse_err("complex must be a JSON object"))?;
    let dim = obj
        .get("dimension")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("complex needs an integer \"dimension\""))? as usize;
    let tops_v = obj
        .get("top_simplices")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("complex needs \"top_simplices\""))?;
    let mut tops: Vec<Vec<String>> = Vec::with_capacity(tops_v.len());
    for t in tops_v {
        let tup = t.as_array().ok_or_else(|| parse_err("top simplex must be an array"))?;
        let mut names = Vec::with_capacity(tup.len());
        for x in tup {
            let s = x.as_str().ok_or_else(|| parse_err("vertex ids must be strings"))?;
            if s.contains(',') || s.is_empty() {
                return Err(parse_err("vertex ids must be nonempty and comma-free"));
            }
            names.push(s.to_string());
        }
        tops.push(names);
    }
    let c = SimplicialComplex::build(&tops)?;
    if c.dimension() != dim {
        return Err(parse_err("declared dimension disagrees with the top simplices"));
    }
    Ok(c)
}

pub fn cochain_to_json(c: &SimplicialComplex, cochain: &Cochain) -> Value {
    let k = cochain.degree();
    let mut values = Map::new();
    for (i, v) in cochain.values().iter().enumerate() {
        if !v.is_zero() {
            values.insert(c.simplex_name(k, i), Value::String(q_to_string(v)));
        }
    }
    json!({ "degree": k, "values": Value::Object(values) })
}

pub fn cochain_from_json(c: &SimplicialComplex, v: &Value) -> Result<Cochain> {
    let obj = v.as_object().ok_or_else(|| parse_err("cochain must be a JSON object"))?;
    let degree = obj
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("cochain needs an integer \"degree\""))? as usize;
    if degree > c.dimension() {
        return Err(Error::DegreeOutOfRange { degree, dimension: c.dimension() });
    }
    let values_obj = obj
        .get("values")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("cochain needs a \"values\" object"))?;
    let mut values = vec![Q::zero(); c.simplex_count(degree)];
    let mut seen = vec![false; c.simplex_count(degree)];
    for (key, val) in values_obj {
        let (idx, sign) = resolve_simplex(c, degree, key)?;
        let s = val.as_str().ok_or_else(|| parse_err("cochain values must be rational strings"))?;
        let q = q_from_str(s)?;
        if seen[idx] {
            return Err(parse_err(&format!("simplex {key:?} assigned twice")));
        }
        seen[idx] = true;
        values[idx] = if sign < 0 { -q } else { q };
    }
    Cochain::from_values(c, degree, values)
}

/// Resolves a comma-joined vertex key to (index, orientation sign).
fn resolve_simplex(c: &SimplicialComplex, degree: usize, key: &str) -> Result<(usize, i32)> {
    let names: Vec<&str> = key.split(',').collect();
    if names.len() != degree + 1 {
        return Err(parse_err(&format!("key {key:?} has the wrong number of vertices")));
    }
    let mut ids = Vec::with_capacity(names.len());
    for n in names {
        let id = c
            .vertex_id(n)
            .ok_or_else(|| parse_err(&format!("unknown vertex {n:?} in key {key:?}")))?;
        ids.push(id);
    }
    let (sorted, sign) = crate::cochain::sort_with_sign(&ids);
    if sign == 0 {
        return Err(parse_err(&format!("key {key:?} repeats a vertex")));
    }
    let idx = c
        .index_of(degree, &sorted)
        .ok_or_else(|| parse_err(&format!("simplex {key:?} is not in the complex")))?;
    Ok((idx, sign))
}

/// Flux file: the complex (inline object or a path string) plus values keyed
/// by codimension-one simplex. Returns the complex and the cochain.
pub fn flux_from_json(v: &Value, base_dir: Option<&std::path::Path>) -> Result<(SimplicialComplex, Cochain)> {
    let obj = v.as_object().ok_or_else(|| parse_err("flux must be a JSON object"))?;
    let complex_v = obj.get("complex").ok_or_else(|| parse_err("flux needs \"complex\""))?;
    let c = embedded_complex(complex_v, base_dir)?;
    let n = c.dimension();
    if n == 0 {
        return Err(parse_err("flux needs a positive-dimensional complex"));
    }
    let flux_obj = obj
        .get("flux")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("flux needs a \"flux\" object"))?;
    let wrapped = json!({ "degree": n - 1, "values": Value::Object(flux_obj.clone()) });
    let cochain = cochain_from_json(&c, &wrapped)?;
    Ok((c, cochain))
}

pub fn flux_to_json(c: &SimplicialComplex, cochain: &Cochain) -> Value {
    let inner = cochain_to_json(c, cochain);
    json!({
        "complex": complex_to_json(c),
        "flux": inner.get("values").cloned().unwrap_or_else(|| Value::Object(Map::new())),
    })
}

/// Bundle file: base complex plus an integer Euler assignment by triangle.
pub fn bundle_from_json(v: &Value, base_dir: Option<&std::path::Path>) -> Result<CircleBundle> {
    let obj = v.as_object().ok_or_else(|| parse_err("bundle must be a JSON object"))?;
    let base_v = obj.get("base").ok_or_else(|| parse_err("bundle needs \"base\""))?;
    let base = embedded_complex(base_v, base_dir)?;
    let euler_obj = obj
        .get("euler")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("bundle needs an \"euler\" object"))?;
    let mut values = vec![Q::zero(); base.simplex_count(2)];
    for (key, val) in euler_obj {
        let (idx, sign) = resolve_simplex(&base, 2, key)?;
        let z = val
            .as_i64()
            .ok_or_else(|| parse_err("euler values must be JSON integers"))?;
        values[idx] = Q::from(Z::from(if sign < 0 { -z } else { z }));
    }
    let euler = Cochain::from_values(&base, 2, values)?;
    CircleBundle::new(base, euler)
}

pub fn bundle_to_json(b: &CircleBundle) -> Value {
    let mut euler = Map::new();
    for (i, v) in b.euler_cocycle().values().iter().enumerate() {
        if !v.is_zero() {
            let z = num_traits::ToPrimitive::to_i64(v.numer())
                .expect("euler values fit a JSON integer");
            euler.insert(b.base().simplex_name(2, i), Value::Number(z.into()));
        }
    }
    json!({ "base": complex_to_json(b.base()), "euler": Value::Object(euler) })
}

fn embedded_complex(v: &Value, base_dir: Option<&std::path::Path>) -> Result<SimplicialComplex> {
    match v {
        Value::Object(_) => complex_from_json(v),
        Value::String(path) => {
            let p = std::path::Path::new(path);
            let resolved = if p.is_absolute() {
                p.to_path_buf()
            } else {
                base_dir.map(|d| d.join(p)).unwrap_or_else(|| p.to_path_buf())
            };
            let text = std::fs::read_to_string(&resolved)
                .map_err(|e| parse_err(&format!("cannot read {}: {e}", resolved.display())))?;
            let val: Value =
                serde_json::from_str(&text).map_err(|e| parse_err(&format!("bad JSON: {e}")))?;
            complex_from_json(&val)
        }
        _ => Err(parse_err("complex reference must be an object or a path string")),
    }
}

/// Weight maps: {"simplex-id": "p/q"} per degree, used by reports.
pub fn weights_to_json(c: &SimplicialComplex, k: usize, weights: &[Q]) -> Value {
    let mut map = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        map.insert(c.simplex_name(k, i), q_to_string(w));
    }
    serde_json::to_value(map).expect("string map serializes")
}

fn parse_err(msg: &str) -> Error {
    Error::Parse(msg.to_string())
}
