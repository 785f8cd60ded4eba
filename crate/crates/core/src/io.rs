//! JSON file formats for group tables, Hopf specs, pairings and exported
//! doubles.
//!
//! Complex numbers are `[re, im]` pairs and tensors are nested arrays
//! following their shape. Writers emit compact JSON followed by a newline;
//! floats use the shortest representation that parses back to the same bits,
//! so write → read → write is byte-identical.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::double::DoubleSpec;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::hopf::{HopfParts, HopfSpec};
use crate::pairing::PairingSpec;
use crate::tensor::{CTensor, C64};

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn complex_to_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_from_json(v: &Value) -> Result<C64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(fmt_err("complex entry must be a pair of numbers")),
        },
        _ => Err(fmt_err(format!("expected [re, im], found {v}"))),
    }
}

pub fn tensor_to_json(t: &CTensor) -> Value {
    fn build(data: &[C64], shape: &[usize]) -> Value {
        match shape.split_first() {
            None => complex_to_json(data[0]),
            Some((&n, rest)) => {
                let stride: usize = rest.iter().product();
                Value::Array((0..n).map(|i| build(&data[i * stride..(i + 1) * stride], rest)).collect())
            }
        }
    }
    build(t.data(), t.shape())
}

/// Parses a nested array of complex pairs with exactly `rank` array levels
/// above the pairs.
pub fn tensor_from_json(v: &Value, rank: usize, name: &str) -> Result<CTensor> {
    let mut shape = Vec::with_capacity(rank);
    let mut probe = v;
    for _ in 0..rank {
        let arr = probe
            .as_array()
            .ok_or_else(|| fmt_err(format!("{name}: expected a rank-{rank} nested array")))?;
        shape.push(arr.len());
        match arr.first() {
            Some(first) => probe = first,
            None => break,
        }
    }
    if shape.len() != rank {
        shape.resize(rank, 0);
    }
    let mut data = Vec::with_capacity(shape.iter().product());
    fn walk(v: &Value, shape: &[usize], name: &str, out: &mut Vec<C64>) -> Result<()> {
        match shape.split_first() {
            None => {
                out.push(complex_from_json(v).map_err(|e| fmt_err(format!("{name}: {e}")))?);
                Ok(())
            }
            Some((&n, rest)) => {
                let arr = v
                    .as_array()
                    .filter(|a| a.len() == n)
                    .ok_or_else(|| fmt_err(format!("{name}: ragged array, expected length {n}")))?;
                arr.iter().try_for_each(|x| walk(x, rest, name, out))
            }
        }
    }
    walk(v, &shape, name, &mut data)?;
    CTensor::from_vec(&shape, data)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| fmt_err(format!("missing field \"{key}\"")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| fmt_err(format!("{what} must be a JSON object")))
}

pub fn group_to_json(g: &GroupTable) -> Value {
    let mut obj = Map::new();
    if let Some(label) = g.label() {
        obj.insert("label".into(), json!(label));
    }
    obj.insert("order".into(), json!(g.order()));
    obj.insert("product".into(), json!(g.product_table()));
    Value::Object(obj)
}

/// Parse failures are [`Error::Format`]; a well-formed table that violates
/// the group axioms is [`Error::InvalidGroup`].
pub fn group_from_json(v: &Value) -> Result<GroupTable> {
    let obj = as_object(v, "group table")?;
    let order = field(obj, "order")?
        .as_u64()
        .ok_or_else(|| fmt_err("\"order\" must be a non-negative integer"))? as usize;
    let product: Vec<Vec<usize>> = serde_json::from_value(field(obj, "product")?.clone())
        .map_err(|e| fmt_err(format!("\"product\" must be a nested array of indices: {e}")))?;
    if product.len() != order {
        return Err(fmt_err(format!("\"order\" is {order} but the table has {} rows", product.len())));
    }
    let label = label_of(obj)?;
    GroupTable::new(product, label)
}

fn label_of(obj: &Map<String, Value>) -> Result<Option<String>> {
    match obj.get("label") {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(fmt_err("\"label\" must be a string")),
    }
}

pub fn hopf_to_json(h: &HopfSpec) -> Value {
    let p = h.parts();
    let mut obj = Map::new();
    if let Some(label) = &p.label {
        obj.insert("label".into(), json!(label));
    }
    obj.insert("dim".into(), json!(h.dim()));
    obj.insert("mult".into(), tensor_to_json(&p.mult));
    obj.insert("unit".into(), tensor_to_json(&p.unit));
    obj.insert("comult".into(), tensor_to_json(&p.comult));
    obj.insert("counit".into(), tensor_to_json(&p.counit));
    obj.insert("antipode".into(), tensor_to_json(&p.antipode));
    obj.insert("star".into(), tensor_to_json(&p.star));
    if let Some(phi) = &p.integral {
        obj.insert("integral".into(), tensor_to_json(phi));
    }
    Value::Object(obj)
}

/// Reads the Hopf fields of a spec object; unknown fields are ignored, so
/// double exports read back as plain specs.
pub fn hopf_from_json(v: &Value) -> Result<HopfSpec> {
    let obj = as_object(v, "Hopf spec")?;
    let dim = field(obj, "dim")?
        .as_u64()
        .ok_or_else(|| fmt_err("\"dim\" must be a non-negative integer"))? as usize;
    let t = |key: &str, rank: usize| -> Result<CTensor> { tensor_from_json(field(obj, key)?, rank, key) };
    let integral = match obj.get("integral") {
        None | Some(Value::Null) => None,
        Some(v) => Some(tensor_from_json(v, 1, "integral")?),
    };
    let h = HopfSpec::from_parts(HopfParts {
        label: label_of(obj)?,
        mult: t("mult", 3)?,
        unit: t("unit", 1)?,
        comult: t("comult", 3)?,
        counit: t("counit", 1)?,
        antipode: t("antipode", 2)?,
        star: t("star", 2)?,
        integral,
    })
    .map_err(|e| fmt_err(e.to_string()))?;
    if h.dim() != dim {
        return Err(fmt_err(format!("\"dim\" is {dim} but the tensors have dimension {}", h.dim())));
    }
    Ok(h)
}

pub fn pairing_to_json(pr: &PairingSpec) -> Value {
    json!({
        "A": hopf_to_json(pr.a()),
        "B": hopf_to_json(pr.b()),
        "P": tensor_to_json(pr.matrix()),
    })
}

/// `"A"` and `"B"` are inline spec objects or paths, resolved against
/// `base_dir` when relative.
pub fn pairing_from_json(v: &Value, base_dir: Option<&Path>) -> Result<PairingSpec> {
    let obj = as_object(v, "pairing")?;
    let side = |key: &str| -> Result<HopfSpec> {
        match field(obj, key)? {
            Value::String(path) => {
                let path = Path::new(path);
                let full = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.to_path_buf(),
                };
                hopf_from_json(&read_json(&full)?)
            }
            other => hopf_from_json(other),
        }
    };
    let a = side("A")?;
    let b = side("B")?;
    let p = tensor_from_json(field(obj, "P")?, 2, "P")?;
    PairingSpec::new(a, b, p).map_err(|e| fmt_err(e.to_string()))
}

/// The double's Hopf spec plus `embed_A`, `embed_B`, `index_map`, and the
/// factors and pairing matrix needed to rebuild it.
pub fn double_to_json(d: &DoubleSpec) -> Value {
    let mut v = hopf_to_json(d.hopf());
    let obj = v.as_object_mut().expect("spec serializes to an object");
    obj.insert("embed_A".into(), tensor_to_json(d.embed_a()));
    obj.insert("embed_B".into(), tensor_to_json(d.embed_b()));
    obj.insert("index_map".into(), json!(d.index_map()));
    obj.insert("factor_A".into(), hopf_to_json(d.source().a()));
    obj.insert("factor_B".into(), hopf_to_json(d.source().b()));
    obj.insert("P".into(), tensor_to_json(d.source().matrix()));
    v
}

/// `Ok(None)` for a plain spec without the double fields.
pub fn double_from_json(v: &Value) -> Result<Option<DoubleSpec>> {
    let obj = as_object(v, "spec")?;
    let keys = ["factor_A", "factor_B", "P"];
    if !keys.iter().any(|k| obj.contains_key(*k)) {
        return Ok(None);
    }
    let a = hopf_from_json(field(obj, "factor_A")?)?;
    let b = hopf_from_json(field(obj, "factor_B")?)?;
    let p = tensor_from_json(field(obj, "P")?, 2, "P")?;
    let pr = PairingSpec::new(a, b, p).map_err(|e| fmt_err(e.to_string()))?;
    let d = DoubleSpec::from_parts(hopf_from_json(v)?, pr).map_err(|e| fmt_err(e.to_string()))?;
    for (key, expected) in [("embed_A", d.embed_a()), ("embed_B", d.embed_b())] {
        if let Some(stored) = obj.get(key) {
            if &tensor_from_json(stored, 2, key)? != expected {
                return Err(fmt_err(format!("\"{key}\" does not match the factors")));
            }
        }
    }
    if let Some(stored) = obj.get("index_map") {
        let stored: Vec<(usize, usize)> = serde_json::from_value(stored.clone())
            .map_err(|e| fmt_err(format!("\"index_map\": {e}")))?;
        if stored != d.index_map() {
            return Err(fmt_err("\"index_map\" does not match the factors"));
        }
    }
    Ok(Some(d))
}

/// Compact JSON followed by a newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    fs::write(path, to_json_string(v))?;
    Ok(())
}
