use isoclinic::liealg::{Algebra, LieAlgebra};
use isoclinic::linalg::Vector;
use isoclinic::scalar::Scalar;
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The input does not have the expected shape.
    #[error("{0}")]
    Schema(String),
    /// The input is well formed but the computation rejects it.
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Schema(_) => "schema",
            CliError::Domain(_) => "domain",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

pub fn domain(e: impl fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

pub fn schema(e: impl fmt::Display) -> CliError {
    CliError::Schema(e.to_string())
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::Schema(format!("missing field \"{key}\"")))
}

pub fn int(v: &Value, key: &str) -> Result<i64, CliError> {
    field(v, key)?.as_i64().ok_or_else(|| CliError::Schema(format!("\"{key}\" must be an integer")))
}

pub fn int_or(v: &Value, key: &str, default: i64) -> Result<i64, CliError> {
    if v.get(key).is_none() {
        return Ok(default);
    }
    int(v, key)
}

pub fn positive(v: &Value, key: &str) -> Result<u32, CliError> {
    let n = int(v, key)?;
    u32::try_from(n).ok().filter(|&n| n > 0).ok_or_else(|| CliError::Schema(format!("\"{key}\" must be a positive integer")))
}

pub fn algebra(v: &Value) -> Result<Algebra, CliError> {
    let name = field(v, "algebra")?.as_str().ok_or_else(|| schema("\"algebra\" must be a string such as \"A2\""))?;
    LieAlgebra::from_name(name).map_err(schema)
}

pub fn scalar<F: Scalar>(v: &Value) -> Result<F, CliError> {
    F::from_wire(v).map_err(schema)
}

pub fn element<F: Scalar>(g: &LieAlgebra, v: &Value) -> Result<Vector<F>, CliError> {
    g.element_from_wire(v).map_err(CliError::Schema)
}

/// [[i, j, v], ...] keyed by (i, j).
pub fn pairs<F: Scalar>(v: &Value, key: &str) -> Result<BTreeMap<(usize, i64), F>, CliError> {
    let Some(list) = v.get(key) else { return Ok(BTreeMap::new()) };
    let list = list.as_array().ok_or_else(|| CliError::Schema(format!("\"{key}\" must be an array of [i, j, v]")))?;
    let mut out = BTreeMap::new();
    for t in list {
        let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| CliError::Schema(format!("each entry of \"{key}\" is [i, j, v]")))?;
        let i = t[0].as_u64().ok_or_else(|| schema("i must be a positive integer"))? as usize;
        let j = t[1].as_i64().ok_or_else(|| schema("j must be an integer"))?;
        out.insert((i, j), scalar(&t[2])?);
    }
    Ok(out)
}
