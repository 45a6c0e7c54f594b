//! Objects and complexes given inline (JSON or group notation) or as files.

use std::path::Path;

use preresolve_core::complex::ChainComplex;
use preresolve_core::{Error, PresentedGroup, Result};
use serde_json::Value;

/// Inline JSON, a path to a JSON file, or raw text.
fn load(arg: &str) -> Result<(Value, Option<String>)> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let v = serde_json::from_str(arg).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok((v, None));
    }
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        let v = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        return Ok((v, Some(arg.to_string())));
    }
    Ok((Value::String(arg.to_string()), None))
}

pub struct Loaded<T> {
    pub value: T,
    /// What goes into the report: the inline value or a file reference.
    pub reported: Value,
}

fn reported(v: &Value, file: Option<String>) -> Value {
    match file {
        Some(f) => serde_json::json!({ "file": f }),
        None => v.clone(),
    }
}

pub fn object(arg: &str) -> Result<Loaded<PresentedGroup>> {
    let (v, file) = load(arg)?;
    let g = match &v {
        Value::String(s) => PresentedGroup::parse(s)?,
        other => PresentedGroup::from_json(other)?,
    };
    Ok(Loaded { reported: reported(&v, file), value: g })
}

pub fn complex(arg: &str) -> Result<Loaded<ChainComplex>> {
    let (v, file) = load(arg)?;
    if let Value::String(s) = &v {
        return Err(Error::Parse(format!("complex must be JSON or a JSON file, got {s:?}")));
    }
    Ok(Loaded { value: ChainComplex::from_json(&v)?, reported: reported(&v, file) })
}
