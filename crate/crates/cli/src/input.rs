//! `--input <path>`: a JSON object whose keys mirror the flag names.
//!
//! Keys become `--key=value` arguments appended after the subcommand unless
//! the same flag already appears on the command line. A document produced by
//! `bm` itself is accepted too; its `inputs` object is used.

use std::ffi::OsString;
use std::path::Path;

use serde_json::Value;

fn input_path(argv: &[OsString]) -> Result<Option<OsString>, String> {
    let mut iter = argv.iter();
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy();
        if text == "--input" {
            return iter.next().cloned().map(Some).ok_or_else(|| "--input needs a path".to_string());
        }
        if let Some(rest) = text.strip_prefix("--input=") {
            return Ok(Some(OsString::from(rest)));
        }
    }
    Ok(None)
}

fn flag_value(key: &str, value: &Value) -> Result<Option<String>, String> {
    let scalar = |v: &Value| -> Result<String, String> {
        match v {
            Value::Number(n) => Ok(n.to_string()),
            Value::String(s) => Ok(s.clone()),
            _ => Err(format!("input key `{key}`: expected numbers or strings")),
        }
    };
    match value {
        Value::Null | Value::Bool(false) => Ok(None),
        Value::Bool(true) => Ok(Some(String::new())),
        Value::Array(items) => {
            let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
            Ok(Some(parts.join(",")))
        }
        other => scalar(other).map(Some),
    }
}

/// Reads the `--input` document, if any, and returns the expanded argument list.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = input_path(&argv)? else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read input file {}: {e}", Path::new(&path).display()))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| format!("input file is not valid JSON: {e}"))?;
    let object = match doc.get("inputs") {
        Some(inner @ Value::Object(_)) => inner.clone(),
        _ => doc,
    };
    let Value::Object(map) = object else {
        return Err("input file must hold a JSON object".into());
    };

    let present = |flag: &str| {
        argv.iter().any(|a| {
            let a = a.to_string_lossy();
            a == flag || a.starts_with(&format!("{flag}="))
        })
    };
    let mut out = argv.clone();
    for (key, value) in &map {
        let flag = format!("--{}", key.replace('_', "-"));
        if present(&flag) {
            continue;
        }
        match flag_value(key, value)? {
            None => {}
            Some(v) if v.is_empty() && matches!(value, Value::Bool(true)) => out.push(flag.into()),
            Some(v) => out.push(format!("{flag}={v}").into()),
        }
    }
    Ok(out)
}
