//! Shared helpers for the CLI test suites: running the built binary and
//! validating JSON output against the schemas shipped in `docs/schemas/`.
//!
//! The validator implements exactly the subset of JSON Schema draft-07 the
//! shipped schemas use: `type` (single or array), `properties`, `required`,
//! `items`, `enum`, boolean `additionalProperties`, and `pattern` restricted
//! to anchored decimal patterns.  Any other keyword makes it panic, so a
//! schema edit that strays outside the subset fails the suite instead of
//! silently validating nothing.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn finish(out: Output) -> Run {
    Run {
        stdout: String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr is UTF-8"),
        code: out.status.code().expect("process exited normally"),
    }
}

/// Run the `zgrow` binary with the given arguments.
pub fn zgrow(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_zgrow"))
        .args(args)
        .env_remove("ZGROW_THREADS")
        .output()
        .expect("spawn zgrow");
    finish(out)
}

/// Run the `zgrow` binary with `ZGROW_THREADS` set.
pub fn zgrow_threads(args: &[&str], threads: &str) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_zgrow"))
        .args(args)
        .env("ZGROW_THREADS", threads)
        .output()
        .expect("spawn zgrow");
    finish(out)
}

/// Load a schema from `docs/schemas/` at the repository root.
pub fn load_schema(name: &str) -> serde_json::Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schemas")
        .join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("read {}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("parse {}: {e}", path.display()))
}

/// Parse `stdout` as JSON and validate it against the named schema, panicking
/// with a path-qualified message on the first mismatch.
pub fn assert_matches_schema(stdout: &str, schema_name: &str) {
    let value: serde_json::Value =
        serde_json::from_str(stdout).unwrap_or_else(|e| panic!("output is not JSON: {e}"));
    let schema = load_schema(schema_name);
    if let Err(msg) = validate(&schema, &value, "$") {
        panic!("{schema_name}: {msg}");
    }
}

fn type_name(value: &serde_json::Value) -> &'static str {
    match value {
        serde_json::Value::Null => "null",
        serde_json::Value::Bool(_) => "boolean",
        serde_json::Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                "integer"
            } else {
                "number"
            }
        }
        serde_json::Value::String(_) => "string",
        serde_json::Value::Array(_) => "array",
        serde_json::Value::Object(_) => "object",
    }
}

fn type_matches(want: &str, value: &serde_json::Value) -> bool {
    match want {
        // every integer is also a number
        "number" => value.is_number(),
        other => type_name(value) == other,
    }
}

fn pattern_matches(pattern: &str, text: &str) -> bool {
    match pattern {
        "^[0-9]+$" => !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit()),
        "^-?[0-9]+$" => {
            let digits = text.strip_prefix('-').unwrap_or(text);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        }
        other => panic!("unsupported schema pattern {other:?}"),
    }
}

/// Validate `value` against `schema`, reporting the JSON path of the first
/// mismatch.
pub fn validate(schema: &serde_json::Value, value: &serde_json::Value, path: &str) -> Result<(), String> {
    let obj = schema
        .as_object()
        .unwrap_or_else(|| panic!("schema node at {path} is not an object"));
    for key in obj.keys() {
        match key.as_str() {
            "$schema" | "title" | "type" | "properties" | "required" | "items" | "enum"
            | "additionalProperties" | "pattern" => {}
            other => panic!("unsupported schema keyword {other:?} at {path}"),
        }
    }
    if let Some(ty) = obj.get("type") {
        let allowed: Vec<&str> = match ty {
            serde_json::Value::String(s) => vec![s.as_str()],
            serde_json::Value::Array(a) => a
                .iter()
                .map(|t| t.as_str().expect("type entries are strings"))
                .collect(),
            _ => panic!("malformed type keyword at {path}"),
        };
        if !allowed.iter().any(|t| type_matches(t, value)) {
            return Err(format!(
                "{path}: expected type {allowed:?}, got {}",
                type_name(value)
            ));
        }
    }
    if let Some(variants) = obj.get("enum") {
        let variants = variants.as_array().expect("enum is an array");
        if !variants.contains(value) {
            return Err(format!("{path}: value {value} not in enum {variants:?}"));
        }
    }
    if let Some(pattern) = obj.get("pattern") {
        let pattern = pattern.as_str().expect("pattern is a string");
        if let Some(text) = value.as_str() {
            if !pattern_matches(pattern, text) {
                return Err(format!("{path}: {text:?} does not match {pattern}"));
            }
        }
    }
    if let Some(map) = value.as_object() {
        if let Some(required) = obj.get("required") {
            for name in required.as_array().expect("required is an array") {
                let name = name.as_str().expect("required entries are strings");
                if !map.contains_key(name) {
                    return Err(format!("{path}: missing required key {name:?}"));
                }
            }
        }
        let empty = serde_json::Map::new();
        let props = obj
            .get("properties")
            .map(|p| p.as_object().expect("properties is an object"))
            .unwrap_or(&empty);
        let additional = obj
            .get("additionalProperties")
            .map(|a| a.as_bool().expect("additionalProperties is a boolean"))
            .unwrap_or(true);
        for (name, sub) in map {
            match props.get(name) {
                Some(subschema) => validate(subschema, sub, &format!("{path}.{name}"))?,
                None if additional => {}
                None => return Err(format!("{path}: unexpected key {name:?}")),
            }
        }
    }
    if let Some(items) = value.as_array() {
        if let Some(subschema) = obj.get("items") {
            for (i, item) in items.iter().enumerate() {
                validate(subschema, item, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}
