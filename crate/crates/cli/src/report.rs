//! Report envelope and the text rendering derived from it.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use petri_deform::wire::SCHEMA_VERSION;

pub fn input_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Wrap a command result with the schema version and the input hash.
pub fn envelope(command: &str, input: &[u8], options: Value, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input_sha256": input_hash(input),
        "options": options,
        "result": result,
    })
}

const INLINE_LIMIT: usize = 12;

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Elements are short arrays of digits; show them inline like scalars.
fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(is_scalar),
        other => is_scalar(other),
    }
}

fn array_text(items: &[Value]) -> Option<String> {
    if items.iter().all(is_flat) && items.len() <= INLINE_LIMIT {
        let parts: Vec<String> = items
            .iter()
            .map(|x| if is_scalar(x) { scalar_text(x) } else { x.to_string() })
            .collect();
        return Some(format!("[{}]", parts.join(", ")));
    }
    if items.iter().all(|x| matches!(x, Value::Array(_)) || is_scalar(x)) {
        let inner = items.first().and_then(Value::as_array).map(Vec::len);
        return Some(match inner {
            Some(m) if items.iter().all(|x| x.as_array().map(Vec::len) == Some(m)) && !items.iter().all(is_flat) => {
                format!("<{} x {} array>", items.len(), m)
            }
            _ => format!("<{} values>", items.len()),
        });
    }
    None
}

fn render_object(map: &Map<String, Value>, indent: usize, out: &mut String) {
    for (key, value) in map {
        render_entry(key, value, indent, out);
    }
}

fn render_entry(key: &str, value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            render_object(map, indent + 1, out);
        }
        Value::Array(items) => match array_text(items) {
            Some(text) => out.push_str(&format!("{pad}{key}: {text}\n")),
            None => {
                out.push_str(&format!("{pad}{key}:\n"));
                for (i, item) in items.iter().enumerate() {
                    render_entry(&format!("[{i}]"), item, indent + 1, out);
                }
            }
        },
        scalar => out.push_str(&format!("{pad}{key}: {}\n", scalar_text(scalar))),
    }
}

/// Human-readable summary generated from the JSON report.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    match report {
        Value::Object(map) => render_object(map, 0, &mut out),
        other => out.push_str(&scalar_text(other)),
    }
    out
}
