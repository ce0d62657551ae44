//! Reproducible JSON text: sorted keys, two-space indent, trailing newline.

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Floats {
    /// Shortest text that reads back to the same value.
    Exact,
    /// Six fixed decimals, for reports.
    Fixed6,
}

pub fn to_text(value: &Value, floats: Floats) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0, floats);
    out.push('\n');
    out
}

/// Exact floats; the format for terms, manifests and LTS files.
pub fn canonical(value: &Value) -> String {
    to_text(value, Floats::Exact)
}

/// Six-decimal floats; the format for check reports.
pub fn report(value: &Value) -> String {
    to_text(value, Floats::Fixed6)
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, value: &Value, level: usize, floats: Floats) {
    match value {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&value.to_string()),
        Value::Number(n) => match (n.as_f64(), n.is_f64(), floats) {
            (Some(f), true, Floats::Fixed6) => out.push_str(&format!("{f:.6}")),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                indent(out, level + 1);
                write_value(out, item, level + 1, floats);
            }
            out.push('\n');
            indent(out, level);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            // serde_json's default map is ordered by key.
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                indent(out, level + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, v, level + 1, floats);
            }
            out.push('\n');
            indent(out, level);
            out.push('}');
        }
    }
}
