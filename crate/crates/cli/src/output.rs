use clap::ValueEnum;
use foldhom::FGAbelianGroup;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// Converts to a `Value`, whose maps are sorted by key.
pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output types serialize to JSON")
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string(value).expect("a Value always serializes");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut out = String::new();
            table(value, 0, &mut out);
            out
        }
    }
}

/// Reads back a group so tables can show `Z + Z_5` instead of its records.
fn as_group(v: &Value) -> Option<FGAbelianGroup> {
    let obj = v.as_object()?;
    if obj.len() != 2 || !obj.contains_key("rank") || !obj.contains_key("torsion") {
        return None;
    }
    serde_json::from_value(v.clone()).ok()
}

fn scalar(v: &Value) -> Option<String> {
    if let Some(g) = as_group(v) {
        return Some(g.to_string());
    }
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn table(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{pad}{s}\n"));
        return;
    }
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k:width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}\n"));
                        table(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{i:>3}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{i:>3}\n"));
                        table(x, indent + 1, out);
                    }
                }
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}
