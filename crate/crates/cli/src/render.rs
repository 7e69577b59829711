//! Text, JSON and CSV renderings of a report.
//!
//! Reports are `serde_json` objects with insertion order preserved, so the
//! same inputs always give the same bytes.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports are plain JSON") + "\n",
        Format::Text => {
            let mut out = String::new();
            for (k, v) in flatten(report) {
                out.push_str(&format!("{k}: {v}\n"));
            }
            out
        }
        Format::Csv => csv_table(report),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Dotted-path leaves in document order. Arrays of scalars stay on one line.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                walk(&join(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), xs.iter().map(scalar).collect::<Vec<_>>().join(",")));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                walk(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

/// A `rows` array becomes one CSV line per row; anything else becomes
/// `key,value` pairs.
fn csv_table(report: &Value) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    match report.get("rows").and_then(Value::as_array) {
        Some(rows) if !rows.is_empty() => {
            let flat: Vec<Vec<(String, String)>> = rows.iter().map(flatten).collect();
            let header: Vec<&str> = flat[0].iter().map(|(k, _)| k.as_str()).collect();
            w.write_record(&header).expect("in-memory write");
            for row in &flat {
                let lookup: Map<String, Value> = row.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
                let cells: Vec<String> = header.iter().map(|h| lookup.get(*h).map(scalar).unwrap_or_default()).collect();
                w.write_record(&cells).expect("in-memory write");
            }
        }
        _ => {
            w.write_record(["key", "value"]).expect("in-memory write");
            for (k, v) in flatten(report) {
                w.write_record([k, v]).expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattening_keeps_order() {
        let v = json!({"b": 1, "a": {"y": [1, 2], "x": null}});
        let f = flatten(&v);
        assert_eq!(f, vec![("b".into(), "1".into()), ("a.y".into(), "1,2".into()), ("a.x".into(), "".into())]);
    }

    #[test]
    fn rows_become_csv_lines() {
        let v = json!({"rows": [{"n": 4, "t": {"x": 0.5}}, {"n": 6, "t": {"x": 1.5}}]});
        assert_eq!(render(&v, Format::Csv), "n,t.x\n4,0.5\n6,1.5\n");
    }
}
