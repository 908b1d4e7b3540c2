use crate::commands::Report;
use crate::config::{Format, RunConfig};
use anyhow::Result;
use serde_json::{Map, Value};
use std::collections::BTreeSet;

/// Rebuilds every object with its keys in sorted order.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonical(v))).collect::<Map<_, _>>())
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(canonical).collect()),
        other => other,
    }
}

pub fn document(report: &Report, config: &RunConfig) -> Value {
    canonical(serde_json::json!({
        "config": config.to_json(),
        "results": report.results,
        "summary": report.summary,
    }))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `a.b.0.c = value` leaves of a JSON value.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let joined: Vec<String> = xs.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", joined.join(" "))));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn csv(doc: &Value) -> Result<String> {
    let rows: Vec<Vec<(String, String)>> = doc["results"]
        .as_array()
        .map(|rs| {
            rs.iter()
                .map(|r| {
                    let mut cells = Vec::new();
                    flatten("", r, &mut cells);
                    cells
                })
                .collect()
        })
        .unwrap_or_default();
    let columns: BTreeSet<&str> = rows.iter().flatten().map(|(k, _)| k.as_str()).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns)?;
    for row in &rows {
        let lookup: std::collections::HashMap<&str, &str> =
            row.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        w.write_record(columns.iter().map(|c| lookup.get(c).copied().unwrap_or("")))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn table(doc: &Value) -> String {
    let mut out = String::new();
    let mut section = |title: &str, v: &Value| {
        let mut cells = Vec::new();
        flatten("", v, &mut cells);
        let width = cells.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        out.push_str(&format!("== {title}\n"));
        for (k, v) in cells {
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
        out.push('\n');
    };
    if let Some(results) = doc["results"].as_array() {
        for (i, r) in results.iter().enumerate() {
            section(&format!("result {i}"), r);
        }
    }
    section("summary", &doc["summary"]);
    out
}

pub fn render(report: &Report, config: &RunConfig) -> Result<String> {
    let doc = document(report, config);
    Ok(match config.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&doc)?),
        Format::Csv => csv(&doc)?,
        Format::Table => table(&doc),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_sorts_nested_keys() {
        let v = canonical(json!({ "b": { "z": 1, "y": [ { "q": 1, "p": 2 } ] }, "a": 0 }));
        assert_eq!(v.to_string(), r#"{"a":0,"b":{"y":[{"p":2,"q":1}],"z":1}}"#);
    }

    #[test]
    fn flatten_paths() {
        let mut cells = Vec::new();
        flatten("", &json!({ "a": ["1", "2"], "b": [ { "c": "3" } ] }), &mut cells);
        assert_eq!(
            cells,
            vec![("a".into(), "[1 2]".into()), ("b.0.c".into(), "3".into())]
        );
    }
}
