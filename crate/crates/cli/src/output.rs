//! Result documents and their CSV/JSON renderings.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use evtlab_core::export::{fmt17, to_json, Table};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Positive,
    Negative(String),
}

/// Everything one run writes: resolved config, seed, summary scalars, the
/// full report (JSON) and its row table (CSV).
#[derive(Debug, Clone)]
pub struct Document {
    pub command: &'static str,
    pub seed: u64,
    pub config: Map<String, Value>,
    pub summary: Map<String, Value>,
    pub report: Value,
    pub table: Table,
    pub verdict: Verdict,
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    command: &'a str,
    seed: u64,
    config: &'a Map<String, Value>,
    verdict: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
    summary: &'a Map<String, Value>,
    report: &'a Value,
}

impl Document {
    fn verdict_parts(&self) -> (&str, Option<&str>) {
        match &self.verdict {
            Verdict::Positive => ("positive", None),
            Verdict::Negative(reason) => ("negative", Some(reason.as_str())),
        }
    }

    pub fn render(&self, format: Format) -> String {
        let (verdict, reason) = self.verdict_parts();
        match format {
            Format::Json => to_json(&JsonDocument {
                command: self.command,
                seed: self.seed,
                config: &self.config,
                verdict,
                reason,
                summary: &self.summary,
                report: &self.report,
            })
            .expect("documents contain only string keys"),
            Format::Csv => {
                let mut comments = vec![
                    format!("command={}", self.command),
                    format!("seed={}", self.seed),
                ];
                comments.extend(
                    self.config
                        .iter()
                        .map(|(k, v)| format!("{k}={}", render_value(v))),
                );
                comments.push(format!("verdict={verdict}"));
                if let Some(r) = reason {
                    comments.push(format!("reason={r}"));
                }
                comments.extend(
                    self.summary
                        .iter()
                        .map(|(k, v)| format!("{k}={}", render_value(v))),
                );
                self.table.to_csv(&comments)
            }
        }
    }
}

/// Flat text for CSV comment lines; arrays are `;`-separated.
fn render_value(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => u.to_string(),
            (_, Some(i), _) => i.to_string(),
            (_, _, Some(f)) => fmt17(f),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(render_value).collect::<Vec<_>>().join(";"),
        Value::Object(_) => serde_json::to_string(v).unwrap_or_default(),
    }
}

/// Writes to `path`, or stdout when absent.
pub fn write(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use evtlab_core::export::Cell;
    use serde_json::json;

    fn doc() -> Document {
        let mut table = Table::new(&["n", "value"]);
        table.push(vec![Cell::UInt(3), Cell::Float(0.1)]);
        let Value::Object(config) = json!({"dist": "uniform:lo=0,hi=1", "grid": [0.5, 0.25]})
        else {
            unreachable!()
        };
        Document {
            command: "demo",
            seed: 9,
            config,
            summary: Map::new(),
            report: json!({"x": 0.1}),
            table,
            verdict: Verdict::Negative("not converged".into()),
        }
    }

    #[test]
    fn csv_carries_config_in_comments() {
        let text = doc().render(Format::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# command=demo");
        assert_eq!(lines[1], "# seed=9");
        assert!(lines.contains(&"# grid=5.0000000000000000e-1;2.5000000000000000e-1"));
        assert!(lines.contains(&"# reason=not converged"));
        assert_eq!(lines[lines.len() - 2], "n,value");
        assert_eq!(lines[lines.len() - 1], "3,1.0000000000000001e-1");
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn json_is_one_object() {
        let text = doc().render(Format::Json);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["seed"], 9);
        assert_eq!(v["verdict"], "negative");
        assert_eq!(v["report"]["x"].as_f64(), Some(0.1));
        assert_eq!(v["config"]["grid"][1].as_f64(), Some(0.25));
    }
}
