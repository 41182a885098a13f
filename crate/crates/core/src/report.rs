//! Table, CSV and JSON renderings of pipeline results. Every renderer is
//! deterministic and ends its output with a newline.

use serde_json::{json, Map, Value};

use crate::fuzzy::PrioritizedEntry;
use crate::impact::ImpactMatrix;
use crate::relax::RelaxedStatement;
use crate::validate::ValidationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

fn json_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

/// Left-aligned fixed-width columns separated by two spaces.
fn ascii_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| format!("{cell:<w$}", w = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&rule.join("  "));
            out.push('\n');
        }
    }
    out
}

pub fn render_impacts(matrix: &ImpactMatrix, format: Format) -> String {
    match format {
        Format::Table | Format::Csv => {
            let mut rows = Vec::with_capacity(matrix.goals().len() + 1);
            let mut header = vec!["goal".to_string()];
            header.extend(matrix.requirements().iter().map(|r| r.to_string()));
            rows.push(header);
            for g in matrix.goals() {
                let mut row = vec![g.to_string()];
                row.extend(
                    matrix
                        .requirements()
                        .iter()
                        .map(|x| format!("{:.2}", matrix.get(g, x).value())),
                );
                rows.push(row);
            }
            if format == Format::Csv {
                csv_string(rows)
            } else {
                ascii_table(&rows)
            }
        }
        Format::Json => {
            let mut goals = Map::new();
            for g in matrix.goals() {
                let row: Map<String, Value> = matrix
                    .requirements()
                    .iter()
                    .map(|x| (x.to_string(), json!(matrix.get(g, x).value())))
                    .collect();
                goals.insert(g.to_string(), Value::Object(row));
            }
            json_string(&Value::Object(goals))
        }
    }
}

pub fn render_priorities(entries: &[PrioritizedEntry], format: Format) -> String {
    match format {
        Format::Table | Format::Csv => {
            let mut rows = vec![[
                "goal",
                "requirement",
                "impact",
                "cost",
                "tech",
                "rds",
                "label",
                "no_activation",
            ]
            .map(String::from)
            .to_vec()];
            for e in entries {
                rows.push(vec![
                    e.goal.to_string(),
                    e.requirement.to_string(),
                    format!("{:.2}", e.impact),
                    format!("{:.2}", e.cost),
                    format!("{:.2}", e.tech),
                    format!("{:.4}", e.rds),
                    e.short_label(),
                    e.no_activation.to_string(),
                ]);
            }
            if format == Format::Csv {
                csv_string(rows)
            } else {
                ascii_table(&rows)
            }
        }
        Format::Json => {
            let items: Vec<Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "goal": e.goal,
                        "requirement": e.requirement,
                        "impact": e.impact,
                        "cost": e.cost,
                        "tech": e.tech,
                        "rds": round4(e.rds),
                        "label": e.short_label(),
                        "term": e.label,
                        "no_activation": e.no_activation,
                    })
                })
                .collect();
            json_string(&Value::Array(items))
        }
    }
}

pub fn render_relaxed(statements: &[RelaxedStatement], format: Format) -> String {
    match format {
        Format::Table => statements
            .iter()
            .map(|s| format!("{}\n", s.rendered))
            .collect(),
        Format::Csv => {
            let mut rows = vec![[
                "requirement",
                "metric",
                "connector",
                "rds",
                "ov",
                "statement",
            ]
            .map(String::from)
            .to_vec()];
            for s in statements {
                rows.push(vec![
                    s.requirement.to_string(),
                    s.metric.clone(),
                    s.connector.clone(),
                    format!("{:.2}", s.rds),
                    s.ov_symbol.clone(),
                    s.rendered.clone(),
                ]);
            }
            csv_string(rows)
        }
        Format::Json => {
            let items: Vec<Value> = statements
                .iter()
                .map(|s| {
                    json!({
                        "requirement": s.requirement,
                        "metric": s.metric,
                        "connector": s.connector,
                        "rds": round4(s.rds),
                        "ov": s.ov_symbol,
                        "optimal_value": s.optimal_value,
                        "statement": s.rendered,
                    })
                })
                .collect();
            json_string(&Value::Array(items))
        }
    }
}

pub fn render_validation(report: &ValidationReport, format: Format) -> String {
    match format {
        Format::Json => json_string(&json!({
            "errors": report.errors().count(),
            "warnings": report.warnings().count(),
            "findings": report.findings,
        })),
        Format::Csv => {
            let mut rows = vec![["severity", "category", "nodes", "rules", "message"]
                .map(String::from)
                .to_vec()];
            for f in &report.findings {
                let nodes: Vec<&str> = f.nodes.iter().map(|n| n.as_str()).collect();
                rows.push(vec![
                    format!("{:?}", f.severity).to_lowercase(),
                    f.category.to_string(),
                    nodes.join(" "),
                    f.rules.join(" "),
                    f.message.clone(),
                ]);
            }
            csv_string(rows)
        }
        Format::Table => format!("{report}\n"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_table_pads_and_rules() {
        let rows = vec![
            vec!["goal".to_string(), "R1".to_string()],
            vec!["S".to_string(), "0.85".to_string()],
        ];
        assert_eq!(ascii_table(&rows), "goal  R1\n----  ----\nS     0.85\n");
    }

    #[test]
    fn rounding() {
        assert_eq!(round4(0.820_249), 0.8202);
        assert_eq!(round4(0.131_76), 0.1318);
    }
}
