use std::fmt::Write;

use crate::model::{natural_cmp, RiskProfile, SecurityModel};

/// Up to six decimals, trailing zeros trimmed.
pub fn format_number(value: f64) -> String {
    let mut s = format!("{value:.6}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Canonical text form: header, then goals, requirements and rules, each
/// sorted by id. Costs are written in the normalized `[0, 1]` unit.
pub fn serialize_model(model: &SecurityModel, risk: &RiskProfile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "option root = {}", model.root());
    for goal in model.goals() {
        let _ = writeln!(out, "goal {} {}", goal.id, quote(&goal.description));
    }
    for req in model.requirements() {
        let _ = write!(out, "req {} {}", req.id, quote(&req.description));
        if let Some(attrs) = risk.get(&req.id) {
            let _ = write!(
                out,
                " cost={} tech={}",
                format_number(attrs.cost),
                format_number(attrs.technical_ability)
            );
        }
        if let Some(metric) = &req.metric {
            let _ = write!(out, " metric={}", quote(metric));
        }
        if let Some(connector) = &req.connector {
            let _ = write!(out, " connector={}", quote(connector));
        }
        if let Some(ov) = req.optimal_value {
            let _ = write!(out, " ov={}", format_number(ov));
        }
        out.push('\n');
    }
    let mut rules: Vec<_> = model.rules().iter().collect();
    rules.sort_by(|a, b| natural_cmp(&a.id, &b.id));
    for rule in rules {
        let body: Vec<&str> = rule.body.iter().map(|b| b.as_str()).collect();
        let _ = writeln!(
            out,
            "rule {}: {} -> {} @ {}",
            rule.id,
            rule.head,
            body.join(" "),
            format_number(rule.degree.value())
        );
    }
    out
}
