//! Structural checks over a [`SecurityModel`] and its [`RiskProfile`].
//!
//! Validation never fails; it collects [`Finding`]s. Unreachable nodes are
//! warnings, everything else is an error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::model::{NodeId, NodeKind, RiskProfile, SecurityModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Cycle,
    DanglingRef,
    Range,
    MissingRisk,
    RequirementAsHead,
    UnreachableNode,
    EmptyBody,
    DuplicateId,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Cycle => "cycle",
            Category::DanglingRef => "dangling-ref",
            Category::Range => "range",
            Category::MissingRisk => "missing-risk",
            Category::RequirementAsHead => "requirement-as-head",
            Category::UnreachableNode => "unreachable-node",
            Category::EmptyBody => "empty-body",
            Category::DuplicateId => "duplicate-id",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub category: Category,
    /// Node ids involved, in natural order.
    pub nodes: Vec<NodeId>,
    /// Rule ids involved, if any.
    pub rules: Vec<String>,
    pub message: String,
}

impl Finding {
    fn error(category: Category, message: impl Into<String>) -> Self {
        Finding {
            severity: Severity::Error,
            category,
            nodes: Vec::new(),
            rules: Vec::new(),
            message: message.into(),
        }
    }

    fn warning(category: Category, message: impl Into<String>) -> Self {
        Finding {
            severity: Severity::Warning,
            ..Finding::error(category, message)
        }
    }

    fn with_nodes(mut self, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        self.nodes = nodes.into_iter().collect();
        self
    }

    fn with_rules(mut self, rules: impl IntoIterator<Item = String>) -> Self {
        self.rules = rules.into_iter().collect();
        self
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]: {}", self.category, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Warning)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn count(&self, category: Category) -> usize {
        self.findings
            .iter()
            .filter(|f| f.category == category)
            .count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        write!(
            f,
            "{} error(s), {} warning(s)",
            self.errors().count(),
            self.warnings().count()
        )
    }
}

pub fn validate_model(model: &SecurityModel, risk: &RiskProfile) -> ValidationReport {
    let mut findings = Vec::new();

    match model.kind_of(model.root()) {
        Some(NodeKind::Goal) => {}
        Some(NodeKind::Requirement) => findings.push(
            Finding::error(
                Category::RequirementAsHead,
                format!("root {} is a requirement, not a goal", model.root()),
            )
            .with_nodes([model.root().clone()]),
        ),
        None => findings.push(
            Finding::error(
                Category::DanglingRef,
                format!("root {} is not declared", model.root()),
            )
            .with_nodes([model.root().clone()]),
        ),
    }

    for goal in model.goals() {
        if model.requirement(&goal.id).is_some() {
            findings.push(
                Finding::error(
                    Category::DuplicateId,
                    format!("{} is declared both as goal and requirement", goal.id),
                )
                .with_nodes([goal.id.clone()]),
            );
        }
    }

    let mut seen_rules = BTreeSet::new();
    for rule in model.rules() {
        if !seen_rules.insert(rule.id.as_str()) {
            findings.push(
                Finding::error(
                    Category::DuplicateId,
                    format!("rule id {} is reused", rule.id),
                )
                .with_rules([rule.id.clone()]),
            );
        }
        if rule.body.is_empty() {
            findings.push(
                Finding::error(
                    Category::EmptyBody,
                    format!("rule {} has an empty body", rule.id),
                )
                .with_rules([rule.id.clone()]),
            );
        }
        match model.kind_of(&rule.head) {
            Some(NodeKind::Goal) => {}
            Some(NodeKind::Requirement) => findings.push(
                Finding::error(
                    Category::RequirementAsHead,
                    format!("rule {} derives from requirement {}", rule.id, rule.head),
                )
                .with_nodes([rule.head.clone()])
                .with_rules([rule.id.clone()]),
            ),
            None => findings.push(dangling(&rule.id, &rule.head)),
        }
        for child in &rule.body {
            if model.kind_of(child).is_none() {
                findings.push(dangling(&rule.id, child));
            }
        }
    }

    findings.extend(cycles(model));

    for req in model.requirements() {
        match risk.get(&req.id) {
            None => findings.push(
                Finding::error(
                    Category::MissingRisk,
                    format!("requirement {} has no cost/technical-ability entry", req.id),
                )
                .with_nodes([req.id.clone()]),
            ),
            Some(attrs) => {
                for (name, value) in [
                    ("cost", attrs.cost),
                    ("technical ability", attrs.technical_ability),
                ] {
                    if !(0.0..=1.0).contains(&value) {
                        findings.push(
                            Finding::error(
                                Category::Range,
                                format!("{name} of {} is {value}, outside [0, 1]", req.id),
                            )
                            .with_nodes([req.id.clone()]),
                        );
                    }
                }
            }
        }
    }
    for (id, _) in risk.iter() {
        if model.requirement(id).is_none() {
            findings.push(
                Finding::error(
                    Category::DanglingRef,
                    format!("risk entry for undeclared requirement {id}"),
                )
                .with_nodes([id.clone()]),
            );
        }
    }

    if model.kind_of(model.root()).is_some() {
        let reachable = model.restricted_to(model.root());
        let unreachable = model
            .goals()
            .map(|g| &g.id)
            .chain(model.requirements().map(|r| &r.id))
            .filter(|id| reachable.kind_of(id).is_none());
        for id in unreachable {
            findings.push(
                Finding::warning(
                    Category::UnreachableNode,
                    format!("{id} is not derivable from root {}", model.root()),
                )
                .with_nodes([id.clone()]),
            );
        }
    }

    ValidationReport { findings }
}

fn dangling(rule: &str, id: &NodeId) -> Finding {
    Finding::error(
        Category::DanglingRef,
        format!("rule {rule} references undeclared node {id}"),
    )
    .with_nodes([id.clone()])
    .with_rules([rule.to_string()])
}

/// One finding per strongly connected component that contains a cycle.
fn cycles(model: &SecurityModel) -> Vec<Finding> {
    let mut graph: DiGraph<NodeId, ()> = DiGraph::new();
    let mut index: BTreeMap<NodeId, NodeIndex> = BTreeMap::new();
    let mut node = |graph: &mut DiGraph<NodeId, ()>, id: &NodeId| {
        *index
            .entry(id.clone())
            .or_insert_with(|| graph.add_node(id.clone()))
    };
    for ((head, child), _) in model.edges() {
        let a = node(&mut graph, &head);
        let b = node(&mut graph, &child);
        graph.add_edge(a, b, ());
    }

    let mut out = Vec::new();
    for scc in tarjan_scc(&graph) {
        let cyclic = scc.len() > 1 || graph.contains_edge(scc[0], scc[0]);
        if !cyclic {
            continue;
        }
        let members: BTreeSet<NodeId> = scc.iter().map(|&i| graph[i].clone()).collect();
        let rules: Vec<String> = model
            .rules()
            .iter()
            .filter(|r| members.contains(&r.head) && r.body.iter().any(|b| members.contains(b)))
            .map(|r| r.id.clone())
            .collect();
        let names: Vec<&str> = members.iter().map(|m| m.as_str()).collect();
        out.push(
            Finding::error(
                Category::Cycle,
                format!("derivation cycle through {}", names.join(", ")),
            )
            .with_nodes(members)
            .with_rules(rules),
        );
    }
    out.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Degree, DerivationRule, Goal, Requirement};

    fn goal(id: &str) -> Goal {
        Goal {
            id: id.into(),
            description: id.to_lowercase(),
        }
    }

    fn rule(id: &str, head: &str, body: &[&str], d: f64) -> DerivationRule {
        DerivationRule::new(
            id,
            head.into(),
            body.iter().map(|b| NodeId::from(*b)).collect(),
            Degree::new(d).unwrap(),
        )
    }

    fn small() -> (SecurityModel, RiskProfile) {
        let model = SecurityModel::new(
            [goal("S"), goal("G1")],
            [Requirement::new("R1".into(), "r1")],
            vec![
                rule("P1", "S", &["G1"], 0.9),
                rule("P2", "G1", &["R1"], 0.8),
            ],
            "S".into(),
        );
        let mut risk = RiskProfile::new();
        risk.insert("R1".into(), 0.5, 1.0);
        (model, risk)
    }

    #[test]
    fn clean_model_has_no_findings() {
        let (model, risk) = small();
        let report = validate_model(&model, &risk);
        assert!(report.findings.is_empty(), "{report}");
    }

    #[test]
    fn self_loop_is_one_cycle() {
        let (model, risk) = small();
        let mut rules = model.rules().to_vec();
        rules.push(rule("P3", "G1", &["G1"], 0.5));
        let model = SecurityModel::new(
            model.goals().cloned(),
            model.requirements().cloned(),
            rules,
            "S".into(),
        );
        let report = validate_model(&model, &risk);
        assert_eq!(report.count(Category::Cycle), 1);
        assert_eq!(report.findings.len(), 1);
        assert_eq!(report.findings[0].rules, ["P3"]);
    }

    #[test]
    fn longer_cycle_is_one_finding() {
        let model = SecurityModel::new(
            [goal("S"), goal("A"), goal("B")],
            [],
            vec![
                rule("P1", "S", &["A"], 0.9),
                rule("P2", "A", &["B"], 0.9),
                rule("P3", "B", &["A"], 0.9),
            ],
            "S".into(),
        );
        let report = validate_model(&model, &RiskProfile::new());
        assert_eq!(report.count(Category::Cycle), 1);
        assert_eq!(
            report.findings[0].nodes,
            [NodeId::from("A"), NodeId::from("B")]
        );
    }

    #[test]
    fn missing_risk_and_range() {
        let (model, _) = small();
        let report = validate_model(&model, &RiskProfile::new());
        assert_eq!(report.count(Category::MissingRisk), 1);

        let mut risk = RiskProfile::new();
        risk.insert("R1".into(), 1.5, -0.1);
        let report = validate_model(&model, &risk);
        assert_eq!(report.count(Category::Range), 2);
    }

    #[test]
    fn requirement_head_and_dangling() {
        let model = SecurityModel::new(
            [goal("S")],
            [Requirement::new("R1".into(), "")],
            vec![
                rule("P1", "S", &["R1", "G9"], 0.9),
                rule("P2", "R1", &["S"], 0.1),
            ],
            "S".into(),
        );
        let mut risk = RiskProfile::new();
        risk.insert("R1".into(), 0.1, 0.1);
        let report = validate_model(&model, &risk);
        assert_eq!(report.count(Category::RequirementAsHead), 1);
        assert_eq!(report.count(Category::DanglingRef), 1);
        // S -> R1 -> S
        assert_eq!(report.count(Category::Cycle), 1);
    }

    #[test]
    fn unreachable_is_warning_only() {
        let (model, risk) = small();
        let model = SecurityModel::new(
            model.goals().cloned().chain([goal("G9")]),
            model.requirements().cloned(),
            model.rules().to_vec(),
            "S".into(),
        );
        let report = validate_model(&model, &risk);
        assert!(!report.has_errors());
        assert_eq!(report.warnings().count(), 1);
        assert_eq!(report.findings[0].category, Category::UnreachableNode);
    }

    #[test]
    fn empty_body_and_duplicate_rule_ids() {
        let (model, risk) = small();
        let mut rules = model.rules().to_vec();
        rules.push(rule("P1", "G1", &[], 0.5));
        let model = SecurityModel::new(
            model.goals().cloned(),
            model.requirements().cloned(),
            rules,
            "S".into(),
        );
        let report = validate_model(&model, &risk);
        assert_eq!(report.count(Category::EmptyBody), 1);
        assert_eq!(report.count(Category::DuplicateId), 1);
    }
}
