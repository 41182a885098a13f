//! Domain types for goal models with fuzzy derivation rules.
//!
//! A [`SecurityModel`] is a set of goals and requirements linked by
//! [`DerivationRule`]s. A rule `head -> b1 .. bn @ d` says every body element
//! contributes to `head` with degree `d`. Requirements are leaves; one goal is
//! the root. Costs and technical ability live in a separate [`RiskProfile`].
//!
//! Construction is unchecked so that broken models can be represented and
//! reported on; see [`crate::validate::validate_model`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("membership degree {0} is outside [0, 1]")]
    DegreeOutOfRange(f64),
    #[error("technical complexity must be at least 1, got {0}")]
    ComplexityOutOfRange(f64),
    #[error("identifier must not be empty")]
    EmptyId,
}

/// Symbolic identifier of a goal or requirement, e.g. `S`, `G7`, `R12`.
///
/// Ordering is "natural": a trailing number compares numerically, so `G2`
/// sorts before `G10`.
#[derive(Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self, ModelError> {
        let id = id.into();
        if id.is_empty() {
            return Err(ModelError::EmptyId);
        }
        Ok(NodeId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Splits `R12` into (`"R"`, Some(12)).
    pub fn split_numeric_suffix(&self) -> (&str, Option<u64>) {
        split_numeric_suffix(&self.0)
    }
}

fn split_numeric_suffix(s: &str) -> (&str, Option<u64>) {
    let digits = s.bytes().rev().take_while(|b| b.is_ascii_digit()).count();
    let (prefix, suffix) = s.split_at(s.len() - digits);
    (prefix, suffix.parse().ok())
}

/// Orders identifiers by prefix, then by numeric suffix, then bytewise.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (pa, na) = split_numeric_suffix(a);
    let (pb, nb) = split_numeric_suffix(b);
    pa.cmp(pb).then_with(|| na.cmp(&nb)).then_with(|| a.cmp(b))
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Shorthand used heavily in tests. Panics on an empty string.
impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::new(s).expect("node id must not be empty")
    }
}

/// A real number in `[0, 1]`.
#[derive(Clone, Copy, PartialEq, PartialOrd, Default, serde::Serialize)]
#[serde(transparent)]
pub struct Degree(f64);

impl Degree {
    pub const ZERO: Degree = Degree(0.0);
    pub const ONE: Degree = Degree(1.0);

    pub fn new(value: f64) -> Result<Self, ModelError> {
        if (0.0..=1.0).contains(&value) {
            Ok(Degree(value))
        } else {
            Err(ModelError::DegreeOutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn min(self, other: Degree) -> Degree {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Degree) -> Degree {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Goal,
    Requirement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Goal {
    pub id: NodeId,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Requirement {
    pub id: NodeId,
    pub description: String,
    /// Satisfaction metric shown in brackets when relaxing, e.g. "complexity".
    pub metric: Option<String>,
    /// Overrides the default "as close as possible to" phrase.
    pub connector: Option<String>,
    /// Optimal value of the satisfaction condition, when known numerically.
    pub optimal_value: Option<f64>,
}

impl Requirement {
    pub fn new(id: NodeId, description: impl Into<String>) -> Self {
        Requirement {
            id,
            description: description.into(),
            metric: None,
            connector: None,
            optimal_value: None,
        }
    }

    pub fn with_metric(mut self, metric: impl Into<String>) -> Self {
        self.metric = Some(metric.into());
        self
    }

    pub fn with_connector(mut self, connector: impl Into<String>) -> Self {
        self.connector = Some(connector.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivationRule {
    pub id: String,
    pub head: NodeId,
    pub body: Vec<NodeId>,
    pub degree: Degree,
}

impl DerivationRule {
    pub fn new(id: impl Into<String>, head: NodeId, body: Vec<NodeId>, degree: Degree) -> Self {
        DerivationRule {
            id: id.into(),
            head,
            body,
            degree,
        }
    }
}

/// Goals, requirements and the fuzzy derivation rules connecting them.
#[derive(Debug, Clone, PartialEq)]
pub struct SecurityModel {
    goals: BTreeMap<NodeId, Goal>,
    requirements: BTreeMap<NodeId, Requirement>,
    rules: Vec<DerivationRule>,
    root: NodeId,
}

impl SecurityModel {
    /// Builds a model without checking any structural invariant. Later
    /// duplicates in `goals` or `requirements` replace earlier ones.
    pub fn new(
        goals: impl IntoIterator<Item = Goal>,
        requirements: impl IntoIterator<Item = Requirement>,
        rules: Vec<DerivationRule>,
        root: NodeId,
    ) -> Self {
        SecurityModel {
            goals: goals.into_iter().map(|g| (g.id.clone(), g)).collect(),
            requirements: requirements
                .into_iter()
                .map(|r| (r.id.clone(), r))
                .collect(),
            rules,
            root,
        }
    }

    pub fn root(&self) -> &NodeId {
        &self.root
    }

    /// Goals in natural id order.
    pub fn goals(&self) -> impl Iterator<Item = &Goal> {
        self.goals.values()
    }

    /// Requirements in natural id order.
    pub fn requirements(&self) -> impl Iterator<Item = &Requirement> {
        self.requirements.values()
    }

    pub fn rules(&self) -> &[DerivationRule] {
        &self.rules
    }

    pub fn goal(&self, id: &NodeId) -> Option<&Goal> {
        self.goals.get(id)
    }

    pub fn requirement(&self, id: &NodeId) -> Option<&Requirement> {
        self.requirements.get(id)
    }

    pub fn kind_of(&self, id: &NodeId) -> Option<NodeKind> {
        if self.goals.contains_key(id) {
            Some(NodeKind::Goal)
        } else if self.requirements.contains_key(id) {
            Some(NodeKind::Requirement)
        } else {
            None
        }
    }

    pub fn node_count(&self) -> usize {
        self.goals.len() + self.requirements.len()
    }

    /// Goals with the root first, the rest in natural order.
    pub fn goals_root_first(&self) -> Vec<&NodeId> {
        let mut out = Vec::with_capacity(self.goals.len());
        if self.goals.contains_key(&self.root) {
            out.push(&self.root);
        }
        out.extend(self.goals.keys().filter(|id| **id != self.root));
        out
    }

    /// Pairwise edges `head -> child` with the degree of the strongest rule
    /// producing that pair.
    pub fn edges(&self) -> BTreeMap<(NodeId, NodeId), Degree> {
        let mut edges: BTreeMap<(NodeId, NodeId), Degree> = BTreeMap::new();
        for rule in &self.rules {
            for child in &rule.body {
                edges
                    .entry((rule.head.clone(), child.clone()))
                    .and_modify(|d| *d = d.max(rule.degree))
                    .or_insert(rule.degree);
            }
        }
        edges
    }

    /// Same model with rules sorted by id, the order the writer emits.
    pub fn canonicalized(&self) -> SecurityModel {
        let mut out = self.clone();
        out.rules.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        out
    }

    /// Copy of the model keeping only `start` and the nodes derivable from it.
    /// `start` becomes the root.
    pub fn restricted_to(&self, start: &NodeId) -> SecurityModel {
        let mut keep = std::collections::BTreeSet::new();
        let mut stack = vec![start.clone()];
        while let Some(node) = stack.pop() {
            if !keep.insert(node.clone()) {
                continue;
            }
            for rule in self.rules.iter().filter(|r| r.head == node) {
                stack.extend(rule.body.iter().cloned());
            }
        }
        let rules = self
            .rules
            .iter()
            .filter(|r| keep.contains(&r.head))
            .cloned()
            .collect();
        SecurityModel {
            goals: self
                .goals
                .iter()
                .filter(|(id, _)| keep.contains(*id))
                .map(|(id, g)| (id.clone(), g.clone()))
                .collect(),
            requirements: self
                .requirements
                .iter()
                .filter(|(id, _)| keep.contains(*id))
                .map(|(id, r)| (id.clone(), r.clone()))
                .collect(),
            rules,
            root: start.clone(),
        }
    }
}

/// Cost and technical ability of one requirement, both nominally in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RiskAttributes {
    pub cost: f64,
    pub technical_ability: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RiskProfile {
    entries: BTreeMap<NodeId, RiskAttributes>,
}

impl RiskProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: NodeId, cost: f64, technical_ability: f64) {
        self.entries.insert(
            id,
            RiskAttributes {
                cost,
                technical_ability,
            },
        );
    }

    pub fn remove(&mut self, id: &NodeId) -> Option<RiskAttributes> {
        self.entries.remove(id)
    }

    pub fn get(&self, id: &NodeId) -> Option<RiskAttributes> {
        self.entries.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, &RiskAttributes)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Ease of implementation as the reciprocal of technical complexity.
pub fn technical_ability(complexity: f64) -> Result<f64, ModelError> {
    // NaN falls through to the error branch.
    if complexity >= 1.0 && complexity.is_finite() {
        Ok(1.0 / complexity)
    } else {
        Err(ModelError::ComplexityOutOfRange(complexity))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut ids: Vec<NodeId> = ["G10", "S", "G2", "G1", "R1", "G13"]
            .into_iter()
            .map(NodeId::from)
            .collect();
        ids.sort();
        let got: Vec<&str> = ids.iter().map(|i| i.as_str()).collect();
        assert_eq!(got, ["G1", "G2", "G10", "G13", "R1", "S"]);
    }

    #[test]
    fn padded_ids_stay_distinct() {
        let a = NodeId::from("G01");
        let b = NodeId::from("G1");
        assert_ne!(a.cmp(&b), Ordering::Equal);
    }

    #[test]
    fn degree_range() {
        assert!(Degree::new(0.0).is_ok());
        assert!(Degree::new(1.0).is_ok());
        assert!(Degree::new(1.2).is_err());
        assert!(Degree::new(-0.01).is_err());
        assert!(Degree::new(f64::NAN).is_err());
    }

    #[test]
    fn technical_ability_examples() {
        assert_eq!(technical_ability(1.0), Ok(1.0));
        assert!((technical_ability(5.0).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(
            technical_ability(0.5),
            Err(ModelError::ComplexityOutOfRange(0.5))
        );
        assert!(technical_ability(f64::NAN).is_err());
    }

    #[test]
    fn technical_ability_strictly_decreasing() {
        let mut prev = technical_ability(1.0).unwrap();
        for i in 1..200 {
            let c = 1.0 + i as f64 * 0.37;
            let t = technical_ability(c).unwrap();
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn duplicate_edges_collapse_to_max() {
        let g = NodeId::from("G");
        let r = NodeId::from("R");
        let model = SecurityModel::new(
            [Goal {
                id: g.clone(),
                description: String::new(),
            }],
            [Requirement::new(r.clone(), "")],
            vec![
                DerivationRule::new("P1", g.clone(), vec![r.clone()], Degree::new(0.3).unwrap()),
                DerivationRule::new("P2", g.clone(), vec![r.clone()], Degree::new(0.7).unwrap()),
            ],
            g.clone(),
        );
        let edges = model.edges();
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[&(g, r)].value(), 0.7);
    }
}
