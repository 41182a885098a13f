//! Requirement impact on goals.
//!
//! The impact of requirement `x` on goal `g` is the best derivation path from
//! `g` to `x`, where a path is only as strong as its weakest rule:
//! `max over paths (min over edge degrees)`. On a DAG this is a widest-path
//! problem, solved here with one pass over a topological order per goal.

mod oracle;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{Degree, NodeId, NodeKind, SecurityModel};

pub use oracle::{brute_force_impact, ORACLE_NODE_LIMIT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImpactError {
    #[error("unknown node `{0}`")]
    UnknownNode(NodeId),
    #[error("`{0}` is not a goal")]
    NotAGoal(NodeId),
    #[error("`{0}` is not a requirement")]
    NotARequirement(NodeId),
    #[error("derivation graph has a cycle through `{0}`")]
    Cyclic(NodeId),
    #[error("model has {nodes} nodes; path enumeration is limited to {limit}")]
    TooLarge { nodes: usize, limit: usize },
}

/// Adjacency view of the rules, with duplicate edges collapsed to their
/// strongest degree and nodes in topological order.
struct DerivationGraph {
    nodes: Vec<NodeId>,
    index: BTreeMap<NodeId, usize>,
    children: Vec<Vec<(usize, Degree)>>,
    order: Vec<usize>,
}

impl DerivationGraph {
    fn build(model: &SecurityModel) -> Result<Self, ImpactError> {
        let mut nodes: Vec<NodeId> = model
            .goals()
            .map(|g| g.id.clone())
            .chain(model.requirements().map(|r| r.id.clone()))
            .collect();
        let mut index: BTreeMap<NodeId, usize> = nodes
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        let edges = model.edges();
        for (head, child) in edges.keys() {
            for id in [head, child] {
                if !index.contains_key(id) {
                    index.insert(id.clone(), nodes.len());
                    nodes.push(id.clone());
                }
            }
        }
        let mut children = vec![Vec::new(); nodes.len()];
        let mut indegree = vec![0usize; nodes.len()];
        for ((head, child), degree) in &edges {
            let (h, c) = (index[head], index[child]);
            children[h].push((c, *degree));
            indegree[c] += 1;
        }

        // Kahn's algorithm; the initial queue is in node order, so the result
        // is deterministic.
        let mut order = Vec::with_capacity(nodes.len());
        let mut ready: Vec<usize> = (0..nodes.len())
            .filter(|&i| indegree[i] == 0)
            .rev()
            .collect();
        while let Some(n) = ready.pop() {
            order.push(n);
            for &(c, _) in children[n].iter().rev() {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.push(c);
                }
            }
        }
        if order.len() != nodes.len() {
            let stuck = (0..nodes.len())
                .filter(|&i| indegree[i] > 0)
                .map(|i| nodes[i].clone())
                .min()
                .expect("some node is left on a cycle");
            return Err(ImpactError::Cyclic(stuck));
        }
        Ok(DerivationGraph {
            nodes,
            index,
            children,
            order,
        })
    }

    /// Best path strength from `source` to every node, `None` if unreachable.
    /// `source` itself holds the identity `1.0`.
    fn widest_from(&self, source: usize) -> Vec<Option<Degree>> {
        let mut best: Vec<Option<Degree>> = vec![None; self.nodes.len()];
        best[source] = Some(Degree::ONE);
        let start = self
            .order
            .iter()
            .position(|&n| n == source)
            .expect("source is in the order");
        for &u in &self.order[start..] {
            let Some(reach) = best[u] else { continue };
            for &(v, d) in &self.children[u] {
                let through = reach.min(d);
                best[v] = Some(match best[v] {
                    Some(cur) => cur.max(through),
                    None => through,
                });
            }
        }
        best
    }
}

fn check_kind(model: &SecurityModel, id: &NodeId, want: NodeKind) -> Result<(), ImpactError> {
    match model.kind_of(id) {
        None => Err(ImpactError::UnknownNode(id.clone())),
        Some(k) if k == want => Ok(()),
        Some(_) if want == NodeKind::Goal => Err(ImpactError::NotAGoal(id.clone())),
        Some(_) => Err(ImpactError::NotARequirement(id.clone())),
    }
}

/// Impact of requirement `x` on goal `g`; zero when no path exists.
pub fn impact(model: &SecurityModel, g: &NodeId, x: &NodeId) -> Result<Degree, ImpactError> {
    check_kind(model, g, NodeKind::Goal)?;
    check_kind(model, x, NodeKind::Requirement)?;
    let graph = DerivationGraph::build(model)?;
    let best = graph.widest_from(graph.index[g]);
    Ok(best[graph.index[x]].unwrap_or(Degree::ZERO))
}

/// Goal-by-requirement impacts. Absent entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactMatrix {
    goals: Vec<NodeId>,
    requirements: Vec<NodeId>,
    entries: BTreeMap<(NodeId, NodeId), Degree>,
}

impl ImpactMatrix {
    pub fn get(&self, goal: &NodeId, requirement: &NodeId) -> Degree {
        self.entries
            .get(&(goal.clone(), requirement.clone()))
            .copied()
            .unwrap_or(Degree::ZERO)
    }

    /// Row order: root first, then the other goals in natural order.
    pub fn goals(&self) -> &[NodeId] {
        &self.goals
    }

    pub fn requirements(&self) -> &[NodeId] {
        &self.requirements
    }

    /// Positive entries only.
    pub fn entries(&self) -> impl Iterator<Item = (&NodeId, &NodeId, Degree)> {
        self.entries.iter().map(|((g, x), d)| (g, x, *d))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keeps a single goal row.
    pub fn only_goal(&self, goal: &NodeId) -> Result<ImpactMatrix, ImpactError> {
        if !self.goals.contains(goal) {
            return Err(ImpactError::UnknownNode(goal.clone()));
        }
        Ok(ImpactMatrix {
            goals: vec![goal.clone()],
            requirements: self.requirements.clone(),
            entries: self
                .entries
                .iter()
                .filter(|((g, _), _)| g == goal)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        })
    }
}

pub fn impact_matrix(model: &SecurityModel) -> Result<ImpactMatrix, ImpactError> {
    let graph = DerivationGraph::build(model)?;
    let requirements: Vec<NodeId> = model.requirements().map(|r| r.id.clone()).collect();
    let goals: Vec<NodeId> = model.goals_root_first().into_iter().cloned().collect();
    let mut entries = BTreeMap::new();
    for g in &goals {
        let best = graph.widest_from(graph.index[g]);
        for x in &requirements {
            if let Some(d) = best[graph.index[x]] {
                if d.value() > 0.0 {
                    entries.insert((g.clone(), x.clone()), d);
                }
            }
        }
    }
    Ok(ImpactMatrix {
        goals,
        requirements,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SrlEntry {
    pub requirement: NodeId,
    pub impact: Degree,
}

/// Requirements with positive impact on one goal, strongest first.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SecurityRequirementList {
    pub goal: NodeId,
    pub entries: Vec<SrlEntry>,
}

impl SecurityRequirementList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, requirement: &NodeId) -> Option<Degree> {
        self.entries
            .iter()
            .find(|e| &e.requirement == requirement)
            .map(|e| e.impact)
    }
}

pub fn build_srl(
    model: &SecurityModel,
    g: &NodeId,
) -> Result<SecurityRequirementList, ImpactError> {
    check_kind(model, g, NodeKind::Goal)?;
    let graph = DerivationGraph::build(model)?;
    let best = graph.widest_from(graph.index[g]);
    let mut entries: Vec<SrlEntry> = model
        .requirements()
        .filter_map(|r| {
            let d = best[graph.index[&r.id]]?;
            (d.value() > 0.0).then(|| SrlEntry {
                requirement: r.id.clone(),
                impact: d,
            })
        })
        .collect();
    entries.sort_by(|a, b| {
        b.impact
            .value()
            .total_cmp(&a.impact.value())
            .then_with(|| a.requirement.cmp(&b.requirement))
    });
    Ok(SecurityRequirementList {
        goal: g.clone(),
        entries,
    })
}
