use super::{check_kind, ImpactError};
use crate::model::{Degree, NodeId, NodeKind, SecurityModel};

/// Path enumeration is exponential; refuse models larger than this.
pub const ORACLE_NODE_LIMIT: usize = 20;

/// Reference implementation of [`super::impact`] that enumerates every
/// simple path from `g` to `x` straight off the rules, scores each by its
/// weakest rule and keeps the best. Used to check the dynamic program.
pub fn brute_force_impact(
    model: &SecurityModel,
    g: &NodeId,
    x: &NodeId,
) -> Result<Degree, ImpactError> {
    if model.node_count() > ORACLE_NODE_LIMIT {
        return Err(ImpactError::TooLarge {
            nodes: model.node_count(),
            limit: ORACLE_NODE_LIMIT,
        });
    }
    check_kind(model, g, NodeKind::Goal)?;
    check_kind(model, x, NodeKind::Requirement)?;

    let mut best = Degree::ZERO;
    let mut path = vec![g.clone()];
    walk(model, x, &mut path, Degree::ONE, &mut best);
    Ok(best)
}

fn walk(
    model: &SecurityModel,
    target: &NodeId,
    path: &mut Vec<NodeId>,
    strength: Degree,
    best: &mut Degree,
) {
    let here = path.last().expect("path starts at the goal").clone();
    for rule in model.rules().iter().filter(|r| r.head == here) {
        for next in &rule.body {
            if path.contains(next) {
                continue;
            }
            let through = strength.min(rule.degree);
            if next == target {
                *best = best.max(through);
                continue;
            }
            path.push(next.clone());
            walk(model, target, path, through, best);
            path.pop();
        }
    }
}
