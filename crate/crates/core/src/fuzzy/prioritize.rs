use std::collections::BTreeMap;

use thiserror::Error;

use super::{
    defuzzify_cog, fuzzify, infer, label, parse_rulebase, FuzzyError, RuleBase, VariableConfig,
};
use crate::impact::{build_srl, ImpactError};
use crate::model::{NodeId, RiskProfile, SecurityModel};

/// Rule base used when none is supplied.
pub const DEFAULT_RULES: &str = include_str!("../../data/default.rules");

pub fn default_rulebase() -> (VariableConfig, RuleBase) {
    parse_rulebase(DEFAULT_RULES).expect("bundled rule base parses")
}

const INPUTS: [&str; 3] = ["impact", "cost", "tech"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrioritizeError {
    #[error(transparent)]
    Impact(#[from] ImpactError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error("rule base must declare inputs `impact`, `cost` and `tech`; `{0}` is missing")]
    MissingVariable(&'static str),
    #[error("rule base must declare exactly one output variable, found {0}")]
    OutputCount(usize),
    #[error("requirement {0} has no cost/technical-ability entry")]
    MissingRisk(NodeId),
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PrioritizedEntry {
    pub goal: NodeId,
    pub requirement: NodeId,
    pub impact: f64,
    pub cost: f64,
    pub tech: f64,
    /// Required degree of satisfaction: the defuzzified priority.
    pub rds: f64,
    /// Output term with the highest membership at `rds`.
    pub label: String,
    /// No rule fired; `rds` fell back to the centroid of the weakest term.
    pub no_activation: bool,
}

impl PrioritizedEntry {
    pub fn short_label(&self) -> String {
        short_label(&self.label)
    }
}

/// First letter of a term name, upper-cased: `strong` -> `S`.
pub fn short_label(term: &str) -> String {
    term.chars()
        .next()
        .map(|c| c.to_uppercase().collect())
        .unwrap_or_default()
}

/// Priorities of every requirement in the goal's requirement list, highest
/// RDS first.
pub fn prioritize(
    model: &SecurityModel,
    risk: &RiskProfile,
    goal: &NodeId,
    vars: &VariableConfig,
    rb: &RuleBase,
) -> Result<Vec<PrioritizedEntry>, PrioritizeError> {
    for name in INPUTS {
        if vars.input(name).is_none() {
            return Err(PrioritizeError::MissingVariable(name));
        }
    }
    if vars.outputs.len() != 1 {
        return Err(PrioritizeError::OutputCount(vars.outputs.len()));
    }
    rb.check(vars)?;
    let output = &vars.outputs[0];
    let weakest = output
        .terms
        .iter()
        .min_by(|a, b| a.mf.centroid().total_cmp(&b.mf.centroid()))
        .ok_or_else(|| FuzzyError::NoTerms(output.name.clone()))?;

    let srl = build_srl(model, goal)?;
    let mut entries = Vec::with_capacity(srl.len());
    for item in &srl.entries {
        let attrs = risk
            .get(&item.requirement)
            .ok_or_else(|| PrioritizeError::MissingRisk(item.requirement.clone()))?;
        let inputs = BTreeMap::from([
            ("impact".to_string(), item.impact.value()),
            ("cost".to_string(), attrs.cost),
            ("tech".to_string(), attrs.technical_ability),
        ]);
        let out = infer(rb, vars, &fuzzify(vars, &inputs)?).remove(0);
        let (rds, no_activation) = match defuzzify_cog(&out, output.universe) {
            Ok(rds) => (rds, false),
            Err(FuzzyError::NoActivation(_)) => (weakest.mf.centroid(), true),
            Err(e) => return Err(e.into()),
        };
        entries.push(PrioritizedEntry {
            goal: goal.clone(),
            requirement: item.requirement.clone(),
            impact: item.impact.value(),
            cost: attrs.cost,
            tech: attrs.technical_ability,
            rds,
            label: label(&out, rds, vars)?,
            no_activation,
        });
    }
    entries.sort_by(|a, b| {
        b.rds
            .total_cmp(&a.rds)
            .then_with(|| a.requirement.cmp(&b.requirement))
    });
    Ok(entries)
}
