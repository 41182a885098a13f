//! RELAX-ed requirement statements.
//!
//! A requirement with priority `rds` is relaxed to
//! `"<ID>: <description> [<metric>] <connector> <rds> × OV_<n>"`, asking for a
//! satisfaction level as close as possible to `rds` times the optimal value.
//! [`deviation_degree`] scores how well an achieved value meets that target.

use thiserror::Error;

use crate::fuzzy::{prioritize, PrioritizeError, RuleBase, VariableConfig};
use crate::model::{NodeId, Requirement, RiskProfile, SecurityModel};

pub const DEFAULT_CONNECTOR: &str = "as close as possible to";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelaxError {
    #[error("requirement {0} has no satisfaction metric")]
    MissingMetric(NodeId),
    #[error("required degree of satisfaction {0} is outside [0, 1]")]
    RdsOutOfRange(f64),
    #[error("unknown requirement {0}")]
    UnknownRequirement(NodeId),
    #[error("optimal value must be positive, got {0}")]
    OptimalValue(f64),
    #[error("half width must be positive, got {0}")]
    HalfWidth(f64),
    #[error(transparent)]
    Prioritize(#[from] PrioritizeError),
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RelaxedStatement {
    pub requirement: NodeId,
    pub metric: String,
    pub connector: String,
    pub rds: f64,
    pub ov_symbol: String,
    pub optimal_value: Option<f64>,
    pub rendered: String,
}

/// `OV_6` for `R6`; ids without a numeric suffix are used whole.
pub fn ov_symbol(id: &NodeId) -> String {
    match id.split_numeric_suffix() {
        (_, Some(n)) => format!("OV_{n}"),
        (_, None) => format!("OV_{id}"),
    }
}

pub fn relax_requirement(req: &Requirement, rds: f64) -> Result<RelaxedStatement, RelaxError> {
    if !(0.0..=1.0).contains(&rds) {
        return Err(RelaxError::RdsOutOfRange(rds));
    }
    let metric = req
        .metric
        .clone()
        .ok_or_else(|| RelaxError::MissingMetric(req.id.clone()))?;
    let connector = req
        .connector
        .clone()
        .unwrap_or_else(|| DEFAULT_CONNECTOR.to_string());
    let ov = ov_symbol(&req.id);
    let mut rendered = format!(
        "{}: {} [{}] {} {:.2} × {}",
        req.id, req.description, metric, connector, rds, ov
    );
    if let Some(value) = req.optimal_value {
        rendered.push_str(&format!(" ({ov} = {})", crate::srm::format_number(value)));
    }
    Ok(RelaxedStatement {
        requirement: req.id.clone(),
        metric,
        connector,
        rds,
        ov_symbol: ov,
        optimal_value: req.optimal_value,
        rendered,
    })
}

/// Relaxes every prioritized requirement of `goal`, in priority order.
pub fn relax_srl(
    model: &SecurityModel,
    risk: &RiskProfile,
    goal: &NodeId,
    vars: &VariableConfig,
    rb: &RuleBase,
) -> Result<Vec<RelaxedStatement>, RelaxError> {
    prioritize(model, risk, goal, vars, rb)?
        .iter()
        .map(|entry| {
            let req = model
                .requirement(&entry.requirement)
                .ok_or_else(|| RelaxError::UnknownRequirement(entry.requirement.clone()))?;
            relax_requirement(req, entry.rds)
        })
        .collect()
}

/// Symmetric triangular membership of the deviation from a relaxed target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationMembership {
    half_width: f64,
}

impl DeviationMembership {
    pub fn new(half_width: f64) -> Result<Self, RelaxError> {
        if half_width > 0.0 && half_width.is_finite() {
            Ok(DeviationMembership { half_width })
        } else {
            Err(RelaxError::HalfWidth(half_width))
        }
    }

    /// Half width of a quarter of the target `rds · ov`.
    pub fn for_target(rds: f64, ov: f64) -> Result<Self, RelaxError> {
        Self::new(0.25 * rds * ov)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Membership of a raw deviation: 1 at zero, 0 from `half_width` on.
    pub fn eval(&self, deviation: f64) -> f64 {
        (1.0 - deviation.abs() / self.half_width).max(0.0)
    }
}

/// How closely an achieved value `v` meets the relaxed target `rds · ov`.
pub fn deviation_degree(
    dm: &DeviationMembership,
    v: f64,
    rds: f64,
    ov: f64,
) -> Result<f64, RelaxError> {
    if ov.is_nan() || ov <= 0.0 {
        return Err(RelaxError::OptimalValue(ov));
    }
    Ok(dm.eval(v - rds * ov))
}
