//! Prioritization and partial selection of security requirements.
//!
//! The pipeline reads a goal model whose fuzzy derivation rules link a root
//! security goal down to concrete requirements ([`srm`]), scores how much each
//! requirement contributes to each goal ([`impact`]), ranks requirements with
//! a Mamdani fuzzy inference system over impact, cost and technical ability
//! ([`fuzzy`]) and rewrites each requirement as a RELAX-ed statement with a
//! required degree of satisfaction ([`relax`]).

pub mod cli;
pub mod fuzzy;
pub mod impact;
pub mod model;
pub mod relax;
pub mod report;
pub mod srm;
pub mod validate;

pub use model::{Degree, NodeId, RiskProfile, SecurityModel};
