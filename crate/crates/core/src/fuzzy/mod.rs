//! Mamdani fuzzy inference over trapezoidal terms, and the requirement
//! prioritization built on it.

mod fcl;
mod inference;
mod prioritize;
mod trapezoid;
mod variable;

use thiserror::Error;

pub use fcl::{parse_rulebase, FclError};
pub use inference::{
    defuzzify_cog, fuzzify, infer, label, Atom, Fuzzified, FuzzyOutput, FuzzyRule, OutputTerm,
    RuleBase,
};
pub use prioritize::{
    default_rulebase, prioritize, short_label, PrioritizeError, PrioritizedEntry, DEFAULT_RULES,
};
pub use trapezoid::Trapezoid;
pub use variable::{LinguisticVariable, Term, Universe, VariableConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("breakpoints {0:?} must be finite and ordered x0 <= x1 <= x2 <= x3")]
    Breakpoints([f64; 4]),
    #[error("universe [{0}, {1}] must be finite with lo < hi")]
    Universe(f64, f64),
    #[error("term `{term}` of `{variable}` is declared twice")]
    DuplicateTerm { variable: String, term: String },
    #[error("term `{term}` of `{variable}` extends outside the universe")]
    TermOutsideUniverse { variable: String, term: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown term `{term}` for variable `{variable}`")]
    UnknownTerm { variable: String, term: String },
    #[error("no value given for input `{0}`")]
    MissingInput(String),
    #[error("input `{variable}` = {value} is outside [{}, {}]", universe.lo, universe.hi)]
    InputOutOfRange {
        variable: String,
        value: f64,
        universe: Universe,
    },
    #[error("no rule fired for output `{0}`")]
    NoActivation(String),
    #[error("variable `{0}` has no terms")]
    NoTerms(String),
}
