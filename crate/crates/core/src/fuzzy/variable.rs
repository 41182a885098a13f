use super::{FuzzyError, Trapezoid};

/// Closed interval a variable ranges over.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Universe {
    pub lo: f64,
    pub hi: f64,
}

impl Universe {
    pub const UNIT: Universe = Universe { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self, FuzzyError> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Universe { lo, hi })
        } else {
            Err(FuzzyError::Universe(lo, hi))
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Term {
    pub name: String,
    pub mf: Trapezoid,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LinguisticVariable {
    pub name: String,
    pub universe: Universe,
    /// In declaration order.
    pub terms: Vec<Term>,
}

impl LinguisticVariable {
    pub fn new(name: impl Into<String>, universe: Universe) -> Self {
        LinguisticVariable {
            name: name.into(),
            universe,
            terms: Vec::new(),
        }
    }

    /// Adds a term; names must be unique and the shape must lie in the universe.
    pub fn add_term(&mut self, name: impl Into<String>, mf: Trapezoid) -> Result<(), FuzzyError> {
        let name = name.into();
        if self.term(&name).is_some() {
            return Err(FuzzyError::DuplicateTerm {
                variable: self.name.clone(),
                term: name,
            });
        }
        let [x0, _, _, x3] = mf.breakpoints();
        if x0 < self.universe.lo || x3 > self.universe.hi {
            return Err(FuzzyError::TermOutsideUniverse {
                variable: self.name.clone(),
                term: name,
            });
        }
        self.terms.push(Term { name, mf });
        Ok(())
    }

    pub fn with_term(mut self, name: &str, mf: Trapezoid) -> Result<Self, FuzzyError> {
        self.add_term(name, mf)?;
        Ok(self)
    }

    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.name == name)
    }
}

/// Input and output variables of a fuzzy inference system.
#[derive(Debug, Clone, PartialEq, Default, serde::Serialize)]
pub struct VariableConfig {
    pub inputs: Vec<LinguisticVariable>,
    pub outputs: Vec<LinguisticVariable>,
}

impl VariableConfig {
    pub fn input(&self, name: &str) -> Option<&LinguisticVariable> {
        self.inputs.iter().find(|v| v.name == name)
    }

    pub fn output(&self, name: &str) -> Option<&LinguisticVariable> {
        self.outputs.iter().find(|v| v.name == name)
    }

    pub fn variable(&self, name: &str) -> Option<&LinguisticVariable> {
        self.input(name).or_else(|| self.output(name))
    }
}
