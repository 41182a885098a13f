//! Mamdani inference: min for AND, max to combine rules with the same
//! consequent, clipping of consequent terms, centroid defuzzification.

use std::collections::BTreeMap;

use super::{FuzzyError, Trapezoid, Universe, VariableConfig};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Atom {
    pub variable: String,
    pub term: String,
}

impl Atom {
    pub fn new(variable: impl Into<String>, term: impl Into<String>) -> Self {
        Atom {
            variable: variable.into(),
            term: term.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FuzzyRule {
    pub id: String,
    /// Conjunction of input atoms.
    pub antecedent: Vec<Atom>,
    pub consequent: Atom,
}

#[derive(Debug, Clone, PartialEq, Default, serde::Serialize)]
pub struct RuleBase {
    pub rules: Vec<FuzzyRule>,
}

impl RuleBase {
    /// Checks every atom against `vars`: antecedents must name input terms,
    /// consequents output terms.
    pub fn check(&self, vars: &VariableConfig) -> Result<(), FuzzyError> {
        for rule in &self.rules {
            for atom in &rule.antecedent {
                let var = vars
                    .input(&atom.variable)
                    .ok_or_else(|| FuzzyError::UnknownVariable(atom.variable.clone()))?;
                if var.term(&atom.term).is_none() {
                    return Err(FuzzyError::UnknownTerm {
                        variable: atom.variable.clone(),
                        term: atom.term.clone(),
                    });
                }
            }
            let out = vars
                .output(&rule.consequent.variable)
                .ok_or_else(|| FuzzyError::UnknownVariable(rule.consequent.variable.clone()))?;
            if out.term(&rule.consequent.term).is_none() {
                return Err(FuzzyError::UnknownTerm {
                    variable: rule.consequent.variable.clone(),
                    term: rule.consequent.term.clone(),
                });
            }
        }
        Ok(())
    }

    /// Combinations of input terms (one term per input variable) that no rule
    /// fires on. Empty for a complete rule base.
    pub fn coverage_gaps(&self, vars: &VariableConfig) -> Vec<Vec<Atom>> {
        let mut combos: Vec<Vec<Atom>> = vec![Vec::new()];
        for var in &vars.inputs {
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    var.terms.iter().map(move |t| {
                        let mut next = prefix.clone();
                        next.push(Atom::new(var.name.clone(), t.name.clone()));
                        next
                    })
                })
                .collect();
        }
        combos
            .into_iter()
            .filter(|combo| {
                !self
                    .rules
                    .iter()
                    .any(|r| r.antecedent.iter().all(|a| combo.contains(a)))
            })
            .collect()
    }
}

/// Membership degree of every input term.
pub type Fuzzified = BTreeMap<Atom, f64>;

pub fn fuzzify(
    vars: &VariableConfig,
    inputs: &BTreeMap<String, f64>,
) -> Result<Fuzzified, FuzzyError> {
    if let Some(name) = inputs.keys().find(|k| vars.input(k).is_none()) {
        return Err(FuzzyError::UnknownVariable(name.clone()));
    }
    let mut out = Fuzzified::new();
    for var in &vars.inputs {
        let &value = inputs
            .get(&var.name)
            .ok_or_else(|| FuzzyError::MissingInput(var.name.clone()))?;
        if !var.universe.contains(value) {
            return Err(FuzzyError::InputOutOfRange {
                variable: var.name.clone(),
                value,
                universe: var.universe,
            });
        }
        for term in &var.terms {
            out.insert(
                Atom::new(var.name.clone(), term.name.clone()),
                term.mf.eval(value),
            );
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OutputTerm {
    pub name: String,
    pub mf: Trapezoid,
    pub activation: f64,
}

/// Aggregated consequent of one output variable: the pointwise max of each
/// term clipped at its activation.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FuzzyOutput {
    pub variable: String,
    pub universe: Universe,
    pub terms: Vec<OutputTerm>,
}

impl FuzzyOutput {
    pub fn activation(&self, term: &str) -> Option<f64> {
        self.terms
            .iter()
            .find(|t| t.name == term)
            .map(|t| t.activation)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.activation.min(t.mf.eval(x)))
            .fold(0.0, f64::max)
    }

    pub fn centroid(&self) -> Result<f64, FuzzyError> {
        defuzzify_cog(self, self.universe)
    }
}

/// Fires every rule and aggregates per output variable, in declaration order.
pub fn infer(rb: &RuleBase, vars: &VariableConfig, fuzzified: &Fuzzified) -> Vec<FuzzyOutput> {
    let mut activations: BTreeMap<&Atom, f64> = BTreeMap::new();
    for rule in &rb.rules {
        let strength = rule
            .antecedent
            .iter()
            .map(|a| fuzzified.get(a).copied().unwrap_or(0.0))
            .fold(1.0, f64::min);
        let slot = activations.entry(&rule.consequent).or_insert(0.0);
        *slot = slot.max(strength);
    }
    vars.outputs
        .iter()
        .map(|var| FuzzyOutput {
            variable: var.name.clone(),
            universe: var.universe,
            terms: var
                .terms
                .iter()
                .map(|t| OutputTerm {
                    name: t.name.clone(),
                    mf: t.mf,
                    activation: activations
                        .get(&Atom::new(var.name.clone(), t.name.clone()))
                        .copied()
                        .unwrap_or(0.0),
                })
                .collect(),
        })
        .collect()
}

/// A straight line through two points, evaluated anywhere.
#[derive(Clone, Copy)]
struct Line {
    x0: f64,
    y0: f64,
    slope: f64,
}

impl Line {
    fn at(&self, x: f64) -> f64 {
        self.y0 + self.slope * (x - self.x0)
    }
}

/// Centre of gravity `∫ μ(x)·x dx / ∫ μ(x) dx` over `universe`.
///
/// The aggregated function is piecewise linear, so the integrals are taken
/// exactly: the universe is cut at every corner of every clipped term and at
/// every crossing between terms, and each resulting linear piece is
/// integrated in closed form.
pub fn defuzzify_cog(out: &FuzzyOutput, universe: Universe) -> Result<f64, FuzzyError> {
    let active: Vec<&OutputTerm> = out.terms.iter().filter(|t| t.activation > 0.0).collect();

    let mut cuts = vec![universe.lo, universe.hi];
    for t in &active {
        cuts.extend(t.mf.breakpoints());
        if t.activation < 1.0 {
            cuts.extend(t.mf.clip_points(t.activation));
        }
    }
    cuts.retain(|x| universe.contains(*x));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut area = 0.0;
    let mut moment = 0.0;
    for w in cuts.windows(2) {
        let (l, r) = (w[0], w[1]);
        // Each clipped term is linear on (l, r); sample inside to stay clear
        // of jumps at degenerate shoulders.
        let (a, b) = (l + (r - l) / 3.0, l + 2.0 * (r - l) / 3.0);
        let lines: Vec<Line> = active
            .iter()
            .map(|t| {
                let ya = t.activation.min(t.mf.eval(a));
                let yb = t.activation.min(t.mf.eval(b));
                Line {
                    x0: a,
                    y0: ya,
                    slope: (yb - ya) / (b - a),
                }
            })
            .collect();

        let mut sub = vec![l, r];
        for (i, p) in lines.iter().enumerate() {
            for q in &lines[i + 1..] {
                let ds = p.slope - q.slope;
                if ds != 0.0 {
                    let x = a + (q.y0 - p.y0) / ds;
                    if x > l && x < r {
                        sub.push(x);
                    }
                }
            }
        }
        sub.sort_by(f64::total_cmp);
        sub.dedup();

        let envelope = |x: f64| lines.iter().map(|ln| ln.at(x)).fold(0.0, f64::max);
        for s in sub.windows(2) {
            let (p, q) = (s[0], s[1]);
            let mid = 0.5 * (p + q);
            // Pick the dominant line on this piece and integrate it exactly.
            let top = lines
                .iter()
                .copied()
                .max_by(|m, n| m.at(mid).total_cmp(&n.at(mid)));
            let (fp, fq) = match top {
                Some(line) if envelope(mid) > 0.0 => (line.at(p).max(0.0), line.at(q).max(0.0)),
                _ => continue,
            };
            let len = q - p;
            area += 0.5 * (fp + fq) * len;
            moment += len / 6.0 * (fp * (2.0 * p + q) + fq * (p + 2.0 * q));
        }
    }

    if area <= 0.0 {
        return Err(FuzzyError::NoActivation(out.variable.clone()));
    }
    Ok((moment / area).clamp(universe.lo, universe.hi))
}

/// Memberships closer than this count as a tie.
const TIE_EPSILON: f64 = 1e-9;

/// Output term with the highest membership at `rds`. Ties go to the term with
/// the larger centroid.
pub fn label(out: &FuzzyOutput, rds: f64, vars: &VariableConfig) -> Result<String, FuzzyError> {
    let var = vars
        .output(&out.variable)
        .ok_or_else(|| FuzzyError::UnknownVariable(out.variable.clone()))?;
    let mut best: Option<(&str, f64, f64)> = None;
    for term in &var.terms {
        let mu = term.mf.eval(rds);
        let c = term.mf.centroid();
        best = match best {
            None => Some((&term.name, mu, c)),
            Some((_, bmu, bc))
                if mu > bmu + TIE_EPSILON || ((mu - bmu).abs() <= TIE_EPSILON && c > bc) =>
            {
                Some((&term.name, mu, c))
            }
            keep => keep,
        };
    }
    best.map(|(name, _, _)| name.to_string())
        .ok_or_else(|| FuzzyError::NoTerms(var.name.clone()))
}
