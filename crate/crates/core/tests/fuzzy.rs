mod common;

use std::collections::BTreeSet;

use common::{obs_text, PRIORITY_SUPPORT, REQS};
use paps::fuzzy::{
    default_rulebase, defuzzify_cog, parse_rulebase, prioritize, FuzzyOutput, OutputTerm,
    Trapezoid, Universe,
};
use paps::srm::parse_model;
use paps::NodeId;
use proptest::prelude::*;

/// The membership formula written out with no special cases.
fn literal_mf(x: f64, [x0, x1, x2, x3]: [f64; 4]) -> f64 {
    ((x - x0) / (x1 - x0))
        .min(1.0)
        .min((x3 - x) / (x3 - x2))
        .max(0.0)
}

fn single(mf: Trapezoid, activation: f64) -> FuzzyOutput {
    FuzzyOutput {
        variable: "out".into(),
        universe: Universe::UNIT,
        terms: vec![OutputTerm {
            name: "t".into(),
            mf,
            activation,
        }],
    }
}

/// Midpoint rule over `n` cells of the unit interval.
fn sampled_cog(out: &FuzzyOutput, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        let x = (i as f64 + 0.5) * h;
        let mu = out
            .terms
            .iter()
            .map(|t| t.activation.min(t.mf.eval(x)))
            .fold(0.0, f64::max);
        num += x * mu;
        den += mu;
    }
    num / den
}

fn sorted4() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(0.0f64..1.0).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn eval_matches_literal_formula(bp in sorted4(), x in -0.5f64..1.5) {
        prop_assume!(bp[0] < bp[1] && bp[2] < bp[3]);
        let mf = Trapezoid::new(bp[0], bp[1], bp[2], bp[3]).unwrap();
        prop_assert!((mf.eval(x) - literal_mf(x, bp)).abs() <= 1e-12);
    }

    #[test]
    fn boundary_identities(bp in sorted4()) {
        prop_assume!(bp[0] < bp[1] && bp[2] < bp[3]);
        let mf = Trapezoid::new(bp[0], bp[1], bp[2], bp[3]).unwrap();
        prop_assert_eq!(mf.eval(bp[0]), 0.0);
        prop_assert_eq!(mf.eval(bp[3]), 0.0);
        prop_assert_eq!(mf.eval(bp[1]), 1.0);
        prop_assert_eq!(mf.eval(bp[2]), 1.0);
    }

    #[test]
    fn symmetric_shapes_balance_at_their_centre(c in 0.3f64..0.7, core in 0.0f64..0.1, side in 0.01f64..0.2, level in 0.05f64..=1.0) {
        let mf = Trapezoid::new(c - core - side, c - core, c + core, c + core + side).unwrap();
        let cog = defuzzify_cog(&single(mf, level), Universe::UNIT).unwrap();
        prop_assert!((cog - c).abs() <= 1e-9, "{cog} vs {c}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_clipped_terms_match_sampling(a in sorted4(), b in sorted4(), la in 0.05f64..=1.0, lb in 0.05f64..=1.0) {
        prop_assume!(a[3] - a[0] > 0.01 && b[3] - b[0] > 0.01);
        let out = FuzzyOutput {
            variable: "out".into(),
            universe: Universe::UNIT,
            terms: vec![
                OutputTerm { name: "a".into(), mf: Trapezoid::new(a[0], a[1], a[2], a[3]).unwrap(), activation: la },
                OutputTerm { name: "b".into(), mf: Trapezoid::new(b[0], b[1], b[2], b[3]).unwrap(), activation: lb },
            ],
        };
        let exact = defuzzify_cog(&out, Universe::UNIT).unwrap();
        prop_assert!((exact - sampled_cog(&out, 200_000)).abs() < 1e-6);
    }
}

#[test]
fn clipped_triangle_matches_sampling() {
    let out = single(Trapezoid::new(0.0, 0.2, 0.2, 0.4).unwrap(), 0.5);
    let exact = defuzzify_cog(&out, Universe::UNIT).unwrap();
    assert!((exact - sampled_cog(&out, 1_000_000)).abs() < 1e-6);
    assert!((exact - 0.2).abs() < 1e-12);
}

#[test]
fn fully_activated_terms_land_on_recurring_priorities() {
    let (vars, _) = default_rulebase();
    let output = &vars.outputs[0];
    for (term, target) in [
        ("optional", 0.13),
        ("weak", 0.25),
        ("normal", 0.55),
        ("strong", 0.82),
    ] {
        let mf = output.term(term).unwrap().mf;
        let cog = defuzzify_cog(&single(mf, 1.0), output.universe).unwrap();
        assert!((cog - target).abs() <= 0.02, "{term}: {cog}");
    }
}

#[test]
fn obs_priorities_cover_reference_cells() {
    let (model, risk) = parse_model(&obs_text()).unwrap();
    let (vars, rb) = default_rulebase();
    let mut got = BTreeSet::new();
    for goal in model.goals_root_first() {
        for e in prioritize(&model, &risk, goal, &vars, &rb).unwrap() {
            assert!(!e.no_activation, "{goal}/{}", e.requirement);
            got.insert((goal.to_string(), e.requirement.to_string()));
        }
    }
    let mut want = BTreeSet::new();
    for (goal, cells) in PRIORITY_SUPPORT {
        for (req, cell) in REQS.iter().zip(cells.chars()) {
            if cell == 'x' {
                want.insert((goal.to_string(), req.to_string()));
            }
        }
    }
    assert_eq!(got, want);
}

#[test]
fn obs_root_extremes() {
    let (model, risk) = parse_model(&obs_text()).unwrap();
    let (vars, rb) = default_rulebase();
    let entries = prioritize(&model, &risk, &NodeId::from("S"), &vars, &rb).unwrap();
    let label = |id: &str| {
        entries
            .iter()
            .find(|e| e.requirement.as_str() == id)
            .unwrap()
            .short_label()
    };
    assert_eq!(label("R1"), "S");
    assert_eq!(label("R4"), "S");
    assert_eq!(label("R12"), "O");
    assert_eq!(entries.first().unwrap().requirement.as_str(), "R1");
    assert_eq!(entries.last().unwrap().requirement.as_str(), "R12");
}

#[test]
fn custom_rule_base_changes_priorities() {
    let text = "
        VAR_INPUT impact TERM any := (0, 0, 1, 1); END_VAR
        VAR_INPUT cost TERM any := (0, 0, 1, 1); END_VAR
        VAR_INPUT tech TERM any := (0, 0, 1, 1); END_VAR
        VAR_OUTPUT priority TERM mid := (0.4, 0.5, 0.5, 0.6); END_VAR
        RULEBLOCK RULE 1: IF impact IS any THEN priority IS mid; END_RULEBLOCK
    ";
    let (vars, rb) = parse_rulebase(text).unwrap();
    let (model, risk) = parse_model(&obs_text()).unwrap();
    for e in prioritize(&model, &risk, &NodeId::from("S"), &vars, &rb).unwrap() {
        assert!((e.rds - 0.5).abs() < 1e-12);
        assert_eq!(e.label, "mid");
    }
}
