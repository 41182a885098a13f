#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

pub fn obs_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/obs.srm")
}

pub fn obs_text() -> String {
    std::fs::read_to_string(obs_path()).expect("fixture is readable")
}

pub const REQS: [&str; 12] = [
    "R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R10", "R11", "R12",
];

/// Reference impact of each requirement on each goal of the online banking
/// model. Every path from G9 to R8 runs through G8 over two rules of degree
/// 0.6, so (G9, R8) is 0.60.
pub const IMPACT_TABLE: [(&str, [f64; 12]); 14] = [
    (
        "S",
        [
            0.85, 0.75, 0.75, 0.85, 0.65, 0.65, 0.65, 0.60, 0.80, 0.40, 0.90, 0.90,
        ],
    ),
    (
        "G1",
        [
            0.85, 0.75, 0.75, 0.85, 0.65, 0.65, 0.65, 0.60, 0.80, 0.40, 0.90, 0.00,
        ],
    ),
    (
        "G2",
        [
            0.85, 0.75, 0.75, 0.85, 0.65, 0.65, 0.65, 0.60, 0.00, 0.00, 0.00, 0.00,
        ],
    ),
    (
        "G3",
        [
            0.00, 0.75, 0.75, 0.85, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00,
        ],
    ),
    (
        "G4",
        [
            0.00, 0.75, 0.75, 0.90, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00,
        ],
    ),
    (
        "G5",
        [
            0.00, 0.00, 0.00, 0.00, 0.65, 0.65, 0.65, 0.60, 0.00, 0.00, 0.00, 0.00,
        ],
    ),
    (
        "G6",
        [
            0.00, 0.00, 0.00, 0.00, 0.60, 0.60, 0.60, 0.60, 0.00, 0.00, 0.00, 0.00,
        ],
    ),
    (
        "G7",
        [
            0.00, 0.00, 0.00, 0.00, 0.70, 0.80, 0.90, 0.00, 0.00, 0.00, 0.00, 0.00,
        ],
    ),
    (
        "G8",
        [
            0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.60, 0.00, 0.00, 0.00, 0.00,
        ],
    ),
    (
        "G9",
        [
            0.00, 0.00, 0.00, 0.00, 0.65, 0.65, 0.65, 0.60, 0.00, 0.00, 0.00, 0.00,
        ],
    ),
    (
        "G10",
        [
            0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.80, 0.40, 0.00, 0.00,
        ],
    ),
    (
        "G11",
        [
            0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.80, 0.00, 0.00, 0.00,
        ],
    ),
    (
        "G12",
        [
            0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.90, 0.00,
        ],
    ),
    (
        "G13",
        [
            0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.90,
        ],
    ),
];

/// Reference priority grid: `x` where a priority is expected, `-` where the
/// requirement is not in the goal's list.
pub const PRIORITY_SUPPORT: [(&str, &str); 14] = [
    ("S", "xxxxxxxxxxxx"),
    ("G1", "xxxxxxxxxxx-"),
    ("G2", "xxxxxxxx----"),
    ("G3", "-xxx--------"),
    ("G4", "-xxx--------"),
    ("G5", "----xxxx----"),
    ("G6", "----xxxx----"),
    ("G7", "----xxx-----"),
    ("G8", "-------x----"),
    ("G9", "----xxxx----"),
    ("G10", "--------xx--"),
    ("G11", "--------x---"),
    ("G12", "----------x-"),
    ("G13", "-----------x"),
];

/// Bracketed metrics of the relaxed statements, by requirement.
pub const METRICS: [(&str, &str); 12] = [
    ("R1", "expiry rate"),
    ("R2", "examination delay"),
    ("R3", "randomness"),
    ("R4", "entropy"),
    ("R5", "trial delay"),
    ("R6", "complexity"),
    ("R7", "length of encryption key"),
    ("R8", "randomness"),
    ("R9", "level of distortion"),
    ("R10", "complexity"),
    ("R11", "complexity"),
    ("R12", "number of servers"),
];

/// Shape of a randomly generated model, before rendering to text.
#[derive(Debug, Clone)]
pub struct RandomModel {
    pub goals: usize,
    pub requirements: usize,
    /// (head goal index, body node indices, degree in millionths). Node
    /// indices below `goals` are goals, the rest requirements.
    pub rules: Vec<(usize, Vec<usize>, u32)>,
    pub risk: Vec<(u32, u32)>,
}

impl RandomModel {
    /// A DAG with at most `max_nodes` nodes: goals only derive nodes with a
    /// larger index, so there are no cycles.
    pub fn generate<R: Rng>(rng: &mut R, max_nodes: usize) -> Self {
        let goals = rng.gen_range(1..max_nodes);
        let requirements = rng.gen_range(1..=max_nodes - goals);
        let total = goals + requirements;
        let mut rules = Vec::new();
        for head in 0..goals {
            for _ in 0..rng.gen_range(0..=3) {
                let candidates: Vec<usize> = (head + 1..total).collect();
                if candidates.is_empty() {
                    break;
                }
                let k = rng.gen_range(1..=candidates.len().min(3));
                let body = candidates.choose_multiple(rng, k).copied().collect();
                rules.push((head, body, rng.gen_range(0..=1_000_000)));
            }
        }
        rules.shuffle(rng);
        let risk = (0..requirements)
            .map(|_| (rng.gen_range(0..=1_000_000), rng.gen_range(0..=1_000_000)))
            .collect();
        RandomModel {
            goals,
            requirements,
            rules,
            risk,
        }
    }

    pub fn node_id(&self, index: usize) -> String {
        if index < self.goals {
            format!("G{index}")
        } else {
            format!("R{}", index - self.goals + 1)
        }
    }

    pub fn goal_ids(&self) -> Vec<String> {
        (0..self.goals).map(|i| self.node_id(i)).collect()
    }

    pub fn requirement_ids(&self) -> Vec<String> {
        (self.goals..self.goals + self.requirements)
            .map(|i| self.node_id(i))
            .collect()
    }

    /// Source text; descriptions and metrics exercise string escapes.
    pub fn to_srm(&self) -> String {
        let mut out = String::from("option root = G0\n");
        for g in 0..self.goals {
            out.push_str(&format!("goal G{g} \"goal \\\"{g}\\\" of \\\\ model\"\n"));
        }
        for (i, (cost, tech)) in self.risk.iter().enumerate() {
            let mut line = format!(
                "req R{} \"requirement {}\\twith tab\" cost={} tech={}",
                i + 1,
                i + 1,
                *cost as f64 / 1e6,
                *tech as f64 / 1e6
            );
            if i % 2 == 0 {
                line.push_str(&format!(" metric=\"metric {i}\""));
            }
            if i % 3 == 0 {
                line.push_str(" connector=\"as many bits as\"");
            }
            if i % 4 == 1 {
                line.push_str(&format!(" ov={}", (i + 1) * 8));
            }
            out.push_str(&line);
            out.push('\n');
        }
        for (n, (head, body, degree)) in self.rules.iter().enumerate() {
            let body: Vec<String> = body.iter().map(|b| self.node_id(*b)).collect();
            out.push_str(&format!(
                "rule P{}: {} -> {} @ {}\n",
                n + 1,
                self.node_id(*head),
                body.join(" "),
                *degree as f64 / 1e6
            ));
        }
        out
    }
}
