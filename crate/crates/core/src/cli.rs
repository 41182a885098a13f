//! Command-line front end: `validate`, `impacts`, `prioritize`, `relax`.
//!
//! Exit codes: 0 success, 1 model/rule/domain failure, 2 I/O or usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::fuzzy::{default_rulebase, parse_rulebase, prioritize, RuleBase, VariableConfig};
use crate::impact::impact_matrix;
use crate::model::{NodeId, NodeKind, RiskProfile, SecurityModel};
use crate::relax::relax_srl;
use crate::report::{render_impacts, render_priorities, render_relaxed, render_validation, Format};
use crate::srm::{parse_model, SrmDocument};
use crate::validate::validate_model;

#[derive(Debug, Parser)]
#[command(
    name = "paps",
    version,
    about = "Prioritize and partially select security requirements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a model file for structural problems.
    Validate(RunConfig),
    /// Impact of every requirement on every goal.
    Impacts(RunConfig),
    /// Fuzzy priorities of the requirements of one goal.
    Prioritize(RunConfig),
    /// RELAX-ed statements for the requirements of one goal.
    Relax(RunConfig),
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Model file (.srm).
    pub model_path: PathBuf,
    /// Rule base file (.rules); the bundled default when omitted.
    #[arg(long = "rules")]
    pub rules_path: Option<PathBuf>,
    /// Goal to report on; defaults to the root goal (all goals for `impacts`).
    #[arg(long)]
    pub goal: Option<String>,
    #[arg(long = "format", value_enum, default_value = "table")]
    pub output_format: Format,
    /// Write output here instead of stdout.
    #[arg(long = "out")]
    pub output_path: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    /// Bad model, rules or arguments: exit 1.
    Domain(String),
    /// Unreadable input or unwritable output: exit 2.
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Io(m) => m,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn emit(config: &RunConfig, text: &str) -> Result<(), Failure> {
    match &config.output_path {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io(format!("cannot write output: {e}")))
        }
    }
}

fn load_model(config: &RunConfig) -> Result<(SecurityModel, RiskProfile), Failure> {
    let text = read(&config.model_path)?;
    parse_model(&text).map_err(|e| Failure::Domain(format!("{}: {e}", config.model_path.display())))
}

fn load_rules(config: &RunConfig) -> Result<(VariableConfig, RuleBase), Failure> {
    let Some(path) = &config.rules_path else {
        return Ok(default_rulebase());
    };
    let text = read(path)?;
    let (vars, rb) =
        parse_rulebase(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let gaps = rb.coverage_gaps(&vars);
    if !gaps.is_empty() {
        eprintln!(
            "warning: {}: {} input combination(s) fire no rule",
            path.display(),
            gaps.len()
        );
    }
    Ok((vars, rb))
}

fn goal_of(config: &RunConfig, model: &SecurityModel) -> Result<NodeId, Failure> {
    let Some(raw) = &config.goal else {
        return Ok(model.root().clone());
    };
    let id = NodeId::new(raw.as_str()).map_err(|e| Failure::Domain(e.to_string()))?;
    match model.kind_of(&id) {
        Some(NodeKind::Goal) => Ok(id),
        Some(NodeKind::Requirement) => Err(Failure::Domain(format!(
            "`{id}` is a requirement, not a goal"
        ))),
        None => Err(Failure::Domain(format!("unknown goal `{id}`"))),
    }
}

fn cmd_validate(config: &RunConfig) -> Result<i32, Failure> {
    let text = read(&config.model_path)?;
    let lowered = SrmDocument::parse(&text)
        .and_then(|doc| doc.lower())
        .map_err(|e| Failure::Domain(format!("{}: {e}", config.model_path.display())))?;
    let report = validate_model(&lowered.model, &lowered.risk);
    emit(config, &render_validation(&report, config.output_format))?;
    Ok(if report.has_errors() { 1 } else { 0 })
}

fn cmd_impacts(config: &RunConfig) -> Result<i32, Failure> {
    let (model, _) = load_model(config)?;
    let mut matrix = impact_matrix(&model).map_err(|e| Failure::Domain(e.to_string()))?;
    if config.goal.is_some() {
        let goal = goal_of(config, &model)?;
        matrix = matrix
            .only_goal(&goal)
            .map_err(|e| Failure::Domain(e.to_string()))?;
    }
    emit(config, &render_impacts(&matrix, config.output_format))?;
    Ok(0)
}

fn cmd_prioritize(config: &RunConfig) -> Result<i32, Failure> {
    let (model, risk) = load_model(config)?;
    let (vars, rb) = load_rules(config)?;
    let goal = goal_of(config, &model)?;
    let entries =
        prioritize(&model, &risk, &goal, &vars, &rb).map_err(|e| Failure::Domain(e.to_string()))?;
    for e in entries.iter().filter(|e| e.no_activation) {
        eprintln!(
            "warning: no rule fired for {}; using the weakest priority",
            e.requirement
        );
    }
    emit(config, &render_priorities(&entries, config.output_format))?;
    Ok(0)
}

fn cmd_relax(config: &RunConfig) -> Result<i32, Failure> {
    let (model, risk) = load_model(config)?;
    let (vars, rb) = load_rules(config)?;
    let goal = goal_of(config, &model)?;
    let statements =
        relax_srl(&model, &risk, &goal, &vars, &rb).map_err(|e| Failure::Domain(e.to_string()))?;
    emit(config, &render_relaxed(&statements, config.output_format))?;
    Ok(0)
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Validate(c) => cmd_validate(c),
        Command::Impacts(c) => cmd_impacts(c),
        Command::Prioritize(c) => cmd_prioritize(c),
        Command::Relax(c) => cmd_relax(c),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.code()
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            e.exit_code()
        }
    }
}
