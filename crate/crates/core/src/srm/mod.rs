//! Line-oriented text format for security models (`.srm`).
//!
//! ```text
//! # comment
//! option cost_scale = 100
//! option root = S
//! goal <ID> "<description>"
//! req <ID> "<description>" cost=<num> tech=<num> [metric="<text>"] [connector="<text>"] [ov=<num>]
//! rule <ID>: <GoalID> -> <ID> [<ID> ...] @ <num>
//! ```
//!
//! `complexity=<num>` may replace `tech=`; it is converted to a technical
//! ability of `1 / complexity`. Options must come before declarations.
//! Without `option root`, the root is the first declared goal that no rule
//! derives.

mod lexer;
mod writer;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{
    technical_ability, Degree, DerivationRule, Goal, NodeId, Requirement, RiskProfile,
    SecurityModel,
};
use crate::validate::validate_model;
use lexer::{lex_line, Tok, Token};

pub use writer::{format_number, serialize_model};

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SrmError {
    #[error("{pos}: syntax error: {message} (expected {})", expected.join(", "))]
    Syntax {
        pos: Pos,
        message: String,
        expected: Vec<String>,
    },
    #[error("{pos}: {message}")]
    Semantic { pos: Pos, message: String },
}

impl SrmError {
    fn syntax<I, S>(pos: Pos, message: impl Into<String>, expected: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SrmError::Syntax {
            pos,
            message: message.into(),
            expected: expected.into_iter().map(Into::into).collect(),
        }
    }

    fn semantic(pos: Pos, message: impl Into<String>) -> Self {
        SrmError::Semantic {
            pos,
            message: message.into(),
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            SrmError::Syntax { pos, .. } | SrmError::Semantic { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spanned<T> {
    pub pos: Pos,
    pub node: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OptionValue {
    Number(f64),
    Ident(String),
    Str(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptionDecl {
    pub key: String,
    pub value: OptionValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReqAttr {
    pub key: String,
    pub value: OptionValue,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Declaration {
    Goal {
        id: String,
        description: String,
    },
    Requirement {
        id: String,
        description: String,
        attrs: Vec<ReqAttr>,
    },
    Rule {
        id: String,
        head: String,
        body: Vec<Spanned<String>>,
        degree: f64,
        degree_pos: Pos,
    },
}

/// Parsed but not yet resolved file contents.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SrmDocument {
    pub header: Vec<Spanned<OptionDecl>>,
    pub declarations: Vec<Spanned<Declaration>>,
}

const STATEMENTS: [&str; 4] = ["`option`", "`goal`", "`req`", "`rule`"];

struct Cursor<'a> {
    tokens: &'a [Token],
    at: usize,
    line: usize,
    line_len: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.at)
    }

    fn end_pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.line_len + 1,
        }
    }

    fn here(&self) -> Pos {
        self.peek().map_or(self.end_pos(), |t| t.pos)
    }

    fn unexpected(&self, expected: &[&str]) -> SrmError {
        let found = self
            .peek()
            .map_or("end of line".to_string(), |t| t.tok.to_string());
        SrmError::syntax(
            self.here(),
            format!("found {found}"),
            expected.iter().copied(),
        )
    }

    fn ident(&mut self, what: &str) -> Result<Spanned<String>, SrmError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                pos,
            }) => {
                self.at += 1;
                Ok(Spanned {
                    pos: *pos,
                    node: s.clone(),
                })
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn string(&mut self, what: &str) -> Result<String, SrmError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Str(s), ..
            }) => {
                self.at += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn number(&mut self) -> Result<(f64, Pos), SrmError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Number(n),
                pos,
            }) => {
                self.at += 1;
                Ok((*n, *pos))
            }
            _ => Err(self.unexpected(&["number"])),
        }
    }

    fn punct(&mut self, want: Tok, shown: &str) -> Result<(), SrmError> {
        match self.peek() {
            Some(t) if t.tok == want => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&[shown])),
        }
    }

    fn value(&mut self) -> Result<(OptionValue, Pos), SrmError> {
        let tok = self
            .peek()
            .ok_or_else(|| self.unexpected(&["number", "identifier", "string"]))?;
        let value = match &tok.tok {
            Tok::Number(n) => OptionValue::Number(*n),
            Tok::Ident(s) => OptionValue::Ident(s.clone()),
            Tok::Str(s) => OptionValue::Str(s.clone()),
            _ => return Err(self.unexpected(&["number", "identifier", "string"])),
        };
        self.at += 1;
        Ok((value, tok.pos))
    }

    fn finish(&self) -> Result<(), SrmError> {
        if self.peek().is_some() {
            Err(self.unexpected(&["end of line"]))
        } else {
            Ok(())
        }
    }
}

impl SrmDocument {
    /// Syntax-only parse. Accepts LF or CRLF line endings.
    pub fn parse(text: &str) -> Result<SrmDocument, SrmError> {
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);
        let mut doc = SrmDocument::default();
        for (idx, raw) in text.split('\n').enumerate() {
            let line_no = idx + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            let tokens = lex_line(line, line_no)?;
            if tokens.is_empty() {
                continue;
            }
            let mut cur = Cursor {
                tokens: &tokens,
                at: 0,
                line: line_no,
                line_len: line.chars().count(),
            };
            let keyword = match cur.peek() {
                Some(Token {
                    tok: Tok::Ident(k),
                    pos,
                }) => (k.as_str(), *pos),
                _ => return Err(cur.unexpected(&STATEMENTS)),
            };
            let stmt_pos = keyword.1;
            match keyword.0 {
                "option" => {
                    cur.at += 1;
                    let key = cur.ident("option name")?;
                    cur.punct(Tok::Eq, "`=`")?;
                    let (value, _) = cur.value()?;
                    cur.finish()?;
                    if !doc.declarations.is_empty() {
                        return Err(SrmError::semantic(
                            stmt_pos,
                            "options must precede all declarations",
                        ));
                    }
                    doc.header.push(Spanned {
                        pos: stmt_pos,
                        node: OptionDecl {
                            key: key.node,
                            value,
                        },
                    });
                }
                "goal" => {
                    cur.at += 1;
                    let id = cur.ident("goal identifier")?;
                    let description = cur.string("quoted description")?;
                    cur.finish()?;
                    doc.declarations.push(Spanned {
                        pos: stmt_pos,
                        node: Declaration::Goal {
                            id: id.node,
                            description,
                        },
                    });
                }
                "req" => {
                    cur.at += 1;
                    let id = cur.ident("requirement identifier")?;
                    let description = cur.string("quoted description")?;
                    let mut attrs = Vec::new();
                    while cur.peek().is_some() {
                        let key = cur.ident("attribute name")?;
                        cur.punct(Tok::Eq, "`=`")?;
                        let (value, _) = cur.value()?;
                        attrs.push(ReqAttr {
                            key: key.node,
                            value,
                            pos: key.pos,
                        });
                    }
                    doc.declarations.push(Spanned {
                        pos: stmt_pos,
                        node: Declaration::Requirement {
                            id: id.node,
                            description,
                            attrs,
                        },
                    });
                }
                "rule" => {
                    cur.at += 1;
                    let id = cur.ident("rule identifier")?;
                    cur.punct(Tok::Colon, "`:`")?;
                    let head = cur.ident("goal identifier")?;
                    cur.punct(Tok::Arrow, "`->`")?;
                    let mut body = vec![cur.ident("identifier")?];
                    while let Some(Token {
                        tok: Tok::Ident(_), ..
                    }) = cur.peek()
                    {
                        body.push(cur.ident("identifier")?);
                    }
                    match cur.peek() {
                        Some(Token { tok: Tok::At, .. }) => cur.at += 1,
                        _ => return Err(cur.unexpected(&["identifier", "`@`"])),
                    }
                    let (degree, degree_pos) = cur.number()?;
                    cur.finish()?;
                    doc.declarations.push(Spanned {
                        pos: stmt_pos,
                        node: Declaration::Rule {
                            id: id.node,
                            head: head.node,
                            body,
                            degree,
                            degree_pos,
                        },
                    });
                }
                _ => return Err(cur.unexpected(&STATEMENTS)),
            }
        }
        Ok(doc)
    }

    /// Resolves declarations into a model and risk profile.
    ///
    /// Rejects what the model types cannot represent (duplicate ids,
    /// out-of-range degrees, bad options and attributes). Structural problems
    /// such as dangling references or cycles are left for validation.
    pub fn lower(&self) -> Result<Lowered, SrmError> {
        let mut cost_scale = 1.0;
        let mut root: Option<(String, Pos)> = None;
        let mut seen_options = BTreeSet::new();
        for opt in &self.header {
            if !seen_options.insert(opt.node.key.as_str()) {
                return Err(SrmError::semantic(
                    opt.pos,
                    format!("option `{}` is set twice", opt.node.key),
                ));
            }
            match (opt.node.key.as_str(), &opt.node.value) {
                ("cost_scale", OptionValue::Number(n)) if *n > 0.0 => cost_scale = *n,
                ("cost_scale", _) => {
                    return Err(SrmError::semantic(
                        opt.pos,
                        "cost_scale must be a positive number",
                    ))
                }
                ("root", OptionValue::Ident(id)) => root = Some((id.clone(), opt.pos)),
                ("root", _) => {
                    return Err(SrmError::semantic(
                        opt.pos,
                        "root must be a goal identifier",
                    ))
                }
                (key, _) => {
                    return Err(SrmError::semantic(
                        opt.pos,
                        format!("unknown option `{key}` (expected `cost_scale` or `root`)"),
                    ))
                }
            }
        }

        let mut positions = Positions::default();
        let mut goals = Vec::new();
        let mut requirements = Vec::new();
        let mut rules = Vec::new();
        let mut risk = RiskProfile::new();
        let mut declared: BTreeMap<&str, Pos> = BTreeMap::new();
        let mut rule_ids: BTreeMap<&str, Pos> = BTreeMap::new();

        for decl in &self.declarations {
            match &decl.node {
                Declaration::Goal { id, description }
                | Declaration::Requirement {
                    id, description, ..
                } => {
                    if let Some(prev) = declared.insert(id.as_str(), decl.pos) {
                        return Err(SrmError::semantic(
                            decl.pos,
                            format!("duplicate id `{id}` (first declared at {prev})"),
                        ));
                    }
                    let node_id = NodeId::new(id.as_str())
                        .map_err(|e| SrmError::semantic(decl.pos, e.to_string()))?;
                    positions.nodes.insert(node_id.clone(), decl.pos);
                    if let Declaration::Requirement { attrs, .. } = &decl.node {
                        let (req, cost, tech) =
                            lower_requirement(node_id.clone(), description, attrs, decl.pos)?;
                        requirements.push(req);
                        risk.insert(node_id, cost / cost_scale, tech);
                    } else {
                        goals.push(Goal {
                            id: node_id,
                            description: description.clone(),
                        });
                    }
                }
                Declaration::Rule {
                    id,
                    head,
                    body,
                    degree,
                    degree_pos,
                } => {
                    if let Some(prev) = rule_ids.insert(id.as_str(), decl.pos) {
                        return Err(SrmError::semantic(
                            decl.pos,
                            format!("duplicate rule id `{id}` (first declared at {prev})"),
                        ));
                    }
                    let degree = Degree::new(*degree)
                        .map_err(|e| SrmError::semantic(*degree_pos, e.to_string()))?;
                    positions.rules.insert(id.clone(), decl.pos);
                    rules.push(DerivationRule::new(
                        id.clone(),
                        NodeId::from(head.as_str()),
                        body.iter().map(|b| NodeId::from(b.node.as_str())).collect(),
                        degree,
                    ));
                }
            }
        }

        let root = match root {
            Some((id, _)) => NodeId::from(id.as_str()),
            None => {
                let derived: BTreeSet<&NodeId> = rules
                    .iter()
                    .flat_map(|r: &DerivationRule| r.body.iter())
                    .collect();
                let candidate = goals
                    .iter()
                    .find(|g| !derived.contains(&g.id))
                    .or(goals.first());
                match candidate {
                    Some(g) => g.id.clone(),
                    None => {
                        return Err(SrmError::semantic(
                            Pos { line: 1, column: 1 },
                            "model declares no goals",
                        ))
                    }
                }
            }
        };

        Ok(Lowered {
            model: SecurityModel::new(goals, requirements, rules, root),
            risk,
            positions,
        })
    }
}

/// Declaration positions, for mapping validation findings back to source.
#[derive(Debug, Clone, Default)]
pub struct Positions {
    pub nodes: BTreeMap<NodeId, Pos>,
    pub rules: BTreeMap<String, Pos>,
}

#[derive(Debug, Clone)]
pub struct Lowered {
    pub model: SecurityModel,
    pub risk: RiskProfile,
    pub positions: Positions,
}

fn lower_requirement(
    id: NodeId,
    description: &str,
    attrs: &[ReqAttr],
    pos: Pos,
) -> Result<(Requirement, f64, f64), SrmError> {
    let mut req = Requirement::new(id.clone(), description);
    let mut cost = None;
    let mut tech = None;
    let mut seen = BTreeSet::new();
    for attr in attrs {
        if !seen.insert(attr.key.as_str()) {
            return Err(SrmError::semantic(
                attr.pos,
                format!("attribute `{}` given twice", attr.key),
            ));
        }
        let number = || match attr.value {
            OptionValue::Number(n) => Ok(n),
            _ => Err(SrmError::semantic(
                attr.pos,
                format!("attribute `{}` takes a number", attr.key),
            )),
        };
        let text = || match &attr.value {
            OptionValue::Str(s) => Ok(s.clone()),
            _ => Err(SrmError::semantic(
                attr.pos,
                format!("attribute `{}` takes a quoted string", attr.key),
            )),
        };
        match attr.key.as_str() {
            "cost" => cost = Some(number()?),
            "tech" | "complexity" => {
                if tech.is_some() {
                    return Err(SrmError::semantic(
                        attr.pos,
                        "give only one of `tech` and `complexity`",
                    ));
                }
                let n = number()?;
                tech = Some(if attr.key == "tech" {
                    n
                } else {
                    technical_ability(n).map_err(|e| SrmError::semantic(attr.pos, e.to_string()))?
                });
            }
            "metric" => req.metric = Some(text()?),
            "connector" => req.connector = Some(text()?),
            "ov" => {
                let n = number()?;
                if n <= 0.0 {
                    return Err(SrmError::semantic(attr.pos, "ov must be positive"));
                }
                req.optimal_value = Some(n);
            }
            other => {
                return Err(SrmError::semantic(
                    attr.pos,
                    format!(
                        "unknown attribute `{other}` (expected cost, tech, complexity, metric, connector or ov)"
                    ),
                ))
            }
        }
    }
    let cost = cost
        .ok_or_else(|| SrmError::semantic(pos, format!("requirement {id} is missing `cost=`")))?;
    let tech = tech
        .ok_or_else(|| SrmError::semantic(pos, format!("requirement {id} is missing `tech=`")))?;
    Ok((req, cost, tech))
}

/// Parses and validates. Succeeds only for models with no validation errors.
pub fn parse_model(text: &str) -> Result<(SecurityModel, RiskProfile), SrmError> {
    let lowered = SrmDocument::parse(text)?.lower()?;
    let report = validate_model(&lowered.model, &lowered.risk);
    let mut errors: Vec<SrmError> = report
        .errors()
        .map(|f| {
            // Point at the offending rule when there is one, else the node.
            let pos = f
                .rules
                .iter()
                .filter_map(|r| lowered.positions.rules.get(r))
                .min()
                .or_else(|| {
                    f.nodes
                        .iter()
                        .filter_map(|n| lowered.positions.nodes.get(n))
                        .min()
                })
                .copied()
                .unwrap_or(Pos { line: 1, column: 1 });
            SrmError::semantic(pos, format!("{}: {}", f.category, f.message))
        })
        .collect();
    errors.sort_by_key(|e| e.pos());
    match errors.into_iter().next() {
        Some(e) => Err(e),
        None => Ok((lowered.model, lowered.risk)),
    }
}
