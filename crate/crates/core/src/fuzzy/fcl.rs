//! Parser for a small subset of the Fuzzy Control Language.
//!
//! ```text
//! FUNCTION_BLOCK name            (optional wrapper)
//! VAR_INPUT impact
//!     RANGE := (0, 1);           (optional, defaults to [0, 1])
//!     TERM low := (0, 0, 0.25, 0.5);
//! END_VAR
//! VAR_OUTPUT priority
//!     TERM strong := (0.55, 0.75, 1, 1);
//! END_VAR
//! RULEBLOCK name
//!     RULE 1: IF impact IS low AND cost IS high THEN priority IS weak;
//! END_RULEBLOCK
//! END_FUNCTION_BLOCK
//! ```
//!
//! Keywords are case-insensitive. `//` and `(* ... *)` are comments. Only
//! `AND` is supported in antecedents.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Atom, FuzzyRule, LinguisticVariable, RuleBase, Trapezoid, Universe, VariableConfig};
use crate::srm::Pos;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{pos}: {message}")]
pub struct FclError {
    pub pos: Pos,
    pub message: String,
}

impl FclError {
    fn new(pos: Pos, message: impl Into<String>) -> Self {
        FclError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Number(f64),
    Assign,
    Colon,
    Semi,
    LParen,
    RParen,
    Comma,
    Range,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Number(n) => write!(f, "number {n}"),
            Tok::Assign => f.write_str("`:=`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Range => f.write_str("`..`"),
        }
    }
}

struct Token {
    tok: Tok,
    pos: Pos,
}

fn lex(text: &str) -> Result<(Vec<Token>, Pos), FclError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    // Advances over `n` chars, tracking line and column.
    let step = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            step(&mut i, &mut line, &mut col, 1);
        } else if c == '/' && next == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                step(&mut i, &mut line, &mut col, 1);
            }
        } else if c == '(' && next == Some('*') {
            step(&mut i, &mut line, &mut col, 2);
            loop {
                if i + 1 >= chars.len() {
                    return Err(FclError::new(pos, "unterminated comment (expected `*)`)"));
                }
                if chars[i] == '*' && chars[i + 1] == ')' {
                    step(&mut i, &mut line, &mut col, 2);
                    break;
                }
                step(&mut i, &mut line, &mut col, 1);
            }
        } else if c == ':' && next == Some('=') {
            out.push(Token {
                tok: Tok::Assign,
                pos,
            });
            step(&mut i, &mut line, &mut col, 2);
        } else if c == '.' && next == Some('.') {
            out.push(Token {
                tok: Tok::Range,
                pos,
            });
            step(&mut i, &mut line, &mut col, 2);
        } else if let Some(tok) = match c {
            ':' => Some(Tok::Colon),
            ';' => Some(Tok::Semi),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        } {
            out.push(Token { tok, pos });
            step(&mut i, &mut line, &mut col, 1);
        } else if c.is_ascii_digit()
            || ((c == '-' || c == '+' || c == '.')
                && next.is_some_and(|n| n.is_ascii_digit() || n == '.'))
        {
            let start = i;
            let mut j = i + 1;
            let mut seen_dot = c == '.';
            while j < chars.len() {
                let d = chars[j];
                if d.is_ascii_digit() {
                    j += 1;
                } else if d == '.'
                    && !seen_dot
                    && chars.get(j + 1).is_some_and(|n| n.is_ascii_digit())
                {
                    seen_dot = true;
                    j += 1;
                } else if (d == 'e' || d == 'E')
                    && chars
                        .get(j + 1)
                        .is_some_and(|n| n.is_ascii_digit() || *n == '-' || *n == '+')
                {
                    j += 2;
                } else {
                    break;
                }
            }
            let raw: String = chars[start..j].iter().collect();
            let value: f64 = raw
                .parse()
                .map_err(|_| FclError::new(pos, format!("malformed number `{raw}`")))?;
            out.push(Token {
                tok: Tok::Number(value),
                pos,
            });
            step(&mut i, &mut line, &mut col, j - start);
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            out.push(Token {
                tok: Tok::Word(chars[start..j].iter().collect()),
                pos,
            });
            step(&mut i, &mut line, &mut col, j - start);
        } else {
            return Err(FclError::new(pos, format!("unexpected character `{c}`")));
        }
    }
    Ok((out, Pos { line, column: col }))
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    eof: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn here(&self) -> Pos {
        self.peek().map_or(self.eof, |t| t.pos)
    }

    fn unexpected(&self, expected: &str) -> FclError {
        let found = self
            .peek()
            .map_or("end of input".to_string(), |t| t.tok.to_string());
        FclError::new(self.here(), format!("expected {expected}, found {found}"))
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Word(w), .. }) if w.eq_ignore_ascii_case(kw))
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, FclError> {
        if self.at_keyword(kw) {
            let pos = self.here();
            self.at += 1;
            Ok(pos)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn name(&mut self, what: &str) -> Result<(String, Pos), FclError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Word(w),
                pos,
            }) => {
                let out = (w.clone(), *pos);
                self.at += 1;
                Ok(out)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn punct(&mut self, want: Tok) -> Result<(), FclError> {
        match self.peek() {
            Some(t) if t.tok == want => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&want.to_string())),
        }
    }

    fn number(&mut self) -> Result<f64, FclError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Number(n),
                ..
            }) => {
                let n = *n;
                self.at += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("number")),
        }
    }

    fn var_block(&mut self, output: bool) -> Result<(LinguisticVariable, Pos), FclError> {
        let (name, name_pos) = self.name("variable name")?;
        let mut universe = Universe::UNIT;
        let mut terms: Vec<(String, Trapezoid, Pos)> = Vec::new();
        let mut saw_range = false;
        loop {
            if self.at_keyword("END_VAR") {
                self.at += 1;
                break;
            } else if self.at_keyword("RANGE") {
                let pos = self.keyword("RANGE")?;
                if saw_range || !terms.is_empty() {
                    return Err(FclError::new(pos, "RANGE must come once, before any TERM"));
                }
                saw_range = true;
                self.punct(Tok::Assign)?;
                self.punct(Tok::LParen)?;
                let lo = self.number()?;
                match self.peek() {
                    Some(Token {
                        tok: Tok::Range | Tok::Comma,
                        ..
                    }) => self.at += 1,
                    _ => return Err(self.unexpected("`..` or `,`")),
                }
                let hi = self.number()?;
                self.punct(Tok::RParen)?;
                self.punct(Tok::Semi)?;
                universe = Universe::new(lo, hi).map_err(|e| FclError::new(pos, e.to_string()))?;
            } else if self.at_keyword("TERM") {
                self.at += 1;
                let (term, pos) = self.name("term name")?;
                self.punct(Tok::Assign)?;
                self.punct(Tok::LParen)?;
                let mut pts = [0.0; 4];
                for (k, p) in pts.iter_mut().enumerate() {
                    if k > 0 {
                        self.punct(Tok::Comma)?;
                    }
                    *p = self.number()?;
                }
                self.punct(Tok::RParen)?;
                self.punct(Tok::Semi)?;
                let mf = Trapezoid::new(pts[0], pts[1], pts[2], pts[3])
                    .map_err(|e| FclError::new(pos, e.to_string()))?;
                terms.push((term, mf, pos));
            } else {
                return Err(self.unexpected("`TERM`, `RANGE` or `END_VAR`"));
            }
        }
        let mut var = LinguisticVariable::new(name, universe);
        for (term, mf, pos) in terms {
            var.add_term(term, mf)
                .map_err(|e| FclError::new(pos, e.to_string()))?;
        }
        if var.terms.is_empty() {
            let kind = if output { "output" } else { "input" };
            return Err(FclError::new(
                name_pos,
                format!("{kind} variable `{}` declares no terms", var.name),
            ));
        }
        Ok((var, name_pos))
    }

    fn atom(&mut self) -> Result<(Atom, Pos, Pos), FclError> {
        let (variable, var_pos) = self.name("variable name")?;
        self.keyword("IS")?;
        let (term, term_pos) = self.name("term name")?;
        Ok((Atom::new(variable, term), var_pos, term_pos))
    }
}

/// A parsed rule awaiting resolution, with the positions of its consequent
/// and of each antecedent atom as (variable, term) pairs.
type PendingRule = (FuzzyRule, (Pos, Pos), Vec<(Pos, Pos)>);

/// Parses variable declarations and rules, checking every rule atom against
/// the declared variables.
pub fn parse_rulebase(text: &str) -> Result<(VariableConfig, RuleBase), FclError> {
    let (tokens, eof) = lex(text)?;
    let mut p = Parser { tokens, at: 0, eof };
    let mut vars = VariableConfig::default();
    let mut rules = RuleBase::default();
    let mut rule_ids = BTreeSet::new();
    let mut pending: Vec<PendingRule> = Vec::new();

    let wrapped = p.at_keyword("FUNCTION_BLOCK");
    if wrapped {
        p.at += 1;
        if let Some(Token {
            tok: Tok::Word(w), ..
        }) = p.peek()
        {
            if !is_section_keyword(w) {
                p.at += 1;
            }
        }
    }

    loop {
        if p.peek().is_none() {
            if wrapped {
                return Err(p.unexpected("`END_FUNCTION_BLOCK`"));
            }
            break;
        }
        if wrapped && p.at_keyword("END_FUNCTION_BLOCK") {
            p.at += 1;
            if p.peek().is_some() {
                return Err(p.unexpected("end of input"));
            }
            break;
        }
        if p.at_keyword("VAR_INPUT") || p.at_keyword("VAR_OUTPUT") {
            let output = p.at_keyword("VAR_OUTPUT");
            p.at += 1;
            let (var, pos) = p.var_block(output)?;
            if vars.variable(&var.name).is_some() {
                return Err(FclError::new(
                    pos,
                    format!("variable `{}` declared twice", var.name),
                ));
            }
            if output {
                vars.outputs.push(var);
            } else {
                vars.inputs.push(var);
            }
        } else if p.at_keyword("RULEBLOCK") {
            p.at += 1;
            if let Some(Token {
                tok: Tok::Word(w), ..
            }) = p.peek()
            {
                if !w.eq_ignore_ascii_case("RULE") && !w.eq_ignore_ascii_case("END_RULEBLOCK") {
                    p.at += 1;
                }
            }
            while !p.at_keyword("END_RULEBLOCK") {
                let rule_pos = p
                    .keyword("RULE")
                    .map_err(|_| p.unexpected("`RULE` or `END_RULEBLOCK`"))?;
                let id = match p.peek() {
                    Some(Token {
                        tok: Tok::Word(w), ..
                    }) => w.clone(),
                    Some(Token {
                        tok: Tok::Number(n),
                        ..
                    }) if n.fract() == 0.0 && *n >= 0.0 => format!("{n}"),
                    _ => return Err(p.unexpected("rule id")),
                };
                p.at += 1;
                if !rule_ids.insert(id.clone()) {
                    return Err(FclError::new(rule_pos, format!("duplicate rule id `{id}`")));
                }
                p.punct(Tok::Colon)?;
                p.keyword("IF")?;
                let mut antecedent = Vec::new();
                let mut spots = Vec::new();
                loop {
                    let (atom, vp, tp) = p.atom()?;
                    antecedent.push(atom);
                    spots.push((vp, tp));
                    if p.at_keyword("AND") {
                        p.at += 1;
                    } else if p.at_keyword("THEN") {
                        p.at += 1;
                        break;
                    } else {
                        return Err(p.unexpected("`AND` or `THEN`"));
                    }
                }
                let (consequent, cvp, ctp) = p.atom()?;
                p.punct(Tok::Semi)?;
                pending.push((
                    FuzzyRule {
                        id,
                        antecedent,
                        consequent,
                    },
                    (cvp, ctp),
                    spots,
                ));
            }
            p.at += 1;
        } else {
            return Err(p.unexpected("`VAR_INPUT`, `VAR_OUTPUT` or `RULEBLOCK`"));
        }
    }

    // Rules may precede the declarations they use, so resolve at the end.
    for (rule, (cvp, ctp), spots) in pending {
        for (atom, (vp, tp)) in rule.antecedent.iter().zip(spots) {
            let var = match vars.input(&atom.variable) {
                Some(v) => v,
                None if vars.output(&atom.variable).is_some() => {
                    return Err(FclError::new(
                        vp,
                        format!("`{}` is an output variable", atom.variable),
                    ))
                }
                None => {
                    return Err(FclError::new(
                        vp,
                        format!("undeclared variable `{}`", atom.variable),
                    ))
                }
            };
            if var.term(&atom.term).is_none() {
                return Err(FclError::new(
                    tp,
                    format!(
                        "undeclared term `{}` for variable `{}`",
                        atom.term, atom.variable
                    ),
                ));
            }
        }
        let out = match vars.output(&rule.consequent.variable) {
            Some(v) => v,
            None if vars.input(&rule.consequent.variable).is_some() => {
                return Err(FclError::new(
                    cvp,
                    format!("`{}` is an input variable", rule.consequent.variable),
                ))
            }
            None => {
                return Err(FclError::new(
                    cvp,
                    format!("undeclared variable `{}`", rule.consequent.variable),
                ))
            }
        };
        if out.term(&rule.consequent.term).is_none() {
            return Err(FclError::new(
                ctp,
                format!(
                    "undeclared term `{}` for variable `{}`",
                    rule.consequent.term, rule.consequent.variable
                ),
            ));
        }
        rules.rules.push(rule);
    }
    Ok((vars, rules))
}

fn is_section_keyword(w: &str) -> bool {
    ["VAR_INPUT", "VAR_OUTPUT", "RULEBLOCK", "END_FUNCTION_BLOCK"]
        .iter()
        .any(|k| w.eq_ignore_ascii_case(k))
}
