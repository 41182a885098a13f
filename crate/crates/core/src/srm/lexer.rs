use std::fmt;

use super::{Pos, SrmError};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Colon,
    Arrow,
    At,
    Eq,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "number {n}"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::At => f.write_str("`@`"),
            Tok::Eq => f.write_str("`=`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Tokenizes one line. `#` starts a comment outside of strings.
pub(crate) fn lex_line(line: &str, line_no: usize) -> Result<Vec<Token>, SrmError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let pos = |i: usize| Pos {
        line: line_no,
        column: i + 1,
    };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '#' => break,
            ':' => {
                i += 1;
                out.push(Token {
                    tok: Tok::Colon,
                    pos: pos(start),
                });
            }
            '@' => {
                i += 1;
                out.push(Token {
                    tok: Tok::At,
                    pos: pos(start),
                });
            }
            '=' => {
                i += 1;
                out.push(Token {
                    tok: Tok::Eq,
                    pos: pos(start),
                });
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 2;
                out.push(Token {
                    tok: Tok::Arrow,
                    pos: pos(start),
                });
            }
            '"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => {
                            return Err(SrmError::syntax(
                                pos(start),
                                "unterminated string",
                                ["`\"`"],
                            ))
                        }
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            let escaped = match chars.get(i + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('t') => '\t',
                                other => {
                                    let found = other
                                        .map_or("end of line".to_string(), |c| format!("`{c}`"));
                                    return Err(SrmError::syntax(
                                        pos(i + 1),
                                        format!("invalid escape, found {found}"),
                                        ["`\\\"`", "`\\\\`", "`\\n`", "`\\t`"],
                                    ));
                                }
                            };
                            s.push(escaped);
                            i += 2;
                        }
                        Some(&c) => {
                            s.push(c);
                            i += 1;
                        }
                    }
                }
                out.push(Token {
                    tok: Tok::Str(s),
                    pos: pos(start),
                });
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                i += 1;
                while i < chars.len() {
                    let d = chars[i];
                    let exp_sign = (d == '-' || d == '+') && matches!(chars[i - 1], 'e' | 'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text.parse().map_err(|_| {
                    SrmError::syntax(pos(start), format!("malformed number `{text}`"), ["number"])
                })?;
                if !value.is_finite() {
                    return Err(SrmError::syntax(
                        pos(start),
                        format!("number `{text}` is not finite"),
                        ["number"],
                    ));
                }
                out.push(Token {
                    tok: Tok::Number(value),
                    pos: pos(start),
                });
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Ident(text),
                    pos: pos(start),
                });
            }
            other => {
                return Err(SrmError::syntax(
                    pos(start),
                    format!("unexpected character `{other}`"),
                    [
                        "identifier",
                        "number",
                        "string",
                        "`:`",
                        "`->`",
                        "`@`",
                        "`=`",
                    ],
                ))
            }
        }
    }
    Ok(out)
}
