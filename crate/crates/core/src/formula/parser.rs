//! Hand-rolled lexer and recursive-descent parser for the formula grammar:
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*              left-associative
//! imp     := or ("->" imp)?                right-associative
//! or      := and ("|" and)*                left-associative
//! and     := unary ("&" unary)*            left-associative
//! unary   := "~" unary | "S" unary | "P" unary
//!          | "[" ("c"|"d"|"i") AGENT "]" unary | atom
//! atom    := VAR | "(" formula ")"
//! ```
//!
//! `VAR` and `AGENT` are `[a-zA-Z_][a-zA-Z0-9_]*`; the reserved words
//! `S P c d i` are excluded from `VAR`. Whitespace between tokens is
//! ignored.

use super::{is_reserved_word, AgentId, Formula};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {position}: expected {expected}")]
    SyntaxError { position: usize, expected: String },
    #[error("unknown agent `{0}` (not in the declared agent set)")]
    UnknownAgent(String),
    /// Also raised when a variable collides with a declared agent name:
    /// agent and variable identifiers are disjoint spaces.
    #[error("`{0}` is reserved and cannot be used as a variable")]
    ReservedName(String),
    #[error("the declared agent set is empty")]
    EmptyAgentSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    LParen,
    RParen,
    LBrack,
    RBrack,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            c if c.is_whitespace() => i += 1,
            '~' => {
                toks.push((i, Tok::Tilde));
                i += 1;
            }
            '&' => {
                toks.push((i, Tok::Amp));
                i += 1;
            }
            '|' => {
                toks.push((i, Tok::Pipe));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '[' => {
                toks.push((i, Tok::LBrack));
                i += 1;
            }
            ']' => {
                toks.push((i, Tok::RBrack));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(ParseError::SyntaxError {
                        position: i,
                        expected: "`->`".into(),
                    });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    toks.push((i, Tok::DArrow));
                    i += 3;
                } else {
                    return Err(ParseError::SyntaxError {
                        position: i,
                        expected: "`<->`".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(ParseError::SyntaxError {
                    position: i,
                    expected: "a token".into(),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    agents: &'a [AgentId],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> ParseError {
        let expected = match self.peek() {
            Some(t) => format!("{expected}, found {}", t.describe()),
            None => format!("{expected}, found end of input"),
        };
        ParseError::SyntaxError {
            position: self.here(),
            expected,
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.peek() == Some(&Tok::DArrow) {
            self.pos += 1;
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.imp()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn agent(&mut self) -> Result<AgentId, ParseError> {
        match self.bump() {
            Some(Tok::Ident(name)) => {
                if self.agents.iter().any(|a| a.as_str() == name) {
                    Ok(AgentId(name))
                } else {
                    Err(ParseError::UnknownAgent(name))
                }
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err("an agent name"))
            }
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::neg(self.unary()?))
            }
            Some(Tok::Ident(s)) if s == "S" => {
                self.pos += 1;
                Ok(Formula::settled(self.unary()?))
            }
            Some(Tok::Ident(s)) if s == "P" => {
                self.pos += 1;
                Ok(Formula::poss(self.unary()?))
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                let kind = match self.peek() {
                    Some(Tok::Ident(k)) if k == "c" || k == "d" || k == "i" => {
                        let k = k.clone();
                        self.pos += 1;
                        k
                    }
                    _ => return Err(self.err("`c`, `d`, or `i`")),
                };
                let agent = self.agent()?;
                self.expect(Tok::RBrack, "`]`")?;
                let body = self.unary()?;
                Ok(match kind.as_str() {
                    "c" => Formula::Cstit(agent, Box::new(body)),
                    "d" => Formula::Dstit(agent, Box::new(body)),
                    _ => Formula::Imagine(agent, Box::new(body)),
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                if is_reserved_word(&name) || self.agents.iter().any(|a| a.as_str() == name) {
                    return Err(ParseError::ReservedName(name));
                }
                self.pos += 1;
                Ok(Formula::Var(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.err("a formula")),
        }
    }
}

/// Parses `text` against the declared agent set, keeping `P`/`[d _]`
/// sugar in the returned tree.
pub fn parse(text: &str, agents: &[AgentId]) -> Result<Formula, ParseError> {
    if agents.is_empty() {
        return Err(ParseError::EmptyAgentSet);
    }
    for a in agents {
        if is_reserved_word(a.as_str()) {
            return Err(ParseError::ReservedName(a.as_str().to_string()));
        }
    }
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        agents,
        end: text.len(),
    };
    let f = parser.iff()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.err("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ag(names: &[&str]) -> Vec<AgentId> {
        names.iter().map(|n| AgentId::from(*n)).collect()
    }

    fn p(text: &str) -> Formula {
        parse(text, &ag(&["a", "b"])).unwrap()
    }

    #[test]
    fn parse_and_neg() {
        assert_eq!(
            p("(p & ~q)"),
            Formula::and(Formula::var("p"), Formula::neg(Formula::var("q")))
        );
    }

    #[test]
    fn parse_dstit() {
        assert_eq!(p("[d a]p"), Formula::dstit("a", Formula::var("p")));
    }

    #[test]
    fn malformed_bracket_is_syntax_error() {
        let err = parse("I a]p", &ag(&["a"])).unwrap_err();
        assert!(matches!(err, ParseError::SyntaxError { .. }), "{err:?}");
    }

    #[test]
    fn unknown_agent() {
        let err = parse("[c z]p", &ag(&["a"])).unwrap_err();
        assert_eq!(err, ParseError::UnknownAgent("z".into()));
    }

    #[test]
    fn reserved_variable() {
        let err = parse("c & p", &ag(&["a"])).unwrap_err();
        assert_eq!(err, ParseError::ReservedName("c".into()));
    }

    #[test]
    fn agent_name_cannot_be_variable() {
        let err = parse("a & p", &ag(&["a"])).unwrap_err();
        assert_eq!(err, ParseError::ReservedName("a".into()));
    }

    #[test]
    fn precedence() {
        assert_eq!(
            p("p & q | r"),
            Formula::or(
                Formula::and(Formula::var("p"), Formula::var("q")),
                Formula::var("r")
            )
        );
        assert_eq!(
            p("p -> q -> r"),
            Formula::imp(
                Formula::var("p"),
                Formula::imp(Formula::var("q"), Formula::var("r"))
            )
        );
        assert_eq!(
            p("p <-> q <-> r"),
            Formula::iff(
                Formula::iff(Formula::var("p"), Formula::var("q")),
                Formula::var("r")
            )
        );
        // Unary binds tighter than everything.
        assert_eq!(
            p("S p -> p"),
            Formula::imp(Formula::settled(Formula::var("p")), Formula::var("p"))
        );
        assert_eq!(
            p("[c a]p & q"),
            Formula::and(Formula::cstit("a", Formula::var("p")), Formula::var("q"))
        );
    }

    #[test]
    fn nested_unary() {
        assert_eq!(
            p("~S ~p"),
            Formula::neg(Formula::settled(Formula::neg(Formula::var("p"))))
        );
        assert_eq!(
            p("[i a][c b]p"),
            Formula::imagine("a", Formula::cstit("b", Formula::var("p")))
        );
    }

    #[test]
    fn trailing_garbage() {
        let err = parse("p q", &ag(&["a"])).unwrap_err();
        assert!(matches!(err, ParseError::SyntaxError { position: 2, .. }));
    }

    #[test]
    fn empty_agent_set_rejected() {
        assert_eq!(parse("p", &[]).unwrap_err(), ParseError::EmptyAgentSet);
    }
}
