//! The object language: formulas over a declared finite agent set.
//!
//! Modalities: `S` (settled true), `P` (possible, the dual of `S`),
//! `[c a]` (agent a cstit-realizes), `[d a]` (dstit: cstit plus not
//! settled), `[i a]` (agent a imagines). `P` and `[d a]` are surface
//! sugar and are eliminated by [`Formula::desugar`] before semantic or
//! proof-theoretic use.

mod parser;
mod schema;

pub use parser::{parse, ParseError};
pub use schema::{instantiate, match_schema, Assignment, PatternShape, SchemaPattern};

use std::collections::HashSet;
use std::fmt;

/// Name of an agent, drawn from the declared agent set of a session or model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentId(pub String);

impl AgentId {
    pub fn new(name: impl Into<String>) -> Self {
        AgentId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for AgentId {
    fn from(s: &str) -> Self {
        AgentId(s.to_string())
    }
}

/// Identifiers that the grammar reserves; they may name neither variables
/// nor agents.
pub const RESERVED_WORDS: [&str; 5] = ["S", "P", "c", "d", "i"];

pub fn is_reserved_word(s: &str) -> bool {
    RESERVED_WORDS.contains(&s)
}

/// Formula AST. `Poss` and `Dstit` only occur in freshly parsed trees;
/// everything downstream of [`Formula::desugar`] is free of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Settled(Box<Formula>),
    /// Surface only: `P A` abbreviates `~S ~A`.
    Poss(Box<Formula>),
    Cstit(AgentId, Box<Formula>),
    /// Surface only: `[d a]A` abbreviates `[c a]A & ~S A`.
    Dstit(AgentId, Box<Formula>),
    Imagine(AgentId, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn neg(f: Formula) -> Self {
        Formula::Neg(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Self {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn settled(f: Formula) -> Self {
        Formula::Settled(Box::new(f))
    }

    pub fn poss(f: Formula) -> Self {
        Formula::Poss(Box::new(f))
    }

    pub fn cstit(a: impl Into<AgentId>, f: Formula) -> Self {
        Formula::Cstit(a.into(), Box::new(f))
    }

    pub fn dstit(a: impl Into<AgentId>, f: Formula) -> Self {
        Formula::Dstit(a.into(), Box::new(f))
    }

    pub fn imagine(a: impl Into<AgentId>, f: Formula) -> Self {
        Formula::Imagine(a.into(), Box::new(f))
    }

    /// Eliminates the defined connectives: `P A` becomes `~S ~A` and
    /// `[d a]A` becomes `[c a]A & ~S A`. Idempotent; everything else is
    /// preserved.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Var(_) => self.clone(),
            Formula::Neg(f) => Formula::neg(f.desugar()),
            Formula::And(l, r) => Formula::and(l.desugar(), r.desugar()),
            Formula::Or(l, r) => Formula::or(l.desugar(), r.desugar()),
            Formula::Imp(l, r) => Formula::imp(l.desugar(), r.desugar()),
            Formula::Iff(l, r) => Formula::iff(l.desugar(), r.desugar()),
            Formula::Settled(f) => Formula::settled(f.desugar()),
            Formula::Poss(f) => Formula::neg(Formula::settled(Formula::neg(f.desugar()))),
            Formula::Cstit(a, f) => Formula::cstit(a.clone(), f.desugar()),
            Formula::Dstit(a, f) => {
                let body = f.desugar();
                Formula::and(
                    Formula::cstit(a.clone(), body.clone()),
                    Formula::neg(Formula::settled(body)),
                )
            }
            Formula::Imagine(a, f) => Formula::imagine(a.clone(), f.desugar()),
        }
    }

    /// True when the tree contains no `Poss`/`Dstit` nodes.
    pub fn is_desugared(&self) -> bool {
        match self {
            Formula::Poss(_) | Formula::Dstit(_, _) => false,
            Formula::Var(_) => true,
            Formula::Neg(f) | Formula::Settled(f) => f.is_desugared(),
            Formula::Cstit(_, f) | Formula::Imagine(_, f) => f.is_desugared(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) | Formula::Iff(l, r) => {
                l.is_desugared() && r.is_desugared()
            }
        }
    }

    /// All structurally distinct subtrees in post-order, the formula
    /// itself last.
    pub fn subformulas(&self) -> Vec<Formula> {
        fn walk(f: &Formula, seen: &mut HashSet<Formula>, out: &mut Vec<Formula>) {
            match f {
                Formula::Var(_) => {}
                Formula::Neg(g)
                | Formula::Settled(g)
                | Formula::Poss(g)
                | Formula::Cstit(_, g)
                | Formula::Dstit(_, g)
                | Formula::Imagine(_, g) => walk(g, seen, out),
                Formula::And(l, r)
                | Formula::Or(l, r)
                | Formula::Imp(l, r)
                | Formula::Iff(l, r) => {
                    walk(l, seen, out);
                    walk(r, seen, out);
                }
            }
            if seen.insert(f.clone()) {
                out.push(f.clone());
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        walk(self, &mut seen, &mut out);
        out
    }

    /// Variable names occurring in the formula, each listed once, in
    /// first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.visit_leaves(&mut |f| {
            if let Formula::Var(v) = f {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
        });
        out
    }

    /// Agents occurring in the formula, each listed once, in
    /// first-occurrence order.
    pub fn agents(&self) -> Vec<AgentId> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        fn walk(f: &Formula, seen: &mut HashSet<AgentId>, out: &mut Vec<AgentId>) {
            match f {
                Formula::Var(_) => {}
                Formula::Neg(g) | Formula::Settled(g) | Formula::Poss(g) => walk(g, seen, out),
                Formula::Cstit(a, g) | Formula::Dstit(a, g) | Formula::Imagine(a, g) => {
                    if seen.insert(a.clone()) {
                        out.push(a.clone());
                    }
                    walk(g, seen, out);
                }
                Formula::And(l, r)
                | Formula::Or(l, r)
                | Formula::Imp(l, r)
                | Formula::Iff(l, r) => {
                    walk(l, seen, out);
                    walk(r, seen, out);
                }
            }
        }
        walk(self, &mut seen, &mut out);
        out
    }

    fn visit_leaves(&self, f: &mut impl FnMut(&Formula)) {
        match self {
            Formula::Var(_) => f(self),
            Formula::Neg(g)
            | Formula::Settled(g)
            | Formula::Poss(g)
            | Formula::Cstit(_, g)
            | Formula::Dstit(_, g)
            | Formula::Imagine(_, g) => g.visit_leaves(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) | Formula::Iff(l, r) => {
                l.visit_leaves(f);
                r.visit_leaves(f);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(_, _) => 1,
            Formula::Imp(_, _) => 2,
            Formula::Or(_, _) => 3,
            Formula::And(_, _) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Formula::Var(v) => write!(f, "{v}")?,
            Formula::Neg(g) => {
                write!(f, "~")?;
                g.fmt_prec(f, 5)?;
            }
            Formula::Settled(g) => {
                write!(f, "S ")?;
                g.fmt_prec(f, 5)?;
            }
            Formula::Poss(g) => {
                write!(f, "P ")?;
                g.fmt_prec(f, 5)?;
            }
            Formula::Cstit(a, g) => {
                write!(f, "[c {a}]")?;
                g.fmt_prec(f, 5)?;
            }
            Formula::Dstit(a, g) => {
                write!(f, "[d {a}]")?;
                g.fmt_prec(f, 5)?;
            }
            Formula::Imagine(a, g) => {
                write!(f, "[i {a}]")?;
                g.fmt_prec(f, 5)?;
            }
            // & and | associate to the left, -> to the right, <-> to the left.
            Formula::And(l, r) => {
                l.fmt_prec(f, 4)?;
                write!(f, " & ")?;
                r.fmt_prec(f, 5)?;
            }
            Formula::Or(l, r) => {
                l.fmt_prec(f, 3)?;
                write!(f, " | ")?;
                r.fmt_prec(f, 4)?;
            }
            Formula::Imp(l, r) => {
                l.fmt_prec(f, 3)?;
                write!(f, " -> ")?;
                r.fmt_prec(f, 2)?;
            }
            Formula::Iff(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " <-> ")?;
                r.fmt_prec(f, 2)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Prints with minimal parentheses; `parse(print(f))` returns `f`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
