//! Schema patterns: formula-shaped trees with formula metavariables
//! (`B1`, `B2`, ...) and agent metavariables (`α1`, `α2`, ...), used to
//! recognize axiom instances.

use super::{AgentId, Formula};
use std::collections::BTreeMap;

/// Tree of a schema. Leaves may be metavariables; agent positions are
/// agent metavariables. Patterns are stated over the desugared language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternShape {
    /// Formula metavariable, numbered from 1.
    Meta(u8),
    /// A concrete propositional variable.
    Var(String),
    Neg(Box<PatternShape>),
    And(Box<PatternShape>, Box<PatternShape>),
    Or(Box<PatternShape>, Box<PatternShape>),
    Imp(Box<PatternShape>, Box<PatternShape>),
    Iff(Box<PatternShape>, Box<PatternShape>),
    Settled(Box<PatternShape>),
    /// Agent metavariable, then body.
    Cstit(u8, Box<PatternShape>),
    Imagine(u8, Box<PatternShape>),
}

impl PatternShape {
    pub fn meta(n: u8) -> Self {
        PatternShape::Meta(n)
    }

    pub fn neg(p: PatternShape) -> Self {
        PatternShape::Neg(Box::new(p))
    }

    pub fn and(l: PatternShape, r: PatternShape) -> Self {
        PatternShape::And(Box::new(l), Box::new(r))
    }

    pub fn imp(l: PatternShape, r: PatternShape) -> Self {
        PatternShape::Imp(Box::new(l), Box::new(r))
    }

    pub fn iff(l: PatternShape, r: PatternShape) -> Self {
        PatternShape::Iff(Box::new(l), Box::new(r))
    }

    pub fn settled(p: PatternShape) -> Self {
        PatternShape::Settled(Box::new(p))
    }

    pub fn cstit(agent_meta: u8, p: PatternShape) -> Self {
        PatternShape::Cstit(agent_meta, Box::new(p))
    }

    pub fn imagine(agent_meta: u8, p: PatternShape) -> Self {
        PatternShape::Imagine(agent_meta, Box::new(p))
    }
}

/// A pattern plus distinctness constraints over its agent metavariables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaPattern {
    pub shape: PatternShape,
    /// Pairs of agent metavariables that must bind distinct agents.
    pub distinct_agents: Vec<(u8, u8)>,
}

impl SchemaPattern {
    pub fn new(shape: PatternShape) -> Self {
        SchemaPattern {
            shape,
            distinct_agents: Vec::new(),
        }
    }

    pub fn with_distinct(shape: PatternShape, distinct_agents: Vec<(u8, u8)>) -> Self {
        SchemaPattern {
            shape,
            distinct_agents,
        }
    }
}

/// Bindings produced by a successful match.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub formulas: BTreeMap<u8, Formula>,
    pub agents: BTreeMap<u8, AgentId>,
}

fn match_shape(shape: &PatternShape, f: &Formula, asg: &mut Assignment) -> bool {
    match (shape, f) {
        (PatternShape::Meta(n), _) => match asg.formulas.get(n) {
            Some(bound) => bound == f,
            None => {
                asg.formulas.insert(*n, f.clone());
                true
            }
        },
        (PatternShape::Var(v), Formula::Var(w)) => v == w,
        (PatternShape::Neg(p), Formula::Neg(g)) => match_shape(p, g, asg),
        (PatternShape::And(l, r), Formula::And(gl, gr))
        | (PatternShape::Or(l, r), Formula::Or(gl, gr))
        | (PatternShape::Imp(l, r), Formula::Imp(gl, gr))
        | (PatternShape::Iff(l, r), Formula::Iff(gl, gr)) => {
            match_shape(l, gl, asg) && match_shape(r, gr, asg)
        }
        (PatternShape::Settled(p), Formula::Settled(g)) => match_shape(p, g, asg),
        (PatternShape::Cstit(n, p), Formula::Cstit(a, g))
        | (PatternShape::Imagine(n, p), Formula::Imagine(a, g)) => {
            let agent_ok = match asg.agents.get(n) {
                Some(bound) => bound == a,
                None => {
                    asg.agents.insert(*n, a.clone());
                    true
                }
            };
            agent_ok && match_shape(p, g, asg)
        }
        _ => false,
    }
}

/// Matches `f` against the pattern. The assignment, when it exists, is
/// unique because metavariable occurrences are compared structurally.
pub fn match_schema(schema: &SchemaPattern, f: &Formula) -> Option<Assignment> {
    let mut asg = Assignment::default();
    if !match_shape(&schema.shape, f, &mut asg) {
        return None;
    }
    for (x, y) in &schema.distinct_agents {
        if let (Some(a), Some(b)) = (asg.agents.get(x), asg.agents.get(y)) {
            if a == b {
                return None;
            }
        }
    }
    Some(asg)
}

/// Builds the instance of a pattern under a total assignment. Returns
/// `None` when the assignment misses a metavariable of the pattern.
pub fn instantiate(shape: &PatternShape, asg: &Assignment) -> Option<Formula> {
    match shape {
        PatternShape::Meta(n) => asg.formulas.get(n).cloned(),
        PatternShape::Var(v) => Some(Formula::Var(v.clone())),
        PatternShape::Neg(p) => Some(Formula::neg(instantiate(p, asg)?)),
        PatternShape::And(l, r) => Some(Formula::and(instantiate(l, asg)?, instantiate(r, asg)?)),
        PatternShape::Or(l, r) => Some(Formula::or(instantiate(l, asg)?, instantiate(r, asg)?)),
        PatternShape::Imp(l, r) => Some(Formula::imp(instantiate(l, asg)?, instantiate(r, asg)?)),
        PatternShape::Iff(l, r) => Some(Formula::iff(instantiate(l, asg)?, instantiate(r, asg)?)),
        PatternShape::Settled(p) => Some(Formula::settled(instantiate(p, asg)?)),
        PatternShape::Cstit(n, p) => Some(Formula::Cstit(
            asg.agents.get(n)?.clone(),
            Box::new(instantiate(p, asg)?),
        )),
        PatternShape::Imagine(n, p) => Some(Formula::Imagine(
            asg.agents.get(n)?.clone(),
            Box::new(instantiate(p, asg)?),
        )),
    }
}
