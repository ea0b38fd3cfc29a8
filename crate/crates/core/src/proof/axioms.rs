//! Axiom-schema recognition over the desugared language.
//!
//! The settledness and cstit modalities each get an S5 basis (K, T, and
//! the 5 schema in the form `¬□B → □¬□B`); on top of that sit the
//! settledness-to-cstit bridge, the independence schema over possibility
//! prefixes, and the imagination-action schema.

use crate::formula::{
    instantiate, match_schema, AgentId, Assignment, Formula, PatternShape, SchemaPattern,
};

fn meta(n: u8) -> PatternShape {
    PatternShape::meta(n)
}

/// S(B1 -> B2) -> (S B1 -> S B2)
pub fn schema_a1k() -> SchemaPattern {
    SchemaPattern::new(PatternShape::imp(
        PatternShape::settled(PatternShape::imp(meta(1), meta(2))),
        PatternShape::imp(PatternShape::settled(meta(1)), PatternShape::settled(meta(2))),
    ))
}

/// S B1 -> B1
pub fn schema_a1t() -> SchemaPattern {
    SchemaPattern::new(PatternShape::imp(PatternShape::settled(meta(1)), meta(1)))
}

/// ~S B1 -> S ~S B1
pub fn schema_a15() -> SchemaPattern {
    SchemaPattern::new(PatternShape::imp(
        PatternShape::neg(PatternShape::settled(meta(1))),
        PatternShape::settled(PatternShape::neg(PatternShape::settled(meta(1)))),
    ))
}

/// [c α](B1 -> B2) -> ([c α]B1 -> [c α]B2)
pub fn schema_a2k() -> SchemaPattern {
    SchemaPattern::new(PatternShape::imp(
        PatternShape::cstit(1, PatternShape::imp(meta(1), meta(2))),
        PatternShape::imp(
            PatternShape::cstit(1, meta(1)),
            PatternShape::cstit(1, meta(2)),
        ),
    ))
}

/// [c α]B1 -> B1
pub fn schema_a2t() -> SchemaPattern {
    SchemaPattern::new(PatternShape::imp(PatternShape::cstit(1, meta(1)), meta(1)))
}

/// ~[c α]B1 -> [c α]~[c α]B1
pub fn schema_a25() -> SchemaPattern {
    SchemaPattern::new(PatternShape::imp(
        PatternShape::neg(PatternShape::cstit(1, meta(1))),
        PatternShape::cstit(1, PatternShape::neg(PatternShape::cstit(1, meta(1)))),
    ))
}

/// S B1 -> [c α]B1
pub fn schema_a3() -> SchemaPattern {
    SchemaPattern::new(PatternShape::imp(
        PatternShape::settled(meta(1)),
        PatternShape::cstit(1, meta(1)),
    ))
}

/// [i α]B1 -> ([c α][i α]B1 & ~S [i α]B1)
pub fn schema_a5() -> SchemaPattern {
    SchemaPattern::new(PatternShape::imp(
        PatternShape::imagine(1, meta(1)),
        PatternShape::and(
            PatternShape::cstit(1, PatternShape::imagine(1, meta(1))),
            PatternShape::neg(PatternShape::settled(PatternShape::imagine(1, meta(1)))),
        ),
    ))
}

fn matches(schema: &SchemaPattern, f: &Formula) -> bool {
    match_schema(schema, f).is_some()
}

/// Left-nested conjunction chain: `(x & y) & z` lists as `[x, y, z]`.
fn unchain_and(f: &Formula) -> Vec<&Formula> {
    let mut parts = Vec::new();
    let mut cur = f;
    while let Formula::And(l, r) = cur {
        parts.push(&**r);
        cur = l;
    }
    parts.push(cur);
    parts.reverse();
    parts
}

/// `P [c α]B` in desugared form: `~S ~[c α]B`.
fn as_poss_cstit(f: &Formula) -> Option<(&AgentId, &Formula)> {
    if let Formula::Neg(s) = f {
        if let Formula::Settled(n) = &**s {
            if let Formula::Neg(c) = &**n {
                if let Formula::Cstit(agent, body) = &**c {
                    return Some((agent, body));
                }
            }
        }
    }
    None
}

/// (P[c α1]B1 & ... & P[c αn]Bn) -> P([c α1]B1 & ... & [c αn]Bn), with
/// the αi pairwise distinct, n ≥ 1, and both chains left-nested in the
/// same order. Matched structurally (the schema is n-ary).
pub fn match_a4(f: &Formula) -> bool {
    let Formula::Imp(lhs, rhs) = f else {
        return false;
    };
    let mut agents: Vec<&AgentId> = Vec::new();
    let mut bodies: Vec<&Formula> = Vec::new();
    for part in unchain_and(lhs) {
        let Some((agent, body)) = as_poss_cstit(part) else {
            return false;
        };
        if agents.contains(&agent) {
            return false; // pairwise-different proviso
        }
        agents.push(agent);
        bodies.push(body);
    }
    let Formula::Neg(s) = &**rhs else { return false };
    let Formula::Settled(n) = &**s else { return false };
    let Formula::Neg(inner) = &**n else { return false };
    let rhs_parts = unchain_and(inner);
    if rhs_parts.len() != agents.len() {
        return false;
    }
    for (i, part) in rhs_parts.iter().enumerate() {
        let Formula::Cstit(agent, body) = part else {
            return false;
        };
        if agent != agents[i] || &**body != bodies[i] {
            return false;
        }
    }
    true
}

/// Tautology check by modal-atom abstraction: every maximal non-Boolean
/// subformula becomes an atom and the Boolean skeleton is truth-tabled.
/// Skeletons with more than 16 distinct atoms are rejected (the checker
/// is incomplete there, never unsound).
pub fn is_tautology(f: &Formula) -> bool {
    fn collect<'a>(f: &'a Formula, atoms: &mut Vec<&'a Formula>) {
        match f {
            Formula::Neg(g) => collect(g, atoms),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) | Formula::Iff(l, r) => {
                collect(l, atoms);
                collect(r, atoms);
            }
            _ => {
                if !atoms.contains(&f) {
                    atoms.push(f);
                }
            }
        }
    }
    fn eval(f: &Formula, atoms: &[&Formula], asg: u32) -> bool {
        match f {
            Formula::Neg(g) => !eval(g, atoms, asg),
            Formula::And(l, r) => eval(l, atoms, asg) && eval(r, atoms, asg),
            Formula::Or(l, r) => eval(l, atoms, asg) || eval(r, atoms, asg),
            Formula::Imp(l, r) => !eval(l, atoms, asg) || eval(r, atoms, asg),
            Formula::Iff(l, r) => eval(l, atoms, asg) == eval(r, atoms, asg),
            _ => {
                let i = atoms.iter().position(|a| *a == f).expect("collected atom");
                asg >> i & 1 == 1
            }
        }
    }
    let mut atoms = Vec::new();
    collect(f, &mut atoms);
    if atoms.len() > 16 {
        return false;
    }
    (0..1u32 << atoms.len()).all(|asg| eval(f, &atoms, asg))
}

/// Names of the axiom tags, for diagnostics.
pub const AXIOM_TAGS: [&str; 10] =
    ["A0", "A1K", "A1T", "A15", "A2K", "A2T", "A25", "A3", "A4", "A5"];

/// Whether `f` (desugared; sugar is eliminated first) instantiates the
/// named axiom schema.
pub fn check_axiom_tag(tag: &str, f: &Formula) -> bool {
    let f = f.desugar();
    match tag {
        "A0" => is_tautology(&f),
        "A1K" => matches(&schema_a1k(), &f),
        "A1T" => matches(&schema_a1t(), &f),
        "A15" => matches(&schema_a15(), &f),
        "A2K" => matches(&schema_a2k(), &f),
        "A2T" => matches(&schema_a2t(), &f),
        "A25" => matches(&schema_a25(), &f),
        "A3" => matches(&schema_a3(), &f),
        "A4" => match_a4(&f),
        "A5" => matches(&schema_a5(), &f),
        _ => false,
    }
}

/// Builds an instance of a single-formula-metavariable schema, for the
/// soundness sweeps and tests.
pub fn instance_of(
    schema: &SchemaPattern,
    b1: &Formula,
    b2: Option<&Formula>,
    agent: Option<&AgentId>,
) -> Formula {
    let mut asg = Assignment::default();
    asg.formulas.insert(1, b1.clone());
    if let Some(b2) = b2 {
        asg.formulas.insert(2, b2.clone());
    }
    if let Some(agent) = agent {
        asg.agents.insert(1, agent.clone());
    }
    instantiate(&schema.shape, &asg).expect("total assignment")
}
