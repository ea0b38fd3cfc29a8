//! Hilbert-style proof verification.
//!
//! A proof is a numbered list of formulas, each justified as an axiom
//! instance, a premise, or a rule application referencing earlier lines.
//! Rules: modus ponens; necessitation (from A infer S A); and the
//! imagination congruence rule (from A <-> B infer [i a]A <-> [i a]B).
//! Necessitation and congruence only apply to premise-free lines (local
//! consequence), so premises stay contingent.
//!
//! Checking happens over desugared formulas; surface forms are kept for
//! reporting.

mod axioms;
mod bundled;
mod file;

pub use axioms::{check_axiom_tag, is_tautology, match_a4, AXIOM_TAGS};
pub use axioms::{
    instance_of, schema_a15, schema_a1k, schema_a1t, schema_a25, schema_a2k, schema_a2t,
    schema_a3, schema_a5,
};
pub use bundled::{bundled_proofs, BundledProof, CONVERSE_A5, CSTIT_NECESSITATION};
pub use file::{parse_proof, ProofDocument, ProofFileError};

use crate::formula::Formula;
use crate::model::ImaginationModel;
use crate::semantics::extension_mask;
use std::fmt;

/// How a proof line is justified.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Justification {
    A0,
    A1K,
    A1T,
    A15,
    A2K,
    A2T,
    A25,
    A3,
    A4,
    A5,
    /// `Mp(i, j)`: line j is (line i) -> (current line).
    Mp(usize, usize),
    /// `Nec(i)`: current line is S (line i); line i must be premise-free.
    Nec(usize),
    /// `Cgr(i)`: line i is B1 <-> B2, current is [i a]B1 <-> [i a]B2;
    /// line i must be premise-free.
    Cgr(usize),
    Prem,
}

impl Justification {
    pub fn axiom_tag(&self) -> Option<&'static str> {
        match self {
            Justification::A0 => Some("A0"),
            Justification::A1K => Some("A1K"),
            Justification::A1T => Some("A1T"),
            Justification::A15 => Some("A15"),
            Justification::A2K => Some("A2K"),
            Justification::A2T => Some("A2T"),
            Justification::A25 => Some("A25"),
            Justification::A3 => Some("A3"),
            Justification::A4 => Some("A4"),
            Justification::A5 => Some("A5"),
            _ => None,
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Mp(i, j) => write!(f, "MP {i} {j}"),
            Justification::Nec(i) => write!(f, "NEC {i}"),
            Justification::Cgr(i) => write!(f, "CGR {i}"),
            Justification::Prem => write!(f, "PREM"),
            other => write!(f, "{}", other.axiom_tag().expect("axiom tag")),
        }
    }
}

/// One proof line: the asserted formula (surface form) and its
/// justification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

/// A numbered derivation with optional premises.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Proof {
    pub premises: Vec<Formula>,
    pub lines: Vec<ProofLine>,
}

/// Why a proof was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    EmptyProof,
    DanglingReference { referenced: usize },
    NotAnInstance { tag: &'static str },
    BadModusPonens { antecedent: usize, implication: usize },
    BadNecessitation { from: usize },
    NecessitationOnPremise { from: usize },
    BadCongruence { from: usize },
    CongruenceOnPremise { from: usize },
    NotAPremise,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::EmptyProof => write!(f, "the proof has no lines"),
            RejectReason::DanglingReference { referenced } => {
                write!(f, "DanglingReference: line {referenced} is not an earlier line")
            }
            RejectReason::NotAnInstance { tag } => {
                write!(f, "the formula is not an instance of {tag}")
            }
            RejectReason::BadModusPonens {
                antecedent,
                implication,
            } => write!(
                f,
                "line {implication} is not (line {antecedent}) -> (this line)"
            ),
            RejectReason::BadNecessitation { from } => {
                write!(f, "this line is not S applied to line {from}")
            }
            RejectReason::NecessitationOnPremise { from } => {
                write!(f, "necessitation of premise-dependent line {from}")
            }
            RejectReason::BadCongruence { from } => write!(
                f,
                "not a congruence of line {from}: need [i a]B1 <-> [i a]B2 from B1 <-> B2"
            ),
            RejectReason::CongruenceOnPremise { from } => {
                write!(f, "congruence over premise-dependent line {from}")
            }
            RejectReason::NotAPremise => write!(f, "the formula is not a declared premise"),
        }
    }
}

/// Outcome of checking a whole proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted {
        /// The certified (last) formula, surface form.
        formula: Formula,
        /// True when the last line does not depend on premises.
        premise_free: bool,
    },
    Rejected {
        /// 1-based number of the first failing line (0 for an empty
        /// proof).
        line: usize,
        reason: RejectReason,
    },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }
}

/// Whether `f` instantiates the axiom named by the justification.
pub fn check_axiom(just: &Justification, f: &Formula) -> bool {
    just.axiom_tag()
        .map(|tag| check_axiom_tag(tag, f))
        .unwrap_or(false)
}

fn check_line(
    desugared: &[Formula],
    premises: &[Formula],
    depends: &[bool],
    i: usize,
    just: &Justification,
) -> Result<bool, RejectReason> {
    let current = &desugared[i];
    let earlier = |n: usize| -> Result<usize, RejectReason> {
        if n >= 1 && n <= i {
            Ok(n - 1)
        } else {
            Err(RejectReason::DanglingReference { referenced: n })
        }
    };
    match just {
        Justification::Prem => {
            if premises.contains(current) {
                Ok(true)
            } else {
                Err(RejectReason::NotAPremise)
            }
        }
        Justification::Mp(a, b) => {
            let (ai, bi) = (earlier(*a)?, earlier(*b)?);
            let expected = Formula::imp(desugared[ai].clone(), current.clone());
            if desugared[bi] == expected {
                Ok(depends[ai] || depends[bi])
            } else {
                Err(RejectReason::BadModusPonens {
                    antecedent: *a,
                    implication: *b,
                })
            }
        }
        Justification::Nec(a) => {
            let ai = earlier(*a)?;
            if depends[ai] {
                return Err(RejectReason::NecessitationOnPremise { from: *a });
            }
            if *current == Formula::settled(desugared[ai].clone()) {
                Ok(false)
            } else {
                Err(RejectReason::BadNecessitation { from: *a })
            }
        }
        Justification::Cgr(a) => {
            let ai = earlier(*a)?;
            if depends[ai] {
                return Err(RejectReason::CongruenceOnPremise { from: *a });
            }
            let ok = match (&desugared[ai], current) {
                (Formula::Iff(b1, b2), Formula::Iff(l, r)) => match (&**l, &**r) {
                    (Formula::Imagine(x, lb), Formula::Imagine(y, rb)) => {
                        x == y && **lb == **b1 && **rb == **b2
                    }
                    _ => false,
                },
                _ => false,
            };
            if ok {
                Ok(false)
            } else {
                Err(RejectReason::BadCongruence { from: *a })
            }
        }
        axiom => {
            let tag = axiom.axiom_tag().expect("non-rule justification");
            if check_axiom_tag(tag, current) {
                Ok(false)
            } else {
                Err(RejectReason::NotAnInstance { tag })
            }
        }
    }
}

/// Premise-dependence flags, derivable from the justifications alone.
fn dependence_flags(proof: &Proof) -> Vec<bool> {
    let mut depends = vec![false; proof.lines.len()];
    for (i, line) in proof.lines.iter().enumerate() {
        depends[i] = match &line.justification {
            Justification::Prem => true,
            Justification::Mp(a, b) => {
                let get = |n: usize| n >= 1 && n <= i && depends[n - 1];
                get(*a) || get(*b)
            }
            _ => false,
        };
    }
    depends
}

/// Whether the rule application on 1-based line `line_no` checks, with
/// earlier lines taken as given.
pub fn check_rule(proof: &Proof, line_no: usize) -> bool {
    if line_no == 0 || line_no > proof.lines.len() {
        return false;
    }
    let desugared: Vec<Formula> = proof.lines.iter().map(|l| l.formula.desugar()).collect();
    let premises: Vec<Formula> = proof.premises.iter().map(Formula::desugar).collect();
    let depends = dependence_flags(proof);
    let i = line_no - 1;
    check_line(
        &desugared,
        &premises,
        &depends,
        i,
        &proof.lines[i].justification,
    )
    .is_ok()
}

/// Verifies every line; `Accepted` with empty premises certifies the
/// last formula as a theorem.
pub fn check_proof(proof: &Proof) -> Verdict {
    if proof.lines.is_empty() {
        return Verdict::Rejected {
            line: 0,
            reason: RejectReason::EmptyProof,
        };
    }
    let desugared: Vec<Formula> = proof.lines.iter().map(|l| l.formula.desugar()).collect();
    let premises: Vec<Formula> = proof.premises.iter().map(Formula::desugar).collect();
    let mut depends = vec![false; proof.lines.len()];
    for (i, line) in proof.lines.iter().enumerate() {
        match check_line(&desugared, &premises, &depends, i, &line.justification) {
            Ok(dep) => depends[i] = dep,
            Err(reason) => {
                return Verdict::Rejected {
                    line: i + 1,
                    reason,
                }
            }
        }
    }
    Verdict::Accepted {
        formula: proof.lines.last().expect("nonempty").formula.clone(),
        premise_free: !depends.last().copied().unwrap_or(false),
    }
}

/// Soundness cross-check for a candidate theorem: a derivable formula
/// must be valid in every model of a stream.
#[derive(Debug, Clone)]
pub enum SmokeOutcome {
    ConsistentWith { models_checked: u64 },
    RefutedBy {
        model: ImaginationModel,
        point: crate::model::PointRef,
    },
}

pub fn theoremhood_smoke(
    f: &Formula,
    models: impl Iterator<Item = ImaginationModel>,
) -> SmokeOutcome {
    let f = f.desugar();
    let mut checked = 0u64;
    for model in models {
        checked += 1;
        let ext = extension_mask(&model, &f);
        if ext != model.full_mask() {
            let missing = (!ext & model.full_mask()).trailing_zeros() as usize;
            let point = model.point_ref(missing);
            return SmokeOutcome::RefutedBy { model, point };
        }
    }
    SmokeOutcome::ConsistentWith {
        models_checked: checked,
    }
}
