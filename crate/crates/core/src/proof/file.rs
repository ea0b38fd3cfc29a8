//! Line-oriented proof files.
//!
//! ```text
//! # comment
//! agents: a, b            (optional; otherwise supplied by the caller)
//! premises: p ; q -> p    (optional)
//! 1. p -> p ; A0
//! 2. S (p -> p) ; NEC 1
//! ```
//!
//! Justifications: `A0 A1K A1T A15 A2K A2T A25 A3 A4 A5`, `MP i j`,
//! `NEC i`, `CGR i`, `PREM`. Whitespace-insensitive; `#` starts a
//! comment; line numbers must be consecutive from 1.

use super::{Justification, Proof, ProofLine};
use crate::formula::{parse, AgentId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFileError {
    #[error("proof file line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("no agents declared: pass them explicitly or add an `agents:` header")]
    NoAgents,
    #[error("the proof file has no proof lines")]
    Empty,
}

/// A parsed proof file: the agents it was read against and the proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDocument {
    pub agents: Vec<AgentId>,
    pub proof: Proof,
}

fn err(line: usize, msg: impl Into<String>) -> ProofFileError {
    ProofFileError::Line {
        line,
        msg: msg.into(),
    }
}

fn parse_justification(text: &str, line_no: usize) -> Result<Justification, ProofFileError> {
    let mut words = text.split_whitespace();
    let head = words
        .next()
        .ok_or_else(|| err(line_no, "missing justification"))?;
    let mut num = |what: &str| -> Result<usize, ProofFileError> {
        words
            .next()
            .ok_or_else(|| err(line_no, format!("{head} needs {what}")))?
            .parse::<usize>()
            .map_err(|_| err(line_no, format!("{head}: bad line reference")))
    };
    let just = match head {
        "A0" => Justification::A0,
        "A1K" => Justification::A1K,
        "A1T" => Justification::A1T,
        "A15" => Justification::A15,
        "A2K" => Justification::A2K,
        "A2T" => Justification::A2T,
        "A25" => Justification::A25,
        "A3" => Justification::A3,
        "A4" => Justification::A4,
        "A5" => Justification::A5,
        "MP" => {
            let i = num("two line references")?;
            let j = num("two line references")?;
            Justification::Mp(i, j)
        }
        "NEC" => Justification::Nec(num("a line reference")?),
        "CGR" => Justification::Cgr(num("a line reference")?),
        "PREM" => Justification::Prem,
        other => return Err(err(line_no, format!("unknown justification `{other}`"))),
    };
    if words.next().is_some() {
        return Err(err(line_no, "trailing tokens after the justification"));
    }
    Ok(just)
}

/// Parses a proof file. Agents come from the `agents:` header when
/// present, otherwise from `default_agents`.
pub fn parse_proof(
    text: &str,
    default_agents: &[AgentId],
) -> Result<ProofDocument, ProofFileError> {
    let mut agents: Vec<AgentId> = default_agents.to_vec();
    let mut premises_src: Option<(usize, String)> = None;
    let mut numbered: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("agents:") {
            agents = rest
                .split(',')
                .map(|a| AgentId::from(a.trim()))
                .filter(|a| !a.as_str().is_empty())
                .collect();
            continue;
        }
        if let Some(rest) = content.strip_prefix("premises:") {
            premises_src = Some((line_no, rest.to_string()));
            continue;
        }
        numbered.push((line_no, content.to_string()));
    }

    if agents.is_empty() {
        return Err(ProofFileError::NoAgents);
    }
    if numbered.is_empty() {
        return Err(ProofFileError::Empty);
    }

    let mut premises = Vec::new();
    if let Some((line_no, src)) = premises_src {
        for chunk in src.split(';') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            premises.push(
                parse(chunk, &agents).map_err(|e| err(line_no, format!("premise: {e}")))?,
            );
        }
    }

    let mut lines = Vec::new();
    for (expected, (line_no, content)) in numbered.iter().enumerate() {
        let (num, rest) = content
            .split_once('.')
            .ok_or_else(|| err(*line_no, "expected `N. formula ; JUSTIFICATION`"))?;
        let n: usize = num
            .trim()
            .parse()
            .map_err(|_| err(*line_no, format!("bad line number `{}`", num.trim())))?;
        if n != expected + 1 {
            return Err(err(
                *line_no,
                format!("line number {n} out of order; expected {}", expected + 1),
            ));
        }
        let (formula_src, just_src) = rest
            .rsplit_once(';')
            .ok_or_else(|| err(*line_no, "missing `; JUSTIFICATION`"))?;
        let formula = parse(formula_src.trim(), &agents)
            .map_err(|e| err(*line_no, e.to_string()))?;
        let justification = parse_justification(just_src.trim(), *line_no)?;
        lines.push(ProofLine {
            formula,
            justification,
        });
    }

    Ok(ProofDocument {
        agents,
        proof: Proof { premises, lines },
    })
}
