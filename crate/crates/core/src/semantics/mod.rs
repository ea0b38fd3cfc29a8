//! The satisfaction relation and formula extensions.
//!
//! Two routes compute the same relation. [`extension`] folds the
//! subformula DAG bottom-up over proposition masks and is what search
//! and fuzzing use. [`satisfies`] is a direct clause-by-clause recursion
//! kept deliberately independent of the mask combinators, so the two can
//! check each other.
//!
//! Clauses, at a point m/h:
//! - atoms by the valuation;
//! - Boolean connectives classically;
//! - `S A`: A holds at m/h' for every history h' through m;
//! - `[c a]A`: A holds at m/h' for every h' in the agent's cell at m;
//! - `[i a]A`: the global extension of A belongs to N_a(m/h') for every
//!   h' in the agent's cell, and fails to belong to N_a(m/h'') for some
//!   h'' through m.

mod search;

pub use search::{
    find_countermodel, find_countermodel_seq, SearchOutcome,
};
#[cfg(feature = "parallel")]
pub use search::find_countermodel_par;

use crate::formula::Formula;
use crate::model::{ImaginationModel, ModelError, PointRef, Proposition};
use std::collections::HashMap;

fn family_contains(family: &[u64], mask: u64) -> bool {
    family.binary_search(&mask).is_ok()
}

impl ImaginationModel {
    pub(crate) fn full_mask(&self) -> u64 {
        self.frame.point_full
    }

    pub(crate) fn mask_var(&self, name: &str) -> u64 {
        self.valuation.get(name).copied().unwrap_or(0)
    }

    pub(crate) fn mask_not(&self, e: u64) -> u64 {
        self.frame.point_full & !e
    }

    pub(crate) fn mask_imp(&self, a: u64, b: u64) -> u64 {
        self.mask_not(a) | b
    }

    pub(crate) fn mask_iff(&self, a: u64, b: u64) -> u64 {
        self.frame.point_full & !(a ^ b)
    }

    pub(crate) fn mask_settled(&self, e: u64) -> u64 {
        let mut out = 0u64;
        for &mp in &self.frame.moment_points {
            if mp != 0 && mp & e == mp {
                out |= mp;
            }
        }
        out
    }

    /// Point mask of the agent's choice cell at a point. Falls back to
    /// the singleton when a malformed partition misses the history.
    pub(crate) fn cell_points_at(&self, agent: usize, point: usize) -> u64 {
        match self.choice.point_cell[agent][point] {
            Some(cell) => {
                let (m, _) = self.frame.points[point];
                self.choice.cell_points[agent][m][cell as usize]
            }
            None => 1u64 << point,
        }
    }

    pub(crate) fn mask_cstit(&self, agent: usize, e: u64) -> u64 {
        let mut out = 0u64;
        for p in 0..self.frame.points.len() {
            let cell = self.cell_points_at(agent, p);
            if cell & e == cell {
                out |= 1 << p;
            }
        }
        out
    }

    pub(crate) fn mask_imagine(&self, agent: usize, e: u64) -> u64 {
        // Points whose family contains the extension.
        let mut has = 0u64;
        for q in 0..self.frame.points.len() {
            if family_contains(&self.neighborhoods[agent][q], e) {
                has |= 1 << q;
            }
        }
        let mut out = 0u64;
        for p in 0..self.frame.points.len() {
            let cell = self.cell_points_at(agent, p);
            if cell & !has != 0 {
                continue; // clause (i) fails
            }
            let (m, _) = self.frame.points[p];
            if self.frame.moment_points[m] & !has != 0 {
                out |= 1 << p; // clause (ii) has a witness
            }
        }
        out
    }
}

/// Extension mask by direct structural recursion, no memo: the fast
/// path for the small formulas search and fuzzing iterate over millions
/// of models.
pub(crate) fn extension_mask(model: &ImaginationModel, f: &Formula) -> u64 {
    match f {
        Formula::Var(v) => model.mask_var(v),
        Formula::Neg(g) => model.mask_not(extension_mask(model, g)),
        Formula::And(l, r) => extension_mask(model, l) & extension_mask(model, r),
        Formula::Or(l, r) => extension_mask(model, l) | extension_mask(model, r),
        Formula::Imp(l, r) => {
            let l = extension_mask(model, l);
            let r = extension_mask(model, r);
            model.mask_imp(l, r)
        }
        Formula::Iff(l, r) => {
            let l = extension_mask(model, l);
            let r = extension_mask(model, r);
            model.mask_iff(l, r)
        }
        Formula::Settled(g) => model.mask_settled(extension_mask(model, g)),
        Formula::Poss(g) => {
            let g = extension_mask(model, g);
            model.mask_not(model.mask_settled(model.mask_not(g)))
        }
        Formula::Cstit(a, g) => match model.agent_index(a) {
            Ok(agent) => model.mask_cstit(agent, extension_mask(model, g)),
            Err(_) => 0,
        },
        Formula::Dstit(a, g) => {
            let g = extension_mask(model, g);
            match model.agent_index(a) {
                Ok(agent) => model.mask_cstit(agent, g) & model.mask_not(model.mask_settled(g)),
                Err(_) => 0,
            }
        }
        Formula::Imagine(a, g) => match model.agent_index(a) {
            Ok(agent) => model.mask_imagine(agent, extension_mask(model, g)),
            Err(_) => 0,
        },
    }
}

/// The set of points of the whole model satisfying `f`, computed
/// bottom-up with one visit per structurally distinct subformula.
/// Surface sugar is interpreted by its definition.
pub fn extension(model: &ImaginationModel, f: &Formula) -> Proposition {
    fn go<'a>(
        model: &ImaginationModel,
        f: &'a Formula,
        memo: &mut HashMap<&'a Formula, u64>,
    ) -> u64 {
        if let Some(&mask) = memo.get(f) {
            return mask;
        }
        let mask = match f {
            Formula::Var(v) => model.mask_var(v),
            Formula::Neg(g) => model.mask_not(go(model, g, memo)),
            Formula::And(l, r) => go(model, l, memo) & go(model, r, memo),
            Formula::Or(l, r) => go(model, l, memo) | go(model, r, memo),
            Formula::Imp(l, r) => {
                let l = go(model, l, memo);
                let r = go(model, r, memo);
                model.mask_imp(l, r)
            }
            Formula::Iff(l, r) => {
                let l = go(model, l, memo);
                let r = go(model, r, memo);
                model.mask_iff(l, r)
            }
            Formula::Settled(g) => model.mask_settled(go(model, g, memo)),
            Formula::Poss(g) => {
                let g = go(model, g, memo);
                model.mask_not(model.mask_settled(model.mask_not(g)))
            }
            Formula::Cstit(a, g) => {
                let agent = model.agent_index(a).map_or(usize::MAX, |i| i);
                let g = go(model, g, memo);
                if agent == usize::MAX {
                    0
                } else {
                    model.mask_cstit(agent, g)
                }
            }
            Formula::Dstit(a, g) => {
                let g = go(model, g, memo);
                match model.agent_index(a) {
                    Ok(agent) => model.mask_cstit(agent, g) & model.mask_not(model.mask_settled(g)),
                    Err(_) => 0,
                }
            }
            Formula::Imagine(a, g) => {
                let g = go(model, g, memo);
                match model.agent_index(a) {
                    Ok(agent) => model.mask_imagine(agent, g),
                    Err(_) => 0,
                }
            }
        };
        memo.insert(f, mask);
        mask
    }
    let mut memo = HashMap::new();
    Proposition {
        mask: go(model, f, &mut memo),
    }
}

/// True iff `f` holds at every point of the model.
pub fn valid_in_model(model: &ImaginationModel, f: &Formula) -> bool {
    extension(model, f).is_universal(model)
}

/// Clause-by-clause satisfaction at one point. Independent of the mask
/// combinators behind [`extension`]; the two agree on all inputs (a
/// tested invariant).
pub fn satisfies(
    model: &ImaginationModel,
    point: &PointRef,
    f: &Formula,
) -> Result<bool, ModelError> {
    let idx = model.point_index(point)?;
    Ok(sat_at(model, idx, f))
}

fn sat_at(model: &ImaginationModel, point: usize, f: &Formula) -> bool {
    match f {
        Formula::Var(v) => model.mask_var(v) >> point & 1 == 1,
        Formula::Neg(g) => !sat_at(model, point, g),
        Formula::And(l, r) => sat_at(model, point, l) && sat_at(model, point, r),
        Formula::Or(l, r) => sat_at(model, point, l) || sat_at(model, point, r),
        Formula::Imp(l, r) => !sat_at(model, point, l) || sat_at(model, point, r),
        Formula::Iff(l, r) => sat_at(model, point, l) == sat_at(model, point, r),
        Formula::Settled(g) => {
            let (m, _) = model.frame.points[point];
            points_of(model.frame.moment_points[m]).all(|q| sat_at(model, q, g))
        }
        Formula::Poss(g) => {
            let (m, _) = model.frame.points[point];
            points_of(model.frame.moment_points[m]).any(|q| sat_at(model, q, g))
        }
        Formula::Cstit(a, g) => match model.agent_index(a) {
            Ok(agent) => {
                points_of(model.cell_points_at(agent, point)).all(|q| sat_at(model, q, g))
            }
            Err(_) => false,
        },
        Formula::Dstit(a, g) => {
            sat_at(model, point, &Formula::cstit(a.clone(), (**g).clone()))
                && !sat_at(model, point, &Formula::settled((**g).clone()))
        }
        Formula::Imagine(a, g) => match model.agent_index(a) {
            Ok(agent) => {
                // Global extension of the argument, by this same
                // recursion.
                let mut ext = 0u64;
                for q in 0..model.frame.points.len() {
                    if sat_at(model, q, g) {
                        ext |= 1 << q;
                    }
                }
                let clause_i = points_of(model.cell_points_at(agent, point))
                    .all(|q| family_contains(&model.neighborhoods[agent][q], ext));
                let (m, _) = model.frame.points[point];
                let clause_ii = points_of(model.frame.moment_points[m])
                    .any(|q| !family_contains(&model.neighborhoods[agent][q], ext));
                clause_i && clause_ii
            }
            Err(_) => false,
        },
    }
}

fn points_of(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// One step of a recorded evaluation.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub point: PointRef,
    pub formula: Formula,
    pub clause: &'static str,
    pub value: bool,
}

/// Evaluation result with an optional clause-by-clause trace; the trace
/// replays to the same value.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: bool,
    pub trace: Option<Vec<TraceStep>>,
}

/// Like [`satisfies`], recording every (point, subformula) evaluation in
/// post-order.
pub fn satisfies_traced(
    model: &ImaginationModel,
    point: &PointRef,
    f: &Formula,
) -> Result<EvalResult, ModelError> {
    let idx = model.point_index(point)?;
    let mut trace = Vec::new();
    let value = sat_traced(model, idx, f, &mut trace);
    Ok(EvalResult {
        value,
        trace: Some(trace),
    })
}

fn sat_traced(
    model: &ImaginationModel,
    point: usize,
    f: &Formula,
    trace: &mut Vec<TraceStep>,
) -> bool {
    let (value, clause) = match f {
        Formula::Var(_) => (sat_at(model, point, f), "atom"),
        Formula::Neg(g) => (!sat_traced(model, point, g, trace), "negation"),
        Formula::And(l, r) => {
            let lv = sat_traced(model, point, l, trace);
            let rv = sat_traced(model, point, r, trace);
            (lv && rv, "conjunction")
        }
        Formula::Or(l, r) => {
            let lv = sat_traced(model, point, l, trace);
            let rv = sat_traced(model, point, r, trace);
            (lv || rv, "disjunction")
        }
        Formula::Imp(l, r) => {
            let lv = sat_traced(model, point, l, trace);
            let rv = sat_traced(model, point, r, trace);
            (!lv || rv, "implication")
        }
        Formula::Iff(l, r) => {
            let lv = sat_traced(model, point, l, trace);
            let rv = sat_traced(model, point, r, trace);
            (lv == rv, "biconditional")
        }
        Formula::Settled(g) => {
            let (m, _) = model.frame.points[point];
            let mut all = true;
            for q in points_of(model.frame.moment_points[m]) {
                all &= sat_traced(model, q, g, trace);
            }
            (all, "settled: all histories through the moment")
        }
        Formula::Poss(g) => {
            let (m, _) = model.frame.points[point];
            let mut any = false;
            for q in points_of(model.frame.moment_points[m]) {
                any |= sat_traced(model, q, g, trace);
            }
            (any, "possible: some history through the moment")
        }
        Formula::Cstit(_, _) | Formula::Dstit(_, _) | Formula::Imagine(_, _) => {
            let clause = match f {
                Formula::Cstit(_, _) => "cstit: all histories in the agent's cell",
                Formula::Dstit(_, _) => "dstit: cstit and not settled",
                _ => "imagine: family membership on the cell, a witness off it",
            };
            (sat_at(model, point, f), clause)
        }
    };
    trace.push(TraceStep {
        point: model.point_ref(point),
        formula: f.clone(),
        clause,
        value,
    });
    value
}
