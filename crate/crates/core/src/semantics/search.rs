//! Bounded countermodel search over the enumeration stream.
//!
//! The search is sound but bounded: `NotFound` claims nothing beyond the
//! exhausted bounds. Hits are re-verified with the independent
//! clause-level evaluator before being reported. The parallel variant
//! partitions scaffolds across workers; the first hit in canonical
//! enumeration order wins either way.

use super::{extension_mask, satisfies};
use crate::formula::Formula;
use crate::model::{
    enumerate_models, EnumError, ImaginationModel, ModelBounds, PointRef, Scaffold,
};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    /// A validated model and point where the negation of the formula
    /// holds.
    Found {
        model: ImaginationModel,
        point: PointRef,
    },
    /// The bounds were exhausted without a hit.
    NotFound {
        bounds: ModelBounds,
        models_checked: u64,
    },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<(&ImaginationModel, &PointRef)> {
        match self {
            SearchOutcome::Found { model, point } => Some((model, point)),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

fn refutation_in_scaffold(
    scaffold: &Scaffold,
    f: &Formula,
) -> Option<(ImaginationModel, PointRef)> {
    for model in scaffold.models() {
        let ext = extension_mask(&model, f);
        if ext == model.full_mask() {
            continue;
        }
        let missing = (!ext & model.full_mask()).trailing_zeros() as usize;
        let point = model.point_ref(missing);
        // Re-verify the hit through the independent evaluator.
        let verified = satisfies(&model, &point, &Formula::neg(f.clone()))
            .expect("canonical points resolve");
        debug_assert!(verified, "extension and satisfies disagree on a hit");
        if verified {
            return Some((model, point));
        }
    }
    None
}

/// Searches the bounded enumeration stream for a model and point
/// refuting `f`; dispatches to the parallel implementation when the
/// `parallel` feature is enabled.
pub fn find_countermodel(f: &Formula, bounds: &ModelBounds) -> Result<SearchOutcome, EnumError> {
    #[cfg(feature = "parallel")]
    {
        find_countermodel_par(f, bounds)
    }
    #[cfg(not(feature = "parallel"))]
    {
        find_countermodel_seq(f, bounds)
    }
}

/// Single-threaded search in canonical enumeration order.
pub fn find_countermodel_seq(
    f: &Formula,
    bounds: &ModelBounds,
) -> Result<SearchOutcome, EnumError> {
    let f = f.desugar();
    let stream = enumerate_models(bounds)?;
    let mut checked = 0u64;
    for scaffold in stream.scaffolds() {
        checked += scaffold.model_count();
        if let Some((model, point)) = refutation_in_scaffold(&scaffold, &f) {
            return Ok(SearchOutcome::Found { model, point });
        }
    }
    Ok(SearchOutcome::NotFound {
        bounds: bounds.clone(),
        models_checked: checked,
    })
}

/// Rayon-parallel search: scaffold chunks are scanned concurrently and
/// the first hit in canonical order is kept.
#[cfg(feature = "parallel")]
pub fn find_countermodel_par(
    f: &Formula,
    bounds: &ModelBounds,
) -> Result<SearchOutcome, EnumError> {
    const CHUNK: usize = 128;
    let f = f.desugar();
    let stream = enumerate_models(bounds)?;
    let mut scaffolds = stream.scaffolds();
    let mut checked = 0u64;
    loop {
        let chunk: Vec<Scaffold> = scaffolds.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        checked += chunk.iter().map(Scaffold::model_count).sum::<u64>();
        if let Some((model, point)) = chunk
            .par_iter()
            .find_map_first(|scaffold| refutation_in_scaffold(scaffold, &f))
        {
            return Ok(SearchOutcome::Found { model, point });
        }
    }
    Ok(SearchOutcome::NotFound {
        bounds: bounds.clone(),
        models_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, AgentId};

    fn bounds_one_agent() -> ModelBounds {
        ModelBounds {
            agents: vec![AgentId::from("a")],
            vars: vec!["p".to_string()],
            ..ModelBounds::default()
        }
    }

    fn f(text: &str) -> Formula {
        parse(text, &[AgentId::from("a")]).unwrap().desugar()
    }

    #[test]
    fn tautology_has_no_countermodel() {
        let outcome = find_countermodel_seq(&f("p -> p"), &bounds_one_agent()).unwrap();
        assert!(outcome.found().is_none());
    }

    #[test]
    fn settledness_of_imagination_is_refuted() {
        let outcome = find_countermodel(&f("[i a]p -> S [i a]p"), &bounds_one_agent()).unwrap();
        let (model, point) = outcome.found().expect("expected a countermodel");
        assert!(model.validate().is_clean());
        assert!(satisfies(model, point, &Formula::neg(f("[i a]p -> S [i a]p"))).unwrap());
    }

    #[test]
    fn settled_implies_truth_not_refuted() {
        let outcome = find_countermodel(&f("S p -> p"), &bounds_one_agent()).unwrap();
        match outcome {
            SearchOutcome::NotFound { models_checked, .. } => assert!(models_checked > 0),
            SearchOutcome::Found { model, point } => {
                panic!("unexpected countermodel at {point}: {}", model.to_json())
            }
        }
    }

    #[test]
    fn seq_and_par_agree_on_first_hit() {
        let formula = f("p -> S p");
        let seq = find_countermodel_seq(&formula, &bounds_one_agent()).unwrap();
        let (seq_model, seq_point) = seq.found().expect("refutable");
        #[cfg(feature = "parallel")]
        {
            let par = find_countermodel_par(&formula, &bounds_one_agent()).unwrap();
            let (par_model, par_point) = par.found().expect("refutable");
            assert_eq!(seq_model.to_json(), par_model.to_json());
            assert_eq!(seq_point, par_point);
        }
        let _ = (seq_model, seq_point);
    }
}
