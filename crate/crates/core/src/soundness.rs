//! Soundness sweeps: every axiom instance drawn from a fixed formula
//! pool must be valid in every generated model, and the rules must
//! preserve model validity.
//!
//! Axiom instances are checked through the extension combinators
//! directly (the modal operators are extensional, so an instance's
//! validity only depends on the arguments' extensions). The instance
//! pool is documented here: formula metavariables range over the
//! 20-formula pool of [`formula_pool`]; agent metavariables over the
//! model's agents; the independence schema is checked for every ordered
//! tuple of distinct agents, with argument tuples drawn from the full
//! pool product for width at most 2 and from rotated pool windows for
//! width 3 and beyond.

use crate::formula::{AgentId, Formula};
use crate::model::{
    enumerate_models, random_model, EnumError, ImaginationModel, ModelBounds, PointRef, Scaffold,
};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// The fixed 20-formula instance pool over variables p, q. Agent slots
/// use the first agent and, when present, the second. All formulas are
/// desugared.
pub fn formula_pool(agents: &[AgentId]) -> Vec<Formula> {
    assert!(!agents.is_empty(), "the pool needs at least one agent");
    let a = agents[0].clone();
    let b = agents.get(1).cloned().unwrap_or_else(|| a.clone());
    let p = Formula::var("p");
    let q = Formula::var("q");
    vec![
        p.clone(),
        q.clone(),
        Formula::neg(p.clone()),
        Formula::and(p.clone(), q.clone()),
        Formula::or(p.clone(), q.clone()),
        Formula::imp(p.clone(), q.clone()),
        Formula::iff(p.clone(), q.clone()),
        Formula::neg(Formula::and(p.clone(), q.clone())),
        Formula::settled(p.clone()),
        Formula::neg(Formula::settled(p.clone())),
        Formula::settled(Formula::imp(p.clone(), q.clone())),
        Formula::poss(p.clone()).desugar(),
        Formula::cstit(a.clone(), p.clone()),
        Formula::neg(Formula::cstit(a.clone(), p.clone())),
        Formula::cstit(a.clone(), Formula::and(p.clone(), q.clone())),
        Formula::cstit(b, q.clone()),
        Formula::imagine(a.clone(), p.clone()),
        Formula::imagine(a.clone(), Formula::or(p.clone(), q.clone())),
        Formula::settled(Formula::imagine(a.clone(), p.clone())),
        Formula::cstit(a.clone(), Formula::imagine(a, p)),
    ]
}

/// A failed instance: the schema or rule, the offending instance, the
/// model and the first point where it fails.
#[derive(Debug, Clone)]
pub struct SweepFailure {
    pub kind: String,
    pub instance: Formula,
    pub model: ImaginationModel,
    pub point: PointRef,
}

/// Outcome of a sweep.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub models: u64,
    pub instances: u64,
    pub failure: Option<SweepFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

use crate::semantics::extension_mask as mask_of;

/// `P x` over masks.
fn poss(model: &ImaginationModel, x: u64) -> u64 {
    model.mask_not(model.mask_settled(model.mask_not(x)))
}

fn poss_formula(f: Formula) -> Formula {
    Formula::neg(Formula::settled(Formula::neg(f)))
}

fn and_chain(parts: &[Formula]) -> Formula {
    let mut it = parts.iter().cloned();
    let first = it.next().expect("nonempty chain");
    it.fold(first, Formula::and)
}

/// Checks every axiom instance over the pool in one model. Returns the
/// number of instances checked and the first failure.
pub fn check_model_axioms(
    model: &ImaginationModel,
    pool: &[Formula],
) -> (u64, Option<SweepFailure>) {
    let full = model.full_mask();
    let n_agents = model.agents().len();
    let exts: Vec<u64> = pool.iter().map(|f| mask_of(model, f)).collect();
    let settled: Vec<u64> = exts.iter().map(|&e| model.mask_settled(e)).collect();
    let cstit: Vec<Vec<u64>> = (0..n_agents)
        .map(|a| exts.iter().map(|&e| model.mask_cstit(a, e)).collect())
        .collect();
    let imagine: Vec<Vec<u64>> = (0..n_agents)
        .map(|a| exts.iter().map(|&e| model.mask_imagine(a, e)).collect())
        .collect();

    let mut instances = 0u64;
    let fail = |kind: &str, instance: Formula, mask: u64| -> Option<SweepFailure> {
        let missing = (!mask & full).trailing_zeros() as usize;
        Some(SweepFailure {
            kind: kind.to_string(),
            instance,
            model: model.clone(),
            point: model.point_ref(missing),
        })
    };

    // S is an S5 modality: K, T, 5.
    for i in 0..pool.len() {
        for j in 0..pool.len() {
            instances += 1;
            let k = model.mask_imp(
                model.mask_settled(model.mask_imp(exts[i], exts[j])),
                model.mask_imp(settled[i], settled[j]),
            );
            if k != full {
                let inst = Formula::imp(
                    Formula::settled(Formula::imp(pool[i].clone(), pool[j].clone())),
                    Formula::imp(
                        Formula::settled(pool[i].clone()),
                        Formula::settled(pool[j].clone()),
                    ),
                );
                return (instances, fail("A1K", inst, k));
            }
        }
        instances += 1;
        let t = model.mask_imp(settled[i], exts[i]);
        if t != full {
            let inst = Formula::imp(Formula::settled(pool[i].clone()), pool[i].clone());
            return (instances, fail("A1T", inst, t));
        }
        instances += 1;
        let five = model.mask_imp(
            model.mask_not(settled[i]),
            model.mask_settled(model.mask_not(settled[i])),
        );
        if five != full {
            let inst = Formula::imp(
                Formula::neg(Formula::settled(pool[i].clone())),
                Formula::settled(Formula::neg(Formula::settled(pool[i].clone()))),
            );
            return (instances, fail("A15", inst, five));
        }
    }

    // Each cstit modality is S5, and settledness implies it.
    for a in 0..n_agents {
        let agent = model.agents()[a].clone();
        for i in 0..pool.len() {
            for j in 0..pool.len() {
                instances += 1;
                let k = model.mask_imp(
                    model.mask_cstit(a, model.mask_imp(exts[i], exts[j])),
                    model.mask_imp(cstit[a][i], cstit[a][j]),
                );
                if k != full {
                    let inst = Formula::imp(
                        Formula::cstit(agent.clone(), Formula::imp(pool[i].clone(), pool[j].clone())),
                        Formula::imp(
                            Formula::cstit(agent.clone(), pool[i].clone()),
                            Formula::cstit(agent.clone(), pool[j].clone()),
                        ),
                    );
                    return (instances, fail("A2K", inst, k));
                }
            }
            instances += 1;
            let t = model.mask_imp(cstit[a][i], exts[i]);
            if t != full {
                let inst = Formula::imp(
                    Formula::cstit(agent.clone(), pool[i].clone()),
                    pool[i].clone(),
                );
                return (instances, fail("A2T", inst, t));
            }
            instances += 1;
            let five = model.mask_imp(
                model.mask_not(cstit[a][i]),
                model.mask_cstit(a, model.mask_not(cstit[a][i])),
            );
            if five != full {
                let inst = Formula::imp(
                    Formula::neg(Formula::cstit(agent.clone(), pool[i].clone())),
                    Formula::cstit(
                        agent.clone(),
                        Formula::neg(Formula::cstit(agent.clone(), pool[i].clone())),
                    ),
                );
                return (instances, fail("A25", inst, five));
            }
            instances += 1;
            let bridge = model.mask_imp(settled[i], cstit[a][i]);
            if bridge != full {
                let inst = Formula::imp(
                    Formula::settled(pool[i].clone()),
                    Formula::cstit(agent.clone(), pool[i].clone()),
                );
                return (instances, fail("A3", inst, bridge));
            }
        }
    }

    // Independence schema over ordered tuples of distinct agents.
    let mut tuples: Vec<Vec<usize>> = (0..n_agents).map(|a| vec![a]).collect();
    for a1 in 0..n_agents {
        for a2 in 0..n_agents {
            if a1 != a2 {
                tuples.push(vec![a1, a2]);
            }
        }
    }
    if n_agents >= 3 {
        for a1 in 0..n_agents {
            for a2 in 0..n_agents {
                for a3 in 0..n_agents {
                    if a1 != a2 && a1 != a3 && a2 != a3 {
                        tuples.push(vec![a1, a2, a3]);
                    }
                }
            }
        }
    }
    for tuple in &tuples {
        let arg_tuples: Vec<Vec<usize>> = match tuple.len() {
            1 => (0..pool.len()).map(|i| vec![i]).collect(),
            2 => {
                let mut v = Vec::with_capacity(pool.len() * pool.len());
                for i in 0..pool.len() {
                    for j in 0..pool.len() {
                        v.push(vec![i, j]);
                    }
                }
                v
            }
            n => (0..pool.len())
                .map(|i| (0..n).map(|k| (i + k) % pool.len()).collect())
                .collect(),
        };
        for args in arg_tuples {
            instances += 1;
            let conj_poss = tuple
                .iter()
                .zip(&args)
                .map(|(&a, &i)| poss(model, cstit[a][i]))
                .fold(full, |acc, x| acc & x);
            let conj_cstit = tuple
                .iter()
                .zip(&args)
                .map(|(&a, &i)| cstit[a][i])
                .fold(full, |acc, x| acc & x);
            let a4 = model.mask_imp(conj_poss, poss(model, conj_cstit));
            if a4 != full {
                let lhs: Vec<Formula> = tuple
                    .iter()
                    .zip(&args)
                    .map(|(&a, &i)| {
                        poss_formula(Formula::cstit(
                            model.agents()[a].clone(),
                            pool[i].clone(),
                        ))
                    })
                    .collect();
                let rhs: Vec<Formula> = tuple
                    .iter()
                    .zip(&args)
                    .map(|(&a, &i)| Formula::cstit(model.agents()[a].clone(), pool[i].clone()))
                    .collect();
                let inst = Formula::imp(and_chain(&lhs), poss_formula(and_chain(&rhs)));
                return (instances, fail("A4", inst, a4));
            }
        }
    }

    // The imagination-action schema.
    for a in 0..n_agents {
        let agent = model.agents()[a].clone();
        for i in 0..pool.len() {
            instances += 1;
            let im = imagine[a][i];
            let a5 = model.mask_imp(
                im,
                model.mask_cstit(a, im) & model.mask_not(model.mask_settled(im)),
            );
            if a5 != full {
                let im_f = Formula::imagine(agent.clone(), pool[i].clone());
                let inst = Formula::imp(
                    im_f.clone(),
                    Formula::and(
                        Formula::cstit(agent.clone(), im_f.clone()),
                        Formula::neg(Formula::settled(im_f)),
                    ),
                );
                return (instances, fail("A5", inst, a5));
            }
        }
    }

    (instances, None)
}

/// Checks that the rules preserve validity in one model: modus ponens,
/// settledness necessitation, and imagination congruence, over the pool.
pub fn check_model_rules(
    model: &ImaginationModel,
    pool: &[Formula],
) -> (u64, Option<SweepFailure>) {
    let full = model.full_mask();
    let n_agents = model.agents().len();
    let exts: Vec<u64> = pool.iter().map(|f| mask_of(model, f)).collect();
    let mut instances = 0u64;
    let fail = |kind: &str, instance: Formula, mask: u64| -> Option<SweepFailure> {
        let missing = (!mask & full).trailing_zeros() as usize;
        Some(SweepFailure {
            kind: kind.to_string(),
            instance,
            model: model.clone(),
            point: model.point_ref(missing),
        })
    };

    for i in 0..pool.len() {
        for j in 0..pool.len() {
            instances += 1;
            // From A -> B and A infer B.
            if model.mask_imp(exts[i], exts[j]) == full && exts[i] == full && exts[j] != full {
                return (instances, fail("R1", pool[j].clone(), exts[j]));
            }
        }
        instances += 1;
        // From A infer S A.
        let s = model.mask_settled(exts[i]);
        if exts[i] == full && s != full {
            return (instances, fail("R2", Formula::settled(pool[i].clone()), s));
        }
    }
    for a in 0..n_agents {
        let agent = model.agents()[a].clone();
        for i in 0..pool.len() {
            for j in 0..pool.len() {
                instances += 1;
                // From A <-> B infer [i a]A <-> [i a]B.
                if model.mask_iff(exts[i], exts[j]) == full {
                    let lhs = model.mask_imagine(a, exts[i]);
                    let rhs = model.mask_imagine(a, exts[j]);
                    let iff = model.mask_iff(lhs, rhs);
                    if iff != full {
                        let inst = Formula::iff(
                            Formula::imagine(agent.clone(), pool[i].clone()),
                            Formula::imagine(agent.clone(), pool[j].clone()),
                        );
                        return (instances, fail("R3", inst, iff));
                    }
                }
            }
        }
    }
    (instances, None)
}

fn pools_by_agent_count(agents: &[AgentId]) -> Vec<Vec<Formula>> {
    (1..=agents.len())
        .map(|n| formula_pool(&agents[..n]))
        .collect()
}

fn sweep_with(
    bounds: &ModelBounds,
    check: fn(&ImaginationModel, &[Formula]) -> (u64, Option<SweepFailure>),
    parallel: bool,
) -> Result<SweepReport, EnumError> {
    let pools = pools_by_agent_count(&bounds.agents);
    let stream = enumerate_models(bounds)?;
    let mut models = 0u64;
    let mut instances = 0u64;

    let scan_scaffold = |scaffold: &Scaffold| -> (u64, u64, Option<SweepFailure>) {
        let pool = &pools[scaffold.agents().len() - 1];
        let mut models = 0u64;
        let mut instances = 0u64;
        for model in scaffold.models() {
            models += 1;
            let (n, failure) = check(&model, pool);
            instances += n;
            if failure.is_some() {
                return (models, instances, failure);
            }
        }
        (models, instances, None)
    };

    if parallel {
        #[cfg(feature = "parallel")]
        {
            const CHUNK: usize = 128;
            let mut scaffolds = stream.scaffolds();
            loop {
                let chunk: Vec<Scaffold> = scaffolds.by_ref().take(CHUNK).collect();
                if chunk.is_empty() {
                    break;
                }
                let results: Vec<(u64, u64, Option<SweepFailure>)> =
                    chunk.par_iter().map(scan_scaffold).collect();
                for (m, n, failure) in results {
                    models += m;
                    instances += n;
                    if failure.is_some() {
                        return Ok(SweepReport {
                            models,
                            instances,
                            failure,
                        });
                    }
                }
            }
            return Ok(SweepReport {
                models,
                instances,
                failure: None,
            });
        }
        #[cfg(not(feature = "parallel"))]
        {
            // fall through to the sequential scan
        }
    }
    for scaffold in stream.scaffolds() {
        let (m, n, failure) = scan_scaffold(&scaffold);
        models += m;
        instances += n;
        if failure.is_some() {
            return Ok(SweepReport {
                models,
                instances,
                failure,
            });
        }
    }
    Ok(SweepReport {
        models,
        instances,
        failure: None,
    })
}

/// Axiom soundness over the exhaustive stream; parallel when the
/// feature is on.
pub fn axiom_soundness_sweep(bounds: &ModelBounds) -> Result<SweepReport, EnumError> {
    sweep_with(bounds, check_model_axioms, cfg!(feature = "parallel"))
}

pub fn axiom_soundness_sweep_seq(bounds: &ModelBounds) -> Result<SweepReport, EnumError> {
    sweep_with(bounds, check_model_axioms, false)
}

#[cfg(feature = "parallel")]
pub fn axiom_soundness_sweep_par(bounds: &ModelBounds) -> Result<SweepReport, EnumError> {
    sweep_with(bounds, check_model_axioms, true)
}

/// Rule preservation over the exhaustive stream.
pub fn rule_preservation_sweep(bounds: &ModelBounds) -> Result<SweepReport, EnumError> {
    sweep_with(bounds, check_model_rules, cfg!(feature = "parallel"))
}

pub fn rule_preservation_sweep_seq(bounds: &ModelBounds) -> Result<SweepReport, EnumError> {
    sweep_with(bounds, check_model_rules, false)
}

#[cfg(feature = "parallel")]
pub fn rule_preservation_sweep_par(bounds: &ModelBounds) -> Result<SweepReport, EnumError> {
    sweep_with(bounds, check_model_rules, true)
}

/// Axioms and rules over `count` random models; deterministic in the
/// seed (model k uses seed ^ golden-ratio-hash of k).
pub fn random_soundness_sweep(
    count: u64,
    seed: u64,
    bounds: &ModelBounds,
) -> Result<SweepReport, EnumError> {
    let pools = pools_by_agent_count(&bounds.agents);
    let mut instances = 0u64;
    for k in 0..count {
        let model_seed = seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let model = random_model(model_seed, bounds)?;
        let pool = &pools[model.agents().len() - 1];
        let (n, failure) = check_model_axioms(&model, pool);
        instances += n;
        if failure.is_some() {
            return Ok(SweepReport {
                models: k + 1,
                instances,
                failure,
            });
        }
        let (n, failure) = check_model_rules(&model, pool);
        instances += n;
        if failure.is_some() {
            return Ok(SweepReport {
                models: k + 1,
                instances,
                failure,
            });
        }
    }
    Ok(SweepReport {
        models: count,
        instances,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PropPolicy;
    use crate::semantics::valid_in_model;

    fn small_bounds() -> ModelBounds {
        ModelBounds {
            max_moments: 3,
            agents: vec![AgentId::from("a")],
            vars: vec!["p".to_string()],
            max_family: 1,
            policy: PropPolicy::AllSubsets,
            ..ModelBounds::default()
        }
    }

    #[test]
    fn pool_has_twenty_desugared_formulas() {
        let pool = formula_pool(&[AgentId::from("a"), AgentId::from("b")]);
        assert_eq!(pool.len(), 20);
        for f in &pool {
            assert!(f.is_desugared());
        }
    }

    #[test]
    fn random_sweep_passes() {
        let report = random_soundness_sweep(25, 7, &ModelBounds::default()).unwrap();
        assert!(report.passed(), "{:?}", report.failure.map(|f| f.kind));
        assert_eq!(report.models, 25);
        assert!(report.instances > 0);
    }

    #[test]
    fn small_exhaustive_sweep_passes() {
        let report = axiom_soundness_sweep(&small_bounds()).unwrap();
        assert!(report.passed());
        let report = rule_preservation_sweep(&small_bounds()).unwrap();
        assert!(report.passed());
    }

    /// The combinator route must agree with building the instance as a
    /// formula and evaluating it.
    #[test]
    fn combinator_route_matches_formula_route() {
        let bounds = ModelBounds {
            max_moments: 3,
            agents: vec![AgentId::from("a"), AgentId::from("b")],
            vars: vec!["p".to_string(), "q".to_string()],
            max_family: 1,
            ..ModelBounds::default()
        };
        let pool2 = formula_pool(&bounds.agents);
        let stream = crate::model::enumerate_models(&bounds).unwrap();
        for model in stream.step_by(9973).take(60) {
            let pool = if model.agents().len() == 2 {
                pool2.clone()
            } else {
                formula_pool(&bounds.agents[..1])
            };
            let (_, failure) = check_model_axioms(&model, &pool);
            assert!(failure.is_none());
            // Validity of built instances, spot-checked per schema.
            let a = model.agents()[0].clone();
            for f in pool.iter().take(6) {
                let a5_im = Formula::imagine(a.clone(), f.clone());
                let a5 = Formula::imp(
                    a5_im.clone(),
                    Formula::and(
                        Formula::cstit(a.clone(), a5_im.clone()),
                        Formula::neg(Formula::settled(a5_im.clone())),
                    ),
                );
                assert!(valid_in_model(&model, &a5));
                let t = Formula::imp(Formula::settled(f.clone()), f.clone());
                assert!(valid_in_model(&model, &t));
                let bridge = Formula::imp(
                    Formula::settled(f.clone()),
                    Formula::cstit(a.clone(), f.clone()),
                );
                assert!(valid_in_model(&model, &bridge));
            }
        }
    }

    /// Dropping the witness clause of the imagination semantics must
    /// break the imagination-action schema on a crafted model: the sweep
    /// would catch that fault.
    #[test]
    fn dropped_witness_clause_breaks_a5() {
        use crate::model::ModelBuilder;
        let model = ModelBuilder::new()
            .moment("m0")
            .moment("m1")
            .moment("m2")
            .cover("m0", "m1")
            .cover("m0", "m2")
            .agent("a")
            .valuate("p", vec![("m1", 0)])
            .neighborhood("a", ("m0", 0), vec![vec![("m1", 0)]])
            .neighborhood("a", ("m0", 1), vec![vec![("m1", 0)]])
            .build()
            .unwrap();
        assert!(model.validate().is_clean());

        // Faulty imagination: clause (i) only.
        let faulty_imagine = |e: u64| -> u64 {
            let mut has = 0u64;
            for q in 0..model.point_count() {
                if model.neighborhoods[0][q].binary_search(&e).is_ok() {
                    has |= 1 << q;
                }
            }
            let mut out = 0u64;
            for p in 0..model.point_count() {
                let cell = model.cell_points_at(0, p);
                if cell & !has == 0 {
                    out |= 1 << p;
                }
            }
            out
        };
        let e_p = mask_of(&model, &Formula::var("p"));
        let im_faulty = faulty_imagine(e_p);
        let a5_faulty = model.mask_imp(
            im_faulty,
            model.mask_cstit(0, im_faulty) & model.mask_not(model.mask_settled(im_faulty)),
        );
        assert_ne!(
            a5_faulty,
            model.full_mask(),
            "the faulty evaluator must violate the imagination-action schema"
        );
        // The real evaluator keeps it valid.
        let im_real = model.mask_imagine(0, e_p);
        let a5_real = model.mask_imp(
            im_real,
            model.mask_cstit(0, im_real) & model.mask_not(model.mask_settled(im_real)),
        );
        assert_eq!(a5_real, model.full_mask());
    }
}
