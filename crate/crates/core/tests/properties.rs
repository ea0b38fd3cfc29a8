//! Property tests for the language, the generators and the semantics.

use imstit_core::formula::{
    instantiate, match_schema, parse, AgentId, Assignment, Formula,
};
use imstit_core::model::{
    random_model, ImaginationModel, ModelBounds, ModelFile, PointRef,
};
use imstit_core::proof::{schema_a15, schema_a1k, schema_a1t, schema_a3, schema_a5};
use imstit_core::semantics::{extension, satisfies, valid_in_model};
use proptest::prelude::*;

fn agent_pool() -> Vec<AgentId> {
    vec![AgentId::from("a"), AgentId::from("b")]
}

fn formula_strategy(max_depth: u32) -> impl Strategy<Value = Formula> {
    let vars = prop::sample::select(vec!["p", "q", "r"]);
    let agents = prop::sample::select(vec!["a", "b"]);
    let leaf = vars.prop_map(Formula::var);
    leaf.prop_recursive(max_depth, 64, 2, move |inner| {
        let agents = agents.clone();
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            inner.clone().prop_map(Formula::settled),
            inner.clone().prop_map(Formula::poss),
            (agents.clone(), inner.clone()).prop_map(|(a, f)| Formula::cstit(a, f)),
            (agents.clone(), inner.clone()).prop_map(|(a, f)| Formula::dstit(a, f)),
            (agents.clone(), inner).prop_map(|(a, f)| Formula::imagine(a, f)),
        ]
    })
}

fn small_bounds() -> ModelBounds {
    ModelBounds {
        max_moments: 4,
        agents: agent_pool(),
        vars: vec!["p".to_string(), "q".to_string()],
        max_family: 2,
        ..ModelBounds::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Printing then parsing returns the same tree, sugar included.
    #[test]
    fn print_parse_round_trip(f in formula_strategy(6)) {
        let printed = f.to_string();
        let reparsed = parse(&printed, &agent_pool()).unwrap();
        prop_assert_eq!(reparsed, f);
    }

    #[test]
    fn desugar_is_idempotent(f in formula_strategy(6)) {
        let once = f.desugar();
        prop_assert!(once.is_desugared());
        prop_assert_eq!(once.desugar(), once.clone());
    }

    /// Desugaring neither invents nor loses variable or agent names
    /// (occurrences may duplicate: the dstit definition repeats its
    /// body).
    #[test]
    fn desugar_preserves_name_sets(f in formula_strategy(6)) {
        let d = f.desugar();
        let sort = |mut v: Vec<String>| { v.sort(); v };
        prop_assert_eq!(sort(f.variables()), sort(d.variables()));
        let sort_a = |mut v: Vec<AgentId>| { v.sort(); v };
        prop_assert_eq!(sort_a(f.agents()), sort_a(d.agents()));
    }

    /// Instantiating an axiom schema and matching it back recovers an
    /// assignment.
    #[test]
    fn schema_round_trip(
        b1 in formula_strategy(3),
        b2 in formula_strategy(3),
        agent in prop::sample::select(vec!["a", "b"]),
        which in 0usize..5,
    ) {
        let schema = match which {
            0 => schema_a1k(),
            1 => schema_a1t(),
            2 => schema_a15(),
            3 => schema_a3(),
            _ => schema_a5(),
        };
        let mut asg = Assignment::default();
        asg.formulas.insert(1, b1.desugar());
        asg.formulas.insert(2, b2.desugar());
        asg.agents.insert(1, AgentId::from(agent));
        let inst = instantiate(&schema.shape, &asg).unwrap();
        let found = match_schema(&schema, &inst).expect("instance must match");
        prop_assert_eq!(found.formulas.get(&1), asg.formulas.get(&1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Random models validate cleanly and their choice cells partition
    /// the histories through each moment.
    #[test]
    fn random_models_are_well_formed(seed in 0u64..10_000) {
        let model = random_model(seed, &small_bounds()).unwrap();
        prop_assert!(model.validate().is_clean());

        let histories = model.histories();
        for moment in model.moments() {
            let through: Vec<usize> = (0..histories.len())
                .filter(|&h| histories[h].moments.contains(moment))
                .collect();
            for agent in model.agents() {
                let cells = model.choice_cells(moment, agent).unwrap();
                let mut seen: Vec<usize> = Vec::new();
                for cell in &cells {
                    prop_assert!(!cell.is_empty(), "empty cell at {moment}");
                    for h in cell {
                        prop_assert!(!seen.contains(h), "overlap at {moment}");
                        seen.push(*h);
                    }
                }
                seen.sort_unstable();
                prop_assert_eq!(&seen, &through, "cells must cover H_m at {}", moment);
            }
        }
    }

    /// Each choice cell is a union of undividedness classes: histories
    /// sharing a later moment always share cells.
    #[test]
    fn choice_respects_undividedness(seed in 0u64..5_000) {
        let model = random_model(seed, &small_bounds()).unwrap();
        let histories = model.histories();
        let moments = model.moments();
        for m in moments {
            for h1 in 0..histories.len() {
                for h2 in (h1 + 1)..histories.len() {
                    let both = |x: &imstit_core::model::MomentId| {
                        histories[h1].moments.contains(x) && histories[h2].moments.contains(x)
                    };
                    if !both(m) {
                        continue;
                    }
                    // Shared strictly-later moment: shared and not m, on
                    // both histories after m (chains: any shared moment
                    // other than the common prefix through m works via
                    // position comparison).
                    let pos1 = histories[h1].moments.iter().position(|x| x == m).unwrap();
                    let shared_later = histories[h1].moments[pos1 + 1..]
                        .iter()
                        .any(|x| histories[h2].moments.contains(x));
                    if !shared_later {
                        continue;
                    }
                    for agent in model.agents() {
                        let cells = model.choice_cells(m, agent).unwrap();
                        let c1 = cells.iter().position(|c| c.contains(&h1));
                        let c2 = cells.iter().position(|c| c.contains(&h2));
                        prop_assert_eq!(c1, c2, "undivided split at {}", m);
                    }
                }
            }
        }
    }

    /// Forcing two agents into competing all-singleton partitions at a
    /// branching moment must produce an independence violation.
    #[test]
    fn competing_singletons_are_flagged(seed in 0u64..2_000) {
        let model = random_model(seed, &small_bounds()).unwrap();
        if model.agents().len() < 2 {
            return Ok(());
        }
        let histories = model.histories();
        let branching = model.moments().iter().find(|m| {
            (0..histories.len())
                .filter(|&h| histories[h].moments.contains(m))
                .count()
                >= 2
        });
        let Some(moment) = branching else { return Ok(()) };
        let through: Vec<Vec<usize>> = (0..histories.len())
            .filter(|&h| histories[h].moments.contains(moment))
            .map(|h| vec![h])
            .collect();

        let mut file = ModelFile::from_model(&model);
        let entry = file.choice.entry(moment.as_str().to_string()).or_default();
        entry.insert(model.agents()[0].as_str().to_string(), through.clone());
        entry.insert(model.agents()[1].as_str().to_string(), through);
        let mutated = file.to_model().unwrap();
        let report = mutated.validate();
        prop_assert!(
            report.violations.iter().any(|v| matches!(
                v,
                imstit_core::model::Violation::AgentsNotIndependent { .. }
            )),
            "expected an independence violation at {}: {}",
            moment,
            report
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// point ∈ extension(f) iff satisfies(point, f): the two evaluation
    /// routes agree.
    #[test]
    fn extension_membership_matches_satisfies(
        seed in 0u64..5_000,
        f in formula_strategy(4),
    ) {
        let model = random_model(seed, &small_bounds()).unwrap();
        let f = f.desugar();
        let ext = extension(&model, &f);
        for point in model.points() {
            prop_assert_eq!(
                satisfies(&model, &point, &f).unwrap(),
                ext.contains(&model, &point)
            );
        }
    }

    /// P A is the settledness dual: it holds iff A holds on some history
    /// through the moment.
    #[test]
    fn possible_is_the_dual(seed in 0u64..3_000, f in formula_strategy(3)) {
        let model = random_model(seed, &small_bounds()).unwrap();
        let body = f.desugar();
        let poss = Formula::poss(body.clone()).desugar();
        let histories = model.histories();
        for point in model.points() {
            let witness = (0..histories.len())
                .filter(|&h| histories[h].moments.contains(&point.moment))
                .any(|h| {
                    satisfies(&model, &PointRef { moment: point.moment.clone(), history: h }, &body)
                        .unwrap()
                });
            prop_assert_eq!(satisfies(&model, &point, &poss).unwrap(), witness);
        }
    }

    /// Settled implies cstit implies truth, pointwise.
    #[test]
    fn settled_cstit_truth_chain(seed in 0u64..3_000, f in formula_strategy(3)) {
        let model = random_model(seed, &small_bounds()).unwrap();
        let body = f.desugar();
        for agent in model.agents() {
            let settled = Formula::settled(body.clone());
            let cstit = Formula::cstit(agent.clone(), body.clone());
            for point in model.points() {
                let s = satisfies(&model, &point, &settled).unwrap();
                let c = satisfies(&model, &point, &cstit).unwrap();
                let t = satisfies(&model, &point, &body).unwrap();
                prop_assert!(!s || c, "S must imply cstit");
                prop_assert!(!c || t, "cstit must imply truth");
            }
        }
    }

    /// Extensions are a Boolean homomorphism on ~ and &.
    #[test]
    fn extension_homomorphism(
        seed in 0u64..3_000,
        f in formula_strategy(3),
        g in formula_strategy(3),
    ) {
        let model = random_model(seed, &small_bounds()).unwrap();
        let (f, g) = (f.desugar(), g.desugar());
        let e_f: Vec<PointRef> = extension(&model, &f).points(&model);
        let e_not: Vec<PointRef> = extension(&model, &Formula::neg(f.clone())).points(&model);
        let all = model.points();
        let complement: Vec<PointRef> =
            all.iter().filter(|p| !e_f.contains(p)).cloned().collect();
        prop_assert_eq!(e_not, complement);

        let e_g = extension(&model, &g);
        let e_and = extension(&model, &Formula::and(f.clone(), g.clone()));
        let e_f = extension(&model, &f);
        for point in model.points() {
            prop_assert_eq!(
                e_and.contains(&model, &point),
                e_f.contains(&model, &point) && e_g.contains(&model, &point)
            );
        }
    }

    /// Imagination is settled-free and choice-driven: where [i a]A
    /// holds, [c a][i a]A holds and S [i a]A fails, on every validated
    /// model.
    #[test]
    fn imagination_settledness(seed in 0u64..3_000, f in formula_strategy(2)) {
        let model = random_model(seed, &small_bounds()).unwrap();
        let body = f.desugar();
        for agent in model.agents() {
            let im = Formula::imagine(agent.clone(), body.clone());
            let a5 = Formula::imp(
                im.clone(),
                Formula::and(
                    Formula::cstit(agent.clone(), im.clone()),
                    Formula::neg(Formula::settled(im.clone())),
                ),
            );
            prop_assert!(valid_in_model(&model, &a5));
        }
    }
}

/// A single maximal chain means exactly one history.
#[test]
fn chain_has_one_history() {
    let model = ImaginationModel::from_json(
        r#"{"agents": ["a"], "moments": ["m0", "m1", "m2"],
            "covers": [["m0", "m1"], ["m1", "m2"]]}"#,
    )
    .unwrap();
    assert_eq!(model.history_count(), 1);
}
