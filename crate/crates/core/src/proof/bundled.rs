//! Machine-checked derivations shipped with the workbench (the same
//! files live under `proofs/` at the repository root).

use super::{parse_proof, ProofDocument};

pub const CONVERSE_A5: &str = include_str!("../../../../proofs/converse_a5.proof");
pub const CSTIT_NECESSITATION: &str =
    include_str!("../../../../proofs/cstit_necessitation.proof");

#[derive(Debug, Clone, Copy)]
pub struct BundledProof {
    pub name: &'static str,
    pub text: &'static str,
}

pub fn bundled_proofs() -> Vec<BundledProof> {
    vec![
        BundledProof {
            name: "converse_a5",
            text: CONVERSE_A5,
        },
        BundledProof {
            name: "cstit_necessitation",
            text: CSTIT_NECESSITATION,
        },
    ]
}

impl BundledProof {
    pub fn parse(&self) -> ProofDocument {
        parse_proof(self.text, &[]).expect("bundled proofs parse")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::proof::check_proof;

    #[test]
    fn bundled_proofs_are_accepted() {
        for bundled in bundled_proofs() {
            let doc = bundled.parse();
            let verdict = check_proof(&doc.proof);
            assert!(verdict.is_accepted(), "{}: {verdict:?}", bundled.name);
        }
    }

    #[test]
    fn certified_theorems_survive_the_smoke_test() {
        use crate::model::{enumerate_models, ModelBounds};
        use crate::proof::{theoremhood_smoke, SmokeOutcome, Verdict};
        let bounds = ModelBounds {
            max_moments: 3,
            vars: vec!["p".to_string()],
            max_family: 1,
            ..ModelBounds::default()
        };
        for bundled in bundled_proofs() {
            let doc = bundled.parse();
            let Verdict::Accepted { formula, .. } = check_proof(&doc.proof) else {
                panic!("{} must be accepted", bundled.name);
            };
            let stream = enumerate_models(&bounds).unwrap();
            match theoremhood_smoke(&formula, stream) {
                SmokeOutcome::ConsistentWith { models_checked } => {
                    assert!(models_checked > 0)
                }
                SmokeOutcome::RefutedBy { point, .. } => {
                    panic!("{}: certified theorem refuted at {point}", bundled.name)
                }
            }
        }
    }

    #[test]
    fn converse_a5_certifies_the_expected_formula() {
        let doc = parse_proof(CONVERSE_A5, &[]).unwrap();
        let want = parse("([c a][i a]p & ~S [i a]p) -> [i a]p", &doc.agents).unwrap();
        match check_proof(&doc.proof) {
            super::super::Verdict::Accepted {
                formula,
                premise_free,
            } => {
                assert_eq!(formula, want);
                assert!(premise_free);
            }
            v => panic!("expected acceptance, got {v:?}"),
        }
    }
}
