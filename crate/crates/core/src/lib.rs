//! A workbench for the STIT logic of imagination: parse formulas,
//! validate and evaluate finite imagination models, verify Hilbert-style
//! derivations, search for bounded countermodels and run soundness
//! sweeps.
//!
//! The crate is organized around five pieces:
//!
//! - [`formula`]: the object language (AST, concrete syntax, desugaring,
//!   schema matching);
//! - [`model`]: finite imagination models, validation with witnesses,
//!   the JSON file format, and deterministic generators;
//! - [`semantics`]: the satisfaction relation, extensions, and bounded
//!   countermodel search;
//! - [`proof`]: the axiom system, rule checking, proof files and the
//!   bundled derivations;
//! - [`soundness`]: axiom/rule soundness sweeps over generated models.
//!
//! The `parallel` feature (on by default) runs search and sweeps over
//! rayon; without it the same entry points fall back to sequential
//! scans.

pub mod formula;
pub mod model;
pub mod proof;
pub mod semantics;
pub mod soundness;

pub use formula::{parse, AgentId, Formula, ParseError};
pub use model::{
    build_sigma_model, compute_histories, enumerate_models, random_model, ImaginationModel,
    ModelBounds, ModelError, ModelFile, MomentId, PointRef, PropPolicy, Proposition, TreeOrder,
    ValidationReport,
};
pub use proof::{check_proof, parse_proof, theoremhood_smoke, Proof, Verdict};
pub use semantics::{extension, find_countermodel, satisfies, valid_in_model, SearchOutcome};
