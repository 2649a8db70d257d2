//! Suitability graphs: which known execution model to reuse for an object
//! class without one, and when to generalise or specialise models.
//!
//! The success probability of reusing candidate `c`'s model on target `o`
//! follows a beta-Bernoulli posterior over the recorded executions
//! ([`estimate`]). The posterior over candidates is updated recursively as
//! `P_{t+1}(c) = eta * s(o, c) * P(S=1 | c, o) * P_t(c)` where `s` is the
//! Wu-Palmer similarity ([`graph`]). [`select`] ties this to execution and
//! the experience store; [`heuristics`] holds the generalisation and
//! specification rules.

pub mod config;
pub mod estimate;
pub mod graph;
pub mod heuristics;
pub mod record;
pub mod select;

use thiserror::Error;

use crate::ontology::{ClassId, OntologyError};

pub use config::SuitabilityConfig;
pub use estimate::{
    beta_parameters, deterministic_success_probability, success_probability, AnalyticMean, SampledMean,
    SuccessEstimator,
};
pub use graph::{Candidate, SuitabilityGraph};
pub use heuristics::{generalisation_check, specification_check};
pub use record::{ExperienceKey, ExperienceRecord, DEFAULT_MODE};
pub use select::{
    advance, generalise_execution_model, generalise_with, DecisionContext, ExecutionError, Executor, Generalisation,
    ModelRegistry, TransferStep,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuitabilityError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid experience key: {0}")]
    InvalidKey(String),
    #[error("object cluster of `{0}` is empty; a new model has to be learned")]
    EmptyCluster(ClassId),
    #[error("no similarity given for candidate `{0}`")]
    MissingSimilarity(ClassId),
    #[error("similarity of `{0}` must lie in (0, 1], got {1}")]
    InvalidSimilarity(ClassId, f64),
    #[error("no experience record for `{0}`")]
    MissingRecord(ClassId),
    #[error("success estimate for `{0}` must lie in [0, 1], got {1}")]
    InvalidEstimate(ClassId, f64),
    #[error("`{0}` is not a candidate of this graph")]
    UnknownCandidate(String),
    #[error("suitability graph has no candidates")]
    EmptyGraph,
    #[error("posterior mass vanished for `{0}`; cannot normalise")]
    Underflow(ClassId),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Execution(#[from] ExecutionError),
}
