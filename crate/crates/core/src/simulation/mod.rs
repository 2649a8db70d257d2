//! Simulated execution environments and campaign runner.
//!
//! Outcomes are Bernoulli draws from a ground-truth matrix of per-pair
//! success probabilities; campaigns thread one knowledge base and a seeded
//! ChaCha8 generator through repeated selection and execution.

pub mod campaign;
pub mod ground_truth;
pub mod report;

use thiserror::Error;

use crate::ontology::OntologyError;
use crate::suitability::SuitabilityError;

pub use campaign::{
    baseline_select, campaign_rngs, run_campaign, run_campaign_with_store, run_synthetic, CampaignConfig, Strategy,
    SyntheticProblem, TrialLog, TrialStep,
};
pub use ground_truth::{simulate_execution, GroundTruthMatrix};
pub use report::{summarize, Report, ReportRow};

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("invalid campaign configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid ground truth: {0}")]
    GroundTruth(String),
    #[error("trial {trial} of `{target}` failed: {source}")]
    Trial {
        target: String,
        trial: usize,
        #[source]
        source: SuitabilityError,
    },
    #[error("posteriors of `{target}` sum to {sum} after trial {trial}")]
    Normalisation { target: String, trial: usize, sum: f64 },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}
