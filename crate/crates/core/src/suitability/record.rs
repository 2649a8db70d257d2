use serde::{Deserialize, Serialize};

use super::SuitabilityError;
use crate::ontology::ClassId;

/// Mode used when an action has no qualitative modes.
pub const DEFAULT_MODE: &str = "default";

/// Scope of one experience record: the model of `candidate` applied to
/// objects of class `target` for `action` under `mode`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExperienceKey {
    pub action: String,
    pub mode: String,
    pub target: ClassId,
    pub candidate: ClassId,
}

impl ExperienceKey {
    pub fn new(
        action: &str,
        mode: &str,
        target: ClassId,
        candidate: ClassId,
    ) -> Result<Self, SuitabilityError> {
        if action.is_empty() {
            return Err(SuitabilityError::InvalidKey("action must not be empty".into()));
        }
        if mode.is_empty() {
            return Err(SuitabilityError::InvalidKey("mode must not be empty".into()));
        }
        Ok(Self {
            action: action.to_string(),
            mode: mode.to_string(),
            target,
            candidate,
        })
    }
}

/// Success/failure counts of one (target, candidate) pairing plus the last
/// recursive posterior value of the candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperienceRecord {
    pub n_success: u64,
    pub n_failure: u64,
    pub posterior: f64,
}

impl ExperienceRecord {
    pub fn new(n_success: u64, n_failure: u64) -> Self {
        Self {
            n_success,
            n_failure,
            posterior: 0.0,
        }
    }

    pub fn with_posterior(mut self, posterior: f64) -> Self {
        self.posterior = posterior;
        self
    }

    pub fn trial_count(&self) -> u64 {
        self.n_success + self.n_failure
    }

    /// Counts one more execution.
    pub fn record_outcome(&mut self, success: bool) {
        if success {
            self.n_success += 1;
        } else {
            self.n_failure += 1;
        }
    }

    pub fn with_outcome(mut self, success: bool) -> Self {
        self.record_outcome(success);
        self
    }
}

impl Default for ExperienceRecord {
    fn default() -> Self {
        Self::new(0, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcomes_update_counts() {
        let r = ExperienceRecord::new(0, 0).with_outcome(true);
        assert_eq!((r.n_success, r.n_failure), (1, 0));
        let r = ExperienceRecord::new(3, 2).with_outcome(false);
        assert_eq!((r.n_success, r.n_failure), (3, 3));
        let r = (0..10).fold(ExperienceRecord::default(), |r, _| r.with_outcome(true));
        assert_eq!((r.n_success, r.n_failure, r.trial_count()), (10, 0, 10));
    }

    #[test]
    fn key_rejects_empty_parts() {
        let c = || ClassId::new("Apple").unwrap();
        assert!(ExperienceKey::new("grasp", DEFAULT_MODE, c(), c()).is_ok());
        assert!(ExperienceKey::new("", DEFAULT_MODE, c(), c()).is_err());
        assert!(ExperienceKey::new("grasp", "", c(), c()).is_err());
    }
}
