use serde::{Deserialize, Serialize};

use super::SuitabilityError;

/// Hyperparameters of the suitability model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuitabilityConfig {
    /// Prior pseudo-count for successes. Values above 1 keep the posterior
    /// beta parameters positive without clamping.
    pub alpha0: f64,
    /// Prior pseudo-count for failures.
    pub beta0: f64,
    /// Certainty threshold used by the generalisation and specification
    /// heuristics.
    pub tau: f64,
    /// Number of beta draws averaged into one success estimate.
    pub beta_sample_count: usize,
    pub rng_seed: u64,
    /// When set, a model with no siblings is never promoted to its parent.
    pub strict_generalisation: bool,
}

impl Default for SuitabilityConfig {
    fn default() -> Self {
        Self {
            alpha0: 3.0,
            beta0: 3.0,
            tau: 0.6,
            beta_sample_count: 10,
            rng_seed: 0,
            strict_generalisation: true,
        }
    }
}

impl SuitabilityConfig {
    pub fn new(alpha0: f64, beta0: f64, tau: f64) -> Result<Self, SuitabilityError> {
        let cfg = Self {
            alpha0,
            beta0,
            tau,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_beta_samples(mut self, n: usize) -> Result<Self, SuitabilityError> {
        self.beta_sample_count = n;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_strict_generalisation(mut self, strict: bool) -> Self {
        self.strict_generalisation = strict;
        self
    }

    pub fn validate(&self) -> Result<(), SuitabilityError> {
        let bad = |msg: String| Err(SuitabilityError::InvalidConfig(msg));
        if !(self.alpha0.is_finite() && self.alpha0 > 0.0) {
            return bad(format!("alpha0 must be > 0, got {}", self.alpha0));
        }
        if !(self.beta0.is_finite() && self.beta0 > 0.0) {
            return bad(format!("beta0 must be > 0, got {}", self.beta0));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return bad(format!("tau must lie in (0, 1], got {}", self.tau));
        }
        if self.beta_sample_count == 0 {
            return bad("beta_sample_count must be positive".into());
        }
        Ok(())
    }
}
