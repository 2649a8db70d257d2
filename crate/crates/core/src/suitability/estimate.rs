//! Beta-Bernoulli success estimates.
//!
//! After `N+` successes and `N-` failures the success probability of a
//! model is distributed as `Beta(alpha0 + N+ - 1, beta0 + N- - 1)`. Both
//! parameters are clamped at [`PARAM_FLOOR`] so the distribution stays
//! proper for priors at or below 1.

use rand::Rng;
use rand_distr::{Beta, Distribution};

use super::{ExperienceRecord, SuitabilityConfig};
use crate::ontology::ClassId;

pub const PARAM_FLOOR: f64 = 1e-6;

/// Sampled estimates are kept this far away from 0 and 1.
pub const ESTIMATE_MARGIN: f64 = 1e-12;

/// Posterior beta parameters `(alpha, beta)` after clamping.
pub fn beta_parameters(record: &ExperienceRecord, cfg: &SuitabilityConfig) -> (f64, f64) {
    let alpha = cfg.alpha0 + record.n_success as f64 - 1.0;
    let beta = cfg.beta0 + record.n_failure as f64 - 1.0;
    (alpha.max(PARAM_FLOOR), beta.max(PARAM_FLOOR))
}

/// Analytic posterior mean `alpha / (alpha + beta)`.
pub fn deterministic_success_probability(record: &ExperienceRecord, cfg: &SuitabilityConfig) -> f64 {
    let (a, b) = beta_parameters(record, cfg);
    a / (a + b)
}

/// Mean of `cfg.beta_sample_count` independent posterior draws.
///
/// Consumes exactly `beta_sample_count` beta variates from `rng`.
pub fn success_probability<R: Rng + ?Sized>(
    record: &ExperienceRecord,
    cfg: &SuitabilityConfig,
    rng: &mut R,
) -> f64 {
    let (a, b) = beta_parameters(record, cfg);
    let dist = Beta::new(a, b).expect("clamped beta parameters are positive");
    let n = cfg.beta_sample_count.max(1);
    let sum: f64 = (0..n).map(|_| dist.sample(rng)).sum();
    (sum / n as f64).clamp(ESTIMATE_MARGIN, 1.0 - ESTIMATE_MARGIN)
}

/// Source of `P(S = 1)` values for the posterior update.
///
/// Closures `FnMut(&ClassId, &ExperienceRecord) -> f64` implement this, which
/// is how tests substitute fixed probabilities.
pub trait SuccessEstimator {
    fn estimate(&mut self, candidate: &ClassId, record: &ExperienceRecord) -> f64;
}

impl<F> SuccessEstimator for F
where
    F: FnMut(&ClassId, &ExperienceRecord) -> f64,
{
    fn estimate(&mut self, candidate: &ClassId, record: &ExperienceRecord) -> f64 {
        self(candidate, record)
    }
}

/// The sampled estimator used for model selection.
pub struct SampledMean<'a, R: ?Sized> {
    pub cfg: &'a SuitabilityConfig,
    pub rng: &'a mut R,
}

impl<'a, R: Rng + ?Sized> SampledMean<'a, R> {
    pub fn new(cfg: &'a SuitabilityConfig, rng: &'a mut R) -> Self {
        Self { cfg, rng }
    }
}

impl<R: Rng + ?Sized> SuccessEstimator for SampledMean<'_, R> {
    fn estimate(&mut self, _candidate: &ClassId, record: &ExperienceRecord) -> f64 {
        success_probability(record, self.cfg, self.rng)
    }
}

/// Noise-free estimator based on the analytic posterior mean.
pub struct AnalyticMean<'a> {
    pub cfg: &'a SuitabilityConfig,
}

impl SuccessEstimator for AnalyticMean<'_> {
    fn estimate(&mut self, _candidate: &ClassId, record: &ExperienceRecord) -> f64 {
        deterministic_success_probability(record, self.cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(a: f64, b: f64) -> SuitabilityConfig {
        SuitabilityConfig::new(a, b, 0.6).unwrap()
    }

    #[test]
    fn analytic_means() {
        let c = cfg(3.0, 3.0);
        assert_eq!(deterministic_success_probability(&ExperienceRecord::new(7, 3), &c), 9.0 / 14.0);
        assert_eq!(deterministic_success_probability(&ExperienceRecord::new(0, 0), &c), 0.5);
        let p = deterministic_success_probability(&ExperienceRecord::new(0, 10), &c);
        assert_eq!(p, 2.0 / 14.0);
        assert!(1.0 - p >= 0.6);
    }

    #[test]
    fn clamping_below_unit_priors() {
        let c = cfg(1.0, 1.0);
        assert_eq!(beta_parameters(&ExperienceRecord::new(0, 0), &c), (PARAM_FLOOR, PARAM_FLOOR));
        assert_eq!(beta_parameters(&ExperienceRecord::new(2, 0), &c), (2.0, PARAM_FLOOR));
        assert_eq!(deterministic_success_probability(&ExperienceRecord::new(0, 0), &c), 0.5);
        // Priors above 1 never clamp.
        assert_eq!(beta_parameters(&ExperienceRecord::new(0, 0), &cfg(3.0, 3.0)), (2.0, 2.0));
    }

    #[test]
    fn sampled_mean_tracks_analytic_mean() {
        let c = cfg(3.0, 3.0).with_beta_samples(20_000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = success_probability(&ExperienceRecord::new(7, 3), &c, &mut rng);
        assert!((p - 9.0 / 14.0).abs() < 0.01, "{p}");
        let p = success_probability(&ExperienceRecord::new(0, 0), &c, &mut rng);
        assert!((p - 0.5).abs() < 0.01, "{p}");
    }

    #[test]
    fn sampled_estimates_are_seed_deterministic_and_open_interval() {
        let c = cfg(3.0, 3.0);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            success_probability(&ExperienceRecord::new(4, 1), &c, &mut rng)
        };
        assert_eq!(draw(11), draw(11));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let degenerate = cfg(1.0, 1.0);
        for _ in 0..1000 {
            let p = success_probability(&ExperienceRecord::new(0, 0), &degenerate, &mut rng);
            assert!(p > 0.0 && p < 1.0);
        }
    }

    #[test]
    fn clamped_degenerate_prior_averages_one_half() {
        // Beta(eps, eps) puts almost all mass at 0 and 1 with equal weight.
        let c = cfg(1.0, 1.0).with_beta_samples(10_000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let p = success_probability(&ExperienceRecord::new(0, 0), &c, &mut rng);
        assert!((0.45..=0.55).contains(&p), "{p}");
    }
}
