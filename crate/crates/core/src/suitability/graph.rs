use std::collections::BTreeMap;

use rand::Rng;

use super::estimate::SuccessEstimator;
use super::{ExperienceRecord, SuitabilityError};
use crate::ontology::{ClassHierarchy, ClassId, ObjectCluster};

/// Posteriors within this distance of the maximum count as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Normalisation slack accepted when checking that posteriors sum to one.
pub const NORMALISATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Ontology similarity to the target, fixed for the graph's lifetime.
    pub similarity: f64,
    pub record: ExperienceRecord,
}

/// Distribution over the object cluster of `target` describing how likely
/// each candidate's model is to succeed when reused for `target`.
///
/// Candidates are kept sorted by class, which fixes the order in which
/// random draws are consumed.
#[derive(Debug, Clone, PartialEq)]
pub struct SuitabilityGraph {
    pub target: ClassId,
    pub action: String,
    pub mode: String,
    candidates: BTreeMap<ClassId, Candidate>,
}

impl SuitabilityGraph {
    /// Builds a graph with uniform posteriors and empty experience.
    pub fn new(
        cluster: &ObjectCluster,
        similarities: &BTreeMap<ClassId, f64>,
        action: &str,
        mode: &str,
    ) -> Result<Self, SuitabilityError> {
        if cluster.is_empty() {
            return Err(SuitabilityError::EmptyCluster(cluster.target.clone()));
        }
        let uniform = 1.0 / cluster.len() as f64;
        let mut candidates = BTreeMap::new();
        for member in &cluster.members {
            let similarity = *similarities
                .get(member)
                .ok_or_else(|| SuitabilityError::MissingSimilarity(member.clone()))?;
            if !(similarity > 0.0 && similarity <= 1.0) {
                return Err(SuitabilityError::InvalidSimilarity(member.clone(), similarity));
            }
            candidates.insert(
                member.clone(),
                Candidate {
                    similarity,
                    record: ExperienceRecord::default().with_posterior(uniform),
                },
            );
        }
        Ok(Self {
            target: cluster.target.clone(),
            action: action.to_string(),
            mode: mode.to_string(),
            candidates,
        })
    }

    /// Like [`new`](Self::new) with Wu-Palmer similarities taken from `h`.
    pub fn from_hierarchy(
        h: &ClassHierarchy,
        cluster: &ObjectCluster,
        action: &str,
        mode: &str,
    ) -> Result<Self, SuitabilityError> {
        let similarities = cluster
            .members
            .iter()
            .map(|m| Ok((m.clone(), h.wup_similarity(cluster.target.as_str(), m.as_str())?)))
            .collect::<Result<BTreeMap<_, _>, SuitabilityError>>()?;
        Self::new(cluster, &similarities, action, mode)
    }

    pub fn candidates(&self) -> &BTreeMap<ClassId, Candidate> {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn candidate(&self, class: &str) -> Option<&Candidate> {
        self.candidates.get(class)
    }

    pub fn posteriors(&self) -> BTreeMap<ClassId, f64> {
        self.candidates
            .iter()
            .map(|(c, cand)| (c.clone(), cand.record.posterior))
            .collect()
    }

    pub fn posterior_sum(&self) -> f64 {
        self.candidates.values().map(|c| c.record.posterior).sum()
    }

    /// Replaces the counts of `candidate`, keeping its posterior.
    pub fn set_counts(&mut self, candidate: &str, n_success: u64, n_failure: u64) -> Result<(), SuitabilityError> {
        let cand = self.get_mut(candidate)?;
        cand.record.n_success = n_success;
        cand.record.n_failure = n_failure;
        Ok(())
    }

    pub fn record_outcome(&mut self, candidate: &str, success: bool) -> Result<(), SuitabilityError> {
        self.get_mut(candidate)?.record.record_outcome(success);
        Ok(())
    }

    /// Installs previously persisted posteriors. Candidates missing from
    /// `priors` (models that joined the cluster later) get the uniform value
    /// `1/n`; the result is renormalised. Falls back to uniform when the
    /// supplied mass is zero.
    pub fn restore_posteriors(&mut self, priors: &BTreeMap<ClassId, f64>) {
        let uniform = 1.0 / self.candidates.len() as f64;
        for (class, cand) in self.candidates.iter_mut() {
            cand.record.posterior = match priors.get(class) {
                Some(p) if p.is_finite() && *p >= 0.0 => *p,
                _ => uniform,
            };
        }
        let total = self.posterior_sum();
        for cand in self.candidates.values_mut() {
            cand.record.posterior = if total > 0.0 {
                cand.record.posterior / total
            } else {
                uniform
            };
        }
    }

    /// One step of the recursive weighted posterior:
    /// `P' = eta * s * P(S=1) * P`, computed in log space.
    ///
    /// The estimator is queried once per candidate in sorted order. Returns
    /// the success estimates that were used. Counts are left unchanged.
    pub fn update_posteriors<E>(&mut self, estimator: &mut E) -> Result<BTreeMap<ClassId, f64>, SuitabilityError>
    where
        E: SuccessEstimator + ?Sized,
    {
        if self.candidates.is_empty() {
            return Err(SuitabilityError::EmptyGraph);
        }
        let mut estimates = BTreeMap::new();
        let mut logs = Vec::with_capacity(self.candidates.len());
        for (class, cand) in &self.candidates {
            let p = estimator.estimate(class, &cand.record);
            if !(0.0..=1.0).contains(&p) {
                return Err(SuitabilityError::InvalidEstimate(class.clone(), p));
            }
            estimates.insert(class.clone(), p);
            logs.push(cand.similarity.ln() + p.ln() + cand.record.posterior.ln());
        }
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Err(SuitabilityError::Underflow(self.target.clone()));
        }
        let weights: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
        let eta: f64 = weights.iter().sum();
        for (cand, w) in self.candidates.values_mut().zip(weights) {
            cand.record.posterior = w / eta;
        }
        Ok(estimates)
    }

    /// Candidates whose posterior is within [`TIE_TOLERANCE`] of the maximum.
    pub fn maximisers(&self) -> Vec<&ClassId> {
        let max = self
            .candidates
            .values()
            .map(|c| c.record.posterior)
            .fold(f64::NEG_INFINITY, f64::max);
        self.candidates
            .iter()
            .filter(|(_, c)| max - c.record.posterior <= TIE_TOLERANCE)
            .map(|(class, _)| class)
            .collect()
    }

    /// Argmax of the posterior. Ties are broken uniformly at random with a
    /// single `random_range` draw; no draw is made without a tie.
    pub fn select_model<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ClassId, SuitabilityError> {
        if self.candidates.is_empty() {
            return Err(SuitabilityError::EmptyGraph);
        }
        Ok(pick_uniform(self.maximisers(), rng))
    }

    fn get_mut(&mut self, candidate: &str) -> Result<&mut Candidate, SuitabilityError> {
        self.candidates
            .get_mut(candidate)
            .ok_or_else(|| SuitabilityError::UnknownCandidate(candidate.to_string()))
    }
}

pub(crate) fn pick_uniform<R: Rng + ?Sized>(mut tied: Vec<&ClassId>, rng: &mut R) -> ClassId {
    debug_assert!(!tied.is_empty());
    if tied.len() == 1 {
        return tied.pop().expect("one element").clone();
    }
    tied[rng.random_range(0..tied.len())].clone()
}
