use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ground_truth::{simulate_execution, GroundTruthMatrix};
use super::SimulationError;
use crate::ontology::{ClassHierarchy, ClassId, ObjectCluster};
use crate::store::KnowledgeBase;
use crate::suitability::graph::{pick_uniform, NORMALISATION_TOLERANCE, TIE_TOLERANCE};
use crate::suitability::{
    advance, deterministic_success_probability, generalise_with, DecisionContext, ExecutionError, Generalisation,
    ModelRegistry, SuitabilityConfig, SuitabilityError, SuitabilityGraph, DEFAULT_MODE,
};

/// How a campaign picks the model to execute from the updated graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Posterior argmax.
    Suitability,
    /// Uniform over the cluster, ignoring ontology and experience.
    Random,
    /// Similarity argmax, ignoring experience.
    SimilarityOnly,
    /// Argmax of the analytic success mean, ignoring the ontology.
    CountOnly,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Suitability,
        Strategy::Random,
        Strategy::SimilarityOnly,
        Strategy::CountOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Suitability => "suitability",
            Strategy::Random => "random",
            Strategy::SimilarityOnly => "similarity-only",
            Strategy::CountOnly => "count-only",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown strategy `{s}` (expected suitability, random, similarity-only or count-only)"))
    }
}

/// Picks a candidate from `graph` according to `strategy`. Ties are broken
/// uniformly with one `random_range` draw; `Random` always draws once.
pub fn baseline_select<R: Rng + ?Sized>(
    strategy: Strategy,
    graph: &SuitabilityGraph,
    cfg: &SuitabilityConfig,
    rng: &mut R,
) -> Result<ClassId, SuitabilityError> {
    if graph.is_empty() {
        return Err(SuitabilityError::EmptyGraph);
    }
    let argmax = |score: &dyn Fn(&crate::suitability::Candidate) -> f64, rng: &mut R| {
        let max = graph.candidates().values().map(score).fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<&ClassId> = graph
            .candidates()
            .iter()
            .filter(|(_, c)| max - score(c) <= TIE_TOLERANCE)
            .map(|(id, _)| id)
            .collect();
        pick_uniform(tied, rng)
    };
    Ok(match strategy {
        Strategy::Suitability => graph.select_model(rng)?,
        Strategy::Random => {
            let all: Vec<&ClassId> = graph.candidates().keys().collect();
            all[rng.random_range(0..all.len())].clone()
        }
        Strategy::SimilarityOnly => argmax(&|c| c.similarity, rng),
        Strategy::CountOnly => argmax(&|c| deterministic_success_probability(&c.record, cfg), rng),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub trials_per_object: usize,
    pub targets: Vec<String>,
    pub suitability: SuitabilityConfig,
    pub strategy: Strategy,
    pub seed: u64,
    pub action: String,
    pub mode: String,
}

impl CampaignConfig {
    /// Ten trials per target with the default suitability settings.
    pub fn new<S: AsRef<str>>(targets: &[S], seed: u64) -> Self {
        Self {
            trials_per_object: 10,
            targets: targets.iter().map(|t| t.as_ref().to_string()).collect(),
            suitability: SuitabilityConfig::default(),
            strategy: Strategy::Suitability,
            seed,
            action: "grasp".into(),
            mode: DEFAULT_MODE.into(),
        }
    }

    pub fn validate(&self, h: &ClassHierarchy) -> Result<(), SimulationError> {
        if self.trials_per_object == 0 {
            return Err(SimulationError::InvalidConfig("trials_per_object must be at least 1".into()));
        }
        if self.action.is_empty() || self.mode.is_empty() {
            return Err(SimulationError::InvalidConfig("action and mode must not be empty".into()));
        }
        self.suitability
            .validate()
            .map_err(|e| SimulationError::InvalidConfig(e.to_string()))?;
        for t in &self.targets {
            h.class(t)?;
        }
        Ok(())
    }
}

/// One execution (or the attempt to find a model) within a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStep {
    /// Index of the trial within its target, starting at 0.
    pub trial: usize,
    pub target: ClassId,
    pub cluster_size: usize,
    /// `None` when the cluster was empty.
    pub selected: Option<ClassId>,
    pub outcome: Option<bool>,
    /// The target's own model was executed.
    pub own_model: bool,
    /// Posterior over the cluster after this step's update (empty unless a
    /// model was transferred).
    pub posteriors: BTreeMap<ClassId, f64>,
    /// Success estimates that entered the update.
    pub estimates: BTreeMap<ClassId, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialLog {
    pub strategy: Strategy,
    pub seed: u64,
    pub action: String,
    pub mode: String,
    pub config: SuitabilityConfig,
    pub steps: Vec<TrialStep>,
}

impl TrialLog {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trial log serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, SimulationError> {
        serde_json::from_str(text).map_err(|e| SimulationError::InvalidConfig(format!("trial log: {e}")))
    }

    /// Steps of one target, in order.
    pub fn steps_for<'a>(&'a self, target: &'a str) -> impl Iterator<Item = &'a TrialStep> + 'a {
        self.steps.iter().filter(move |s| s.target.as_str() == target)
    }
}

/// Independent generators for selection (stream 0) and simulated outcomes
/// (stream 1). Outcomes consume exactly one draw per executed trial, so
/// different strategies see the same outcome noise for the same trial.
pub fn campaign_rngs(seed: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let selection = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = ChaCha8Rng::seed_from_u64(seed);
    outcomes.set_stream(1);
    (selection, outcomes)
}

fn check_normalised(step: &TrialStep) -> Result<(), SimulationError> {
    if step.posteriors.is_empty() {
        return Ok(());
    }
    let sum: f64 = step.posteriors.values().sum();
    if (sum - 1.0).abs() > NORMALISATION_TOLERANCE {
        return Err(SimulationError::Normalisation {
            target: step.target.to_string(),
            trial: step.trial,
            sum,
        });
    }
    Ok(())
}

/// Runs a campaign against a fresh knowledge base.
pub fn run_campaign(
    config: &CampaignConfig,
    h: &ClassHierarchy,
    registry: &ModelRegistry,
    gt: &GroundTruthMatrix,
) -> Result<TrialLog, SimulationError> {
    let mut store = KnowledgeBase::default();
    run_campaign_with_store(config, h, registry, gt, &mut store)
}

/// Runs `trials_per_object` selection-execution steps for each target in
/// order, appending every transferred execution to `store`.
pub fn run_campaign_with_store(
    config: &CampaignConfig,
    h: &ClassHierarchy,
    registry: &ModelRegistry,
    gt: &GroundTruthMatrix,
    store: &mut KnowledgeBase,
) -> Result<TrialLog, SimulationError> {
    config.validate(h)?;
    let cfg = &config.suitability;
    let ctx = DecisionContext::new(h, registry, cfg, &config.action, &config.mode);
    let (mut rng, mut outcome_rng) = campaign_rngs(config.seed);
    let mut executor = |target: &ClassId, model: &ClassId| -> Result<bool, ExecutionError> {
        Ok(simulate_execution(gt, target.as_str(), model.as_str(), &mut outcome_rng))
    };

    let mut log = TrialLog {
        strategy: config.strategy,
        seed: config.seed,
        action: config.action.clone(),
        mode: config.mode.clone(),
        config: cfg.clone(),
        steps: Vec::with_capacity(config.targets.len() * config.trials_per_object),
    };
    for target in &config.targets {
        let target_id = h.class(target)?.clone();
        let cluster_size = ctx
            .cluster(target)
            .map_err(|source| SimulationError::Trial {
                target: target.clone(),
                trial: 0,
                source,
            })?
            .len();
        for trial in 0..config.trials_per_object {
            let result = generalise_with(&ctx, target, store, &mut executor, &mut rng, |graph, rng| {
                baseline_select(config.strategy, graph, cfg, rng)
            })
            .map_err(|source| SimulationError::Trial {
                target: target.clone(),
                trial,
                source,
            })?;
            let step = match result {
                Generalisation::OwnModel { outcome } => TrialStep {
                    trial,
                    target: target_id.clone(),
                    cluster_size,
                    selected: Some(target_id.clone()),
                    outcome: Some(outcome),
                    own_model: true,
                    posteriors: BTreeMap::new(),
                    estimates: BTreeMap::new(),
                },
                Generalisation::SpecificationNeeded => TrialStep {
                    trial,
                    target: target_id.clone(),
                    cluster_size,
                    selected: None,
                    outcome: None,
                    own_model: false,
                    posteriors: BTreeMap::new(),
                    estimates: BTreeMap::new(),
                },
                Generalisation::Transferred(t) => TrialStep {
                    trial,
                    target: target_id.clone(),
                    cluster_size,
                    selected: Some(t.model),
                    outcome: Some(t.outcome),
                    own_model: false,
                    posteriors: t.posteriors,
                    estimates: t.estimates,
                },
            };
            check_normalised(&step)?;
            log.steps.push(step);
        }
    }
    Ok(log)
}

/// A single decision problem given directly by candidate similarities and
/// true success probabilities, without an ontology.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticProblem {
    pub target: ClassId,
    pub similarities: BTreeMap<ClassId, f64>,
    pub success: BTreeMap<ClassId, f64>,
}

impl SyntheticProblem {
    /// Candidates given as `(name, similarity, true success probability)`.
    pub fn new(target: &str, candidates: &[(&str, f64, f64)]) -> Result<Self, SimulationError> {
        let id = |s: &str| ClassId::new(s).map_err(|e| SimulationError::InvalidConfig(e.to_string()));
        let mut similarities = BTreeMap::new();
        let mut success = BTreeMap::new();
        for (name, s, p) in candidates {
            if !(0.0..=1.0).contains(p) {
                return Err(SimulationError::GroundTruth(format!("{name}: probability {p} outside [0, 1]")));
            }
            similarities.insert(id(name)?, *s);
            success.insert(id(name)?, *p);
        }
        Ok(Self {
            target: id(target)?,
            similarities,
            success,
        })
    }

    fn graph(&self) -> Result<SuitabilityGraph, SuitabilityError> {
        let cluster = ObjectCluster {
            target: self.target.clone(),
            members: self.similarities.keys().cloned().collect::<BTreeSet<_>>(),
        };
        SuitabilityGraph::new(&cluster, &self.similarities, "synthetic", DEFAULT_MODE)
    }
}

/// Runs `trials` steps of one synthetic decision problem with the same
/// update, selection and random-stream layout as [`run_campaign`].
pub fn run_synthetic(
    problem: &SyntheticProblem,
    trials: usize,
    strategy: Strategy,
    cfg: &SuitabilityConfig,
    seed: u64,
) -> Result<TrialLog, SimulationError> {
    if trials == 0 {
        return Err(SimulationError::InvalidConfig("trials must be at least 1".into()));
    }
    cfg.validate().map_err(|e| SimulationError::InvalidConfig(e.to_string()))?;
    let mut graph = problem.graph().map_err(|source| SimulationError::Trial {
        target: problem.target.to_string(),
        trial: 0,
        source,
    })?;
    let (mut rng, mut outcome_rng) = campaign_rngs(seed);
    let mut executor = |_: &ClassId, model: &ClassId| -> Result<bool, ExecutionError> {
        Ok(outcome_rng.random::<f64>() < problem.success[model])
    };
    let mut log = TrialLog {
        strategy,
        seed,
        action: graph.action.clone(),
        mode: graph.mode.clone(),
        config: cfg.clone(),
        steps: Vec::with_capacity(trials),
    };
    for trial in 0..trials {
        let t = advance(&mut graph, cfg, &mut executor, &mut rng, |g, rng| {
            baseline_select(strategy, g, cfg, rng)
        })
        .map_err(|source| SimulationError::Trial {
            target: problem.target.to_string(),
            trial,
            source,
        })?;
        let step = TrialStep {
            trial,
            target: problem.target.clone(),
            cluster_size: graph.len(),
            selected: Some(t.model),
            outcome: Some(t.outcome),
            own_model: false,
            posteriors: t.posteriors,
            estimates: t.estimates,
        };
        check_normalised(&step)?;
        log.steps.push(step);
    }
    Ok(log)
}
