//! Execution model selection and execution for one target object.
//!
//! For a target without its own model, the candidate graph is rebuilt from
//! the object cluster and the stored experience, the posterior is advanced
//! one step with sampled success estimates, the argmax model is executed and
//! the outcome is appended to the store.
//!
//! Random draws are consumed in this order: one batch of beta draws per
//! candidate in sorted candidate order, then at most one tie-break draw.
//! Executors that need randomness draw after that.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use thiserror::Error;

use super::estimate::SampledMean;
use super::{ExperienceKey, SuitabilityConfig, SuitabilityError, SuitabilityGraph};
use crate::ontology::{ClassHierarchy, ClassId, ObjectCluster, RelativesOptions};
use crate::store::KnowledgeBase;

/// Classes that have a learned execution model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelRegistry {
    models: BTreeSet<ClassId>,
}

impl ModelRegistry {
    pub fn new<I: IntoIterator<Item = ClassId>>(models: I) -> Self {
        Self {
            models: models.into_iter().collect(),
        }
    }

    /// Resolves every name against `h`, failing on unknown classes.
    pub fn from_names<S: AsRef<str>>(h: &ClassHierarchy, names: &[S]) -> Result<Self, SuitabilityError> {
        let models = names
            .iter()
            .map(|n| h.class(n.as_ref()).cloned())
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(Self { models })
    }

    pub fn has_model(&self, class: &str) -> bool {
        self.models.contains(class)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ClassId> {
        self.models.iter()
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }
}

/// The execution could not be attempted at all (as opposed to a failed
/// execution, which is an `Ok(false)` outcome).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("execution not attempted: {0}")]
pub struct ExecutionError(pub String);

/// Runs the model of `model` on an object of class `target` and reports
/// whether the execution succeeded.
pub trait Executor {
    fn execute(&mut self, target: &ClassId, model: &ClassId) -> Result<bool, ExecutionError>;
}

impl<F> Executor for F
where
    F: FnMut(&ClassId, &ClassId) -> Result<bool, ExecutionError>,
{
    fn execute(&mut self, target: &ClassId, model: &ClassId) -> Result<bool, ExecutionError> {
        self(target, model)
    }
}

/// Everything that stays fixed across the decisions of one session.
#[derive(Debug, Clone)]
pub struct DecisionContext<'a> {
    pub hierarchy: &'a ClassHierarchy,
    pub registry: &'a ModelRegistry,
    pub cfg: &'a SuitabilityConfig,
    pub action: String,
    pub mode: String,
    pub relatives: RelativesOptions,
    /// Ignore stored posteriors and start from the uniform prior.
    pub reset_posteriors: bool,
}

impl<'a> DecisionContext<'a> {
    pub fn new(
        hierarchy: &'a ClassHierarchy,
        registry: &'a ModelRegistry,
        cfg: &'a SuitabilityConfig,
        action: &str,
        mode: &str,
    ) -> Self {
        Self {
            hierarchy,
            registry,
            cfg,
            action: action.to_string(),
            mode: mode.to_string(),
            relatives: RelativesOptions::default(),
            reset_posteriors: false,
        }
    }

    pub fn cluster(&self, target: &str) -> Result<ObjectCluster, SuitabilityError> {
        Ok(self
            .hierarchy
            .object_cluster_with(target, |c| self.registry.has_model(c.as_str()), self.relatives)?)
    }

    pub fn key(&self, target: &ClassId, candidate: &ClassId) -> Result<ExperienceKey, SuitabilityError> {
        ExperienceKey::new(&self.action, &self.mode, target.clone(), candidate.clone())
    }

    /// The graph for `target` as of the stored experience, before this
    /// step's update. `None` when the cluster is empty.
    pub fn load_graph(&self, target: &str, store: &KnowledgeBase) -> Result<Option<SuitabilityGraph>, SuitabilityError> {
        let cluster = self.cluster(target)?;
        if cluster.is_empty() {
            return Ok(None);
        }
        let mut graph = SuitabilityGraph::from_hierarchy(self.hierarchy, &cluster, &self.action, &self.mode)?;
        let mut priors = BTreeMap::new();
        for member in &cluster.members {
            if let Some(record) = store.query(&self.key(&cluster.target, member)?) {
                graph.set_counts(member.as_str(), record.n_success, record.n_failure)?;
                priors.insert(member.clone(), record.posterior);
            }
        }
        if !self.reset_posteriors && !priors.is_empty() {
            graph.restore_posteriors(&priors);
        }
        Ok(Some(graph))
    }
}

/// Result of one pass of model selection and execution.
#[derive(Debug, Clone, PartialEq)]
pub enum Generalisation {
    /// The target has its own model; it was executed and nothing was stored.
    OwnModel { outcome: bool },
    /// A related class's model was selected and executed.
    Transferred(TransferStep),
    /// The cluster is empty: a new model has to be learned.
    SpecificationNeeded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferStep {
    pub model: ClassId,
    pub outcome: bool,
    /// Posterior over the cluster used for the selection.
    pub posteriors: BTreeMap<ClassId, f64>,
    /// Success estimates that entered the update.
    pub estimates: BTreeMap<ClassId, f64>,
}

impl Generalisation {
    /// The class whose model was executed, if any.
    pub fn selected<'s>(&'s self, target: &'s ClassId) -> Option<&'s ClassId> {
        match self {
            Generalisation::OwnModel { .. } => Some(target),
            Generalisation::Transferred(step) => Some(&step.model),
            Generalisation::SpecificationNeeded => None,
        }
    }

    pub fn outcome(&self) -> Option<bool> {
        match self {
            Generalisation::OwnModel { outcome } => Some(*outcome),
            Generalisation::Transferred(step) => Some(step.outcome),
            Generalisation::SpecificationNeeded => None,
        }
    }
}

/// Selects a model for `target` by posterior argmax, executes it and
/// records the outcome in `store`.
pub fn generalise_execution_model<R, X>(
    ctx: &DecisionContext<'_>,
    target: &str,
    store: &mut KnowledgeBase,
    executor: &mut X,
    rng: &mut R,
) -> Result<Generalisation, SuitabilityError>
where
    R: Rng + ?Sized,
    X: Executor + ?Sized,
{
    generalise_with(ctx, target, store, executor, rng, |graph, rng| graph.select_model(rng))
}

/// [`generalise_execution_model`] with a pluggable selection rule, applied
/// to the graph after its posterior update.
pub fn generalise_with<R, X, S>(
    ctx: &DecisionContext<'_>,
    target: &str,
    store: &mut KnowledgeBase,
    executor: &mut X,
    rng: &mut R,
    select: S,
) -> Result<Generalisation, SuitabilityError>
where
    R: Rng + ?Sized,
    X: Executor + ?Sized,
    S: FnMut(&SuitabilityGraph, &mut R) -> Result<ClassId, SuitabilityError>,
{
    let target_id = ctx.hierarchy.class(target)?.clone();
    if ctx.registry.has_model(target) {
        let outcome = executor.execute(&target_id, &target_id)?;
        return Ok(Generalisation::OwnModel { outcome });
    }

    let Some(mut graph) = ctx.load_graph(target, store)? else {
        return Ok(Generalisation::SpecificationNeeded);
    };
    let step = advance(&mut graph, ctx.cfg, executor, rng, select)?;
    for (candidate, posterior) in &step.posteriors {
        let key = ctx.key(&target_id, candidate)?;
        if *candidate == step.model {
            store.append(key, step.outcome, *posterior);
        } else {
            store.set_posterior(key, *posterior);
        }
    }
    Ok(Generalisation::Transferred(step))
}

/// One in-memory step on an existing graph: posterior update with sampled
/// estimates, selection, execution, and counting the outcome in the graph.
///
/// When the executor fails the graph keeps its updated posterior but no
/// outcome is counted.
pub fn advance<R, X, S>(
    graph: &mut SuitabilityGraph,
    cfg: &SuitabilityConfig,
    executor: &mut X,
    rng: &mut R,
    mut select: S,
) -> Result<TransferStep, SuitabilityError>
where
    R: Rng + ?Sized,
    X: Executor + ?Sized,
    S: FnMut(&SuitabilityGraph, &mut R) -> Result<ClassId, SuitabilityError>,
{
    let estimates = graph.update_posteriors(&mut SampledMean::new(cfg, &mut *rng))?;
    let model = select(graph, rng)?;
    let outcome = executor.execute(&graph.target, &model)?;
    graph.record_outcome(model.as_str(), outcome)?;
    Ok(TransferStep {
        model,
        outcome,
        posteriors: graph.posteriors(),
        estimates,
    })
}
