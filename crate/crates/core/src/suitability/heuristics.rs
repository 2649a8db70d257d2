//! Generalisation and specification heuristics.
//!
//! Both decisions use the analytic posterior mean so they do not flip on
//! sampling noise.

use std::collections::BTreeMap;

use super::estimate::deterministic_success_probability;
use super::{ExperienceRecord, SuitabilityConfig, SuitabilityError};
use crate::ontology::{ClassId, ObjectCluster};

/// Whether the model of `model_class` may be transferred to its parent class.
///
/// `records[s]` holds the experience of applying `model_class`'s model to
/// the sibling object class `s`. Passes when every sibling reaches
/// `P(S=1) >= tau`. With no siblings the answer is `false` in strict mode
/// and vacuously `true` otherwise.
pub fn generalisation_check<'a, I>(
    model_class: &ClassId,
    siblings: I,
    records: &BTreeMap<ClassId, ExperienceRecord>,
    cfg: &SuitabilityConfig,
) -> Result<bool, SuitabilityError>
where
    I: IntoIterator<Item = &'a ClassId>,
{
    let mut any = false;
    let mut all = true;
    for sibling in siblings {
        if sibling == model_class {
            continue;
        }
        any = true;
        let record = records
            .get(sibling)
            .ok_or_else(|| SuitabilityError::MissingRecord(sibling.clone()))?;
        if deterministic_success_probability(record, cfg) < cfg.tau {
            all = false;
        }
    }
    if !any {
        return Ok(!cfg.strict_generalisation);
    }
    Ok(all)
}

/// Whether a new model has to be learned for `cluster.target`: the cluster
/// is empty, or every member's model fails on the target with
/// `P(S=0) >= tau`. `records[m]` holds the experience of applying `m`'s
/// model to the target.
pub fn specification_check(
    cluster: &ObjectCluster,
    records: &BTreeMap<ClassId, ExperienceRecord>,
    cfg: &SuitabilityConfig,
) -> Result<bool, SuitabilityError> {
    let mut needed = true;
    for member in &cluster.members {
        let record = records
            .get(member)
            .ok_or_else(|| SuitabilityError::MissingRecord(member.clone()))?;
        if 1.0 - deterministic_success_probability(record, cfg) < cfg.tau {
            needed = false;
        }
    }
    Ok(needed)
}
