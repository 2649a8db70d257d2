use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SimulationError;
use crate::ontology::ClassId;

/// True success probability of applying a model to a target class.
///
/// File format:
///
/// ```json
/// {"default": 0.5, "entries": [{"target": "Orange", "model": "Apple", "p": 1.0}]}
/// ```
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruthMatrix {
    // target -> model -> p
    entries: BTreeMap<ClassId, BTreeMap<ClassId, f64>>,
    default: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroundTruthFile {
    default: f64,
    #[serde(default)]
    entries: Vec<GroundTruthEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroundTruthEntry {
    target: String,
    model: String,
    p: f64,
}

fn check_probability(p: f64, what: &str) -> Result<f64, SimulationError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(SimulationError::GroundTruth(format!("{what}: probability {p} outside [0, 1]")))
    }
}

impl GroundTruthMatrix {
    pub fn new(default: f64) -> Result<Self, SimulationError> {
        Ok(Self {
            entries: BTreeMap::new(),
            default: check_probability(default, "default")?,
        })
    }

    pub fn set(&mut self, target: &str, model: &str, p: f64) -> Result<(), SimulationError> {
        let id = |s: &str| ClassId::new(s).map_err(|e| SimulationError::GroundTruth(e.to_string()));
        let p = check_probability(p, &format!("{target}/{model}"))?;
        self.entries.entry(id(target)?).or_default().insert(id(model)?, p);
        Ok(())
    }

    pub fn with(mut self, target: &str, model: &str, p: f64) -> Result<Self, SimulationError> {
        self.set(target, model, p)?;
        Ok(self)
    }

    pub fn default_probability(&self) -> f64 {
        self.default
    }

    pub fn probability(&self, target: &str, model: &str) -> f64 {
        self.entries
            .get(target)
            .and_then(|models| models.get(model))
            .copied()
            .unwrap_or(self.default)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClassId, &ClassId, f64)> {
        self.entries
            .iter()
            .flat_map(|(t, models)| models.iter().map(move |(m, p)| (t, m, *p)))
    }

    pub fn from_json(text: &str) -> Result<Self, SimulationError> {
        let file: GroundTruthFile =
            serde_json::from_str(text).map_err(|e| SimulationError::GroundTruth(e.to_string()))?;
        let mut gt = Self::new(file.default)?;
        for e in file.entries {
            if gt.entries.get(e.target.as_str()).is_some_and(|m| m.contains_key(e.model.as_str())) {
                return Err(SimulationError::GroundTruth(format!(
                    "duplicate entry {}/{}",
                    e.target, e.model
                )));
            }
            gt.set(&e.target, &e.model, e.p)?;
        }
        Ok(gt)
    }

    pub fn to_json(&self) -> String {
        let file = GroundTruthFile {
            default: self.default,
            entries: self
                .iter()
                .map(|(t, m, p)| GroundTruthEntry {
                    target: t.to_string(),
                    model: m.to_string(),
                    p,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("ground truth serializes") + "\n"
    }
}

/// Bernoulli outcome of applying `model` to `target`. Consumes one uniform
/// draw from `rng`.
pub fn simulate_execution<R: Rng + ?Sized>(gt: &GroundTruthMatrix, target: &str, model: &str, rng: &mut R) -> bool {
    rng.random::<f64>() < gt.probability(target, model)
}
