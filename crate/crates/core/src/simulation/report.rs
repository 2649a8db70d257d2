//! Per-target summary of a campaign: cluster size, number of models
//! attempted, the best model reaching the success threshold, and total
//! successes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::campaign::TrialLog;
use crate::ontology::ClassId;
use crate::suitability::{deterministic_success_probability, ExperienceRecord};

/// Placeholder written when no model reached the threshold.
pub const NO_MODEL: &str = "/";

pub const CSV_HEADER: &str = "target,cluster_size,models_attempted,o_star,n_success";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub target: ClassId,
    pub cluster_size: usize,
    pub models_attempted: usize,
    /// Model with the highest analytic success mean among those reaching
    /// `tau`, or `"/"`.
    pub o_star: String,
    pub n_success: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn row(&self, target: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.target.as_str() == target)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(r.target.as_str()),
                r.cluster_size,
                r.models_attempted,
                csv_field(&r.o_star),
                r.n_success
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("report serializes") + "\n"
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Builds one row per target in order of first appearance. Counts come from
/// the log only, so o* reflects the campaign's own executions.
pub fn summarize(log: &TrialLog) -> Report {
    let mut order: Vec<ClassId> = Vec::new();
    let mut per_target: BTreeMap<ClassId, (usize, BTreeMap<ClassId, ExperienceRecord>)> = BTreeMap::new();
    for step in &log.steps {
        if !per_target.contains_key(&step.target) {
            order.push(step.target.clone());
        }
        let (size, models) = per_target
            .entry(step.target.clone())
            .or_insert_with(|| (step.cluster_size, BTreeMap::new()));
        *size = step.cluster_size;
        if let (Some(model), Some(outcome)) = (&step.selected, step.outcome) {
            models.entry(model.clone()).or_default().record_outcome(outcome);
        }
    }

    let rows = order
        .into_iter()
        .map(|target| {
            let (cluster_size, models) = &per_target[&target];
            let mut best: Option<(&ClassId, f64)> = None;
            for (model, record) in models {
                let mean = deterministic_success_probability(record, &log.config);
                if mean >= log.config.tau && best.is_none_or(|(_, b)| mean > b) {
                    best = Some((model, mean));
                }
            }
            ReportRow {
                cluster_size: *cluster_size,
                models_attempted: models.len(),
                o_star: best.map_or(NO_MODEL.to_string(), |(m, _)| m.to_string()),
                n_success: models.values().map(|r| r.n_success).sum(),
                target,
            }
        })
        .collect();
    Report { rows }
}
