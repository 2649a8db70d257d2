#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::Rng;
use suitgraph::ontology::{json_tree, ClassHierarchy, ClassId, HierarchyBuilder, ObjectCluster};
use suitgraph::suitability::{ModelRegistry, SuitabilityGraph};

pub const MODELS: [&str; 5] = ["Apple", "ChipsCan", "SugarBox", "Mug", "TennisBall"];

/// Test objects and their expected cluster sizes.
pub const TABLE_TARGETS: [(&str, usize); 10] = [
    ("Banana", 1),
    ("Orange", 1),
    ("Strawberry", 1),
    ("CrackerBox", 2),
    ("TomatoCan", 2),
    ("MustardContainer", 2),
    ("Pitcher", 2),
    ("WineGlass", 1),
    ("Baseball", 1),
    ("Racquetball", 1),
];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn ycb() -> ClassHierarchy {
    json_tree::parse(&std::fs::read_to_string(fixture("ycb.json")).unwrap()).unwrap()
}

pub fn ycb_registry(h: &ClassHierarchy) -> ModelRegistry {
    ModelRegistry::from_names(h, &MODELS).unwrap()
}

pub fn id(s: &str) -> ClassId {
    ClassId::new(s).unwrap()
}

/// Tree where node `i + 1` hangs below node `parents[i]` (which must be
/// `<= i`). Nodes are named `C0`, `C1`, ...
pub fn tree_from_parents(parents: &[usize]) -> ClassHierarchy {
    let mut b = HierarchyBuilder::new();
    b.declare("C0").unwrap();
    for (i, p) in parents.iter().enumerate() {
        assert!(*p <= i);
        b.subclass_of(&format!("C{}", i + 1), &format!("C{p}")).unwrap();
    }
    b.build().unwrap()
}

pub fn random_parents<R: Rng>(rng: &mut R, max_nodes: usize) -> Vec<usize> {
    let n = rng.random_range(1..=max_nodes);
    (1..n).map(|i| rng.random_range(0..i)).collect()
}

pub fn graph(candidates: &[(&str, f64)]) -> SuitabilityGraph {
    let cluster = ObjectCluster {
        target: id("Target"),
        members: candidates.iter().map(|(c, _)| id(c)).collect::<BTreeSet<_>>(),
    };
    let sims: BTreeMap<ClassId, f64> = candidates.iter().map(|(c, s)| (id(c), *s)).collect();
    SuitabilityGraph::new(&cluster, &sims, "grasp", "default").unwrap()
}

/// Naive Bayes step: multiply and divide by the plain sum.
pub fn naive_update(prior: &[f64], sims: &[f64], probs: &[f64]) -> Vec<f64> {
    let raw: Vec<f64> = (0..prior.len()).map(|i| sims[i] * probs[i] * prior[i]).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|r| r / total).collect()
}

pub type ParentMap = BTreeMap<String, Option<String>>;

pub fn parent_map_from_parents(parents: &[usize]) -> ParentMap {
    let mut m = ParentMap::new();
    m.insert("C0".into(), None);
    for (i, p) in parents.iter().enumerate() {
        m.insert(format!("C{}", i + 1), Some(format!("C{p}")));
    }
    m
}

/// Parent map read straight from a JSON tree document.
pub fn parent_map_from_json(text: &str) -> ParentMap {
    fn walk(v: &serde_json::Value, parent: Option<&str>, m: &mut ParentMap) {
        let name = v["name"].as_str().unwrap();
        m.insert(name.to_string(), parent.map(str::to_string));
        for c in v.get("children").and_then(|c| c.as_array()).into_iter().flatten() {
            walk(c, Some(name), m);
        }
    }
    let mut m = ParentMap::new();
    walk(&serde_json::from_str(text).unwrap(), None, &mut m);
    m
}

/// Root-first path to `c`.
pub fn root_path(m: &ParentMap, c: &str) -> Vec<String> {
    let mut p = vec![c.to_string()];
    while let Some(Some(parent)) = m.get(p.last().unwrap()) {
        p.push(parent.clone());
    }
    p.reverse();
    p
}

/// Wu-Palmer similarity recomputed from root paths.
pub fn wup_oracle(m: &ParentMap, a: &str, b: &str) -> f64 {
    let (pa, pb) = (root_path(m, a), root_path(m, b));
    let common = pa.iter().zip(&pb).take_while(|(x, y)| x == y).count();
    2.0 * common as f64 / (pa.len() + pb.len()) as f64
}

/// Fraction of the last `last` steps of `log` that executed `model`.
pub fn final_share(log: &suitgraph::simulation::TrialLog, model: &str, last: usize) -> f64 {
    let tail = &log.steps[log.steps.len() - last..];
    tail.iter().filter(|s| s.selected.as_ref().is_some_and(|m| m.as_str() == model)).count() as f64 / last as f64
}

pub fn successes(log: &suitgraph::simulation::TrialLog) -> usize {
    log.steps.iter().filter(|s| s.outcome == Some(true)).count()
}

pub fn posteriors_normalised(log: &suitgraph::simulation::TrialLog) -> bool {
    log.steps
        .iter()
        .all(|s| s.posteriors.is_empty() || (s.posteriors.values().sum::<f64>() - 1.0).abs() <= 1e-9)
}
