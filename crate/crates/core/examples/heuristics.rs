//! When does a model generalise to its parent class, and when does a target
//! need a model of its own?
//!
//! cargo run --example heuristics

use std::collections::BTreeMap;

use suitgraph::ontology::{ClassId, ObjectCluster};
use suitgraph::suitability::{
    deterministic_success_probability, generalisation_check, specification_check, ExperienceRecord, SuitabilityConfig,
};

fn id(s: &str) -> ClassId {
    ClassId::new(s).unwrap()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SuitabilityConfig::default();
    println!("P(S=1) after N+ of 10 (alpha0 = beta0 = 3):");
    for ns in 0..=10 {
        let p = deterministic_success_probability(&ExperienceRecord::new(ns, 10 - ns), &cfg);
        println!("  {ns:>2}  {p:.4}{}", if p >= cfg.tau { "  >= tau" } else { "" });
    }

    // The apple model tried on each sibling of Apple.
    let siblings = [id("Banana"), id("Orange"), id("Strawberry")];
    for counts in [[(8, 2), (10, 0), (9, 1)], [(4, 6), (10, 0), (7, 3)]] {
        let records: BTreeMap<ClassId, ExperienceRecord> = siblings
            .iter()
            .zip(counts)
            .map(|(s, (ns, nf))| (s.clone(), ExperienceRecord::new(ns, nf)))
            .collect();
        let ok = generalisation_check(&id("Apple"), &siblings, &records, &cfg)?;
        println!("apple model on siblings {counts:?}: generalises to Fruit = {ok}");
    }

    let glass = ObjectCluster {
        target: id("WineGlass"),
        members: [id("Mug")].into(),
    };
    for (ns, nf) in [(0, 3), (0, 10), (6, 4)] {
        let records = [(id("Mug"), ExperienceRecord::new(ns, nf))].into();
        let needed = specification_check(&glass, &records, &cfg)?;
        println!("mug model on wine glass ({ns}, {nf}): new model needed = {needed}");
    }

    let unit = SuitabilityConfig::new(1.0, 1.0, 0.8)?;
    for nf in 0..4 {
        let needed = (0..)
            .find(|&ns| deterministic_success_probability(&ExperienceRecord::new(ns, nf), &unit) >= unit.tau)
            .unwrap();
        println!("alpha0 = beta0 = 1, tau = 0.8: {nf} failures need {needed} successes");
    }
    Ok(())
}
