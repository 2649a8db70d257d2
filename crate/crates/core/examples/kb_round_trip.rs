//! Saving, reloading and canonically exporting a knowledge base.
//!
//! cargo run --example kb_round_trip

use suitgraph::ontology::ClassId;
use suitgraph::store::{ontology_checksum, KbMeta, KnowledgeBase};
use suitgraph::suitability::{ExperienceKey, SuitabilityConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let source = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/ycb.json"))?;
    let checksum = ontology_checksum(&source);
    let mut kb = KnowledgeBase::new(KbMeta::new(&checksum, &SuitabilityConfig::default()));

    let key = |target: &str, model: &str| {
        ExperienceKey::new("stow", "default", ClassId::new(target).unwrap(), ClassId::new(model).unwrap()).unwrap()
    };
    for outcome in [true, true, false, true] {
        kb.append(key("Orange", "Apple"), outcome, 1.0);
    }
    kb.append(key("Pitcher", "SugarBox"), false, 0.41);
    kb.set_posterior(key("Pitcher", "ChipsCan"), 0.59);

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("kb.json");
    kb.save(&path)?;
    let back = KnowledgeBase::load(&path)?;
    assert_eq!(back, kb);
    assert!(back.check_ontology(&checksum));

    print!("{}", back.export_json());
    let r = back.query(&key("Orange", "Apple")).expect("stored");
    println!("Orange/Apple: {} trials, {} successes", r.trial_count(), r.n_success);
    Ok(())
}
