//! Hierarchy queries on the bundled fixture: depth, least common subsumer,
//! Wu-Palmer similarity and object clusters.
//!
//! cargo run --example ontology_queries

use suitgraph::ontology::json_tree;
use suitgraph::suitability::ModelRegistry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/ycb.json");
    let h = json_tree::parse(&std::fs::read_to_string(path)?)?;
    println!("{} classes, height {}, root {}", h.len(), h.height(), h.root());

    for (a, b) in [("Apple", "Banana"), ("Apple", "Thing"), ("Mug", "WineGlass"), ("Mug", "TennisBall")] {
        println!(
            "lcs({a}, {b}) = {:<14} wup = {:.6}",
            h.lcs(a, b)?.as_str(),
            h.wup_similarity(a, b)?
        );
    }

    let names = |v: Vec<&suitgraph::ontology::ClassId>| v.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(" > ");
    println!("ancestors of Pitcher: {}", names(h.ancestors("Pitcher")?));
    println!("siblings of Mug: {}", names(h.siblings("Mug")?));

    let registry = ModelRegistry::from_names(&h, &["Apple", "ChipsCan", "SugarBox", "Mug", "TennisBall"])?;
    for target in ["Banana", "CrackerBox", "WineGlass", "Hammer"] {
        let cluster = h.object_cluster(target, |c| registry.has_model(c.as_str()))?;
        let members: Vec<&str> = cluster.members.iter().map(|m| m.as_str()).collect();
        println!("C({target}) = {members:?}");
    }
    Ok(())
}
