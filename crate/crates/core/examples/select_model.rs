//! One selection step without execution: build the suitability graph for a
//! target from stored experience, update it and read off the argmax.
//!
//! cargo run --example select_model

use suitgraph::ontology::{json_tree, ClassId};
use suitgraph::simulation::campaign_rngs;
use suitgraph::store::KnowledgeBase;
use suitgraph::suitability::{
    DecisionContext, ExperienceKey, ExperienceRecord, ModelRegistry, SampledMean, SuitabilityConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/ycb.json");
    let h = json_tree::parse(&std::fs::read_to_string(path)?)?;
    let registry = ModelRegistry::from_names(&h, &["Apple", "ChipsCan", "SugarBox", "Mug", "TennisBall"])?;
    let cfg = SuitabilityConfig::default();
    let ctx = DecisionContext::new(&h, &registry, &cfg, "grasp", "default");

    // Earlier attempts on the tomato can: the chips can model mostly failed.
    let mut kb = KnowledgeBase::default();
    let target = ClassId::new("TomatoCan")?;
    for (model, ns, nf) in [("ChipsCan", 2, 6), ("SugarBox", 5, 1)] {
        let key = ExperienceKey::new("grasp", "default", target.clone(), ClassId::new(model)?)?;
        kb.insert(key, ExperienceRecord::new(ns, nf).with_posterior(0.5));
    }

    let mut graph = ctx.load_graph("TomatoCan", &kb)?.expect("cluster is not empty");
    let (mut rng, _) = campaign_rngs(1);
    let estimates = graph.update_posteriors(&mut SampledMean::new(&cfg, &mut rng))?;
    println!("{:<10} {:>6} {:>4} {:>4} {:>9} {:>9}", "candidate", "sim", "N+", "N-", "estimate", "posterior");
    for (id, c) in graph.candidates() {
        println!(
            "{:<10} {:>6.3} {:>4} {:>4} {:>9.4} {:>9.4}",
            id.as_str(),
            c.similarity,
            c.record.n_success,
            c.record.n_failure,
            estimates[id],
            c.record.posterior
        );
    }
    println!("selected: {}", graph.select_model(&mut rng)?);
    Ok(())
}
