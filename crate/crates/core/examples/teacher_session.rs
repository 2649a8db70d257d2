//! A scripted teacher in place of the interactive `teach` subcommand: any
//! closure returning the outcome of applying a model can drive selection.
//!
//! cargo run --example teacher_session

use suitgraph::ontology::{json_tree, ClassId};
use suitgraph::simulation::campaign_rngs;
use suitgraph::store::KnowledgeBase;
use suitgraph::suitability::{
    generalise_execution_model, DecisionContext, ExecutionError, Generalisation, ModelRegistry, SuitabilityConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/ycb.json");
    let h = json_tree::parse(&std::fs::read_to_string(path)?)?;
    let registry = ModelRegistry::from_names(&h, &["ChipsCan", "SugarBox"])?;
    let cfg = SuitabilityConfig::default();
    let ctx = DecisionContext::new(&h, &registry, &cfg, "grasp", "default");
    let mut kb = KnowledgeBase::default();
    let (mut rng, _) = campaign_rngs(3);

    // This teacher knows that only the box-shaped model works on a cracker box.
    let mut teacher = |target: &ClassId, model: &ClassId| -> Result<bool, ExecutionError> {
        Ok(target.as_str() == "CrackerBox" && model.as_str() == "SugarBox")
    };
    for trial in 0..8 {
        match generalise_execution_model(&ctx, "CrackerBox", &mut kb, &mut teacher, &mut rng)? {
            Generalisation::Transferred(step) => {
                let shares: Vec<String> = step.posteriors.iter().map(|(c, p)| format!("{c}={p:.3}")).collect();
                println!("trial {trial}: {} -> {} [{}]", step.model, step.outcome, shares.join(", "));
            }
            other => println!("trial {trial}: {other:?}"),
        }
    }
    print!("{}", kb.export_json());
    Ok(())
}
