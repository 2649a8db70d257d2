//! Ten trials per test object for the grasp and stow actions against the
//! bundled ground-truth matrices, summarised per object.
//!
//! cargo run --example table_campaign [seed]

use suitgraph::ontology::json_tree;
use suitgraph::simulation::{run_campaign, summarize, CampaignConfig, GroundTruthMatrix};
use suitgraph::suitability::ModelRegistry;

fn fixture(name: &str) -> std::io::Result<String> {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR")))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let h = json_tree::parse(&fixture("ycb.json")?)?;
    let models: Vec<String> = fixture("ycb_models.txt")?.lines().map(str::to_string).collect();
    let registry = ModelRegistry::from_names(&h, &models)?;
    let targets: Vec<String> = fixture("ycb_targets.txt")?.lines().map(str::to_string).collect();

    for action in ["grasp", "stow"] {
        let gt = GroundTruthMatrix::from_json(&fixture(&format!("gt_{action}.json"))?)?;
        let mut config = CampaignConfig::new(&targets, seed);
        config.action = action.into();
        let report = summarize(&run_campaign(&config, &h, &registry, &gt)?);

        println!("{action} (seed {seed})");
        println!("{:<18} {:>5} {:>7} {:>11} {:>4}", "object", "|C_o|", "#models", "o*", "N+");
        for row in &report.rows {
            println!(
                "{:<18} {:>5} {:>7} {:>11} {:>4}",
                row.target.as_str(),
                row.cluster_size,
                row.models_attempted,
                row.o_star,
                row.n_success
            );
        }
        println!();
    }
    Ok(())
}
