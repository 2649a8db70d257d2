//! Cumulative successes of the suitability strategy against the ablation
//! baselines on three synthetic problems, averaged over seeds. All
//! strategies share the outcome stream for a given seed.
//!
//! cargo run --release --example baseline_comparison

use suitgraph::simulation::{run_synthetic, Strategy, SyntheticProblem};
use suitgraph::suitability::SuitabilityConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problems = [
        ("prior agrees", SyntheticProblem::new("T", &[("Close", 0.9, 0.8), ("Far", 0.5, 0.3)])?),
        ("prior misleads", SyntheticProblem::new("T", &[("Close", 0.9, 0.1), ("Far", 0.5, 0.9)])?),
        ("equal prior", SyntheticProblem::new("T", &[("A", 0.8, 0.9), ("B", 0.8, 0.2)])?),
    ];
    let cfg = SuitabilityConfig::default();
    let (seeds, trials) = (200u64, 100usize);

    print!("{:<16}", "problem");
    for s in Strategy::ALL {
        print!(" {:>16}", s.name());
    }
    println!(" {:>16}", "oracle");
    for (name, problem) in &problems {
        print!("{name:<16}");
        for strategy in Strategy::ALL {
            let mut total = 0usize;
            for seed in 0..seeds {
                let log = run_synthetic(problem, trials, strategy, &cfg, seed)?;
                total += log.steps.iter().filter(|s| s.outcome == Some(true)).count();
            }
            print!(" {:>16.2}", total as f64 / seeds as f64);
        }
        let best = problem.success.values().copied().fold(0.0, f64::max);
        println!(" {:>16.2}", best * trials as f64);
    }
    Ok(())
}
