mod common;

use common::*;
use suitgraph::ontology::ObjectCluster;
use suitgraph::simulation::{
    run_campaign, run_synthetic, summarize, CampaignConfig, GroundTruthMatrix, SimulationError, Strategy,
    SyntheticProblem, TrialLog,
};
use suitgraph::suitability::{specification_check, ExperienceRecord, SuitabilityConfig};

fn stow_gt() -> GroundTruthMatrix {
    GroundTruthMatrix::from_json(&std::fs::read_to_string(fixture("gt_stow.json")).unwrap()).unwrap()
}

fn stow_campaign(seed: u64) -> TrialLog {
    let h = ycb();
    let targets: Vec<&str> = TABLE_TARGETS.iter().map(|(t, _)| *t).collect();
    let mut cfg = CampaignConfig::new(&targets, seed);
    cfg.action = "stow".into();
    run_campaign(&cfg, &h, &ycb_registry(&h), &stow_gt()).unwrap()
}

#[test]
fn stow_orange_and_wine_glass_rows() {
    let log = stow_campaign(0);
    let report = summarize(&log);
    let orange = report.row("Orange").unwrap();
    assert_eq!((orange.n_success, orange.o_star.as_str()), (10, "Apple"));
    let glass = report.row("WineGlass").unwrap();
    assert_eq!((glass.n_success, glass.o_star.as_str()), (0, "/"));
    for (target, size) in TABLE_TARGETS {
        let row = report.row(target).unwrap();
        assert_eq!(row.cluster_size, size);
        if size == 1 {
            assert_eq!(row.models_attempted, 1, "{target}");
        }
    }

    let cfg = SuitabilityConfig::default();
    let mugs = log.steps_for("WineGlass").filter(|s| s.outcome.is_some()).count() as u64;
    let cluster = ObjectCluster {
        target: id("WineGlass"),
        members: [id("Mug")].into(),
    };
    let records = [(id("Mug"), ExperienceRecord::new(0, mugs))].into();
    assert!(specification_check(&cluster, &records, &cfg).unwrap());
}

#[test]
fn campaigns_are_reproducible() {
    let a = stow_campaign(42);
    let b = stow_campaign(42);
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(summarize(&a).to_csv(), summarize(&b).to_csv());
    assert_eq!(TrialLog::from_json(&a.to_json()).unwrap(), a);
    assert!(posteriors_normalised(&a));
    assert_eq!(a.steps.len(), 100);
}

#[test]
fn zero_trials_rejected() {
    let h = ycb();
    let mut cfg = CampaignConfig::new(&["Banana"], 0);
    cfg.trials_per_object = 0;
    assert!(matches!(
        run_campaign(&cfg, &h, &ycb_registry(&h), &stow_gt()),
        Err(SimulationError::InvalidConfig(_))
    ));
}

#[test]
fn unknown_target_rejected() {
    let h = ycb();
    let cfg = CampaignConfig::new(&["Durian"], 0);
    assert!(matches!(
        run_campaign(&cfg, &h, &ycb_registry(&h), &stow_gt()),
        Err(SimulationError::Ontology(_))
    ));
}

#[test]
fn every_strategy_runs_on_the_fixture() {
    let h = ycb();
    let targets: Vec<&str> = TABLE_TARGETS.iter().map(|(t, _)| *t).collect();
    for strategy in Strategy::ALL {
        let mut cfg = CampaignConfig::new(&targets, 7);
        cfg.strategy = strategy;
        let log = run_campaign(&cfg, &h, &ycb_registry(&h), &stow_gt()).unwrap();
        assert_eq!(log.steps.len(), 100);
        assert_eq!(log.strategy, strategy);
    }
}

#[test]
fn convergence_to_better_model() {
    let p = SyntheticProblem::new("T", &[("Good", 0.8, 0.9), ("Bad", 0.8, 0.2)]).unwrap();
    let cfg = SuitabilityConfig::default();
    let ok = (0..100)
        .filter(|&seed| {
            let log = run_synthetic(&p, 200, Strategy::Suitability, &cfg, seed).unwrap();
            final_share(&log, "Good", 50) >= 0.9
        })
        .count();
    assert!(ok >= 95, "{ok}");
}

#[test]
fn experience_overrides_misleading_prior() {
    let p = SyntheticProblem::new("T", &[("Close", 0.9, 0.1), ("Far", 0.5, 0.9)]).unwrap();
    let cfg = SuitabilityConfig::default();
    let ok = (0..100)
        .filter(|&seed| {
            let log = run_synthetic(&p, 200, Strategy::Suitability, &cfg, seed).unwrap();
            final_share(&log, "Far", 50) >= 0.8
        })
        .count();
    assert!(ok >= 90, "{ok}");
}

#[test]
fn ontology_prior_beats_random() {
    let p = SyntheticProblem::new("T", &[("Close", 0.9, 0.8), ("Far", 0.5, 0.3)]).unwrap();
    let cfg = SuitabilityConfig::default();
    let ok = (0..100)
        .filter(|&seed| {
            let ours = run_synthetic(&p, 50, Strategy::Suitability, &cfg, seed).unwrap();
            let random = run_synthetic(&p, 50, Strategy::Random, &cfg, seed).unwrap();
            successes(&ours) >= successes(&random)
        })
        .count();
    assert!(ok >= 90, "{ok}");
}
