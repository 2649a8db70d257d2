mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use suitgraph::ontology::{ClassId, ObjectCluster};
use suitgraph::suitability::{
    advance, deterministic_success_probability, generalisation_check, specification_check, AnalyticMean,
    ExecutionError, ExperienceRecord, SampledMean, SuitabilityConfig,
};

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("M{i:02}")).collect()
}

fn stub(probs: BTreeMap<ClassId, f64>) -> impl FnMut(&ClassId, &ExperienceRecord) -> f64 {
    move |c: &ClassId, _: &ExperienceRecord| probs[c]
}

#[test]
fn worked_example_two_candidates() {
    let mut g = graph(&[("A", 0.8), ("B", 0.8)]);
    let mut est = stub([(id("A"), 0.9), (id("B"), 0.3)].into());
    g.update_posteriors(&mut est).unwrap();
    let p = g.posteriors();
    assert!((p[&id("A")] - 0.75).abs() <= 1e-12);
    assert!((p[&id("B")] - 0.25).abs() <= 1e-12);
}

#[test]
fn beta_count_formula_exhaustive() {
    for &(a0, b0) in &[(3.0, 3.0), (1.0, 1.0), (2.0, 5.0), (0.5, 0.5), (1.5, 0.7)] {
        let cfg = SuitabilityConfig::new(a0, b0, 0.6).unwrap();
        for ns in 0..=20u64 {
            for nf in 0..=20u64 {
                let (a, b) = (a0 + ns as f64 - 1.0, b0 + nf as f64 - 1.0);
                if a <= 1e-6 || b <= 1e-6 {
                    continue;
                }
                let got = deterministic_success_probability(&ExperienceRecord::new(ns, nf), &cfg);
                let want = a / (a + b);
                assert!((got - want).abs() <= 1e-15, "{a0} {b0} {ns} {nf}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn seven_of_ten_threshold() {
    let cfg = SuitabilityConfig::default();
    for ns in 0..=10u64 {
        let mean = deterministic_success_probability(&ExperienceRecord::new(ns, 10 - ns), &cfg);
        assert_eq!(mean >= 0.6, ns >= 7, "{ns}");
    }
}

/// Fewest successes on one sibling for the generalisation check to pass.
fn successes_needed(failures: u64, cfg: &SuitabilityConfig) -> u64 {
    let sibling = id("Sibling");
    (0..10_000)
        .find(|&ns| {
            let records = [(sibling.clone(), ExperienceRecord::new(ns, failures))].into();
            generalisation_check(&id("Model"), [&sibling], &records, cfg).unwrap()
        })
        .expect("threshold reachable")
}

#[test]
fn hysteresis_grid_unit_prior() {
    let cfg = SuitabilityConfig::new(1.0, 1.0, 0.8).unwrap();
    let needed: Vec<u64> = (0..=20).map(|f| successes_needed(f, &cfg)).collect();
    assert_eq!(&needed[..3], &[1, 4, 8]);
    assert!(needed.windows(2).all(|w| w[1] > w[0]), "{needed:?}");
}

#[test]
fn similarity_acts_as_prior() {
    let mut g = graph(&[("A", 0.9), ("B", 0.6), ("C", 0.3)]);
    let cfg = SuitabilityConfig::default();
    g.update_posteriors(&mut AnalyticMean { cfg: &cfg }).unwrap();
    let p = g.posteriors();
    assert!(p[&id("A")] > p[&id("B")] && p[&id("B")] > p[&id("C")]);
}

#[test]
fn experience_dominance_bound() {
    let (s1, s2, p1, p2) = (0.9f64, 0.5f64, 0.2f64, 0.9f64);
    let bound = ((s1 / s2).ln() / (p2 / p1).ln()).ceil().max(1.0) as usize;
    let mut g = graph(&[("High", s1), ("Low", s2)]);
    let mut est = stub([(id("High"), p1), (id("Low"), p2)].into());
    let mut reached = None;
    for k in 1..=bound {
        g.update_posteriors(&mut est).unwrap();
        if g.posteriors()[&id("Low")] > 0.5 {
            reached = Some(k);
            break;
        }
    }
    assert!(reached.is_some(), "not reached within {bound} updates");
}

#[test]
fn specification_after_repeated_failure() {
    let cfg = SuitabilityConfig::default();
    let cluster = ObjectCluster {
        target: id("WineGlass"),
        members: [id("Mug")].into(),
    };
    let records = [(id("Mug"), ExperienceRecord::new(0, 10))].into();
    assert!(specification_check(&cluster, &records, &cfg).unwrap());
    let empty = ObjectCluster {
        target: id("Hammer"),
        members: Default::default(),
    };
    assert!(specification_check(&empty, &BTreeMap::new(), &cfg).unwrap());
}

proptest! {
    #[test]
    fn eq1_matches_naive_product(
        cands in prop::collection::vec((0.01f64..=1.0, 0.001f64..=1.0, 0.01f64..=1.0), 1..8),
        steps in 1usize..4,
    ) {
        let n = names(cands.len());
        let mut g = graph(&n.iter().zip(&cands).map(|(c, (s, _, _))| (c.as_str(), *s)).collect::<Vec<_>>());
        let priors: BTreeMap<ClassId, f64> = n.iter().zip(&cands).map(|(c, (_, _, w))| (id(c), *w)).collect();
        g.restore_posteriors(&priors);
        let mut expected: Vec<f64> = g.posteriors().values().copied().collect();
        let sims: Vec<f64> = cands.iter().map(|c| c.0).collect();
        let probs: Vec<f64> = cands.iter().map(|c| c.1).collect();
        let mut est = stub(n.iter().zip(&probs).map(|(c, p)| (id(c), *p)).collect());
        for _ in 0..steps {
            g.update_posteriors(&mut est).unwrap();
            expected = naive_update(&expected, &sims, &probs);
        }
        for (got, want) in g.posteriors().values().zip(&expected) {
            prop_assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
        }
        prop_assert!((g.posterior_sum() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn monotone_dominance(s in 0.05f64..=1.0, p2 in 0.01f64..0.9, gap in 0.01f64..0.09, steps in 1usize..30) {
        let p1 = (p2 + gap).min(1.0);
        let mut g = graph(&[("A", s), ("B", s)]);
        let mut est = stub([(id("A"), p1), (id("B"), p2)].into());
        let mut prev_a = 0.5;
        let mut prev_ratio = 1.0;
        for _ in 0..steps {
            g.update_posteriors(&mut est).unwrap();
            let p = g.posteriors();
            let (a, b) = (p[&id("A")], p[&id("B")]);
            if b > 1e-200 {
                let ratio = a / b;
                prop_assert!((ratio / prev_ratio - p1 / p2).abs() <= 1e-9 * (p1 / p2));
                prev_ratio = ratio;
            }
            prop_assert!(a > prev_a || a == 1.0);
            prev_a = a;
        }
    }

    #[test]
    fn argmax_invariant_under_similarity_scaling(
        cands in prop::collection::vec((0.05f64..=1.0, 0u64..15, 0u64..15), 1..6),
        scale in 0.05f64..=1.0,
        seed in any::<u64>(),
    ) {
        let n = names(cands.len());
        let cfg = SuitabilityConfig::default();
        let build = |k: f64| {
            let mut g = graph(&n.iter().zip(&cands).map(|(c, (s, _, _))| (c.as_str(), s * k)).collect::<Vec<_>>());
            for (c, (_, ns, nf)) in n.iter().zip(&cands) {
                g.set_counts(c, *ns, *nf).unwrap();
            }
            g
        };
        let (mut a, mut b) = (build(1.0), build(scale));
        let mut ra = ChaCha8Rng::seed_from_u64(seed);
        let mut rb = ChaCha8Rng::seed_from_u64(seed);
        a.update_posteriors(&mut SampledMean::new(&cfg, &mut ra)).unwrap();
        b.update_posteriors(&mut SampledMean::new(&cfg, &mut rb)).unwrap();
        for (x, y) in a.posteriors().values().zip(b.posteriors().values()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        let mut top: Vec<f64> = a.posteriors().values().copied().collect();
        top.sort_by(|x, y| y.total_cmp(x));
        let clear = top.len() == 1 || top[0] - top[1] > 1e-9 || top[0] - top[1] <= 1e-13;
        if clear {
            prop_assert_eq!(a.select_model(&mut ra).unwrap(), b.select_model(&mut rb).unwrap());
        }
    }

    #[test]
    fn single_candidate_posterior_is_one(outcomes in prop::collection::vec(any::<bool>(), 20), seed in any::<u64>()) {
        let mut g = graph(&[("Only", 0.7)]);
        let cfg = SuitabilityConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut it = outcomes.into_iter();
        let mut exec = |_: &ClassId, _: &ClassId| -> Result<bool, ExecutionError> { Ok(it.next().unwrap()) };
        for _ in 0..20 {
            let step = advance(&mut g, &cfg, &mut exec, &mut rng, |g, r| g.select_model(r)).unwrap();
            prop_assert_eq!(step.posteriors[&id("Only")], 1.0);
        }
    }

    #[test]
    fn hysteresis_over_thresholds(tau_step in 0usize..10, failures in 0u64..15) {
        let tau = 0.5 + 0.05 * tau_step as f64;
        let cfg = SuitabilityConfig::new(1.0, 1.0, tau).unwrap();
        prop_assert!(successes_needed(failures + 1, &cfg) > successes_needed(failures, &cfg));
    }

    #[test]
    fn estimates_stay_in_unit_interval(ns in 0u64..200, nf in 0u64..200, a0 in 0.1f64..5.0, b0 in 0.1f64..5.0, seed in any::<u64>()) {
        let cfg = SuitabilityConfig::new(a0, b0, 0.6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ExperienceRecord::new(ns, nf);
        let p = suitgraph::suitability::success_probability(&r, &cfg, &mut rng);
        prop_assert!(p > 0.0 && p < 1.0);
        let m = deterministic_success_probability(&r, &cfg);
        prop_assert!((0.0..=1.0).contains(&m));
    }
}
