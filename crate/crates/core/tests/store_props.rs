mod common;

use common::id;
use proptest::prelude::*;
use suitgraph::store::{KbMeta, KnowledgeBase, StoreError};
use suitgraph::suitability::{ExperienceKey, ExperienceRecord};

type Entry = (usize, usize, usize, usize, u64, u64, f64);

const ACTIONS: [&str; 3] = ["grasp", "stow", "pour"];
const MODES: [&str; 2] = ["default", "top"];
const CLASSES: [&str; 6] = ["Apple", "Banana", "Mug", "Cup \"tall\"", "Ünïcode", "Sugar\\Box"];

fn entries() -> impl Strategy<Value = Vec<Entry>> {
    prop::collection::vec(
        (0..3usize, 0..2usize, 0..6usize, 0..6usize, 0..1000u64, 0..1000u64, 0.0f64..=1.0),
        0..40,
    )
}

fn key(e: &Entry) -> ExperienceKey {
    ExperienceKey::new(ACTIONS[e.0], MODES[e.1], id(CLASSES[e.2]), id(CLASSES[e.3])).unwrap()
}

fn build(es: &[Entry], meta: KbMeta) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new(meta);
    for e in es {
        kb.insert(key(e), ExperienceRecord::new(e.4, e.5).with_posterior(e.6));
    }
    kb
}

fn meta() -> impl Strategy<Value = KbMeta> {
    ("[0-9a-f]{0,64}", 0.01f64..100.0, 0.01f64..100.0, 0.01f64..=1.0, 1u64..1000).prop_map(|(c, a, b, t, n)| KbMeta {
        ontology_checksum: c,
        alpha0: a,
        beta0: b,
        tau: t,
        beta_sample_count: n,
    })
}

#[test]
fn empty_document_shape() {
    let text = KnowledgeBase::default().export_json();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["entries"], serde_json::json!([]));
    assert!(v["meta"].is_object());
    assert!(matches!(
        KnowledgeBase::import_json(&text.replace("\"version\":1", "\"version\":99")),
        Err(StoreError::UnsupportedVersion { found: 99 })
    ));
}

#[test]
fn hundred_entries_re_export_identically() {
    let mut kb = KnowledgeBase::default();
    for i in 0..100u64 {
        let k = ExperienceKey::new("grasp", "default", id(&format!("T{i}")), id("Apple")).unwrap();
        kb.insert(k, ExperienceRecord::new(i, 100 - i).with_posterior(1.0 / (i as f64 + 3.0)));
    }
    let text = kb.export_json();
    assert_eq!(KnowledgeBase::import_json(&text).unwrap().export_json(), text);
}

proptest! {
    #[test]
    fn round_trip_identity(es in entries(), m in meta()) {
        let kb = build(&es, m);
        let text = kb.export_json();
        let back = KnowledgeBase::import_json(&text).unwrap();
        prop_assert_eq!(&back, &kb);
        prop_assert_eq!(back.export_json(), text);
    }

    #[test]
    fn export_independent_of_insertion_order(es in entries(), perm in any::<prop::sample::Index>()) {
        // dedupe so that the last write per key is the same in both orders
        let mut unique: Vec<Entry> = Vec::new();
        for e in es {
            if !unique.iter().any(|u| key(u) == key(&e)) {
                unique.push(e);
            }
        }
        let mut shuffled = unique.clone();
        if !shuffled.is_empty() {
            let k = perm.index(shuffled.len());
            shuffled.rotate_left(k);
            shuffled.reverse();
        }
        prop_assert_eq!(
            build(&unique, KbMeta::default()).export_json(),
            build(&shuffled, KbMeta::default()).export_json()
        );
    }

    #[test]
    fn append_conserves_counts(outcomes in prop::collection::vec(any::<bool>(), 0..200)) {
        let mut kb = KnowledgeBase::default();
        let k = ExperienceKey::new("grasp", "default", id("Banana"), id("Apple")).unwrap();
        for (i, o) in outcomes.iter().enumerate() {
            kb.append(k.clone(), *o, 1.0 / (i as f64 + 1.0));
        }
        let n = outcomes.len() as u64;
        let r = kb.query(&k).copied().unwrap_or_default();
        prop_assert_eq!(r.trial_count(), n);
        prop_assert_eq!(r.n_success, outcomes.iter().filter(|o| **o).count() as u64);
    }
}
