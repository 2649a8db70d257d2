//! Durable knowledge base of experience records, stored as one canonical
//! JSON document.
//!
//! Layout (keys sorted at every level, one entry per line):
//!
//! ```text
//! {"entries":[
//! {"action":"grasp","candidate":"Apple","mode":"default","n_failure":0,"n_success":1,"posterior":1.0000000000000000e0,"target":"Banana"}
//! ],"meta":{"alpha0":3.0000000000000000e0,"beta0":3.0000000000000000e0,"beta_sample_count":10,"ontology_checksum":"…","tau":5.9999999999999998e-1},"version":1}
//! ```
//!
//! Floats are written with 17 significant digits, which round-trips every
//! `f64` exactly. Entries are sorted by `(action, mode, target, candidate)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ontology::ClassId;
use crate::suitability::{ExperienceKey, ExperienceRecord, SuitabilityConfig};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("knowledge base schema violation: {0}")]
    Schema(String),
    #[error("knowledge base version {found} is newer than supported version {FORMAT_VERSION}")]
    UnsupportedVersion { found: u64 },
    #[error("duplicate knowledge base entry {0:?}")]
    DuplicateEntry(ExperienceKey),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Provenance of a knowledge base.
#[derive(Debug, Clone, PartialEq)]
pub struct KbMeta {
    /// SHA-256 of the ontology file the experiences were gathered under.
    pub ontology_checksum: String,
    pub alpha0: f64,
    pub beta0: f64,
    pub tau: f64,
    pub beta_sample_count: u64,
}

impl KbMeta {
    pub fn new(ontology_checksum: impl Into<String>, cfg: &SuitabilityConfig) -> Self {
        Self {
            ontology_checksum: ontology_checksum.into(),
            alpha0: cfg.alpha0,
            beta0: cfg.beta0,
            tau: cfg.tau,
            beta_sample_count: cfg.beta_sample_count as u64,
        }
    }
}

impl Default for KbMeta {
    fn default() -> Self {
        Self::new("", &SuitabilityConfig::default())
    }
}

/// Hex SHA-256 digest of an ontology source.
pub fn ontology_checksum(source: &str) -> String {
    hex::encode(Sha256::digest(source.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct KnowledgeBase {
    entries: BTreeMap<ExperienceKey, ExperienceRecord>,
    pub meta: KbMeta,
}

impl KnowledgeBase {
    pub fn new(meta: KbMeta) -> Self {
        Self {
            entries: BTreeMap::new(),
            meta,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExperienceKey, &ExperienceRecord)> {
        self.entries.iter()
    }

    /// Records one execution under `key` and overwrites the stored posterior.
    pub fn append(&mut self, key: ExperienceKey, success: bool, posterior: f64) -> &ExperienceRecord {
        let record = self.entries.entry(key).or_default();
        record.record_outcome(success);
        record.posterior = posterior;
        record
    }

    /// Stores a posterior snapshot without counting an execution.
    pub fn set_posterior(&mut self, key: ExperienceKey, posterior: f64) {
        self.entries.entry(key).or_default().posterior = posterior;
    }

    /// Inserts or replaces a whole record.
    pub fn insert(&mut self, key: ExperienceKey, record: ExperienceRecord) {
        self.entries.insert(key, record);
    }

    /// `None` means no experience for this key.
    pub fn query(&self, key: &ExperienceKey) -> Option<&ExperienceRecord> {
        self.entries.get(key)
    }

    /// All records for one decision problem, keyed by candidate.
    pub fn records_for(&self, action: &str, mode: &str, target: &str) -> BTreeMap<ClassId, ExperienceRecord> {
        self.entries
            .iter()
            .filter(|(k, _)| k.action == action && k.mode == mode && k.target.as_str() == target)
            .map(|(k, r)| (k.candidate.clone(), *r))
            .collect()
    }

    /// Records of `candidate`'s model applied to any target.
    pub fn records_of_model(&self, action: &str, mode: &str, candidate: &str) -> BTreeMap<ClassId, ExperienceRecord> {
        self.entries
            .iter()
            .filter(|(k, _)| k.action == action && k.mode == mode && k.candidate.as_str() == candidate)
            .map(|(k, r)| (k.target.clone(), *r))
            .collect()
    }

    /// Logs a warning and returns `false` when the stored checksum differs
    /// from `checksum`. Experiences stay usable either way.
    pub fn check_ontology(&self, checksum: &str) -> bool {
        if self.meta.ontology_checksum.is_empty() || self.meta.ontology_checksum == checksum {
            return true;
        }
        log::warn!(
            "knowledge base was recorded under ontology {} but current ontology is {}",
            self.meta.ontology_checksum,
            checksum
        );
        false
    }

    pub fn export_json(&self) -> String {
        let mut out = String::from("{\"entries\":[");
        for (i, (k, r)) in self.entries.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            write!(
                out,
                "{{\"action\":{},\"candidate\":{},\"mode\":{},\"n_failure\":{},\"n_success\":{},\"posterior\":{},\"target\":{}}}",
                json_str(&k.action),
                json_str(k.candidate.as_str()),
                json_str(&k.mode),
                r.n_failure,
                r.n_success,
                json_f64(r.posterior),
                json_str(k.target.as_str()),
            )
            .expect("writing to a String");
        }
        if !self.entries.is_empty() {
            out.push('\n');
        }
        let m = &self.meta;
        writeln!(
            out,
            "],\"meta\":{{\"alpha0\":{},\"beta0\":{},\"beta_sample_count\":{},\"ontology_checksum\":{},\"tau\":{}}},\"version\":{}}}",
            json_f64(m.alpha0),
            json_f64(m.beta0),
            m.beta_sample_count,
            json_str(&m.ontology_checksum),
            json_f64(m.tau),
            FORMAT_VERSION
        )
        .expect("writing to a String");
        out
    }

    pub fn import_json(text: &str) -> Result<Self, StoreError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| StoreError::Schema(e.to_string()))?;
        let version = value
            .get("version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| StoreError::Schema("missing or invalid `version`".into()))?;
        if version > FORMAT_VERSION {
            return Err(StoreError::UnsupportedVersion { found: version });
        }
        if version < 1 {
            return Err(StoreError::Schema(format!("invalid version {version}")));
        }
        let doc: DocV1 = serde_json::from_value(value).map_err(|e| StoreError::Schema(e.to_string()))?;

        let meta = KbMeta {
            ontology_checksum: doc.meta.ontology_checksum,
            alpha0: doc.meta.alpha0,
            beta0: doc.meta.beta0,
            tau: doc.meta.tau,
            beta_sample_count: doc.meta.beta_sample_count,
        };
        let mut kb = KnowledgeBase::new(meta);
        for e in doc.entries {
            if !(e.posterior.is_finite() && (0.0..=1.0).contains(&e.posterior)) {
                return Err(StoreError::Schema(format!("posterior {} outside [0, 1]", e.posterior)));
            }
            let class = |s: String| ClassId::new(s).map_err(|e| StoreError::Schema(e.to_string()));
            let key = ExperienceKey::new(&e.action, &e.mode, class(e.target)?, class(e.candidate)?)
                .map_err(|e| StoreError::Schema(e.to_string()))?;
            if kb.entries.contains_key(&key) {
                return Err(StoreError::DuplicateEntry(key));
            }
            kb.entries.insert(
                key,
                ExperienceRecord {
                    n_success: e.n_success,
                    n_failure: e.n_failure,
                    posterior: e.posterior,
                },
            );
        }
        Ok(kb)
    }

    pub fn load(path: &Path) -> Result<Self, StoreError> {
        let text = std::fs::read_to_string(path).map_err(|source| StoreError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::import_json(&text)
    }

    /// Loads `path` if it exists, otherwise starts an empty knowledge base.
    pub fn load_or_new(path: &Path, meta: KbMeta) -> Result<Self, StoreError> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Self::new(meta))
        }
    }

    /// Writes to a temporary file in the same directory, then renames it
    /// over `path`.
    pub fn save(&self, path: &Path) -> Result<(), StoreError> {
        let io = |source| StoreError::Io {
            path: path.display().to_string(),
            source,
        };
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(self.export_json().as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(path).map_err(|e| io(e.error))?;
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DocV1 {
    #[allow(dead_code)]
    version: u64,
    meta: MetaV1,
    entries: Vec<EntryV1>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaV1 {
    ontology_checksum: String,
    alpha0: f64,
    beta0: f64,
    tau: f64,
    beta_sample_count: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryV1 {
    action: String,
    mode: String,
    target: String,
    candidate: String,
    n_success: u64,
    n_failure: u64,
    posterior: f64,
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// 17 significant digits in scientific notation.
pub(crate) fn json_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(target: &str, candidate: &str) -> ExperienceKey {
        ExperienceKey::new(
            "grasp",
            "default",
            ClassId::new(target).unwrap(),
            ClassId::new(candidate).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn append_and_query() {
        let mut kb = KnowledgeBase::default();
        assert!(kb.query(&key("Banana", "Apple")).is_none());
        kb.append(key("Banana", "Apple"), true, 1.0);
        let r = kb.query(&key("Banana", "Apple")).unwrap();
        assert_eq!((r.n_success, r.n_failure, r.posterior), (1, 0, 1.0));
        kb.append(key("Banana", "Apple"), false, 1.0);
        let r = kb.query(&key("Banana", "Apple")).unwrap();
        assert_eq!((r.n_success, r.n_failure), (1, 1));
        for _ in 0..5 {
            kb.append(key("Orange", "Apple"), true, 0.5);
        }
        assert_eq!(kb.query(&key("Orange", "Apple")).unwrap().trial_count(), 5);
        assert_eq!(kb.records_for("grasp", "default", "Banana").len(), 1);
        assert_eq!(kb.records_of_model("grasp", "default", "Apple").len(), 2);
        assert!(kb.records_for("stow", "default", "Banana").is_empty());
    }

    #[test]
    fn empty_export_shape() {
        let kb = KnowledgeBase::default();
        let text = kb.export_json();
        assert!(text.starts_with("{\"entries\":[],\"meta\":{"));
        assert!(text.ends_with(",\"version\":1}\n"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["version"], 1);
        assert_eq!(v["meta"]["beta_sample_count"], 10);
        assert_eq!(KnowledgeBase::import_json(&text).unwrap(), kb);
    }

    #[test]
    fn float_formatting() {
        assert_eq!(json_f64(1.0), "1.0000000000000000e0");
        assert_eq!(json_f64(0.6), "5.9999999999999998e-1");
        for x in [0.1, 1.0 / 3.0, 5e-324, f64::MAX, 0.0] {
            assert_eq!(json_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn import_rejections() {
        let newer = KnowledgeBase::default().export_json().replace("\"version\":1", "\"version\":99");
        assert!(matches!(
            KnowledgeBase::import_json(&newer),
            Err(StoreError::UnsupportedVersion { found: 99 })
        ));
        assert!(matches!(KnowledgeBase::import_json("[]"), Err(StoreError::Schema(_))));
        assert!(matches!(KnowledgeBase::import_json("not json"), Err(StoreError::Schema(_))));
        let extra = KnowledgeBase::default().export_json().replace("\"tau\"", "\"extra\":1,\"tau\"");
        assert!(matches!(KnowledgeBase::import_json(&extra), Err(StoreError::Schema(_))));

        let mut kb = KnowledgeBase::default();
        kb.append(key("Banana", "Apple"), true, 1.0);
        let text = kb.export_json();
        let bad = text.replace("\"posterior\":1.0000000000000000e0", "\"posterior\":2.0");
        assert!(matches!(KnowledgeBase::import_json(&bad), Err(StoreError::Schema(_))));
        let line = text.lines().nth(1).unwrap();
        let dup = text.replace(line, &format!("{line},\n{line}"));
        assert!(matches!(KnowledgeBase::import_json(&dup), Err(StoreError::DuplicateEntry(_))));
        let empty_action = text.replace("\"action\":\"grasp\"", "\"action\":\"\"");
        assert!(matches!(KnowledgeBase::import_json(&empty_action), Err(StoreError::Schema(_))));
    }

    #[test]
    fn save_and_load_atomically() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kb.json");
        let mut kb = KnowledgeBase::new(KbMeta::new(ontology_checksum("x"), &SuitabilityConfig::default()));
        kb.append(key("Banana", "Apple"), true, 1.0);
        kb.save(&path).unwrap();
        kb.append(key("Banana", "Apple"), false, 1.0);
        kb.save(&path).unwrap();
        let loaded = KnowledgeBase::load(&path).unwrap();
        assert_eq!(loaded, kb);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn checksum_mismatch_is_only_a_warning() {
        let kb = KnowledgeBase::new(KbMeta::new(ontology_checksum("a"), &SuitabilityConfig::default()));
        assert!(kb.check_ontology(&ontology_checksum("a")));
        assert!(!kb.check_ontology(&ontology_checksum("b")));
        assert_eq!(ontology_checksum("").len(), 64);
    }
}
