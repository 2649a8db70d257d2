//! Ontology-guided reuse of execution models.
//!
//! Given a class taxonomy, a set of classes that already have an execution
//! model for some action, and an object class without one, `suitgraph`
//! picks which existing model to try. Candidates are the modelled
//! ancestors, siblings and children of the class (its object cluster). Each
//! candidate is weighted by Wu-Palmer similarity and a beta-Bernoulli
//! estimate of its success on the class, and the weights are folded into a
//! recursive posterior after every execution.
//!
//! - [`ontology`]: class hierarchies from JSON trees or OWL RDF/XML,
//!   similarity and object clusters.
//! - [`suitability`]: the posterior update, model selection, and the
//!   generalisation and specification heuristics.
//! - [`store`]: the persistent knowledge base of execution experience.
//! - [`simulation`]: ground-truth Bernoulli executors, seeded campaigns and
//!   baselines.
//! - [`cli`]: the `suitgraph` command line.
//!
//! ```
//! use suitgraph::ontology::json_tree;
//! use suitgraph::suitability::{ModelRegistry, SuitabilityConfig, DecisionContext};
//! use suitgraph::store::KnowledgeBase;
//!
//! let h = json_tree::parse(r#"{"name": "Thing", "children": [
//!     {"name": "Fruit", "children": [{"name": "Apple"}, {"name": "Pear"}]}]}"#).unwrap();
//! let registry = ModelRegistry::from_names(&h, &["Apple"]).unwrap();
//! let cfg = SuitabilityConfig::default();
//! let ctx = DecisionContext::new(&h, &registry, &cfg, "grasp", "default");
//! let graph = ctx.load_graph("Pear", &KnowledgeBase::default()).unwrap().unwrap();
//! assert_eq!(graph.len(), 1);
//! ```

pub mod cli;
pub mod ontology;
pub mod simulation;
pub mod store;
pub mod suitability;
