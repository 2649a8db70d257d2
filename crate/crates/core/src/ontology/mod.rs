//! Object-class taxonomy: a rooted tree of classes with the structural
//! queries needed for model transfer (depth, least common subsumer,
//! Wu-Palmer similarity, relatives and object clusters).
//!
//! Two input formats are supported, see [`json_tree`] and [`owl`].

pub mod json_tree;
pub mod owl;

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of an object class. Case-sensitive, never empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(String);

impl ClassId {
    pub fn new(name: impl Into<String>) -> Result<Self, OntologyError> {
        let name = name.into();
        if name.is_empty() {
            return Err(OntologyError::EmptyIdentifier);
        }
        Ok(ClassId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for ClassId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for ClassId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OntologyError {
    #[error("malformed ontology: {0}")]
    Malformed(String),
    #[error("class identifier must not be empty")]
    EmptyIdentifier,
    #[error("duplicate class `{0}`")]
    DuplicateClass(String),
    #[error("multiple parents for class `{class}`: `{first}` and `{second}`")]
    MultipleParents {
        class: String,
        first: String,
        second: String,
    },
    #[error("multiple roots: {}", .0.join(", "))]
    MultipleRoots(Vec<String>),
    #[error("cycle detected through class `{0}`")]
    Cycle(String),
    #[error("ontology contains no classes")]
    NoClasses,
    #[error("unknown class `{0}`")]
    UnknownClass(String),
}

/// Supported on-disk ontology formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OntologyFormat {
    JsonTree,
    OwlSubset,
}

impl OntologyFormat {
    /// Guesses the format from a file extension (`.json` vs `.owl`/`.rdf`/`.xml`).
    pub fn from_extension(path: &std::path::Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(OntologyFormat::JsonTree),
            "owl" | "rdf" | "xml" => Some(OntologyFormat::OwlSubset),
            _ => None,
        }
    }
}

/// Parses `source` in the given format. Warnings raised by the OWL reader
/// for skipped constructs are emitted through `log::warn!`.
pub fn parse_hierarchy(source: &str, format: OntologyFormat) -> Result<ClassHierarchy, OntologyError> {
    match format {
        OntologyFormat::JsonTree => json_tree::parse(source),
        OntologyFormat::OwlSubset => {
            let parsed = owl::parse(source)?;
            for warning in &parsed.warnings {
                log::warn!("{warning}");
            }
            Ok(parsed.hierarchy)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    id: ClassId,
    parent: Option<usize>,
    children: Vec<usize>,
    depth: usize,
}

/// Immutable rooted tree of object classes.
///
/// Depth is 1-based: the root has depth 1, so Wu-Palmer similarity is
/// always well defined.
#[derive(Debug, Clone)]
pub struct ClassHierarchy {
    nodes: Vec<Node>,
    index: HashMap<ClassId, usize>,
    root: usize,
}

// Two hierarchies are equal when they have the same root and the same
// parent relation, independent of declaration order.
impl PartialEq for ClassHierarchy {
    fn eq(&self, other: &Self) -> bool {
        self.nodes.len() == other.nodes.len()
            && self.root() == other.root()
            && self.nodes.iter().all(|n| match other.index.get(&n.id) {
                Some(&j) => {
                    let theirs = other.nodes[j].parent.map(|p| &other.nodes[p].id);
                    n.parent.map(|p| &self.nodes[p].id) == theirs
                }
                None => false,
            })
    }
}

impl Eq for ClassHierarchy {}

/// Incremental construction of a [`ClassHierarchy`] from class declarations
/// and subclass assertions. All tree checks happen in [`build`](Self::build).
#[derive(Debug, Default)]
pub struct HierarchyBuilder {
    order: Vec<ClassId>,
    declared: HashMap<ClassId, Option<ClassId>>,
}

impl HierarchyBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a class. Declaring the same class twice is an error.
    pub fn declare(&mut self, class: &str) -> Result<(), OntologyError> {
        let id = ClassId::new(class)?;
        if self.declared.contains_key(&id) {
            return Err(OntologyError::DuplicateClass(class.to_string()));
        }
        self.order.push(id.clone());
        self.declared.insert(id, None);
        Ok(())
    }

    /// Declares `class` if it has not been seen yet; no-op otherwise.
    pub fn ensure(&mut self, class: &str) -> Result<(), OntologyError> {
        if !self.declared.contains_key(class) {
            self.declare(class)?;
        }
        Ok(())
    }

    /// Records `child subClassOf parent`, declaring either side on demand.
    /// Repeating an identical assertion is accepted; a second, different
    /// parent is a tree violation.
    pub fn subclass_of(&mut self, child: &str, parent: &str) -> Result<(), OntologyError> {
        self.ensure(child)?;
        self.ensure(parent)?;
        let parent_id = ClassId::new(parent)?;
        let slot = self
            .declared
            .get_mut(child)
            .expect("child declared above");
        match slot {
            Some(existing) if *existing == parent_id => Ok(()),
            Some(existing) => Err(OntologyError::MultipleParents {
                class: child.to_string(),
                first: existing.to_string(),
                second: parent.to_string(),
            }),
            None => {
                *slot = Some(parent_id);
                Ok(())
            }
        }
    }

    pub fn build(self) -> Result<ClassHierarchy, OntologyError> {
        if self.order.is_empty() {
            return Err(OntologyError::NoClasses);
        }
        let index: HashMap<ClassId, usize> = self
            .order
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let mut nodes: Vec<Node> = self
            .order
            .iter()
            .map(|c| Node {
                id: c.clone(),
                parent: self.declared[c].as_ref().map(|p| index[p]),
                children: Vec::new(),
                depth: 0,
            })
            .collect();

        let roots: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].parent.is_none()).collect();
        // With n nodes and n - 1 parent links, a missing root means a cycle.
        if roots.is_empty() {
            let on_cycle = find_cycle_member(&nodes).unwrap_or(0);
            return Err(OntologyError::Cycle(nodes[on_cycle].id.to_string()));
        }
        if roots.len() > 1 {
            let mut names: Vec<String> = roots.iter().map(|&i| nodes[i].id.to_string()).collect();
            names.sort();
            return Err(OntologyError::MultipleRoots(names));
        }
        let root = roots[0];

        for i in 0..nodes.len() {
            if let Some(p) = nodes[i].parent {
                nodes[p].children.push(i);
            }
        }
        for i in 0..nodes.len() {
            let mut children = std::mem::take(&mut nodes[i].children);
            children.sort_by(|&a, &b| nodes[a].id.cmp(&nodes[b].id));
            nodes[i].children = children;
        }

        // Breadth-first from the root assigns depths; unreached nodes sit on a cycle.
        let mut queue = std::collections::VecDeque::from([root]);
        nodes[root].depth = 1;
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            let depth = nodes[i].depth;
            for c in nodes[i].children.clone() {
                nodes[c].depth = depth + 1;
                reached += 1;
                queue.push_back(c);
            }
        }
        if reached != nodes.len() {
            let on_cycle = find_cycle_member(&nodes)
                .or_else(|| nodes.iter().position(|n| n.depth == 0))
                .unwrap_or(0);
            return Err(OntologyError::Cycle(nodes[on_cycle].id.to_string()));
        }

        Ok(ClassHierarchy { nodes, index, root })
    }
}

fn find_cycle_member(nodes: &[Node]) -> Option<usize> {
    // Follow parent links from every start; a walk longer than n revisits a node.
    for start in 0..nodes.len() {
        let mut seen = vec![false; nodes.len()];
        let mut cur = start;
        loop {
            if seen[cur] {
                return Some(cur);
            }
            seen[cur] = true;
            match nodes[cur].parent {
                Some(p) => cur = p,
                None => break,
            }
        }
    }
    None
}

/// Which relatives of a class make up its object cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RelativesOptions {
    /// Maximum number of parent hops considered for ancestors; `None`
    /// includes every strict ancestor up to and including the root.
    pub max_ancestor_hops: Option<usize>,
}

impl ClassHierarchy {
    fn idx(&self, class: &str) -> Result<usize, OntologyError> {
        self.index
            .get(class)
            .copied()
            .ok_or_else(|| OntologyError::UnknownClass(class.to_string()))
    }

    pub fn root(&self) -> &ClassId {
        &self.nodes[self.root].id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, class: &str) -> bool {
        self.index.contains_key(class)
    }

    /// Resolves a class name to its identifier in this hierarchy.
    pub fn class(&self, class: &str) -> Result<&ClassId, OntologyError> {
        Ok(&self.nodes[self.idx(class)?].id)
    }

    /// All classes in sorted order.
    pub fn classes(&self) -> Vec<&ClassId> {
        let mut all: Vec<&ClassId> = self.nodes.iter().map(|n| &n.id).collect();
        all.sort();
        all
    }

    pub fn parent(&self, class: &str) -> Result<Option<&ClassId>, OntologyError> {
        let i = self.idx(class)?;
        Ok(self.nodes[i].parent.map(|p| &self.nodes[p].id))
    }

    /// Direct children, sorted.
    pub fn children(&self, class: &str) -> Result<Vec<&ClassId>, OntologyError> {
        let i = self.idx(class)?;
        Ok(self.nodes[i].children.iter().map(|&c| &self.nodes[c].id).collect())
    }

    /// Classes sharing the parent of `class`, excluding `class`; sorted.
    pub fn siblings(&self, class: &str) -> Result<Vec<&ClassId>, OntologyError> {
        let i = self.idx(class)?;
        Ok(match self.nodes[i].parent {
            Some(p) => self.nodes[p]
                .children
                .iter()
                .filter(|&&c| c != i)
                .map(|&c| &self.nodes[c].id)
                .collect(),
            None => Vec::new(),
        })
    }

    /// Strict ancestors ordered from the parent up to the root.
    pub fn ancestors(&self, class: &str) -> Result<Vec<&ClassId>, OntologyError> {
        let mut cur = self.nodes[self.idx(class)?].parent;
        let mut out = Vec::new();
        while let Some(p) = cur {
            out.push(&self.nodes[p].id);
            cur = self.nodes[p].parent;
        }
        Ok(out)
    }

    pub fn depth(&self, class: &str) -> Result<usize, OntologyError> {
        Ok(self.nodes[self.idx(class)?].depth)
    }

    /// Height of the tree, i.e. the maximum depth of any class.
    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Least common subsumer: the deepest ancestor-or-self shared by `a` and `b`.
    pub fn lcs(&self, a: &str, b: &str) -> Result<&ClassId, OntologyError> {
        let (mut x, mut y) = (self.idx(a)?, self.idx(b)?);
        while self.nodes[x].depth > self.nodes[y].depth {
            x = self.nodes[x].parent.expect("non-root has a parent");
        }
        while self.nodes[y].depth > self.nodes[x].depth {
            y = self.nodes[y].parent.expect("non-root has a parent");
        }
        while x != y {
            x = self.nodes[x].parent.expect("distinct nodes at equal depth are below the root");
            y = self.nodes[y].parent.expect("distinct nodes at equal depth are below the root");
        }
        Ok(&self.nodes[x].id)
    }

    /// Wu-Palmer similarity `2 * depth(lcs) / (depth(a) + depth(b))`.
    pub fn wup_similarity(&self, a: &str, b: &str) -> Result<f64, OntologyError> {
        let lcs = self.lcs(a, b)?;
        let num = 2.0 * self.depth(lcs.as_str())? as f64;
        let den = (self.depth(a)? + self.depth(b)?) as f64;
        Ok(num / den)
    }

    /// Strict ancestors, siblings and direct children of `class`.
    pub fn relatives(&self, class: &str) -> Result<BTreeSet<ClassId>, OntologyError> {
        self.relatives_with(class, RelativesOptions::default())
    }

    pub fn relatives_with(
        &self,
        class: &str,
        opts: RelativesOptions,
    ) -> Result<BTreeSet<ClassId>, OntologyError> {
        let hops = opts.max_ancestor_hops.unwrap_or(usize::MAX);
        let mut out: BTreeSet<ClassId> = self
            .ancestors(class)?
            .into_iter()
            .take(hops)
            .cloned()
            .collect();
        out.extend(self.siblings(class)?.into_iter().cloned());
        out.extend(self.children(class)?.into_iter().cloned());
        Ok(out)
    }

    /// The object cluster of `target`: its relatives that have a known
    /// execution model according to `has_model`.
    pub fn object_cluster<F>(&self, target: &str, has_model: F) -> Result<ObjectCluster, OntologyError>
    where
        F: Fn(&ClassId) -> bool,
    {
        self.object_cluster_with(target, has_model, RelativesOptions::default())
    }

    pub fn object_cluster_with<F>(
        &self,
        target: &str,
        has_model: F,
        opts: RelativesOptions,
    ) -> Result<ObjectCluster, OntologyError>
    where
        F: Fn(&ClassId) -> bool,
    {
        let target_id = self.class(target)?.clone();
        let members = self
            .relatives_with(target, opts)?
            .into_iter()
            .filter(|c| has_model(c))
            .collect();
        Ok(ObjectCluster {
            target: target_id,
            members,
        })
    }
}

/// Related classes that carry a known execution model for `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectCluster {
    pub target: ClassId,
    pub members: BTreeSet<ClassId>,
}

impl ObjectCluster {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
