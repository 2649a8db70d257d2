//! Nested JSON taxonomy format.
//!
//! ```json
//! {"name": "Thing", "children": [{"name": "Fruit", "children": [{"name": "Apple"}]}]}
//! ```
//!
//! Every node is an object with a required non-empty `"name"` string and an
//! optional `"children"` array. No other keys are allowed.

use serde::{Deserialize, Serialize};

use super::{ClassHierarchy, HierarchyBuilder, OntologyError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonNode {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<JsonNode>,
}

pub fn parse(source: &str) -> Result<ClassHierarchy, OntologyError> {
    let root: JsonNode =
        serde_json::from_str(source).map_err(|e| OntologyError::Malformed(e.to_string()))?;
    from_node(&root)
}

pub fn from_node(root: &JsonNode) -> Result<ClassHierarchy, OntologyError> {
    let mut builder = HierarchyBuilder::new();
    builder.declare(&root.name)?;
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        for child in &node.children {
            builder.declare(&child.name)?;
            builder.subclass_of(&child.name, &node.name)?;
            stack.push(child);
        }
    }
    builder.build()
}

/// Converts a hierarchy back into the nested form, children sorted by name.
pub fn to_node(h: &ClassHierarchy) -> JsonNode {
    fn build(h: &ClassHierarchy, name: &str) -> JsonNode {
        JsonNode {
            name: name.to_string(),
            children: h
                .children(name)
                .expect("class taken from the hierarchy")
                .into_iter()
                .map(|c| build(h, c.as_str()))
                .collect(),
        }
    }
    build(h, h.root().as_str())
}

/// Serializes the hierarchy as pretty-printed JSON with sorted children.
pub fn to_string(h: &ClassHierarchy) -> String {
    let mut out = serde_json::to_string_pretty(&to_node(h)).expect("tree serializes");
    out.push('\n');
    out
}
