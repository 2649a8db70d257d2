//! Reader for a small subset of OWL in RDF/XML.
//!
//! Consumed constructs:
//! - `owl:Class` elements (top level, or nested as the object of
//!   `rdfs:subClassOf`) named by `rdf:about` or `rdf:ID`;
//! - `rdf:Description` elements typed `owl:Class` through `rdf:type`;
//! - `rdfs:subClassOf` with an `rdf:resource` or a nested named class.
//!
//! Class names are the IRI fragment (or last path segment), so
//! `http://www.w3.org/2002/07/owl#Thing` becomes `Thing`. Annotations and the
//! `owl:Ontology` header are skipped silently; everything else (properties,
//! restrictions, individuals, anonymous classes) is skipped with a warning.

use std::collections::HashMap;

use roxmltree::{Document, Node};

use super::{ClassHierarchy, HierarchyBuilder, OntologyError};

const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
const OWL: &str = "http://www.w3.org/2002/07/owl#";

const ANNOTATIONS: &[(&str, &str)] = &[
    (RDFS, "label"),
    (RDFS, "comment"),
    (RDFS, "seeAlso"),
    (RDFS, "isDefinedBy"),
    (OWL, "versionInfo"),
];

#[derive(Debug)]
pub struct ParsedOwl {
    pub hierarchy: ClassHierarchy,
    /// One message per skipped construct, in document order.
    pub warnings: Vec<String>,
}

pub fn parse(source: &str) -> Result<ParsedOwl, OntologyError> {
    let doc = Document::parse(source).map_err(|e| OntologyError::Malformed(e.to_string()))?;
    let root = doc.root_element();
    if !is(root, RDF, "RDF") {
        return Err(OntologyError::Malformed(format!(
            "expected rdf:RDF root element, found `{}`",
            root.tag_name().name()
        )));
    }

    let mut reader = Reader::default();
    for el in root.children().filter(Node::is_element) {
        reader.top_level(el)?;
    }
    Ok(ParsedOwl {
        hierarchy: reader.builder.build()?,
        warnings: reader.warnings,
    })
}

#[derive(Default)]
struct Reader {
    builder: HierarchyBuilder,
    // local name -> full IRI, to catch two IRIs collapsing onto one name
    iris: HashMap<String, String>,
    warnings: Vec<String>,
}

impl Reader {
    fn warn(&mut self, node: Node<'_, '_>, what: &str) {
        let pos = node.document().text_pos_at(node.range().start);
        self.warnings
            .push(format!("line {}: skipped {what} <{}>", pos.row, qualified(node)));
    }

    fn top_level(&mut self, el: Node<'_, '_>) -> Result<(), OntologyError> {
        if is(el, OWL, "Ontology") {
            return Ok(());
        }
        if is(el, OWL, "Class") {
            self.class_element(el)?;
            return Ok(());
        }
        if is(el, RDF, "Description") {
            let typed_class = el
                .children()
                .filter(|c| is(*c, RDF, "type"))
                .any(|c| c.attribute((RDF, "resource")) == Some(&format!("{OWL}Class")[..]));
            if typed_class {
                self.class_element(el)?;
                return Ok(());
            }
            self.warn(el, "description that is not a class");
            return Ok(());
        }
        let what = match (el.tag_name().namespace(), el.tag_name().name()) {
            (Some(OWL), "ObjectProperty" | "DatatypeProperty" | "AnnotationProperty")
            | (Some(RDF), "Property") => "property declaration",
            (Some(OWL), "NamedIndividual") => "individual",
            (Some(OWL), "Restriction") => "restriction",
            (Some(OWL), _) | (Some(RDFS), _) | (Some(RDF), _) => "unsupported construct",
            _ => "typed node (individual)",
        };
        self.warn(el, what);
        Ok(())
    }

    fn class_element(&mut self, el: Node<'_, '_>) -> Result<Option<String>, OntologyError> {
        let Some(name) = self.class_name(el)? else {
            self.warn(el, "anonymous class");
            return Ok(None);
        };
        self.builder.ensure(&name)?;
        for child in el.children().filter(Node::is_element) {
            if is(child, RDFS, "subClassOf") {
                if let Some(parent) = self.subclass_target(child)? {
                    self.builder.subclass_of(&name, &parent)?;
                }
            } else if is(child, RDF, "type") {
                // already established as a class
            } else if ANNOTATIONS.iter().any(|(ns, n)| is(child, ns, n)) {
                log::debug!("ignoring annotation on {name}");
            } else {
                self.warn(child, "class axiom");
            }
        }
        Ok(Some(name))
    }

    fn subclass_target(&mut self, el: Node<'_, '_>) -> Result<Option<String>, OntologyError> {
        if let Some(resource) = el.attribute((RDF, "resource")) {
            return self.register(resource).map(Some);
        }
        let nested: Vec<_> = el.children().filter(Node::is_element).collect();
        match nested.as_slice() {
            [inner] if is(*inner, OWL, "Class") && has_name(*inner) => self.class_element(*inner),
            [inner] if is(*inner, OWL, "Restriction") => {
                self.warn(*inner, "restriction");
                Ok(None)
            }
            _ => {
                self.warn(el, "subclass assertion without a named class");
                Ok(None)
            }
        }
    }

    fn class_name(&mut self, el: Node<'_, '_>) -> Result<Option<String>, OntologyError> {
        if let Some(about) = el.attribute((RDF, "about")) {
            return self.register(about).map(Some);
        }
        if let Some(id) = el.attribute((RDF, "ID")) {
            return self.register(&format!("#{id}")).map(Some);
        }
        Ok(None)
    }

    fn register(&mut self, iri: &str) -> Result<String, OntologyError> {
        let name = local_name(iri);
        if name.is_empty() {
            return Err(OntologyError::Malformed(format!("cannot derive a class name from `{iri}`")));
        }
        match self.iris.get(name) {
            Some(seen) if !same_iri(seen, iri) => Err(OntologyError::DuplicateClass(name.to_string())),
            Some(_) => Ok(name.to_string()),
            None => {
                self.iris.insert(name.to_string(), iri.to_string());
                Ok(name.to_string())
            }
        }
    }
}

// A bare `#X` fragment matches any IRI ending in `#X`: the document base is
// not resolved.
fn same_iri(a: &str, b: &str) -> bool {
    a == b || (a.starts_with('#') && b.ends_with(a)) || (b.starts_with('#') && a.ends_with(b))
}

fn has_name(el: Node<'_, '_>) -> bool {
    el.attribute((RDF, "about")).is_some() || el.attribute((RDF, "ID")).is_some()
}

fn local_name(iri: &str) -> &str {
    match iri.rfind('#') {
        Some(i) => &iri[i + 1..],
        None => iri.trim_end_matches('/').rsplit('/').next().unwrap_or(""),
    }
}

fn is(node: Node<'_, '_>, ns: &str, name: &str) -> bool {
    node.tag_name().namespace() == Some(ns) && node.tag_name().name() == name
}

fn qualified(node: Node<'_, '_>) -> String {
    let tag = node.tag_name();
    let prefix = match tag.namespace() {
        Some(RDF) => "rdf:",
        Some(RDFS) => "rdfs:",
        Some(OWL) => "owl:",
        _ => "",
    };
    format!("{prefix}{}", tag.name())
}
