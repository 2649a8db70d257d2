//! Reading a class hierarchy from OWL RDF/XML. Only named-class subclass
//! axioms are used; anything else is reported and skipped.
//!
//! cargo run --example owl_import

use suitgraph::ontology::owl;

const KITCHEN: &str = r#"<?xml version="1.0"?>
<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
         xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"
         xmlns:owl="http://www.w3.org/2002/07/owl#">
  <owl:Ontology rdf:about="http://example.org/kitchen"/>
  <owl:Class rdf:about="http://example.org/kitchen#KitchenObject"/>
  <owl:Class rdf:about="http://example.org/kitchen#Cup">
    <rdfs:subClassOf rdf:resource="http://example.org/kitchen#KitchenObject"/>
    <rdfs:label>cup</rdfs:label>
  </owl:Class>
  <rdf:Description rdf:about="http://example.org/kitchen#Mug">
    <rdf:type rdf:resource="http://www.w3.org/2002/07/owl#Class"/>
    <rdfs:subClassOf rdf:resource="http://example.org/kitchen#Cup"/>
  </rdf:Description>
  <owl:Class rdf:about="http://example.org/kitchen#Bowl">
    <rdfs:subClassOf>
      <owl:Class rdf:about="http://example.org/kitchen#Dish">
        <rdfs:subClassOf rdf:resource="http://example.org/kitchen#KitchenObject"/>
      </owl:Class>
    </rdfs:subClassOf>
  </owl:Class>
  <owl:ObjectProperty rdf:about="http://example.org/kitchen#contains"/>
  <owl:NamedIndividual rdf:about="http://example.org/kitchen#myMug"/>
</rdf:RDF>
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let parsed = owl::parse(KITCHEN)?;
    for w in &parsed.warnings {
        println!("warning: {w}");
    }
    let h = parsed.hierarchy;
    let mut stack = vec![h.root().clone()];
    while let Some(class) = stack.pop() {
        println!("{}{class}", "  ".repeat(h.depth(class.as_str())? - 1));
        stack.extend(h.children(class.as_str())?.into_iter().rev().cloned());
    }
    println!("wup(Mug, Bowl) = {:.6}", h.wup_similarity("Mug", "Bowl")?);
    Ok(())
}
