//! Seed a domain/range defect into the aerogel excerpt and show how the
//! validator reports and explains it.
//!
//! ```text
//! cargo run --example validate_ontology
//! ```

use facetforge::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/aerogel_excerpt.json");
    let clean = parse_canonical_json(&std::fs::read(path)?)?.ontology;
    println!("clean: pass={}", validate(&clean).pass);

    let (name, version, mut concepts, mut edges, schema) = clean.into_parts();
    concepts.push(Concept::new(
        ConceptId::new("SolGelProcess")?,
        "sol-gel process",
        FacetTag::Processing,
    ));
    edges.push(RelationEdge::new(
        ConceptId::new("ThermalConductivity")?,
        "isSynthesizedBy",
        ConceptId::new("SolGelProcess")?,
    ));
    let mutant = build_ontology(name, version, concepts, edges, schema)?;

    let report = validate(&mutant);
    print!("{}", report.to_json());
    for violation in &report.violations {
        println!("\n{}", explain(violation));
    }
    Ok(())
}
