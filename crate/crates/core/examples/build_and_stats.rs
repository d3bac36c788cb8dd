//! Build a small ontology in code and print its facet counts.
//!
//! ```text
//! cargo run --example build_and_stats
//! ```

use facetforge::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let id = ConceptId::new;
    let ontology = OntologyBuilder::new("aerogel-mini", "0.1.0")
        .schema(default_pspp_schema())
        .concept(Concept::new(id("FreezeDrying")?, "freeze drying", FacetTag::Processing))
        .concept(
            Concept::new(id("SolventFreezing")?, "solvent freezing", FacetTag::Processing)
                .with_parent(id("FreezeDrying")?)
                .with_alt_label("solvent freezing step"),
        )
        .concept(Concept::new(id("OpenPore")?, "open pore", FacetTag::Structure))
        .concept(Concept::new(
            id("ThermalConductivity")?,
            "thermal conductivity",
            FacetTag::Property,
        ))
        .edge(RelationEdge::new(
            id("OpenPore")?,
            "isSynthesizedBy",
            id("SolventFreezing")?,
        ))
        .build()?;

    let stats = ontology.stats();
    println!(
        "{} {}: {} concepts, {} labels",
        ontology.name(),
        ontology.version(),
        stats.concepts.total,
        stats.labels.total
    );
    for facet in FacetTag::ALL {
        println!(
            "  {:<12} concepts={} labels={}",
            facet.as_str(),
            stats.concepts.get(facet),
            stats.labels.get(facet)
        );
    }

    let path: Vec<String> = ontology
        .ancestors("SolventFreezing")?
        .iter()
        .map(ToString::to_string)
        .collect();
    println!("SolventFreezing ancestors: {}", path.join(" > "));
    let relations = ontology.relations_of("SolventFreezing")?;
    for edge in &relations.incoming {
        println!("  {} {} {}", edge.subject, edge.relation, edge.object);
    }
    Ok(())
}
