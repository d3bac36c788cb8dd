//! Convert an ontology between canonical JSON and the SKOS Turtle subset,
//! and check that the round trip is lossless.
//!
//! ```text
//! cargo run --example convert_formats -- fixtures/battery_excerpt.json
//! ```

use std::path::PathBuf;

use facetforge::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/battery_excerpt.json"));
    let outcome = parse_any(&std::fs::read(&path)?)?;
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    let ontology = outcome.ontology;

    let turtle = serialize_skos_turtle(&ontology);
    print!("{turtle}");

    let back = parse_skos_turtle(&turtle)?.ontology;
    assert_eq!(back, ontology);
    assert_eq!(serialize_canonical_json(&back), serialize_canonical_json(&ontology));
    eprintln!("round trip ok: {} concepts, {} edges", back.len(), back.edges().len());
    Ok(())
}
