//! Extract battery-cathode concepts from a paragraph, grouped by facet.
//!
//! ```text
//! cargo run --example index_text -- "Particle size distribution of the active material ..."
//! ```

use facetforge::prelude::*;

const DEFAULT_TEXT: &str = "The current collector was coated with active material. \
    Particle size distribution and morphology were tuned by calcination to raise specific capacity.";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/battery_excerpt.json");
    let ontology = parse_canonical_json(&std::fs::read(path)?)?.ontology;
    let text = std::env::args().nth(1).unwrap_or_else(|| DEFAULT_TEXT.to_string());

    let automaton = build_automaton(&ontology, NormalizationConfig::default())?;
    let result = index_document(&automaton, &text);

    for hit in &result.hits {
        println!(
            "[{:>3}, {:>3})  {:<18} {:<11} {:?}{}",
            hit.start,
            hit.end,
            hit.concept.as_str(),
            hit.facet.as_str(),
            hit.surface,
            if hit.ambiguous { "  (ambiguous)" } else { "" }
        );
    }
    for (facet, scores) in &result.per_facet {
        let ranked: Vec<String> = scores.iter().map(|s| format!("{}={}", s.concept, s.score)).collect();
        println!("{facet}: {}", ranked.join(", "));
    }
    println!("notation: {}", result.notation);
    assert_eq!(
        result.to_json(),
        oracle_index(&ontology, NormalizationConfig::default(), &text).to_json()
    );
    Ok(())
}
