//! Shared helpers for the integration tests: fixture loading and seeded
//! generators for random ontologies and documents.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use facetforge::prelude::*;
use facetforge::text::label_key;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const AEROGEL: &str = "aerogel_excerpt.json";
pub const BATTERY: &str = "battery_excerpt.json";
pub const FIXTURES: [&str; 2] = [AEROGEL, BATTERY];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture_bytes(name: &str) -> Vec<u8> {
    std::fs::read(fixture_path(name)).expect("fixture readable")
}

pub fn fixture(name: &str) -> Ontology {
    let outcome = parse_canonical_json(&fixture_bytes(name)).expect("fixture parses");
    assert!(outcome.warnings.is_empty(), "{name}: {:?}", outcome.warnings);
    outcome.ontology
}

pub fn id(s: &str) -> ConceptId {
    ConceptId::new(s).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small vocabulary so random labels overlap, share prefixes and collide.
pub const WORDS: &[&str] = &[
    "active", "material", "pore", "pores", "size", "particle", "gel", "dry", "drying", "thermal", "Flux", "naïve", "x",
];

const ODD_LABELS: &[&str] = &[
    "he said \"hi\" there",
    "back\\slash gel",
    "tab\tseparated pore",
    "multi\nline size",
    "Current-Collector",
    "ÅNGSTRÖM scale",
    "e\u{301}tude gel",
];

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_concepts: usize,
    pub max_edges: usize,
    /// Emit labels with quotes, escapes, line breaks and non-ASCII text.
    pub odd_labels: bool,
    /// Keep every edge within the schema's domain/range.
    pub schema_conformant: bool,
}

impl Shape {
    pub const SMALL: Shape = Shape {
        max_concepts: 50,
        max_edges: 80,
        odd_labels: true,
        schema_conformant: false,
    };
}

fn random_phrase(rng: &mut impl Rng) -> String {
    let len = rng.gen_range(1..=3);
    (0..len)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(if rng.gen_bool(0.2) { "-" } else { " " })
}

fn random_label(rng: &mut impl Rng, odd: bool) -> String {
    if odd && rng.gen_bool(0.08) {
        ODD_LABELS.choose(rng).unwrap().to_string()
    } else {
        random_phrase(rng)
    }
}

fn random_schema(rng: &mut impl Rng) -> RelationSchema {
    let mut relations: Vec<RelationType> = default_pspp_schema().iter().cloned().collect();
    if rng.gen_bool(0.3) {
        relations.push(RelationType::new(
            "hasPart",
            FacetTag::Structure,
            FacetTag::Structure,
            true,
        ));
    }
    if rng.gen_bool(0.2) {
        relations.retain(|r| r.name != "isDependentOn");
    }
    RelationSchema::new(relations).unwrap()
}

/// A random structurally valid ontology. Parents always point at an earlier
/// concept of the same facet, so hierarchies are acyclic by construction.
pub fn random_ontology(rng: &mut impl Rng, shape: Shape) -> Ontology {
    let config = NormalizationConfig::default();
    let schema = random_schema(rng);
    let n = rng.gen_range(0..=shape.max_concepts);
    let mut concepts: Vec<Concept> = Vec::with_capacity(n);
    for i in 0..n {
        let facet = *FacetTag::ALL.choose(rng).unwrap();
        let letter = (b'A' + rng.gen_range(0..26)) as char;
        let mut concept = Concept::new(id(&format!("{letter}{i}")), random_label(rng, shape.odd_labels), facet);
        let mut keys = BTreeSet::from([label_key(&concept.pref_label, config)]);
        for _ in 0..rng.gen_range(0..=2) {
            let alt = random_label(rng, shape.odd_labels);
            if keys.insert(label_key(&alt, config)) {
                concept = concept.with_alt_label(alt);
            }
        }
        let same_facet: Vec<&Concept> = concepts.iter().filter(|c| c.facet == facet).collect();
        if !same_facet.is_empty() && rng.gen_bool(0.5) {
            concept = concept.with_parent(same_facet.choose(rng).unwrap().id.clone());
        }
        if rng.gen_bool(0.3) {
            concept = concept.with_definition(random_label(rng, shape.odd_labels));
        }
        concepts.push(concept);
    }
    concepts.shuffle(rng);

    let relations: Vec<RelationType> = schema.iter().cloned().collect();
    let mut edges = BTreeSet::new();
    if concepts.len() >= 2 {
        for _ in 0..rng.gen_range(0..=shape.max_edges) {
            let relation = relations.choose(rng).unwrap();
            let (subject, object) = if shape.schema_conformant {
                let domain: Vec<&Concept> = concepts.iter().filter(|c| c.facet == relation.domain_facet).collect();
                let range: Vec<&Concept> = concepts.iter().filter(|c| c.facet == relation.range_facet).collect();
                match (domain.choose(rng), range.choose(rng)) {
                    (Some(s), Some(o)) => (*s, *o),
                    _ => continue,
                }
            } else {
                (concepts.choose(rng).unwrap(), concepts.choose(rng).unwrap())
            };
            if subject.id != object.id {
                edges.insert(RelationEdge::new(
                    subject.id.clone(),
                    relation.name.clone(),
                    object.id.clone(),
                ));
            }
        }
    }
    let mut edges: Vec<RelationEdge> = edges.into_iter().collect();
    edges.shuffle(rng);
    let name = format!("random-{}", rng.gen_range(0..1000));
    build_ontology(name, "0.0.1", concepts, edges, schema).expect("generated ontology builds")
}

/// A random document over [`WORDS`] with mixed case, punctuation and
/// occasional non-ASCII noise.
pub fn random_text(rng: &mut impl Rng, max_tokens: usize) -> String {
    const SEPARATORS: &[&str] = &[" ", " ", " ", "-", ", ", ". ", "\n", " (", ") ", " — ", "/"];
    let mut text = String::new();
    for i in 0..rng.gen_range(0..=max_tokens) {
        if i > 0 {
            text.push_str(SEPARATORS.choose(rng).unwrap());
        }
        let word = match rng.gen_range(0..20) {
            0 => "noise".to_string(),
            1 => "ÉTUDE".to_string(),
            2 => "e\u{301}tude".to_string(),
            3 => WORDS.choose(rng).unwrap().to_uppercase(),
            _ => WORDS.choose(rng).unwrap().to_string(),
        };
        text.push_str(&word);
    }
    text
}

/// Paragraphs written against the battery fixture vocabulary.
pub const BATTERY_PARAGRAPHS: [&str; 10] = [
    "The current collector was coated with active material.",
    "Particle size distribution of the cathode active material was measured by laser diffraction.",
    "We report the morphology and particle size of NMC811 after calcination at 800 °C.",
    "A thinner aluminium current-collector lowers cell mass but not the specific capacity.",
    "Particle morphology, size distribution and electronic conductivity govern rate capability.",
    "Calcination time controls particle size; longer calcination coarsens the active material.",
    "No ontology terms appear in this sentence at all.",
    "SPECIFIC CAPACITY fell to 160 mAh/g when the Active Material particle size exceeded 10 µm.",
    "Electronic conductivity of the current collector interface, size distribution, morphology.",
    "active material active material current collector size",
];

/// Paragraphs written against the aerogel fixture vocabulary.
pub const AEROGEL_PARAGRAPHS: [&str; 10] = [
    "Aerogels are low-density, open-pored nanostructured materials with low thermal conductivity and high adsorption capacity.",
    "Solvent exchange preceded solvent freezing, after which sublimation removed the frozen solvent.",
    "Freeze drying (lyophilization) preserves the open pore network better than ambient drying.",
    "Density and thermal conductivity together determine thermal insulation.",
    "The solvent freezing step was run at −40 °C before freeze-drying.",
    "Open porosity and nanostructure emerge during drying.",
    "No ontology terms appear in this sentence at all.",
    "THERMAL CONDUCTIVITY of 0.015 W/m·K was measured; density was 0.1 g/cm³.",
    "adsorption capacity adsorption capacity density",
    "Sublimation, drying, solvent exchange, open pore, thermal insulation.",
];
