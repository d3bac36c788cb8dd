//! Faceted materials-science ontologies built on the PSPP paradigm
//! (Processing, Structure, Property, Performance).
//!
//! The crate covers the whole life of such an ontology:
//!
//! - [`model`]: concepts sorted into exactly one facet, is-a trees inside a
//!   facet, and typed relations with facet domain/range constraints.
//! - [`io`]: canonical JSON and a SKOS Turtle subset, both round-tripping.
//! - [`validate`]: facet exclusivity, domain/range, ordering cycles and label
//!   collisions, reported as data.
//! - [`index`]: longest-match concept extraction from plain text, grouped by
//!   facet, with a synthesized facet notation.
//! - [`service`] and [`cli`]: the HTTP vocabulary server (search, browse,
//!   index) and the `facetforge` command line.
//!
//! ```
//! use facetforge::prelude::*;
//!
//! let ontology = OntologyBuilder::new("battery", "0.1.0")
//!     .schema(default_pspp_schema())
//!     .concept(Concept::new(ConceptId::new("ActiveMaterial")?, "active material", FacetTag::Structure))
//!     .concept(Concept::new(ConceptId::new("ParticleSize")?, "particle size", FacetTag::Structure))
//!     .edge(RelationEdge::new(
//!         ConceptId::new("ParticleSize")?,
//!         "isAssociatedWith",
//!         ConceptId::new("ActiveMaterial")?,
//!     ))
//!     .build()?;
//! assert!(validate(&ontology).pass);
//!
//! let automaton = build_automaton(&ontology, NormalizationConfig::default())?;
//! let result = index_document(&automaton, "The particle size of the active material matters.");
//! assert_eq!(result.notation.as_str(), "S:ActiveMaterial");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod index;
pub mod io;
pub mod model;
pub mod service;
pub mod text;
pub mod validate;

pub mod prelude {
    pub use crate::index::{build_automaton, index_document, oracle_index, DocumentIndexResult, MatchAutomaton};
    pub use crate::io::{
        parse_any, parse_canonical_json, parse_skos_turtle, serialize_canonical_json, serialize_skos_turtle,
        ParseOutcome,
    };
    pub use crate::model::{
        build_ontology, Concept, ConceptId, FacetCounts, FacetTag, Ontology, OntologyBuilder, RelationEdge,
        RelationSchema, RelationType,
    };
    pub use crate::text::NormalizationConfig;
    pub use crate::validate::{default_pspp_schema, explain, validate, ValidationReport, ViolationCode};
}
