use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{canonical_relation_name, decode_utf8, ParseError, ParseOutcome, ParseWarning, SourceLocation};
use crate::model::{
    build_ontology, Concept, ConceptId, FacetTag, ModelError, Ontology, RelationEdge, RelationSchema, RelationType,
};
use crate::text::{label_key, NormalizationConfig};

#[derive(Serialize, Deserialize)]
struct DocJson {
    name: String,
    version: String,
    #[serde(default)]
    schema: Vec<RelationType>,
    concepts: Vec<ConceptJson>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ConceptJson {
    id: String,
    pref_label: String,
    #[serde(default)]
    alt_labels: Vec<String>,
    facet: FacetTag,
    #[serde(default)]
    parent: Option<String>,
    #[serde(default)]
    definition: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    subject: String,
    relation: String,
    object: String,
}

const TOP_KEYS: &[&str] = &["name", "version", "schema", "concepts", "edges"];
const RELATION_KEYS: &[&str] = &["name", "domain", "range", "acyclic"];
const CONCEPT_KEYS: &[&str] = &["id", "prefLabel", "altLabels", "facet", "parent", "definition"];
const EDGE_KEYS: &[&str] = &["subject", "relation", "object"];

/// Parses a canonical JSON ontology document.
pub fn parse_canonical_json(bytes: &[u8]) -> Result<ParseOutcome, ParseError> {
    let text = decode_utf8(bytes)?;
    let value: Value = serde_json::from_str(text).map_err(|e| serde_error(text, e))?;
    let doc: DocJson = serde_json::from_str(text).map_err(|e| serde_error(text, e))?;

    let mut warnings = Vec::new();
    unknown_keys(text, &value, &mut warnings);

    let mut relations = Vec::with_capacity(doc.schema.len());
    for mut relation in doc.schema {
        let (canonical, aliased) = canonical_relation_name(&relation.name);
        if aliased {
            warnings.push(ParseWarning::new(
                locate(text, &relation.name),
                "RelationAlias",
                format!("relation {:?} read as {canonical:?}", relation.name),
            ));
            relation.name = canonical.to_string();
        }
        relations.push(relation);
    }
    let schema = RelationSchema::new(relations).map_err(|e| build_error(text, e))?;

    let mut concepts = Vec::with_capacity(doc.concepts.len());
    for raw in doc.concepts {
        let id = concept_id(text, raw.id)?;
        let parent = raw.parent.map(|p| concept_id(text, p)).transpose()?;
        let alt_labels = dedupe_alt_labels(&id, &raw.pref_label, raw.alt_labels, &mut warnings, |label| {
            locate(text, label)
        });
        concepts.push(Concept {
            id,
            pref_label: raw.pref_label,
            alt_labels,
            facet: raw.facet,
            parent,
            definition: raw.definition,
        });
    }

    let mut edges = Vec::with_capacity(doc.edges.len());
    for raw in doc.edges {
        let (canonical, aliased) = canonical_relation_name(&raw.relation);
        if aliased {
            warnings.push(ParseWarning::new(
                locate(text, &raw.relation),
                "RelationAlias",
                format!("relation {:?} read as {canonical:?}", raw.relation),
            ));
        }
        edges.push(RelationEdge::new(
            concept_id(text, raw.subject)?,
            canonical,
            concept_id(text, raw.object)?,
        ));
    }

    let ontology = build_ontology(doc.name, doc.version, concepts, edges, schema).map_err(|e| build_error(text, e))?;
    Ok(ParseOutcome { ontology, warnings })
}

/// Serializes to the canonical JSON form: concepts by id, edges by
/// `(subject, relation, object)`, relations by name, two-space indentation
/// and a trailing newline.
pub fn serialize_canonical_json(ontology: &Ontology) -> Vec<u8> {
    let doc = DocJson {
        name: ontology.name().to_string(),
        version: ontology.version().to_string(),
        schema: ontology.schema().iter().cloned().collect(),
        concepts: ontology
            .concepts()
            .map(|c| ConceptJson {
                id: c.id.to_string(),
                pref_label: c.pref_label.clone(),
                alt_labels: c.alt_labels.clone(),
                facet: c.facet,
                parent: c.parent.as_ref().map(ToString::to_string),
                definition: c.definition.clone(),
            })
            .collect(),
        edges: ontology
            .edges()
            .iter()
            .map(|e| EdgeJson {
                subject: e.subject.to_string(),
                relation: e.relation.clone(),
                object: e.object.to_string(),
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("ontology serializes");
    out.push(b'\n');
    out
}

/// Drops altLabels that repeat the prefLabel or an earlier altLabel after
/// normalization, recording a warning for each.
pub(super) fn dedupe_alt_labels(
    id: &ConceptId,
    pref_label: &str,
    alt_labels: Vec<String>,
    warnings: &mut Vec<ParseWarning>,
    locate: impl Fn(&str) -> SourceLocation,
) -> Vec<String> {
    let config = NormalizationConfig::default();
    let mut seen = BTreeSet::from([label_key(pref_label, config)]);
    let mut kept = Vec::with_capacity(alt_labels.len());
    for label in alt_labels {
        if seen.insert(label_key(&label, config)) {
            kept.push(label);
        } else {
            warnings.push(ParseWarning::new(
                locate(&label),
                "DuplicateLabel",
                format!("dropped repeated label {label:?} on {id}"),
            ));
        }
    }
    kept
}

fn concept_id(text: &str, raw: String) -> Result<ConceptId, ParseError> {
    ConceptId::new(raw).map_err(|e| build_error(text, e))
}

fn serde_error(text: &str, err: serde_json::Error) -> ParseError {
    use serde_json::error::Category;

    let location = char_location(text, err.line(), err.column());
    let message = strip_position(&err.to_string());
    match err.classify() {
        Category::Syntax | Category::Eof | Category::Io => ParseError::Syntax { location, message },
        Category::Data => ParseError::Schema {
            location: Some(location),
            message,
        },
    }
}

// serde_json appends " at line X column Y"; the location is carried separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

// serde_json reports byte columns; convert to chars so non-ASCII lines do not
// overshoot.
fn char_location(text: &str, line: usize, byte_column: usize) -> SourceLocation {
    let Some(line_text) = text.split('\n').nth(line.saturating_sub(1)) else {
        return SourceLocation::new(line, byte_column);
    };
    let mut cut = byte_column.saturating_sub(1).min(line_text.len());
    while !line_text.is_char_boundary(cut) {
        cut -= 1;
    }
    SourceLocation::new(line, line_text[..cut].chars().count() + 1)
}

/// First location of the quoted string `needle` in `text`, or 1:1.
fn locate(text: &str, needle: &str) -> SourceLocation {
    let quoted = serde_json::to_string(needle).unwrap_or_default();
    text.find(&quoted).map_or(SourceLocation::new(1, 1), |offset| {
        SourceLocation::at_offset(text, offset)
    })
}

fn build_error(text: &str, source: ModelError) -> ParseError {
    let location = error_anchor(&source).map(|id| locate(text, &id));
    ParseError::Build { source, location }
}

/// The identifier a model error is best reported at.
pub(super) fn error_anchor(err: &ModelError) -> Option<String> {
    let id = match err {
        ModelError::InvalidConceptId(id) | ModelError::UnknownFacet(id) | ModelError::UnknownConcept(id) => {
            return Some(id.clone())
        }
        ModelError::DuplicateRelation(name)
        | ModelError::ReservedRelation(name)
        | ModelError::InvalidRelationName(name) => return Some(name.clone()),
        ModelError::EmptyPrefLabel(id) | ModelError::DuplicateId(id) => id,
        ModelError::DuplicateLabel { concept, .. } => concept,
        ModelError::DanglingReference { missing, .. } => missing,
        ModelError::CrossFacetParent { child, .. } => child,
        ModelError::ParentCycle(ids) => ids.first()?,
        ModelError::UnknownRelation { subject, .. } | ModelError::DuplicateEdge { subject, .. } => subject,
        ModelError::SelfEdge { concept, .. } => concept,
    };
    Some(id.to_string())
}

fn unknown_keys(text: &str, value: &Value, warnings: &mut Vec<ParseWarning>) {
    let mut check = |object: &Value, known: &[&str], context: &str| {
        let Some(map) = object.as_object() else {
            return;
        };
        for key in map.keys().filter(|k| !known.contains(&k.as_str())) {
            warnings.push(ParseWarning::new(
                locate(text, key),
                "UnknownKey",
                format!("ignored unknown key {key:?} in {context}"),
            ));
        }
    };
    check(value, TOP_KEYS, "document");
    let items = |key: &str| value.get(key).and_then(Value::as_array).cloned().unwrap_or_default();
    for relation in items("schema") {
        check(&relation, RELATION_KEYS, "relation");
    }
    for concept in items("concepts") {
        check(&concept, CONCEPT_KEYS, "concept");
    }
    for edge in items("edges") {
        check(&edge, EDGE_KEYS, "edge");
    }
}
