//! The faceted ontology model.
//!
//! Every concept lives in exactly one of the four PSPP facets and may have a
//! single is-a parent inside that facet. Cross-concept relationships are
//! typed edges whose relation types carry facet-level domain/range
//! constraints. An [`Ontology`] is checked for structural integrity once, at
//! build time, and is immutable afterwards.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{label_key, NormalizationConfig};

/// One of the four mutually exclusive PSPP facets.
///
/// The derived ordering (Processing, Structure, Property, Performance) is the
/// canonical facet order used for notation and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FacetTag {
    Processing,
    Structure,
    Property,
    Performance,
}

impl FacetTag {
    pub const ALL: [FacetTag; 4] = [
        FacetTag::Processing,
        FacetTag::Structure,
        FacetTag::Property,
        FacetTag::Performance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FacetTag::Processing => "Processing",
            FacetTag::Structure => "Structure",
            FacetTag::Property => "Property",
            FacetTag::Performance => "Performance",
        }
    }

    /// Segment prefix used in facet notation strings.
    pub fn notation_prefix(self) -> &'static str {
        match self {
            FacetTag::Processing => "P",
            FacetTag::Structure => "S",
            FacetTag::Property => "Pr",
            FacetTag::Performance => "Pe",
        }
    }
}

impl fmt::Display for FacetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FacetTag {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FacetTag::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| ModelError::UnknownFacet(s.to_string()))
    }
}

/// UpperCamelCase concept identifier: ASCII letters and digits, leading
/// uppercase letter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ConceptId(String);

impl ConceptId {
    pub fn new(id: impl Into<String>) -> Result<Self, ModelError> {
        let id = id.into();
        let mut chars = id.chars();
        let valid =
            matches!(chars.next(), Some(c) if c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_alphanumeric());
        if valid {
            Ok(ConceptId(id))
        } else {
            Err(ModelError::InvalidConceptId(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for ConceptId {
    type Error = ModelError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        ConceptId::new(value)
    }
}

impl From<ConceptId> for String {
    fn from(id: ConceptId) -> Self {
        id.0
    }
}

impl Borrow<str> for ConceptId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Concept {
    pub id: ConceptId,
    pub pref_label: String,
    pub alt_labels: Vec<String>,
    pub facet: FacetTag,
    /// is-a parent, always in the same facet.
    pub parent: Option<ConceptId>,
    pub definition: Option<String>,
}

impl Concept {
    pub fn new(id: ConceptId, pref_label: impl Into<String>, facet: FacetTag) -> Self {
        Self {
            id,
            pref_label: pref_label.into(),
            alt_labels: Vec::new(),
            facet,
            parent: None,
            definition: None,
        }
    }

    pub fn with_alt_label(mut self, label: impl Into<String>) -> Self {
        self.alt_labels.push(label.into());
        self
    }

    pub fn with_parent(mut self, parent: ConceptId) -> Self {
        self.parent = Some(parent);
        self
    }

    pub fn with_definition(mut self, definition: impl Into<String>) -> Self {
        self.definition = Some(definition.into());
        self
    }

    /// The preferred label followed by the alternative labels.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.pref_label.as_str()).chain(self.alt_labels.iter().map(String::as_str))
    }

    fn check_labels(&self) -> Result<(), ModelError> {
        if self.pref_label.trim().is_empty() {
            return Err(ModelError::EmptyPrefLabel(self.id.clone()));
        }
        let config = NormalizationConfig::default();
        let mut seen = BTreeSet::new();
        seen.insert(label_key(&self.pref_label, config));
        for alt in &self.alt_labels {
            if !seen.insert(label_key(alt, config)) {
                return Err(ModelError::DuplicateLabel {
                    concept: self.id.clone(),
                    label: alt.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Name reserved for the hierarchy; it cannot be declared as a relation.
pub const RESERVED_IS_A: &str = "isA";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationType {
    pub name: String,
    #[serde(rename = "domain")]
    pub domain_facet: FacetTag,
    #[serde(rename = "range")]
    pub range_facet: FacetTag,
    #[serde(rename = "acyclic")]
    pub acyclic_required: bool,
}

impl RelationType {
    pub fn new(name: impl Into<String>, domain: FacetTag, range: FacetTag, acyclic: bool) -> Self {
        Self {
            name: name.into(),
            domain_facet: domain,
            range_facet: range,
            acyclic_required: acyclic,
        }
    }
}

/// The typed relations an ontology may use, keyed by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationSchema {
    relations: BTreeMap<String, RelationType>,
}

impl RelationSchema {
    pub fn new(relations: impl IntoIterator<Item = RelationType>) -> Result<Self, ModelError> {
        let mut map = BTreeMap::new();
        for relation in relations {
            let name = relation.name.clone();
            if name == RESERVED_IS_A {
                return Err(ModelError::ReservedRelation(name));
            }
            let mut chars = name.chars();
            let camel =
                matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_alphanumeric());
            if !camel {
                return Err(ModelError::InvalidRelationName(name));
            }
            if map.insert(name.clone(), relation).is_some() {
                return Err(ModelError::DuplicateRelation(name));
            }
        }
        Ok(Self { relations: map })
    }

    pub fn get(&self, name: &str) -> Option<&RelationType> {
        self.relations.get(name)
    }

    /// Relations in name order.
    pub fn iter(&self) -> impl Iterator<Item = &RelationType> {
        self.relations.values()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationEdge {
    pub subject: ConceptId,
    pub relation: String,
    pub object: ConceptId,
}

impl RelationEdge {
    pub fn new(subject: ConceptId, relation: impl Into<String>, object: ConceptId) -> Self {
        Self {
            subject,
            relation: relation.into(),
            object,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid concept id {0:?}: expected ASCII letters/digits starting with an uppercase letter")]
    InvalidConceptId(String),
    #[error("unknown facet {0:?}")]
    UnknownFacet(String),
    #[error("concept {0} has an empty prefLabel")]
    EmptyPrefLabel(ConceptId),
    #[error("concept {concept} repeats label {label:?} after normalization")]
    DuplicateLabel { concept: ConceptId, label: String },
    #[error("duplicate concept id {0}")]
    DuplicateId(ConceptId),
    #[error("{context} refers to missing concept {missing}")]
    DanglingReference { context: String, missing: ConceptId },
    #[error("concept {child} ({child_facet}) has parent {parent} in a different facet ({parent_facet})")]
    CrossFacetParent {
        child: ConceptId,
        child_facet: FacetTag,
        parent: ConceptId,
        parent_facet: FacetTag,
    },
    #[error("parent cycle through {}", join_ids(.0))]
    ParentCycle(Vec<ConceptId>),
    #[error("edge {subject} -{relation}-> {object} uses a relation missing from the schema")]
    UnknownRelation {
        subject: ConceptId,
        relation: String,
        object: ConceptId,
    },
    #[error("edge {relation} from {concept} to itself")]
    SelfEdge { concept: ConceptId, relation: String },
    #[error("duplicate edge {subject} -{relation}-> {object}")]
    DuplicateEdge {
        subject: ConceptId,
        relation: String,
        object: ConceptId,
    },
    #[error("relation {0:?} is declared twice")]
    DuplicateRelation(String),
    #[error("relation name {0:?} is reserved for the hierarchy")]
    ReservedRelation(String),
    #[error("relation name {0:?} is not camelCase ASCII")]
    InvalidRelationName(String),
    #[error("unknown concept {0}")]
    UnknownConcept(String),
}

fn join_ids(ids: &[ConceptId]) -> String {
    ids.iter().map(ConceptId::as_str).collect::<Vec<_>>().join(" -> ")
}

/// Per-facet tally with a total; serialized as
/// `{"Processing": n, "Structure": n, "Property": n, "Performance": n, "total": n}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FacetTally {
    #[serde(rename = "Processing")]
    pub processing: usize,
    #[serde(rename = "Structure")]
    pub structure: usize,
    #[serde(rename = "Property")]
    pub property: usize,
    #[serde(rename = "Performance")]
    pub performance: usize,
    pub total: usize,
}

impl FacetTally {
    pub fn get(&self, facet: FacetTag) -> usize {
        match facet {
            FacetTag::Processing => self.processing,
            FacetTag::Structure => self.structure,
            FacetTag::Property => self.property,
            FacetTag::Performance => self.performance,
        }
    }

    fn add(&mut self, facet: FacetTag, n: usize) {
        let slot = match facet {
            FacetTag::Processing => &mut self.processing,
            FacetTag::Structure => &mut self.structure,
            FacetTag::Property => &mut self.property,
            FacetTag::Performance => &mut self.performance,
        };
        *slot += n;
        self.total += n;
    }
}

/// Concept and label counts per facet. Labels count the prefLabel plus every
/// altLabel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FacetCounts {
    pub concepts: FacetTally,
    pub labels: FacetTally,
}

/// Edges touching one concept, as returned by [`Ontology::relations_of`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConceptRelations {
    pub outgoing: Vec<RelationEdge>,
    pub incoming: Vec<RelationEdge>,
}

/// Accumulates concepts and edges, then checks them all at once in
/// [`OntologyBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct OntologyBuilder {
    name: String,
    version: String,
    concepts: Vec<Concept>,
    edges: Vec<RelationEdge>,
    schema: RelationSchema,
}

impl OntologyBuilder {
    pub fn new(name: impl Into<String>, version: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            version: version.into(),
            ..Default::default()
        }
    }

    pub fn schema(mut self, schema: RelationSchema) -> Self {
        self.schema = schema;
        self
    }

    pub fn concept(mut self, concept: Concept) -> Self {
        self.concepts.push(concept);
        self
    }

    pub fn edge(mut self, edge: RelationEdge) -> Self {
        self.edges.push(edge);
        self
    }

    pub fn add_concept(&mut self, concept: Concept) -> &mut Self {
        self.concepts.push(concept);
        self
    }

    pub fn add_edge(&mut self, edge: RelationEdge) -> &mut Self {
        self.edges.push(edge);
        self
    }

    pub fn build(self) -> Result<Ontology, ModelError> {
        build_ontology(self.name, self.version, self.concepts, self.edges, self.schema)
    }
}

/// Checks structural integrity and freezes the parts into an [`Ontology`].
///
/// Edges are stored in canonical `(subject, relation, object)` order, so the
/// result does not depend on input edge order. Semantic problems such as
/// domain/range mismatches are left to [`crate::validate`].
pub fn build_ontology(
    name: impl Into<String>,
    version: impl Into<String>,
    concepts: Vec<Concept>,
    mut edges: Vec<RelationEdge>,
    schema: RelationSchema,
) -> Result<Ontology, ModelError> {
    let mut map = BTreeMap::new();
    for concept in concepts {
        concept.check_labels()?;
        if map.contains_key(&concept.id) {
            return Err(ModelError::DuplicateId(concept.id));
        }
        map.insert(concept.id.clone(), concept);
    }

    for concept in map.values() {
        let Some(parent_id) = &concept.parent else {
            continue;
        };
        let parent = map.get(parent_id).ok_or_else(|| ModelError::DanglingReference {
            context: format!("parent of {}", concept.id),
            missing: parent_id.clone(),
        })?;
        if parent.facet != concept.facet {
            return Err(ModelError::CrossFacetParent {
                child: concept.id.clone(),
                child_facet: concept.facet,
                parent: parent_id.clone(),
                parent_facet: parent.facet,
            });
        }
    }
    check_parent_cycles(&map)?;

    for edge in &edges {
        for endpoint in [&edge.subject, &edge.object] {
            if !map.contains_key(endpoint) {
                return Err(ModelError::DanglingReference {
                    context: format!("edge {} -{}-> {}", edge.subject, edge.relation, edge.object),
                    missing: endpoint.clone(),
                });
            }
        }
        if schema.get(&edge.relation).is_none() {
            return Err(ModelError::UnknownRelation {
                subject: edge.subject.clone(),
                relation: edge.relation.clone(),
                object: edge.object.clone(),
            });
        }
        if edge.subject == edge.object {
            return Err(ModelError::SelfEdge {
                concept: edge.subject.clone(),
                relation: edge.relation.clone(),
            });
        }
    }
    edges.sort();
    if let Some(pair) = edges.windows(2).find(|w| w[0] == w[1]) {
        let e = pair[0].clone();
        return Err(ModelError::DuplicateEdge {
            subject: e.subject,
            relation: e.relation,
            object: e.object,
        });
    }

    Ok(Ontology::assemble(name.into(), version.into(), map, edges, schema))
}

fn check_parent_cycles(map: &BTreeMap<ConceptId, Concept>) -> Result<(), ModelError> {
    // Ids already proven to reach a root.
    let mut grounded: BTreeSet<&ConceptId> = BTreeSet::new();
    for start in map.keys() {
        let mut path: Vec<&ConceptId> = Vec::new();
        let mut on_path: BTreeSet<&ConceptId> = BTreeSet::new();
        let mut cursor = Some(start);
        while let Some(id) = cursor {
            if grounded.contains(id) {
                break;
            }
            if !on_path.insert(id) {
                let from = path.iter().position(|p| *p == id).unwrap_or(0);
                let cycle = path[from..].iter().map(|c| (*c).clone()).collect();
                return Err(ModelError::ParentCycle(cycle));
            }
            path.push(id);
            cursor = map.get(id).and_then(|c| c.parent.as_ref());
        }
        grounded.extend(path);
    }
    Ok(())
}

/// An immutable, structurally valid faceted ontology.
#[derive(Clone, Debug)]
pub struct Ontology {
    name: String,
    version: String,
    concepts: BTreeMap<ConceptId, Concept>,
    edges: Vec<RelationEdge>,
    schema: RelationSchema,
    children: HashMap<ConceptId, Vec<ConceptId>>,
    outgoing: HashMap<ConceptId, Vec<usize>>,
    incoming: HashMap<ConceptId, Vec<usize>>,
}

impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.version == other.version
            && self.concepts == other.concepts
            && self.edges == other.edges
            && self.schema == other.schema
    }
}

impl Eq for Ontology {}

impl Ontology {
    fn assemble(
        name: String,
        version: String,
        concepts: BTreeMap<ConceptId, Concept>,
        edges: Vec<RelationEdge>,
        schema: RelationSchema,
    ) -> Self {
        let mut children: HashMap<ConceptId, Vec<ConceptId>> = HashMap::new();
        for concept in concepts.values() {
            if let Some(parent) = &concept.parent {
                children.entry(parent.clone()).or_default().push(concept.id.clone());
            }
        }
        let mut outgoing: HashMap<ConceptId, Vec<usize>> = HashMap::new();
        let mut incoming: HashMap<ConceptId, Vec<usize>> = HashMap::new();
        for (i, edge) in edges.iter().enumerate() {
            outgoing.entry(edge.subject.clone()).or_default().push(i);
            incoming.entry(edge.object.clone()).or_default().push(i);
        }
        Self {
            name,
            version,
            concepts,
            edges,
            schema,
            children,
            outgoing,
            incoming,
        }
    }

    /// Skips every structural check. Used to exercise the validator's
    /// defense-in-depth rules against inputs `build_ontology` would reject.
    #[doc(hidden)]
    pub fn from_parts_unchecked(
        name: impl Into<String>,
        version: impl Into<String>,
        concepts: Vec<Concept>,
        edges: Vec<RelationEdge>,
        schema: RelationSchema,
    ) -> Self {
        let map = concepts.into_iter().map(|c| (c.id.clone(), c)).collect();
        Self::assemble(name.into(), version.into(), map, edges, schema)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn schema(&self) -> &RelationSchema {
        &self.schema
    }

    /// Concepts in id order.
    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    pub fn concept(&self, id: &str) -> Option<&Concept> {
        self.concepts.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.concepts.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// Edges in `(subject, relation, object)` order.
    pub fn edges(&self) -> &[RelationEdge] {
        &self.edges
    }

    /// Direct children of `id`, unordered.
    pub fn children(&self, id: &str) -> &[ConceptId] {
        self.children.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Parentless concepts of `facet`, in id order.
    pub fn roots(&self, facet: FacetTag) -> impl Iterator<Item = &Concept> {
        self.concepts
            .values()
            .filter(move |c| c.facet == facet && c.parent.is_none())
    }

    /// Splits the ontology back into the arguments of [`build_ontology`].
    pub fn into_parts(self) -> (String, String, Vec<Concept>, Vec<RelationEdge>, RelationSchema) {
        (
            self.name,
            self.version,
            self.concepts.into_values().collect(),
            self.edges,
            self.schema,
        )
    }

    pub fn stats(&self) -> FacetCounts {
        let mut counts = FacetCounts::default();
        for concept in self.concepts.values() {
            counts.concepts.add(concept.facet, 1);
            counts.labels.add(concept.facet, 1 + concept.alt_labels.len());
        }
        counts
    }

    /// Path from `id`'s parent up to its facet root, nearest first.
    pub fn ancestors(&self, id: &str) -> Result<Vec<ConceptId>, ModelError> {
        let concept = self
            .concepts
            .get(id)
            .ok_or_else(|| ModelError::UnknownConcept(id.to_string()))?;
        let mut out = Vec::new();
        let mut cursor = concept.parent.as_ref();
        while let Some(parent) = cursor {
            // Unchecked ontologies may contain cycles; stop rather than loop.
            if parent.as_str() == id || out.contains(parent) {
                break;
            }
            out.push(parent.clone());
            cursor = self.concepts.get(parent).and_then(|c| c.parent.as_ref());
        }
        Ok(out)
    }

    /// Outgoing and incoming edges of `id`, each sorted by relation name and
    /// then by the id at the other end.
    pub fn relations_of(&self, id: &str) -> Result<ConceptRelations, ModelError> {
        if !self.concepts.contains_key(id) {
            return Err(ModelError::UnknownConcept(id.to_string()));
        }
        let collect = |index: &HashMap<ConceptId, Vec<usize>>, other: fn(&RelationEdge) -> &ConceptId| {
            let mut edges: Vec<RelationEdge> = index
                .get(id)
                .into_iter()
                .flatten()
                .map(|&i| self.edges[i].clone())
                .collect();
            edges.sort_by(|a, b| (&a.relation, other(a)).cmp(&(&b.relation, other(b))));
            edges
        };
        Ok(ConceptRelations {
            outgoing: collect(&self.outgoing, |e| &e.object),
            incoming: collect(&self.incoming, |e| &e.subject),
        })
    }
}
