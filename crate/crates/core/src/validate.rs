//! Facet-rule validation.
//!
//! [`validate`] never fails: every problem found becomes a [`Violation`] in
//! the returned [`ValidationReport`]. Errors break the faceted model; warnings
//! flag things a curator should look at.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;
use serde::Serialize;

use crate::model::{ConceptId, FacetTag, Ontology, RelationSchema, RelationType};
use crate::text::{label_key, NormalizationConfig};

/// Maximum number of ancestors a concept may have.
pub const MAX_HIERARCHY_DEPTH: usize = 64;

/// The five PSPP relations with their facet domain and range.
pub fn default_pspp_schema() -> RelationSchema {
    use FacetTag::*;
    RelationSchema::new([
        RelationType::new("isSynthesizedBy", Structure, Processing, false),
        RelationType::new("isDependentOn", Property, Performance, false),
        RelationType::new("isDerivedFrom", Performance, Property, false),
        RelationType::new("isPrecededBy", Processing, Processing, true),
        RelationType::new("isAssociatedWith", Structure, Structure, false),
    ])
    .expect("default schema is well formed")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ViolationCode {
    #[serde(rename = "V1_FacetExclusivity")]
    FacetExclusivity,
    #[serde(rename = "V2_HierarchyError")]
    HierarchyError,
    #[serde(rename = "V3_DomainRangeMismatch")]
    DomainRangeMismatch,
    #[serde(rename = "V4_OrderCycle")]
    OrderCycle,
    #[serde(rename = "V5_LabelCollision")]
    LabelCollision,
    #[serde(rename = "V6_DanglingReference")]
    DanglingReference,
    #[serde(rename = "V7_Unreachable")]
    Unreachable,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::FacetExclusivity => "V1_FacetExclusivity",
            ViolationCode::HierarchyError => "V2_HierarchyError",
            ViolationCode::DomainRangeMismatch => "V3_DomainRangeMismatch",
            ViolationCode::OrderCycle => "V4_OrderCycle",
            ViolationCode::LabelCollision => "V5_LabelCollision",
            ViolationCode::DanglingReference => "V6_DanglingReference",
            ViolationCode::Unreachable => "V7_Unreachable",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            ViolationCode::LabelCollision | ViolationCode::Unreachable => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Severity {
    Error,
    Warning,
}

/// Structured context kept alongside the message, used by [`explain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationDetail {
    None,
    SharedPrefLabel {
        label: String,
        facets: Vec<FacetTag>,
    },
    DomainRange {
        relation: RelationType,
        subject_facet: FacetTag,
        object_facet: FacetTag,
    },
    Cycle {
        relation: String,
    },
    SharedLabel {
        label: String,
    },
    DepthExceeded {
        depth: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub severity: Severity,
    pub subjects: Vec<ConceptId>,
    pub message: String,
    #[serde(skip)]
    pub detail: ViolationDetail,
}

impl Violation {
    fn new(code: ViolationCode, subjects: Vec<ConceptId>, message: String, detail: ViolationDetail) -> Self {
        Self {
            code,
            severity: code.severity(),
            subjects,
            message,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    #[serde(rename = "ontology")]
    pub ontology_name: String,
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Warning)
    }

    pub fn count(&self, code: ViolationCode) -> usize {
        self.violations.iter().filter(|v| v.code == code).count()
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

/// Runs every check and collects all violations, sorted by code and then by
/// first subject.
pub fn validate(ontology: &Ontology) -> ValidationReport {
    let mut violations = Vec::new();
    check_labels(ontology, &mut violations);
    check_hierarchy(ontology, &mut violations);
    check_domain_range(ontology, &mut violations);
    check_order_cycles(ontology, &mut violations);
    check_dangling(ontology, &mut violations);
    check_reachability(ontology, &mut violations);

    violations.sort_by(|a, b| (a.code, a.subjects.first(), &a.message).cmp(&(b.code, b.subjects.first(), &b.message)));
    let pass = !violations.iter().any(|v| v.severity == Severity::Error);
    ValidationReport {
        ontology_name: ontology.name().to_string(),
        pass,
        violations,
    }
}

// V1 and V5.
fn check_labels(ontology: &Ontology, out: &mut Vec<Violation>) {
    let config = NormalizationConfig::default();
    let mut by_pref: BTreeMap<String, BTreeSet<&ConceptId>> = BTreeMap::new();
    let mut by_any: BTreeMap<String, BTreeSet<&ConceptId>> = BTreeMap::new();
    for concept in ontology.concepts() {
        by_pref
            .entry(label_key(&concept.pref_label, config))
            .or_default()
            .insert(&concept.id);
        for label in concept.labels() {
            by_any.entry(label_key(label, config)).or_default().insert(&concept.id);
        }
    }

    let facet_of = |id: &ConceptId| ontology.concept(id.as_str()).map(|c| c.facet);
    let mut exclusivity_groups = BTreeMap::new();
    for (key, ids) in &by_pref {
        let facets: BTreeSet<FacetTag> = ids.iter().filter_map(|id| facet_of(id)).collect();
        if key.is_empty() || facets.len() < 2 {
            continue;
        }
        let subjects: Vec<ConceptId> = ids.iter().map(|id| (*id).clone()).collect();
        out.push(Violation::new(
            ViolationCode::FacetExclusivity,
            subjects.clone(),
            format!(
                "prefLabel \"{key}\" is used by {} in different facets ({})",
                join(&subjects),
                facets.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(", ")
            ),
            ViolationDetail::SharedPrefLabel {
                label: key.clone(),
                facets: facets.into_iter().collect(),
            },
        ));
        exclusivity_groups.insert(key.clone(), ids.clone());
    }

    for (key, ids) in &by_any {
        if key.is_empty() || ids.len() < 2 || exclusivity_groups.get(key) == Some(ids) {
            continue;
        }
        let subjects: Vec<ConceptId> = ids.iter().map(|id| (*id).clone()).collect();
        out.push(Violation::new(
            ViolationCode::LabelCollision,
            subjects.clone(),
            format!("label \"{key}\" is shared by {}", join(&subjects)),
            ViolationDetail::SharedLabel { label: key.clone() },
        ));
    }
}

// V2: parents in another facet, parent cycles and over-deep chains. Only the
// first concept past the depth limit on each chain is reported.
fn check_hierarchy(ontology: &Ontology, out: &mut Vec<Violation>) {
    for concept in ontology.concepts() {
        let Some(parent_id) = &concept.parent else {
            continue;
        };
        if let Some(parent) = ontology.concept(parent_id.as_str()) {
            if parent.facet != concept.facet {
                out.push(Violation::new(
                    ViolationCode::HierarchyError,
                    vec![concept.id.clone(), parent.id.clone()],
                    format!(
                        "{} ({}) has parent {} in facet {}",
                        concept.id, concept.facet, parent.id, parent.facet
                    ),
                    ViolationDetail::None,
                ));
            }
        }

        let mut depth = 0;
        let mut seen = BTreeSet::new();
        let mut cursor = Some(parent_id);
        let mut cyclic = false;
        while let Some(id) = cursor {
            if id == &concept.id || !seen.insert(id) {
                cyclic = true;
                break;
            }
            depth += 1;
            if depth > MAX_HIERARCHY_DEPTH + 1 {
                break;
            }
            cursor = ontology.concept(id.as_str()).and_then(|c| c.parent.as_ref());
        }
        if cyclic {
            out.push(Violation::new(
                ViolationCode::HierarchyError,
                vec![concept.id.clone()],
                format!("parent chain of {} loops back on itself", concept.id),
                ViolationDetail::None,
            ));
        } else if depth == MAX_HIERARCHY_DEPTH + 1 {
            out.push(Violation::new(
                ViolationCode::HierarchyError,
                vec![concept.id.clone()],
                format!(
                    "{} sits {} levels deep, beyond the limit of {MAX_HIERARCHY_DEPTH}",
                    concept.id, depth
                ),
                ViolationDetail::DepthExceeded { depth },
            ));
        }
    }
}

// V3.
fn check_domain_range(ontology: &Ontology, out: &mut Vec<Violation>) {
    for edge in ontology.edges() {
        let (Some(relation), Some(subject), Some(object)) = (
            ontology.schema().get(&edge.relation),
            ontology.concept(edge.subject.as_str()),
            ontology.concept(edge.object.as_str()),
        ) else {
            continue;
        };
        if subject.facet == relation.domain_facet && object.facet == relation.range_facet {
            continue;
        }
        let mut problems = Vec::new();
        if subject.facet != relation.domain_facet {
            problems.push(format!(
                "domain must be {} but {} is {}",
                relation.domain_facet, subject.id, subject.facet
            ));
        }
        if object.facet != relation.range_facet {
            problems.push(format!(
                "range must be {} but {} is {}",
                relation.range_facet, object.id, object.facet
            ));
        }
        out.push(Violation::new(
            ViolationCode::DomainRangeMismatch,
            vec![edge.subject.clone(), edge.object.clone()],
            format!(
                "{} {} {}: {}",
                edge.subject,
                edge.relation,
                edge.object,
                problems.join("; ")
            ),
            ViolationDetail::DomainRange {
                relation: relation.clone(),
                subject_facet: subject.facet,
                object_facet: object.facet,
            },
        ));
    }
}

// V4: one violation per strongly connected component of an acyclic-required
// relation's subgraph.
fn check_order_cycles(ontology: &Ontology, out: &mut Vec<Violation>) {
    for relation in ontology.schema().iter().filter(|r| r.acyclic_required) {
        let mut graph: DiGraphMap<&str, ()> = DiGraphMap::new();
        for edge in ontology.edges().iter().filter(|e| e.relation == relation.name) {
            graph.add_edge(edge.subject.as_str(), edge.object.as_str(), ());
        }
        for component in tarjan_scc(&graph) {
            let looped =
                component.len() > 1 || (component.len() == 1 && graph.contains_edge(component[0], component[0]));
            if !looped {
                continue;
            }
            let mut subjects: Vec<ConceptId> = component.iter().filter_map(|id| ConceptId::new(*id).ok()).collect();
            subjects.sort();
            out.push(Violation::new(
                ViolationCode::OrderCycle,
                subjects.clone(),
                format!("{} forms a cycle through {}", relation.name, join(&subjects)),
                ViolationDetail::Cycle {
                    relation: relation.name.clone(),
                },
            ));
        }
    }
}

// V6. Unreachable for ontologies built through `build_ontology`.
fn check_dangling(ontology: &Ontology, out: &mut Vec<Violation>) {
    for concept in ontology.concepts() {
        if let Some(parent) = &concept.parent {
            if !ontology.contains(parent.as_str()) {
                out.push(Violation::new(
                    ViolationCode::DanglingReference,
                    vec![concept.id.clone(), parent.clone()],
                    format!("parent {} of {} does not exist", parent, concept.id),
                    ViolationDetail::None,
                ));
            }
        }
    }
    for edge in ontology.edges() {
        for endpoint in [&edge.subject, &edge.object] {
            if !ontology.contains(endpoint.as_str()) {
                out.push(Violation::new(
                    ViolationCode::DanglingReference,
                    vec![endpoint.clone()],
                    format!(
                        "edge {} {} {} refers to missing concept {}",
                        edge.subject, edge.relation, edge.object, endpoint
                    ),
                    ViolationDetail::None,
                ));
            }
        }
    }
}

// V7: concepts not reachable by walking children down from facet roots.
fn check_reachability(ontology: &Ontology, out: &mut Vec<Violation>) {
    let mut reached: BTreeSet<&ConceptId> = BTreeSet::new();
    let mut queue: VecDeque<&ConceptId> = FacetTag::ALL
        .into_iter()
        .flat_map(|f| ontology.roots(f))
        .map(|c| &c.id)
        .collect();
    while let Some(id) = queue.pop_front() {
        if reached.insert(id) {
            queue.extend(ontology.children(id.as_str()));
        }
    }
    for concept in ontology.concepts() {
        if !reached.contains(&concept.id) {
            out.push(Violation::new(
                ViolationCode::Unreachable,
                vec![concept.id.clone()],
                format!("{} cannot be reached from any facet root", concept.id),
                ViolationDetail::None,
            ));
        }
    }
}

fn join(ids: &[ConceptId]) -> String {
    ids.iter().map(ConceptId::as_str).collect::<Vec<_>>().join(", ")
}

/// A human-readable paragraph explaining `violation` and the rule it breaks.
pub fn explain(violation: &Violation) -> String {
    let rule = match (&violation.code, &violation.detail) {
        (ViolationCode::FacetExclusivity, _) => {
            "Facets are mutually exclusive categories: a term is sorted into exactly one of \
             Processing, Structure, Property or Performance. When the same preferred label names \
             concepts in different facets, the term has effectively been placed in several facets \
             at once. Merge the concepts, or give each a label that says which facet it belongs to."
                .to_string()
        }
        (ViolationCode::HierarchyError, ViolationDetail::DepthExceeded { depth }) => format!(
            "is-a hierarchies are kept within a facet and at most {MAX_HIERARCHY_DEPTH} levels \
             deep; this chain reaches {depth} levels. Flatten the branch."
        ),
        (ViolationCode::HierarchyError, _) => format!(
            "is-a hierarchies live inside one facet and must form a tree of at most \
             {MAX_HIERARCHY_DEPTH} levels. A parent in another facet, or a parent chain that \
             loops, breaks browsing of the facet tree."
        ),
        (
            ViolationCode::DomainRangeMismatch,
            ViolationDetail::DomainRange {
                relation,
                subject_facet,
                object_facet,
            },
        ) => format!(
            "The relation {} connects {} terms to {} terms{}. This edge runs from a {} term to a \
             {} term, so it either uses the wrong relation or points the wrong way.",
            relation.name,
            relation.domain_facet.as_str().to_lowercase(),
            relation.range_facet.as_str().to_lowercase(),
            relation_gloss(&relation.name),
            subject_facet.as_str().to_lowercase(),
            object_facet.as_str().to_lowercase(),
        ),
        (ViolationCode::DomainRangeMismatch, _) => {
            "Every relation constrains the facet of its subject (domain) and object (range). \
             This edge's endpoints sit in facets the relation does not allow."
                .to_string()
        }
        (ViolationCode::OrderCycle, ViolationDetail::Cycle { relation }) => format!(
            "{relation} orders steps in the sequence they occur in a standard synthesis or \
             procedure, so following it must never lead back to where it started. Remove one edge \
             of the cycle."
        ),
        (ViolationCode::OrderCycle, _) => {
            "This relation must be acyclic because it expresses an order of steps; the listed \
             concepts form a cycle."
                .to_string()
        }
        (ViolationCode::LabelCollision, _) => {
            "Several concepts share a label after normalization. Indexing will report every \
             candidate for such a phrase as an ambiguous hit. Keep it if the overlap is genuine, \
             otherwise rename or drop one of the labels."
                .to_string()
        }
        (ViolationCode::DanglingReference, _) => {
            "A parent or edge endpoint names a concept that is not in the ontology.".to_string()
        }
        (ViolationCode::Unreachable, _) => {
            "The concept cannot be reached by walking down from the roots of the facet trees, so \
             it will never appear when browsing."
                .to_string()
        }
    };
    format!(
        "{} ({:?}): {} {}",
        violation.code, violation.severity, violation.message, rule
    )
}

fn relation_gloss(name: &str) -> &'static str {
    match name {
        "isSynthesizedBy" => " (a structure and the process used to synthesize it)",
        "isDependentOn" => " (a property and the performance based on it)",
        "isDerivedFrom" => " (a performance metric and the property it is mathematically derived from)",
        "isPrecededBy" => " (process steps in the order they occur)",
        "isAssociatedWith" => " (structure terms and the part of the material they relate to)",
        _ => "",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_ontology, Concept, RelationEdge};

    fn id(s: &str) -> ConceptId {
        ConceptId::new(s).unwrap()
    }

    fn c(s: &str, label: &str, facet: FacetTag) -> Concept {
        Concept::new(id(s), label, facet)
    }

    #[test]
    fn default_schema_table() {
        use FacetTag::*;
        let schema = default_pspp_schema();
        assert_eq!(schema.len(), 5);
        let expect = [
            ("isSynthesizedBy", Structure, Processing, false),
            ("isDependentOn", Property, Performance, false),
            ("isDerivedFrom", Performance, Property, false),
            ("isPrecededBy", Processing, Processing, true),
            ("isAssociatedWith", Structure, Structure, false),
        ];
        for (name, domain, range, acyclic) in expect {
            let r = schema.get(name).unwrap();
            assert_eq!(
                (r.domain_facet, r.range_facet, r.acyclic_required),
                (domain, range, acyclic),
                "{name}"
            );
        }
        assert!(schema.get("isA").is_none());
    }

    #[test]
    fn wrong_domain_is_v3() {
        let o = build_ontology(
            "x",
            "1",
            vec![
                c("ThermalConductivity", "thermal conductivity", FacetTag::Property),
                c("SolGelProcess", "sol-gel process", FacetTag::Processing),
            ],
            vec![RelationEdge::new(
                id("ThermalConductivity"),
                "isSynthesizedBy",
                id("SolGelProcess"),
            )],
            default_pspp_schema(),
        )
        .unwrap();
        let report = validate(&o);
        assert!(!report.pass);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.code, ViolationCode::DomainRangeMismatch);
        assert!(v.message.contains("domain must be Structure"), "{}", v.message);
    }

    #[test]
    fn two_cycle_is_v4() {
        let o = build_ontology(
            "x",
            "1",
            vec![c("A", "a", FacetTag::Processing), c("B", "b", FacetTag::Processing)],
            vec![
                RelationEdge::new(id("A"), "isPrecededBy", id("B")),
                RelationEdge::new(id("B"), "isPrecededBy", id("A")),
            ],
            default_pspp_schema(),
        )
        .unwrap();
        let report = validate(&o);
        assert!(!report.pass);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].code, ViolationCode::OrderCycle);
        assert_eq!(report.violations[0].subjects, vec![id("A"), id("B")]);
    }

    #[test]
    fn cycles_in_non_acyclic_relations_are_fine() {
        let o = build_ontology(
            "x",
            "1",
            vec![c("A", "a", FacetTag::Structure), c("B", "b", FacetTag::Structure)],
            vec![
                RelationEdge::new(id("A"), "isAssociatedWith", id("B")),
                RelationEdge::new(id("B"), "isAssociatedWith", id("A")),
            ],
            default_pspp_schema(),
        )
        .unwrap();
        assert!(validate(&o).violations.is_empty());
    }

    #[test]
    fn cross_facet_pref_label_is_v1_only() {
        let o = build_ontology(
            "x",
            "1",
            vec![
                c("Porosity", "porosity", FacetTag::Property),
                c("PoreStructure", "Porosity", FacetTag::Structure),
            ],
            vec![],
            RelationSchema::default(),
        )
        .unwrap();
        let report = validate(&o);
        assert!(!report.pass);
        let codes: Vec<_> = report.violations.iter().map(|v| v.code).collect();
        assert_eq!(codes, [ViolationCode::FacetExclusivity]);
    }

    #[test]
    fn shared_alt_label_is_v5_warning() {
        let o = build_ontology(
            "x",
            "1",
            vec![
                c("ActiveMaterial", "Active Material", FacetTag::Structure).with_alt_label("am"),
                c("AreaMass", "Areal mass", FacetTag::Property).with_alt_label("AM"),
            ],
            vec![],
            RelationSchema::default(),
        )
        .unwrap();
        let report = validate(&o);
        assert!(report.pass);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!((v.code, v.severity), (ViolationCode::LabelCollision, Severity::Warning));
        assert_eq!(v.subjects, vec![id("ActiveMaterial"), id("AreaMass")]);
    }

    #[test]
    fn depth_limit_reports_once_per_chain() {
        let mut concepts = vec![c("N0", "n0", FacetTag::Processing)];
        for i in 1..=70 {
            concepts.push(
                c(&format!("N{i}"), &format!("n{i}"), FacetTag::Processing).with_parent(id(&format!("N{}", i - 1))),
            );
        }
        let o = build_ontology("x", "1", concepts, vec![], RelationSchema::default()).unwrap();
        let report = validate(&o);
        assert_eq!(report.count(ViolationCode::HierarchyError), 1);
        assert_eq!(report.violations[0].subjects, vec![id("N65")]);
        assert!(!report.pass);
    }

    #[test]
    fn defense_in_depth_codes() {
        // Only reachable through the unchecked constructor.
        let o = Ontology::from_parts_unchecked(
            "broken",
            "1",
            vec![
                c("A", "a", FacetTag::Processing).with_parent(id("Ghost")),
                c("B", "b", FacetTag::Structure).with_parent(id("C")),
                c("C", "c", FacetTag::Property),
                c("D", "d", FacetTag::Processing).with_parent(id("E")),
                c("E", "e", FacetTag::Processing).with_parent(id("D")),
            ],
            vec![RelationEdge::new(id("C"), "isDependentOn", id("Nowhere"))],
            default_pspp_schema(),
        );
        let report = validate(&o);
        assert!(report.count(ViolationCode::DanglingReference) >= 2);
        assert!(report.count(ViolationCode::HierarchyError) >= 3);
        assert!(report.count(ViolationCode::Unreachable) >= 3);
        for v in &report.violations {
            assert_eq!(v.severity, v.code.severity());
        }
    }

    #[test]
    fn report_is_sorted_and_pure() {
        let o = build_ontology(
            "x",
            "1",
            vec![
                c("A", "a", FacetTag::Processing),
                c("B", "b", FacetTag::Processing),
                c("C", "c", FacetTag::Property).with_alt_label("a"),
                c("D", "d", FacetTag::Structure),
            ],
            vec![
                RelationEdge::new(id("A"), "isPrecededBy", id("B")),
                RelationEdge::new(id("B"), "isPrecededBy", id("A")),
                RelationEdge::new(id("C"), "isSynthesizedBy", id("A")),
            ],
            default_pspp_schema(),
        )
        .unwrap();
        let r1 = validate(&o);
        let r2 = validate(&o);
        assert_eq!(r1.to_json(), r2.to_json());
        let codes: Vec<_> = r1.violations.iter().map(|v| v.code).collect();
        let mut sorted = codes.clone();
        sorted.sort();
        assert_eq!(codes, sorted);
        assert_eq!(
            codes,
            [
                ViolationCode::DomainRangeMismatch,
                ViolationCode::OrderCycle,
                ViolationCode::LabelCollision
            ]
        );
    }

    #[test]
    fn report_json_shape() {
        let o = build_ontology(
            "Tiny",
            "1",
            vec![c("A", "a", FacetTag::Processing), c("B", "a", FacetTag::Property)],
            vec![],
            RelationSchema::default(),
        )
        .unwrap();
        let json: serde_json::Value = serde_json::from_str(&validate(&o).to_json()).unwrap();
        assert_eq!(json["ontology"], "Tiny");
        assert_eq!(json["pass"], false);
        let v = &json["violations"][0];
        assert_eq!(v["code"], "V1_FacetExclusivity");
        assert_eq!(v["severity"], "Error");
        assert_eq!(v["subjects"], serde_json::json!(["A", "B"]));
        assert!(v["message"].is_string());
        assert!(v.get("detail").is_none());
    }

    #[test]
    fn explanations() {
        let schema = default_pspp_schema();
        let derived = Violation::new(
            ViolationCode::DomainRangeMismatch,
            vec![id("A"), id("B")],
            "A isDerivedFrom B".into(),
            ViolationDetail::DomainRange {
                relation: schema.get("isDerivedFrom").unwrap().clone(),
                subject_facet: FacetTag::Property,
                object_facet: FacetTag::Property,
            },
        );
        let text = explain(&derived);
        assert!(text.contains("performance") && text.contains("property"), "{text}");
        assert!(text.contains("derived"));

        let v1 = Violation::new(
            ViolationCode::FacetExclusivity,
            vec![id("A")],
            "m".into(),
            ViolationDetail::None,
        );
        assert!(explain(&v1).contains("mutually exclusive"));

        let v4 = Violation::new(
            ViolationCode::OrderCycle,
            vec![id("A"), id("B")],
            "m".into(),
            ViolationDetail::Cycle {
                relation: "isPrecededBy".into(),
            },
        );
        assert!(explain(&v4).contains("order"));

        for code in [
            ViolationCode::HierarchyError,
            ViolationCode::LabelCollision,
            ViolationCode::DanglingReference,
            ViolationCode::Unreachable,
        ] {
            let v = Violation::new(code, vec![], String::new(), ViolationDetail::None);
            assert!(!explain(&v).trim().is_empty());
        }
    }
}
