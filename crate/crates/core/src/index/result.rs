use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::model::{ConceptId, FacetTag};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConceptHit {
    pub concept: ConceptId,
    pub facet: FacetTag,
    /// The matched slice of the original document.
    pub surface: String,
    /// The normalized label phrase, tokens joined by single spaces.
    pub label: String,
    pub start: usize,
    pub end: usize,
    pub ambiguous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConceptScore {
    pub concept: ConceptId,
    #[serde(skip)]
    pub facet: FacetTag,
    pub count: usize,
    /// Sum over the concept's hits of the matched label's token count.
    pub score: usize,
}

/// Compound facet notation such as `P:SolventFreezing;Pr:ThermalConductivity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FacetNotation(String);

impl FacetNotation {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FacetNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DocumentIndexResult {
    /// Hits in document order; ambiguous hits on one span are ordered by id.
    pub hits: Vec<ConceptHit>,
    /// Sorted by score descending, then id ascending.
    pub per_concept: Vec<ConceptScore>,
    /// The `per_concept` entries of each facet that has hits, in the same
    /// order.
    pub per_facet: BTreeMap<FacetTag, Vec<ConceptScore>>,
    pub notation: FacetNotation,
}

impl DocumentIndexResult {
    /// Aggregates hits into per-concept and per-facet scores and the notation.
    pub fn from_hits(hits: Vec<ConceptHit>) -> Self {
        let mut scores: HashMap<&ConceptId, ConceptScore> = HashMap::new();
        for hit in &hits {
            let entry = scores.entry(&hit.concept).or_insert_with(|| ConceptScore {
                concept: hit.concept.clone(),
                facet: hit.facet,
                count: 0,
                score: 0,
            });
            entry.count += 1;
            entry.score += hit.label.split(' ').count();
        }
        let mut per_concept: Vec<ConceptScore> = scores.into_values().collect();
        per_concept.sort_by(|a, b| b.score.cmp(&a.score).then_with(|| a.concept.cmp(&b.concept)));

        let mut per_facet: BTreeMap<FacetTag, Vec<ConceptScore>> = BTreeMap::new();
        for score in &per_concept {
            per_facet.entry(score.facet).or_default().push(score.clone());
        }
        let mut result = Self {
            hits,
            per_concept,
            per_facet,
            notation: FacetNotation::default(),
        };
        result.notation = synthesize_notation(&result);
        result
    }

    /// Pretty JSON with a trailing newline; identical for identical results.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("index result serializes");
        out.push('\n');
        out
    }
}

/// One `prefix:id` segment per facet with hits, taking the facet's top
/// concept, in Processing, Structure, Property, Performance order.
pub fn synthesize_notation(result: &DocumentIndexResult) -> FacetNotation {
    let segments: Vec<String> = FacetTag::ALL
        .into_iter()
        .filter_map(|facet| {
            let top = result.per_facet.get(&facet)?.first()?;
            Some(format!("{}:{}", facet.notation_prefix(), top.concept))
        })
        .collect();
    FacetNotation(segments.join(";"))
}
