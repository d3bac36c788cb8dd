//! Brute-force reference for [`super::index_document`].
//!
//! No trie, no shared aggregation: every label of every concept is compared
//! token by token at every position, and scores are tallied with plain
//! scans. Quadratic, so only meant for small inputs in tests.

use std::collections::{BTreeMap, BTreeSet};

use super::result::{synthesize_notation, ConceptHit, ConceptScore, DocumentIndexResult, FacetNotation};
use crate::model::{ConceptId, FacetTag, Ontology};
use crate::text::{label_tokens, normalize, NormalizationConfig};

pub fn oracle_index(ontology: &Ontology, config: NormalizationConfig, text: &str) -> DocumentIndexResult {
    let tokens = normalize(text, config);
    let chars: Vec<char> = text.chars().collect();
    let labels: Vec<(ConceptId, FacetTag, Vec<String>)> = ontology
        .concepts()
        .flat_map(|c| {
            c.labels()
                .map(move |l| (c.id.clone(), c.facet, label_tokens(l, config)))
        })
        .filter(|(_, _, t)| !t.is_empty())
        .collect();

    let mut hits = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut best_len = 0;
        let mut winners: BTreeSet<(ConceptId, FacetTag)> = BTreeSet::new();
        for (id, facet, phrase) in &labels {
            let len = phrase.len();
            if i + len > tokens.len() {
                continue;
            }
            let matches = (0..len).all(|k| tokens[i + k].text == phrase[k]);
            if !matches || len < best_len {
                continue;
            }
            if len > best_len {
                best_len = len;
                winners.clear();
            }
            winners.insert((id.clone(), *facet));
        }
        if best_len == 0 {
            i += 1;
            continue;
        }
        let start = tokens[i].start;
        let end = tokens[i + best_len - 1].end;
        let label: Vec<&str> = tokens[i..i + best_len].iter().map(|t| t.text.as_str()).collect();
        for (id, facet) in &winners {
            hits.push(ConceptHit {
                concept: id.clone(),
                facet: *facet,
                surface: chars[start..end].iter().collect(),
                label: label.join(" "),
                start,
                end,
                ambiguous: winners.len() > 1,
            });
        }
        i += best_len;
    }

    let mut seen: Vec<ConceptId> = Vec::new();
    for hit in &hits {
        if !seen.contains(&hit.concept) {
            seen.push(hit.concept.clone());
        }
    }
    let mut per_concept: Vec<ConceptScore> = seen
        .into_iter()
        .map(|id| {
            let mine: Vec<&ConceptHit> = hits.iter().filter(|h| h.concept == id).collect();
            ConceptScore {
                facet: mine[0].facet,
                count: mine.len(),
                score: mine.iter().map(|h| h.label.split(' ').count()).sum(),
                concept: id,
            }
        })
        .collect();
    // (score desc, id asc) via a key on negated score
    per_concept.sort_by_key(|s| (usize::MAX - s.score, s.concept.clone()));

    let mut per_facet = BTreeMap::new();
    for facet in FacetTag::ALL {
        let group: Vec<ConceptScore> = per_concept.iter().filter(|s| s.facet == facet).cloned().collect();
        if !group.is_empty() {
            per_facet.insert(facet, group);
        }
    }
    let mut result = DocumentIndexResult {
        hits,
        per_concept,
        per_facet,
        notation: FacetNotation::default(),
    };
    result.notation = synthesize_notation(&result);
    result
}
