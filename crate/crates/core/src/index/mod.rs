//! Concept extraction from unstructured text.
//!
//! Labels are tokenized with the same [`normalize`] routine as documents and
//! stored in a token trie. Indexing walks the document's token stream left
//! to right, taking the longest label phrase that starts at each position,
//! and never reports overlapping spans. A phrase shared by several concepts
//! yields one hit per concept, all flagged ambiguous.

mod oracle;
mod result;

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{ConceptId, FacetTag, Ontology};
use crate::text::{label_tokens, normalize, NormalizationConfig};

pub use oracle::oracle_index;
pub use result::{synthesize_notation, ConceptHit, ConceptScore, DocumentIndexResult, FacetNotation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("label {label:?} of {concept} has no tokens after normalization")]
    EmptyLabelAfterNormalization { concept: ConceptId, label: String },
}

/// One `(concept, label)` pair as loaded into the automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelEntry {
    pub tokens: Vec<String>,
    pub concept: ConceptId,
    pub facet: FacetTag,
    pub is_pref_label: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Candidate {
    concept: ConceptId,
    facet: FacetTag,
}

#[derive(Clone, Debug, Default)]
struct TrieNode {
    next: HashMap<String, usize>,
    /// Concepts whose label ends here, sorted by id, no duplicates.
    candidates: Vec<Candidate>,
}

/// Immutable multi-phrase matcher built from an ontology's labels.
#[derive(Clone, Debug)]
pub struct MatchAutomaton {
    config: NormalizationConfig,
    nodes: Vec<TrieNode>,
    entries: Vec<LabelEntry>,
    max_phrase_len: usize,
}

impl MatchAutomaton {
    pub fn config(&self) -> NormalizationConfig {
        self.config
    }

    /// Number of `(concept, label)` pairs loaded.
    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[LabelEntry] {
        &self.entries
    }

    /// Token count of the longest label phrase.
    pub fn max_phrase_len(&self) -> usize {
        self.max_phrase_len
    }

    /// Concepts that `phrase` (already normalized tokens) resolves to.
    pub fn lookup<S: AsRef<str>>(&self, phrase: &[S]) -> Vec<&ConceptId> {
        let mut node = 0;
        for token in phrase {
            match self.nodes[node].next.get(token.as_ref()) {
                Some(&n) => node = n,
                None => return Vec::new(),
            }
        }
        self.nodes[node].candidates.iter().map(|c| &c.concept).collect()
    }

    /// Longest phrase starting at `tokens[0]`: its token length and node.
    fn longest_at(&self, tokens: &[crate::text::Token]) -> Option<(usize, usize)> {
        let mut node = 0;
        let mut best = None;
        for (i, token) in tokens.iter().take(self.max_phrase_len).enumerate() {
            match self.nodes[node].next.get(&token.text) {
                Some(&n) => node = n,
                None => break,
            }
            if !self.nodes[node].candidates.is_empty() {
                best = Some((i + 1, node));
            }
        }
        best
    }
}

/// Loads every prefLabel and altLabel of `ontology` into a matcher.
pub fn build_automaton(ontology: &Ontology, config: NormalizationConfig) -> Result<MatchAutomaton, IndexError> {
    let mut automaton = MatchAutomaton {
        config,
        nodes: vec![TrieNode::default()],
        entries: Vec::new(),
        max_phrase_len: 0,
    };
    for concept in ontology.concepts() {
        for (i, label) in concept.labels().enumerate() {
            let tokens = label_tokens(label, config);
            if tokens.is_empty() {
                return Err(IndexError::EmptyLabelAfterNormalization {
                    concept: concept.id.clone(),
                    label: label.to_string(),
                });
            }
            let mut node = 0;
            for token in &tokens {
                node = match automaton.nodes[node].next.get(token) {
                    Some(&n) => n,
                    None => {
                        automaton.nodes.push(TrieNode::default());
                        let n = automaton.nodes.len() - 1;
                        automaton.nodes[node].next.insert(token.clone(), n);
                        n
                    }
                };
            }
            let candidates = &mut automaton.nodes[node].candidates;
            if let Err(pos) = candidates.binary_search_by(|c| c.concept.cmp(&concept.id)) {
                candidates.insert(
                    pos,
                    Candidate {
                        concept: concept.id.clone(),
                        facet: concept.facet,
                    },
                );
            }
            automaton.max_phrase_len = automaton.max_phrase_len.max(tokens.len());
            automaton.entries.push(LabelEntry {
                tokens,
                concept: concept.id.clone(),
                facet: concept.facet,
                is_pref_label: i == 0,
            });
        }
    }
    Ok(automaton)
}

/// Greedy leftmost-longest, non-overlapping extraction of concept mentions.
pub fn index_document(automaton: &MatchAutomaton, text: &str) -> DocumentIndexResult {
    let tokens = normalize(text, automaton.config);
    let byte_at: Vec<usize> = text.char_indices().map(|(b, _)| b).chain([text.len()]).collect();

    let mut hits = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let Some((len, node)) = automaton.longest_at(&tokens[i..]) else {
            i += 1;
            continue;
        };
        let phrase = &tokens[i..i + len];
        let (start, end) = (phrase[0].start, phrase[len - 1].end);
        let surface = &text[byte_at[start]..byte_at[end]];
        let label = phrase.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ");
        let candidates = &automaton.nodes[node].candidates;
        for candidate in candidates {
            hits.push(ConceptHit {
                concept: candidate.concept.clone(),
                facet: candidate.facet,
                surface: surface.to_string(),
                label: label.clone(),
                start,
                end,
                ambiguous: candidates.len() > 1,
            });
        }
        i += len;
    }
    DocumentIndexResult::from_hits(hits)
}
