//! Tokenization and label normalization shared by the model, the validator
//! and the indexer.
//!
//! Offsets are counted in Unicode scalar values (`char`s) of the original,
//! un-normalized text, so a span can always be cut back out of the input.

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Knobs applied identically to ontology labels and to indexed documents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalizationConfig {
    pub fold_case: bool,
    /// Naive plural folding: strip one trailing `s` from tokens of at least
    /// four characters.
    pub fold_plurals: bool,
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        Self {
            fold_case: true,
            fold_plurals: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    pub text: String,
    /// Inclusive start, in chars of the original text.
    pub start: usize,
    /// Exclusive end, in chars of the original text.
    pub end: usize,
}

fn is_word_char(c: char, in_word: bool) -> bool {
    c.is_alphanumeric() || (in_word && is_combining_mark(c))
}

/// Splits `text` on maximal runs of non-alphanumeric characters and
/// normalizes each token (NFC, then case and plural folding).
///
/// Combining marks that directly follow a word character stay in that word,
/// so decomposed input such as `e\u{301}` tokenizes like its composed form.
pub fn normalize(text: &str, config: NormalizationConfig) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut start = 0;

    for (pos, c) in text.chars().enumerate() {
        if is_word_char(c, !current.is_empty()) {
            if current.is_empty() {
                start = pos;
            }
            current.push(c);
        } else if !current.is_empty() {
            tokens.push(finish_token(&current, start, pos, config));
            current.clear();
        }
    }
    if !current.is_empty() {
        let end = text.chars().count();
        tokens.push(finish_token(&current, start, end, config));
    }
    tokens
}

fn finish_token(raw: &str, start: usize, end: usize, config: NormalizationConfig) -> Token {
    let composed: String = raw.nfc().collect();
    let mut text = if config.fold_case {
        composed.to_lowercase()
    } else {
        composed
    };
    if config.fold_plurals && text.chars().count() >= 4 && text.ends_with('s') {
        text.pop();
    }
    Token { text, start, end }
}

/// The token texts of `label`, as matched by the indexer.
pub fn label_tokens(label: &str, config: NormalizationConfig) -> Vec<String> {
    normalize(label, config).into_iter().map(|t| t.text).collect()
}

/// Canonical comparison key for a label: its normalized tokens joined by a
/// single space. Punctuation-only labels yield the empty string.
pub fn label_key(label: &str, config: NormalizationConfig) -> String {
    label_tokens(label, config).join(" ")
}

/// Extracts the `[start, end)` char range of `text`.
pub fn char_slice(text: &str, start: usize, end: usize) -> String {
    text.chars().skip(start).take(end - start).collect()
}
