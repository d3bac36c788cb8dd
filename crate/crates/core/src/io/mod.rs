//! Reading and writing ontologies.
//!
//! Two formats are supported: a canonical JSON document (the system of
//! record) and a SKOS-flavoured Turtle subset. Both serializers are
//! deterministic and both parsers round-trip their serializer's output.

mod json;
mod turtle;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{ModelError, Ontology};

pub use json::{parse_canonical_json, serialize_canonical_json};
pub use turtle::{parse_skos_turtle, serialize_skos_turtle, MAT_NS, SKOS_NS};

/// 1-based line and column (columns count chars).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
}

impl SourceLocation {
    pub fn new(line: usize, column: usize) -> Self {
        Self {
            line: line.max(1),
            column: column.max(1),
        }
    }

    /// Location of the char at byte `offset` in `source`.
    pub fn at_offset(source: &str, offset: usize) -> Self {
        let mut line = 1;
        let mut column = 1;
        for (i, c) in source.char_indices() {
            if i >= offset {
                break;
            }
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Self { line, column }
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseWarning {
    pub line: usize,
    pub column: usize,
    pub code: &'static str,
    pub message: String,
}

impl ParseWarning {
    pub(crate) fn new(location: SourceLocation, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            line: location.line,
            column: location.column,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: warning[{}]: {}",
            self.line, self.column, self.code, self.message
        )
    }
}

/// A successfully parsed ontology plus non-fatal diagnostics.
#[derive(Clone, Debug)]
pub struct ParseOutcome {
    pub ontology: Ontology,
    pub warnings: Vec<ParseWarning>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{location}: syntax error: {message}")]
    Syntax { location: SourceLocation, message: String },
    #[error("{}schema error: {message}", fmt_location(.location))]
    Schema {
        location: Option<SourceLocation>,
        message: String,
    },
    #[error("{location}: concept {concept} has labels but no mat:facet")]
    MissingFacet { concept: String, location: SourceLocation },
    #[error("{location}: unknown facet value {value:?}")]
    UnknownFacetValue { value: String, location: SourceLocation },
    #[error("{}{source}", fmt_location(.location))]
    Build {
        source: ModelError,
        location: Option<SourceLocation>,
    },
}

fn fmt_location(location: &Option<SourceLocation>) -> String {
    location.map(|l| format!("{l}: ")).unwrap_or_default()
}

impl ParseError {
    pub fn location(&self) -> Option<SourceLocation> {
        match self {
            ParseError::Syntax { location, .. }
            | ParseError::MissingFacet { location, .. }
            | ParseError::UnknownFacetValue { location, .. } => Some(*location),
            ParseError::Schema { location, .. } | ParseError::Build { location, .. } => *location,
        }
    }
}

/// The on-disk format of an ontology document.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Turtle,
}

impl Format {
    /// Guesses the format from content: JSON documents open with `{`.
    pub fn sniff(text: &str) -> Format {
        match text.trim_start_matches('\u{feff}').trim_start().chars().next() {
            Some('{') => Format::Json,
            _ => Format::Turtle,
        }
    }
}

/// Parses `bytes` in whichever format it appears to be in.
pub fn parse_any(bytes: &[u8]) -> Result<ParseOutcome, ParseError> {
    let text = decode_utf8(bytes)?;
    match Format::sniff(text) {
        Format::Json => parse_canonical_json(bytes),
        Format::Turtle => parse_skos_turtle(text),
    }
}

pub(crate) fn decode_utf8(bytes: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
        ParseError::Syntax {
            location: SourceLocation::at_offset(valid, valid.len()),
            message: "input is not valid UTF-8".into(),
        }
    })
}

/// Spelling variants of relation names that are accepted and rewritten to
/// their canonical form.
const RELATION_ALIASES: &[(&str, &str)] = &[("isPreceededBy", "isPrecededBy"), ("isPreceededby", "isPrecededBy")];

/// Returns the canonical spelling of a relation name and whether it was an
/// alias.
pub fn canonical_relation_name(name: &str) -> (&str, bool) {
    RELATION_ALIASES
        .iter()
        .find(|(alias, _)| *alias == name)
        .map_or((name, false), |(_, canonical)| (*canonical, true))
}
