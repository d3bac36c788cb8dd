//! A SKOS-flavoured Turtle subset.
//!
//! The lexer and parser accept ordinary Turtle statement syntax (prefix and
//! base directives, predicate/object lists, blank-node property lists,
//! collections, typed and language-tagged literals) and produce plain
//! triples. Interpretation then keeps only the vocabulary this crate
//! understands and warns about the rest:
//!
//! ```text
//! ex: a mat:Ontology ;
//!     mat:name "Battery Cathode Excerpt" ;
//!     mat:version "0.1.0" ;
//!     mat:relation [ mat:name "isAssociatedWith" ; mat:domainFacet mat:Structure ;
//!                    mat:rangeFacet mat:Structure ; mat:acyclic "false" ] .
//!
//! ex:ParticleSize a skos:Concept ;
//!     mat:facet mat:Structure ;
//!     skos:prefLabel "Particle Size" ;
//!     mat:isAssociatedWith ex:ActiveMaterial .
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use super::json::{dedupe_alt_labels, error_anchor};
use super::{canonical_relation_name, ParseError, ParseOutcome, ParseWarning, SourceLocation};
use crate::model::{
    build_ontology, Concept, ConceptId, FacetTag, ModelError, Ontology, RelationEdge, RelationSchema, RelationType,
};

pub const SKOS_NS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const MAT_NS: &str = "https://facetforge.dev/ns/pspp#";
const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
const ONTOLOGY_BASE: &str = "https://facetforge.dev/ontology/";

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    LangTag(String),
    Carets,
    Number(String),
    Bool(bool),
    A,
    Dot,
    Semi,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Prefix { sparql: bool },
    Base { sparql: bool },
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    loc: SourceLocation,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

fn syntax(loc: SourceLocation, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        location: loc,
        message: message.into(),
    }
}

impl Lexer {
    fn new(text: &str) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn loc(&self) -> SourceLocation {
        SourceLocation::new(self.line, self.col)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '\u{feff}' {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn tokenize(mut self) -> Result<(Vec<Spanned>, SourceLocation), ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let loc = self.loc();
            let Some(c) = self.peek() else {
                return Ok((out, loc));
            };
            let tok = match c {
                '<' => self.iri_ref(loc)?,
                '"' | '\'' => Tok::Str(self.string(loc)?),
                '@' => self.at_word(loc)?,
                '^' => {
                    self.bump();
                    if self.bump() != Some('^') {
                        return Err(syntax(loc, "expected '^^'"));
                    }
                    Tok::Carets
                }
                '.' if !self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => {
                    self.bump();
                    Tok::Dot
                }
                ';' | ',' | '[' | ']' | '(' | ')' => {
                    self.bump();
                    match c {
                        ';' => Tok::Semi,
                        ',' => Tok::Comma,
                        '[' => Tok::LBracket,
                        ']' => Tok::RBracket,
                        '(' => Tok::LParen,
                        _ => Tok::RParen,
                    }
                }
                '_' if self.peek_at(1) == Some(':') => {
                    self.bump();
                    self.bump();
                    let name = self.local_name();
                    if name.is_empty() {
                        return Err(syntax(loc, "empty blank node label"));
                    }
                    Tok::Blank(name)
                }
                ':' => {
                    self.bump();
                    Tok::PName {
                        prefix: String::new(),
                        local: self.local_name(),
                    }
                }
                c if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.number(loc)?,
                c if c.is_alphabetic() => self.word(loc)?,
                other => return Err(syntax(loc, format!("unexpected character {other:?}"))),
            };
            out.push(Spanned { tok, loc });
        }
    }

    fn iri_ref(&mut self, start: SourceLocation) -> Result<Tok, ParseError> {
        self.bump();
        let mut iri = String::new();
        loop {
            let loc = self.loc();
            match self.bump() {
                Some('>') => return Ok(Tok::IriRef(iri)),
                Some(c) if c.is_whitespace() || c == '<' || c == '"' => {
                    return Err(syntax(loc, format!("character {c:?} not allowed in IRI")))
                }
                Some(c) => iri.push(c),
                None => return Err(syntax(start, "unterminated IRI")),
            }
        }
    }

    fn string(&mut self, start: SourceLocation) -> Result<String, ParseError> {
        let quote = self.bump().expect("peeked");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut value = String::new();
        loop {
            let loc = self.loc();
            let Some(c) = self.bump() else {
                return Err(syntax(start, "unterminated string literal"));
            };
            match c {
                '\\' => value.push(self.escape(loc)?),
                c if c == quote && !long => return Ok(value),
                c if c == quote && self.peek() == Some(quote) && self.peek_at(1) == Some(quote) => {
                    self.bump();
                    self.bump();
                    // Up to two extra quotes may close a long string.
                    while self.peek() == Some(quote) {
                        value.push(quote);
                        self.bump();
                    }
                    return Ok(value);
                }
                '\n' | '\r' if !long => {
                    return Err(syntax(
                        start,
                        "unterminated string literal (line break before closing quote)",
                    ))
                }
                c => value.push(c),
            }
        }
    }

    fn escape(&mut self, loc: SourceLocation) -> Result<char, ParseError> {
        let c = self.bump().ok_or_else(|| syntax(loc, "dangling escape"))?;
        Ok(match c {
            't' => '\t',
            'b' => '\u{8}',
            'n' => '\n',
            'r' => '\r',
            'f' => '\u{c}',
            '"' | '\'' | '\\' => c,
            'u' | 'U' => {
                let width = if c == 'u' { 4 } else { 8 };
                let mut hex = String::new();
                for _ in 0..width {
                    hex.push(self.bump().ok_or_else(|| syntax(loc, "truncated unicode escape"))?);
                }
                u32::from_str_radix(&hex, 16)
                    .ok()
                    .and_then(char::from_u32)
                    .ok_or_else(|| syntax(loc, format!("invalid unicode escape \\{c}{hex}")))?
            }
            other => return Err(syntax(loc, format!("unknown escape \\{other}"))),
        })
    }

    fn at_word(&mut self, loc: SourceLocation) -> Result<Tok, ParseError> {
        self.bump();
        let mut word = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        match word.as_str() {
            "" => Err(syntax(loc, "expected a directive or language tag after '@'")),
            "prefix" => Ok(Tok::Prefix { sparql: false }),
            "base" => Ok(Tok::Base { sparql: false }),
            _ => Ok(Tok::LangTag(word)),
        }
    }

    fn number(&mut self, loc: SourceLocation) -> Result<Tok, ParseError> {
        let mut text = String::new();
        while let Some(c) = self.peek() {
            let exponent_sign = (c == '+' || c == '-') && text.ends_with(['e', 'E']);
            let fraction_dot = c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit());
            if c.is_ascii_digit() || c == 'e' || c == 'E' || exponent_sign || fraction_dot || text.is_empty() {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return Err(syntax(loc, format!("malformed number {text:?}")));
        }
        Ok(Tok::Number(text))
    }

    fn name_chars(&mut self, allow_colon: bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            let ok =
                c.is_alphanumeric() || c == '_' || c == '-' || c == '.' || c == '\u{b7}' || (allow_colon && c == ':');
            if ok {
                out.push(c);
                self.bump();
            } else if allow_colon && c == '\\' && self.peek_at(1).is_some() {
                self.bump();
                out.push(self.bump().expect("checked"));
            } else if allow_colon && c == '%' {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // A trailing '.' ends the statement rather than the name.
        while out.ends_with('.') {
            out.pop();
            self.pos -= 1;
            self.col -= 1;
        }
        out
    }

    fn local_name(&mut self) -> String {
        self.name_chars(true)
    }

    fn word(&mut self, loc: SourceLocation) -> Result<Tok, ParseError> {
        let word = self.name_chars(false);
        if self.peek() == Some(':') {
            self.bump();
            return Ok(Tok::PName {
                prefix: word,
                local: self.local_name(),
            });
        }
        match word.as_str() {
            "a" => Ok(Tok::A),
            "true" => Ok(Tok::Bool(true)),
            "false" => Ok(Tok::Bool(false)),
            w if w.eq_ignore_ascii_case("prefix") => Ok(Tok::Prefix { sparql: true }),
            w if w.eq_ignore_ascii_case("base") => Ok(Tok::Base { sparql: true }),
            _ => Err(syntax(loc, format!("unexpected word {word:?}"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Parser: token stream to triples

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Iri(String),
    Blank(String),
    Literal {
        value: String,
        lang: Option<String>,
        datatype: Option<String>,
    },
    Number(String),
    Bool(bool),
    Collection,
}

#[derive(Clone, Debug)]
struct Triple {
    subject: Node,
    subject_loc: SourceLocation,
    predicate: String,
    predicate_loc: SourceLocation,
    object: Node,
    object_loc: SourceLocation,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    eof: SourceLocation,
    prefixes: HashMap<String, String>,
    base: Option<String>,
    fresh: usize,
    triples: Vec<Triple>,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn peek_tok(&self) -> Option<&Tok> {
        self.peek().map(|s| &s.tok)
    }

    fn here(&self) -> SourceLocation {
        self.peek().map_or(self.eof, |s| s.loc)
    }

    fn next(&mut self, what: &str) -> Result<Spanned, ParseError> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| syntax(self.eof, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let got = self.next(what)?;
        if got.tok == want {
            Ok(())
        } else {
            Err(syntax(
                got.loc,
                format!("expected {what}, found {}", describe(&got.tok)),
            ))
        }
    }

    fn run(mut self) -> Result<Vec<Triple>, ParseError> {
        while let Some(tok) = self.peek_tok() {
            match tok {
                Tok::Prefix { sparql } => {
                    let sparql = *sparql;
                    self.pos += 1;
                    self.prefix_directive(sparql)?;
                }
                Tok::Base { sparql } => {
                    let sparql = *sparql;
                    self.pos += 1;
                    let iri = self.next("base IRI")?;
                    let Tok::IriRef(iri) = iri.tok else {
                        return Err(syntax(iri.loc, "expected an IRI after base"));
                    };
                    self.base = Some(self.resolve(iri));
                    if !sparql {
                        self.expect(Tok::Dot, "'.'")?;
                    }
                }
                _ => {
                    self.triples_statement()?;
                    self.expect(Tok::Dot, "'.' at end of statement")?;
                }
            }
        }
        Ok(self.triples)
    }

    fn prefix_directive(&mut self, sparql: bool) -> Result<(), ParseError> {
        let name = self.next("prefix name")?;
        let Tok::PName { prefix, local } = name.tok else {
            return Err(syntax(name.loc, "expected a prefix name such as 'ex:'"));
        };
        if !local.is_empty() {
            return Err(syntax(name.loc, "prefix name must end with ':'"));
        }
        let iri = self.next("namespace IRI")?;
        let Tok::IriRef(iri) = iri.tok else {
            return Err(syntax(iri.loc, "expected a namespace IRI"));
        };
        let iri = self.resolve(iri);
        self.prefixes.insert(prefix, iri);
        if !sparql {
            self.expect(Tok::Dot, "'.' after prefix declaration")?;
        }
        Ok(())
    }

    fn resolve(&self, iri: String) -> String {
        match &self.base {
            Some(base) if !iri.contains(':') => format!("{base}{iri}"),
            _ => iri,
        }
    }

    fn expand(&self, prefix: &str, local: &str, loc: SourceLocation) -> Result<String, ParseError> {
        let ns = self
            .prefixes
            .get(prefix)
            .ok_or_else(|| syntax(loc, format!("undeclared prefix '{prefix}:'")))?;
        Ok(format!("{ns}{local}"))
    }

    fn fresh_blank(&mut self) -> Node {
        self.fresh += 1;
        Node::Blank(format!("\u{0}anon{}", self.fresh))
    }

    fn triples_statement(&mut self) -> Result<(), ParseError> {
        let loc = self.here();
        let first = self.next("subject")?;
        let subject = match first.tok {
            Tok::IriRef(iri) => Node::Iri(self.resolve(iri)),
            Tok::PName { prefix, local } => Node::Iri(self.expand(&prefix, &local, first.loc)?),
            Tok::Blank(name) => Node::Blank(name),
            Tok::LBracket => {
                let node = self.fresh_blank();
                if self.peek_tok() != Some(&Tok::RBracket) {
                    self.predicate_object_list(&node, loc)?;
                }
                self.expect(Tok::RBracket, "']'")?;
                // `[ ... ] .` is a complete statement
                if self.peek_tok() == Some(&Tok::Dot) {
                    return Ok(());
                }
                node
            }
            Tok::LParen => {
                self.collection_rest()?;
                Node::Collection
            }
            other => {
                return Err(syntax(
                    first.loc,
                    format!("expected a subject, found {}", describe(&other)),
                ))
            }
        };
        self.predicate_object_list(&subject, loc)
    }

    fn predicate_object_list(&mut self, subject: &Node, subject_loc: SourceLocation) -> Result<(), ParseError> {
        loop {
            let verb = self.next("predicate")?;
            let predicate = match verb.tok {
                Tok::A => RDF_TYPE.to_string(),
                Tok::IriRef(iri) => self.resolve(iri),
                Tok::PName { prefix, local } => self.expand(&prefix, &local, verb.loc)?,
                other => {
                    return Err(syntax(
                        verb.loc,
                        format!("expected a predicate, found {}", describe(&other)),
                    ))
                }
            };
            loop {
                let object_loc = self.here();
                let object = self.object()?;
                self.triples.push(Triple {
                    subject: subject.clone(),
                    subject_loc,
                    predicate: predicate.clone(),
                    predicate_loc: verb.loc,
                    object,
                    object_loc,
                });
                if self.peek_tok() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if self.peek_tok() != Some(&Tok::Semi) {
                return Ok(());
            }
            while self.peek_tok() == Some(&Tok::Semi) {
                self.pos += 1;
            }
            // A trailing ';' may close the list.
            if matches!(self.peek_tok(), Some(Tok::Dot) | Some(Tok::RBracket) | None) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Node, ParseError> {
        let loc = self.here();
        let tok = self.next("object")?;
        Ok(match tok.tok {
            Tok::IriRef(iri) => Node::Iri(self.resolve(iri)),
            Tok::PName { prefix, local } => Node::Iri(self.expand(&prefix, &local, tok.loc)?),
            Tok::Blank(name) => Node::Blank(name),
            Tok::LBracket => {
                let node = self.fresh_blank();
                if self.peek_tok() != Some(&Tok::RBracket) {
                    self.predicate_object_list(&node, loc)?;
                }
                self.expect(Tok::RBracket, "']'")?;
                node
            }
            Tok::LParen => {
                self.collection_rest()?;
                Node::Collection
            }
            Tok::Str(value) => {
                let mut lang = None;
                let mut datatype = None;
                match self.peek_tok() {
                    Some(Tok::LangTag(tag)) => {
                        lang = Some(tag.clone());
                        self.pos += 1;
                    }
                    Some(Tok::Carets) => {
                        self.pos += 1;
                        let dt = self.next("datatype IRI")?;
                        datatype = Some(match dt.tok {
                            Tok::IriRef(iri) => self.resolve(iri),
                            Tok::PName { prefix, local } => self.expand(&prefix, &local, dt.loc)?,
                            other => {
                                return Err(syntax(
                                    dt.loc,
                                    format!("expected a datatype IRI, found {}", describe(&other)),
                                ))
                            }
                        });
                    }
                    _ => {}
                }
                Node::Literal { value, lang, datatype }
            }
            Tok::Number(n) => Node::Number(n),
            Tok::Bool(b) => Node::Bool(b),
            other => {
                return Err(syntax(
                    tok.loc,
                    format!("expected an object, found {}", describe(&other)),
                ))
            }
        })
    }

    fn collection_rest(&mut self) -> Result<(), ParseError> {
        while self.peek_tok() != Some(&Tok::RParen) {
            if self.peek().is_none() {
                return Err(syntax(self.eof, "unterminated collection"));
            }
            self.object()?;
        }
        self.pos += 1;
        Ok(())
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::IriRef(iri) => format!("<{iri}>"),
        Tok::PName { prefix, local } => format!("{prefix}:{local}"),
        Tok::Blank(b) => format!("_:{b}"),
        Tok::Str(_) => "string literal".into(),
        Tok::LangTag(t) => format!("@{t}"),
        Tok::Carets => "'^^'".into(),
        Tok::Number(n) => n.clone(),
        Tok::Bool(b) => b.to_string(),
        Tok::A => "'a'".into(),
        Tok::Dot => "'.'".into(),
        Tok::Semi => "';'".into(),
        Tok::Comma => "','".into(),
        Tok::LBracket => "'['".into(),
        Tok::RBracket => "']'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Prefix { .. } => "prefix directive".into(),
        Tok::Base { .. } => "base directive".into(),
    }
}

// ---------------------------------------------------------------------------
// Interpretation: triples to ontology

fn mat(local: &str) -> String {
    format!("{MAT_NS}{local}")
}

fn skos(local: &str) -> String {
    format!("{SKOS_NS}{local}")
}

fn last_segment(iri: &str) -> &str {
    iri.rsplit(['/', '#']).next().unwrap_or(iri)
}

#[derive(Default)]
struct Draft {
    loc: Option<SourceLocation>,
    is_concept: bool,
    pref: Option<String>,
    alts: Vec<(String, SourceLocation)>,
    facet: Option<FacetTag>,
    parent: Option<(String, SourceLocation)>,
    definition: Option<String>,
    edges: Vec<(String, String, SourceLocation)>,
}

struct Interpreter<'a> {
    triples: &'a [Triple],
    warnings: Vec<ParseWarning>,
}

impl Interpreter<'_> {
    fn warn(&mut self, loc: SourceLocation, code: &'static str, message: impl Into<String>) {
        self.warnings.push(ParseWarning::new(loc, code, message));
    }

    /// String value of a literal object, or `None` (with a warning) for
    /// anything outside the subset.
    fn literal(&mut self, t: &Triple) -> Option<String> {
        match &t.object {
            Node::Literal { value, lang, datatype } => {
                if let Some(lang) = lang {
                    self.warn(t.object_loc, "LanguageTag", format!("dropped language tag @{lang}"));
                }
                match datatype {
                    Some(dt) if dt != &format!("{XSD_NS}string") => {
                        self.warn(
                            t.object_loc,
                            "UnsupportedLiteral",
                            format!("dropped literal typed <{dt}>"),
                        );
                        None
                    }
                    _ => Some(value.clone()),
                }
            }
            Node::Number(n) => {
                self.warn(
                    t.object_loc,
                    "UnsupportedLiteral",
                    format!("dropped numeric literal {n}"),
                );
                None
            }
            Node::Bool(b) => {
                self.warn(
                    t.object_loc,
                    "UnsupportedLiteral",
                    format!("dropped boolean literal {b}"),
                );
                None
            }
            Node::Collection => {
                self.warn(t.object_loc, "Collection", "dropped collection object");
                None
            }
            Node::Iri(_) | Node::Blank(_) => {
                self.warn(
                    t.object_loc,
                    "ExpectedLiteral",
                    format!("<{}> expects a string literal", t.predicate),
                );
                None
            }
        }
    }

    fn iri<'t>(&self, t: &'t Triple) -> Result<&'t str, ParseError> {
        match &t.object {
            Node::Iri(iri) => Ok(iri),
            _ => Err(ParseError::Schema {
                location: Some(t.object_loc),
                message: format!("<{}> expects an IRI object", t.predicate),
            }),
        }
    }

    fn facet(&self, t: &Triple) -> Result<FacetTag, ParseError> {
        let iri = self.iri(t)?;
        iri.strip_prefix(MAT_NS)
            .and_then(|local| local.parse().ok())
            .ok_or_else(|| ParseError::UnknownFacetValue {
                value: iri.to_string(),
                location: t.object_loc,
            })
    }

    fn schema(&mut self, header: Option<&str>) -> Result<(String, String, RelationSchema), ParseError> {
        let mut name = None;
        let mut version = None;
        let mut declarations = Vec::new();
        let rdf_type = RDF_TYPE;
        let type_ontology = Node::Iri(mat("Ontology"));
        for t in self.triples {
            if !matches!(&t.subject, Node::Iri(s) if Some(s.as_str()) == header) {
                continue;
            }
            match t.predicate.as_str() {
                p if p == rdf_type && t.object == type_ontology => {}
                p if p == mat("name") => {
                    if let Some(v) = self.literal(t) {
                        name.get_or_insert(v);
                    }
                }
                p if p == mat("version") => {
                    if let Some(v) = self.literal(t) {
                        version.get_or_insert(v);
                    }
                }
                p if p == mat("relation") => match &t.object {
                    Node::Blank(b) => declarations.push((b.clone(), t.object_loc)),
                    _ => self.warn(
                        t.object_loc,
                        "UnknownPredicate",
                        "mat:relation expects a [ ... ] declaration",
                    ),
                },
                p => {
                    let p = p.to_string();
                    self.warn(
                        t.predicate_loc,
                        "UnknownPredicate",
                        format!("skipped predicate <{p}> on ontology header"),
                    )
                }
            }
        }

        let mut relations = Vec::new();
        for (blank, loc) in declarations {
            let mut rel_name = None;
            let mut domain = None;
            let mut range = None;
            let mut acyclic = false;
            for t in self.triples {
                if !matches!(&t.subject, Node::Blank(b) if *b == blank) {
                    continue;
                }
                match t.predicate.as_str() {
                    p if p == mat("name") => {
                        if let Some(raw) = self.literal(t) {
                            let (canonical, aliased) = canonical_relation_name(&raw);
                            if aliased {
                                self.warn(
                                    t.object_loc,
                                    "RelationAlias",
                                    format!("relation {raw:?} read as {canonical:?}"),
                                );
                            }
                            rel_name = Some(canonical.to_string());
                        }
                    }
                    p if p == mat("domainFacet") => domain = Some(self.facet(t)?),
                    p if p == mat("rangeFacet") => range = Some(self.facet(t)?),
                    p if p == mat("acyclic") => {
                        acyclic = match &t.object {
                            Node::Bool(b) => *b,
                            Node::Literal { value, .. } if value == "true" || value == "false" => value == "true",
                            _ => {
                                return Err(ParseError::Schema {
                                    location: Some(t.object_loc),
                                    message: "mat:acyclic expects \"true\" or \"false\"".into(),
                                })
                            }
                        }
                    }
                    p => {
                        let p = p.to_string();
                        self.warn(
                            t.predicate_loc,
                            "UnknownPredicate",
                            format!("skipped predicate <{p}> in relation declaration"),
                        )
                    }
                }
            }
            let missing = |field: &str| ParseError::Schema {
                location: Some(loc),
                message: format!("relation declaration lacks {field}"),
            };
            relations.push(RelationType::new(
                rel_name.ok_or_else(|| missing("mat:name"))?,
                domain.ok_or_else(|| missing("mat:domainFacet"))?,
                range.ok_or_else(|| missing("mat:rangeFacet"))?,
                acyclic,
            ));
        }
        let header_loc = self
            .triples
            .iter()
            .find(|t| matches!(&t.subject, Node::Iri(s) if Some(s.as_str()) == header))
            .map(|t| t.subject_loc);
        let schema = RelationSchema::new(relations).map_err(|source| ParseError::Build {
            source,
            location: header_loc,
        })?;
        let missing = |field: &str| ParseError::Schema {
            location: header_loc,
            message: format!("ontology header lacks {field}"),
        };
        Ok((
            name.ok_or_else(|| missing("mat:name"))?,
            version.ok_or_else(|| missing("mat:version"))?,
            schema,
        ))
    }
}

/// Parses the SKOS Turtle subset into an ontology.
pub fn parse_skos_turtle(text: &str) -> Result<ParseOutcome, ParseError> {
    let (toks, eof) = Lexer::new(text).tokenize()?;
    let triples = Parser {
        toks,
        pos: 0,
        eof,
        prefixes: HashMap::new(),
        base: None,
        fresh: 0,
        triples: Vec::new(),
    }
    .run()?;

    let mut interp = Interpreter {
        triples: &triples,
        warnings: Vec::new(),
    };

    let type_ontology = Node::Iri(mat("Ontology"));
    let headers: Vec<&Triple> = triples
        .iter()
        .filter(|t| t.predicate == RDF_TYPE && t.object == type_ontology)
        .collect();
    let header = match headers.first().map(|t| &t.subject) {
        Some(Node::Iri(iri)) => Some(iri.clone()),
        Some(_) => {
            return Err(ParseError::Schema {
                location: Some(headers[0].subject_loc),
                message: "the ontology header must be an IRI node".into(),
            })
        }
        None => None,
    };
    for extra in headers.iter().skip(1) {
        if extra.subject != headers[0].subject {
            interp.warn(
                extra.subject_loc,
                "MultipleHeaders",
                "ignored additional ontology header",
            );
        }
    }
    let relation_blanks: Vec<&str> = triples
        .iter()
        .filter(|t| matches!(&t.subject, Node::Iri(s) if Some(s) == header.as_ref()) && t.predicate == mat("relation"))
        .filter_map(|t| match &t.object {
            Node::Blank(b) => Some(b.as_str()),
            _ => None,
        })
        .collect();

    // Relation names are needed before concept triples can be classified.
    let declared = {
        let mut scratch = Interpreter {
            triples: &triples,
            warnings: Vec::new(),
        };
        scratch.schema(header.as_deref()).ok().map(|(_, _, s)| s)
    };

    let mut order: Vec<String> = Vec::new();
    let mut drafts: HashMap<String, Draft> = HashMap::new();
    for t in &triples {
        let subject = match &t.subject {
            Node::Iri(iri) if Some(iri) == header.as_ref() => continue,
            Node::Iri(iri) => iri,
            Node::Blank(b) if relation_blanks.contains(&b.as_str()) => continue,
            Node::Blank(_) | Node::Collection => {
                interp.warn(
                    t.subject_loc,
                    "BlankSubject",
                    "skipped triple with a blank-node subject",
                );
                continue;
            }
            _ => unreachable!("literals cannot be subjects"),
        };
        if !drafts.contains_key(subject) {
            order.push(subject.clone());
        }
        let draft = drafts.entry(subject.clone()).or_default();
        draft.loc.get_or_insert(t.subject_loc);

        let p = t.predicate.as_str();
        if p == RDF_TYPE {
            if t.object == Node::Iri(skos("Concept")) {
                draft.is_concept = true;
            } else {
                interp.warn(t.object_loc, "UnknownType", "skipped rdf:type other than skos:Concept");
            }
        } else if p == skos("prefLabel") {
            draft.is_concept = true;
            if let Some(label) = interp.literal(t) {
                if draft.pref.is_none() {
                    draft.pref = Some(label);
                } else {
                    interp.warn(
                        t.object_loc,
                        "DuplicatePrefLabel",
                        format!("ignored extra prefLabel {label:?}"),
                    );
                }
            }
        } else if p == skos("altLabel") {
            draft.is_concept = true;
            if let Some(label) = interp.literal(t) {
                draft.alts.push((label, t.object_loc));
            }
        } else if p == skos("definition") {
            draft.is_concept = true;
            if let Some(text) = interp.literal(t) {
                if draft.definition.is_none() {
                    draft.definition = Some(text);
                } else {
                    interp.warn(t.object_loc, "DuplicateDefinition", "ignored extra skos:definition");
                }
            }
        } else if p == skos("broader") {
            draft.is_concept = true;
            let parent = interp.iri(t)?.to_string();
            if draft.parent.is_some() {
                return Err(ParseError::Schema {
                    location: Some(t.object_loc),
                    message: format!("{} has more than one skos:broader", last_segment(subject)),
                });
            }
            draft.parent = Some((parent, t.object_loc));
        } else if p == mat("facet") {
            draft.is_concept = true;
            let facet = interp.facet(t)?;
            if draft.facet.is_some_and(|f| f != facet) {
                return Err(ParseError::Schema {
                    location: Some(t.object_loc),
                    message: format!("{} is assigned to more than one facet", last_segment(subject)),
                });
            }
            draft.facet = Some(facet);
        } else if let Some(local) = p.strip_prefix(MAT_NS) {
            let (canonical, aliased) = canonical_relation_name(local);
            if declared.as_ref().is_some_and(|s| s.get(canonical).is_some()) {
                if aliased {
                    interp.warn(
                        t.predicate_loc,
                        "RelationAlias",
                        format!("relation {local:?} read as {canonical:?}"),
                    );
                }
                let object = interp.iri(t)?.to_string();
                draft.is_concept = true;
                draft.edges.push((canonical.to_string(), object, t.predicate_loc));
            } else {
                interp.warn(
                    t.predicate_loc,
                    "UnknownPredicate",
                    format!("skipped undeclared relation mat:{local}"),
                );
            }
        } else {
            interp.warn(t.predicate_loc, "UnknownPredicate", format!("skipped predicate <{p}>"));
        }
    }

    let concept_id = |iri: &str, loc: SourceLocation| {
        ConceptId::new(last_segment(iri)).map_err(|source| ParseError::Build {
            source,
            location: Some(loc),
        })
    };
    let mut locations: HashMap<String, SourceLocation> = HashMap::new();
    let mut concepts = Vec::new();
    let mut edges = Vec::new();
    for subject in &order {
        let draft = drafts.remove(subject).expect("ordered subjects have drafts");
        if !draft.is_concept {
            continue;
        }
        let loc = draft.loc.unwrap_or(SourceLocation::new(1, 1));
        let id = concept_id(subject, loc)?;
        let Some(facet) = draft.facet else {
            return Err(ParseError::MissingFacet {
                concept: id.to_string(),
                location: loc,
            });
        };
        let Some(pref_label) = draft.pref else {
            return Err(ParseError::Schema {
                location: Some(loc),
                message: format!("concept {id} has no skos:prefLabel"),
            });
        };
        locations.entry(id.to_string()).or_insert(loc);
        let alt_locs: HashMap<String, SourceLocation> = draft.alts.iter().cloned().collect();
        let alt_labels = dedupe_alt_labels(
            &id,
            &pref_label,
            draft.alts.into_iter().map(|(l, _)| l).collect(),
            &mut interp.warnings,
            |label| alt_locs.get(label).copied().unwrap_or(loc),
        );
        let parent = draft.parent.map(|(iri, l)| concept_id(&iri, l)).transpose()?;
        for (relation, object, l) in draft.edges {
            edges.push(RelationEdge::new(id.clone(), relation, concept_id(&object, l)?));
        }
        concepts.push(Concept {
            id,
            pref_label,
            alt_labels,
            facet,
            parent,
            definition: draft.definition,
        });
    }

    let (name, version, schema) = interp.schema(header.as_deref())?;
    if header.is_none() {
        return Err(ParseError::Schema {
            location: Some(SourceLocation::new(1, 1)),
            message: "no ontology header (a node typed mat:Ontology)".into(),
        });
    }

    let ontology = build_ontology(name, version, concepts, edges, schema).map_err(|source: ModelError| {
        let location = error_anchor(&source).and_then(|id| locations.get(&id).copied());
        ParseError::Build { source, location }
    })?;
    let mut warnings = interp.warnings;
    warnings.sort_by_key(|w| (w.line, w.column));
    Ok(ParseOutcome { ontology, warnings })
}

// ---------------------------------------------------------------------------
// Serializer

fn quote(value: &str) -> String {
    let mut out = String::with_capacity(value.len() + 2);
    out.push('"');
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn slug(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('-') && !out.is_empty() {
            out.push('-');
        }
    }
    while out.ends_with('-') {
        out.pop();
    }
    if out.is_empty() {
        "ontology".into()
    } else {
        out
    }
}

/// Serializes to the Turtle subset. Concepts are written in id order with
/// their outgoing edges sorted by relation and object.
pub fn serialize_skos_turtle(ontology: &Ontology) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "@prefix skos: <{SKOS_NS}> .");
    let _ = writeln!(out, "@prefix mat: <{MAT_NS}> .");
    let _ = writeln!(out, "@prefix ex: <{ONTOLOGY_BASE}{}/> .", slug(ontology.name()));
    out.push('\n');

    out.push_str("ex: a mat:Ontology ;\n");
    let _ = write!(
        out,
        "    mat:name {} ;\n    mat:version {}",
        quote(ontology.name()),
        quote(ontology.version())
    );
    for (i, relation) in ontology.schema().iter().enumerate() {
        out.push_str(if i == 0 { " ;\n    mat:relation [\n" } else { " , [\n" });
        let _ = write!(
            out,
            "        mat:name {} ;\n        mat:domainFacet mat:{} ;\n        mat:rangeFacet mat:{} ;\n        mat:acyclic \"{}\"\n    ]",
            quote(&relation.name),
            relation.domain_facet,
            relation.range_facet,
            relation.acyclic_required
        );
    }
    out.push_str(" .\n");

    let mut outgoing: HashMap<&str, Vec<&RelationEdge>> = HashMap::new();
    for edge in ontology.edges() {
        outgoing.entry(edge.subject.as_str()).or_default().push(edge);
    }
    for concept in ontology.concepts() {
        let _ = write!(
            out,
            "\nex:{} a skos:Concept ;\n    mat:facet mat:{} ;\n    skos:prefLabel {}",
            concept.id,
            concept.facet,
            quote(&concept.pref_label)
        );
        for alt in &concept.alt_labels {
            let _ = write!(out, " ;\n    skos:altLabel {}", quote(alt));
        }
        if let Some(parent) = &concept.parent {
            let _ = write!(out, " ;\n    skos:broader ex:{parent}");
        }
        if let Some(definition) = &concept.definition {
            let _ = write!(out, " ;\n    skos:definition {}", quote(definition));
        }
        // edges are stored sorted by (subject, relation, object)
        for edge in outgoing.get(concept.id.as_str()).into_iter().flatten() {
            let _ = write!(out, " ;\n    mat:{} ex:{}", edge.relation, edge.object);
        }
        out.push_str(" .\n");
    }
    out
}
