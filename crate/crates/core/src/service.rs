//! The HTTP vocabulary server: search, browse and index over a fixed set of
//! ontologies loaded at startup.
//!
//! | method | path | |
//! |---|---|---|
//! | GET | `/ontologies` | registered ontologies |
//! | GET | `/ontologies/{name}/tree[?facet=]` | facet forest |
//! | GET | `/ontologies/{name}/concepts/{id}` | concept, ancestors and edges |
//! | GET | `/ontologies/{name}/search?q=` | label substring search |
//! | POST | `/ontologies/{name}/index` | `{"text": ...}` to extracted concepts |
//! | GET | `/ontologies/{name}/stats` | facet counts |
//! | GET | `/ontologies/{name}/validation` | validation report |
//!
//! Handlers are thin wrappers over the functions in this module, which take
//! an [`OntologyRegistry`] and return serializable values, so the same logic
//! can be exercised without a socket.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path as UrlPath, Query, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::index::{build_automaton, index_document, DocumentIndexResult, IndexError, MatchAutomaton};
use crate::io::{parse_any, ParseError};
use crate::model::{Concept, ConceptId, FacetCounts, FacetTag, Ontology, RelationEdge};
use crate::text::NormalizationConfig;
use crate::validate::{validate, ValidationReport};

/// Largest accepted `text` for the index endpoint, in bytes.
pub const MAX_TEXT_BYTES: usize = 1024 * 1024;
// JSON escaping can inflate the request body well past the text itself.
const MAX_BODY_BYTES: usize = 8 * MAX_TEXT_BYTES;

pub const DEFAULT_PORT: u16 = 8080;
pub const PORT_ENV: &str = "FACETFORGE_PORT";

#[derive(Debug)]
pub struct RegisteredOntology {
    pub ontology: Ontology,
    pub automaton: MatchAutomaton,
    pub source: Option<PathBuf>,
    /// Seconds since the Unix epoch.
    pub loaded_at: u64,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("an ontology named {0:?} is already registered")]
    DuplicateName(String),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// A file in the ontology directory that could not be registered.
#[derive(Debug)]
pub struct LoadFailure {
    pub path: PathBuf,
    pub error: RegistryError,
}

/// Ontologies by name, each with a matcher built under the registry's
/// normalization config. Read-only once serving starts.
#[derive(Debug, Default)]
pub struct OntologyRegistry {
    config: NormalizationConfig,
    entries: BTreeMap<String, RegisteredOntology>,
}

impl OntologyRegistry {
    pub fn new(config: NormalizationConfig) -> Self {
        Self {
            config,
            entries: BTreeMap::new(),
        }
    }

    pub fn config(&self) -> NormalizationConfig {
        self.config
    }

    pub fn register(&mut self, ontology: Ontology, source: Option<PathBuf>) -> Result<(), RegistryError> {
        if self.entries.contains_key(ontology.name()) {
            return Err(RegistryError::DuplicateName(ontology.name().to_string()));
        }
        let automaton = build_automaton(&ontology, self.config)?;
        let loaded_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        self.entries.insert(
            ontology.name().to_string(),
            RegisteredOntology {
                ontology,
                automaton,
                source,
                loaded_at,
            },
        );
        Ok(())
    }

    /// Parses and registers one ontology file.
    pub fn load_file(&mut self, path: &Path) -> Result<(), RegistryError> {
        let bytes = std::fs::read(path)?;
        let outcome = parse_any(&bytes)?;
        self.register(outcome.ontology, Some(path.to_path_buf()))
    }

    /// Registers every `.json` and `.ttl` file in `dir`, in file-name order.
    /// Files that fail are skipped and returned alongside.
    pub fn load_dir(dir: &Path, config: NormalizationConfig) -> std::io::Result<(Self, Vec<LoadFailure>)> {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && matches!(p.extension().and_then(|e| e.to_str()), Some("json" | "ttl")))
            .collect();
        paths.sort();
        let mut registry = Self::new(config);
        let mut failures = Vec::new();
        for path in paths {
            if let Err(error) = registry.load_file(&path) {
                failures.push(LoadFailure { path, error });
            }
        }
        Ok((registry, failures))
    }

    pub fn get(&self, name: &str) -> Option<&RegisteredOntology> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApiError {
    #[error("unknown ontology {0:?}")]
    UnknownOntology(String),
    #[error("unknown concept {0:?}")]
    UnknownConcept(String),
    #[error("{0}")]
    BadRequest(String),
    #[error("text exceeds {MAX_TEXT_BYTES} bytes")]
    TooLarge,
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::UnknownOntology(_) | ApiError::UnknownConcept(_) => StatusCode::NOT_FOUND,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::TooLarge => StatusCode::PAYLOAD_TOO_LARGE,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.to_string() });
        (self.status(), json_body(&body)).into_response()
    }
}

fn json_body<T: Serialize>(value: &T) -> Response {
    let mut text = serde_json::to_string_pretty(value).expect("response serializes");
    text.push('\n');
    raw_json(text)
}

fn raw_json(text: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], text).into_response()
}

fn registered<'a>(registry: &'a OntologyRegistry, name: &str) -> Result<&'a RegisteredOntology, ApiError> {
    registry
        .get(name)
        .ok_or_else(|| ApiError::UnknownOntology(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OntologySummary {
    pub name: String,
    pub version: String,
    pub concepts: usize,
    pub edges: usize,
    pub loaded_at: u64,
}

pub fn list_ontologies(registry: &OntologyRegistry) -> Vec<OntologySummary> {
    registry
        .entries
        .values()
        .map(|r| OntologySummary {
            name: r.ontology.name().to_string(),
            version: r.ontology.version().to_string(),
            concepts: r.ontology.len(),
            edges: r.ontology.edges().len(),
            loaded_at: r.loaded_at,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchedIn {
    Pref,
    Alt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchHit {
    pub concept_id: ConceptId,
    pub matched_in: MatchedIn,
    pub label: String,
}

/// Case-insensitive substring search over labels. Each concept appears once,
/// through its prefLabel when that matches, otherwise through its first
/// matching altLabel. prefLabel matches sort first, then by id.
pub fn search(registry: &OntologyRegistry, name: &str, query: &str) -> Result<Vec<SearchHit>, ApiError> {
    let entry = registered(registry, name)?;
    let needle = query.trim().to_lowercase();
    if needle.is_empty() {
        return Err(ApiError::BadRequest("query must not be empty".into()));
    }
    let mut hits: Vec<SearchHit> = entry
        .ontology
        .concepts()
        .filter_map(|c| {
            if c.pref_label.to_lowercase().contains(&needle) {
                return Some((MatchedIn::Pref, c.pref_label.clone(), c));
            }
            c.alt_labels
                .iter()
                .find(|alt| alt.to_lowercase().contains(&needle))
                .map(|alt| (MatchedIn::Alt, alt.clone(), c))
        })
        .map(|(matched_in, label, c)| SearchHit {
            concept_id: c.id.clone(),
            matched_in,
            label,
        })
        .collect();
    hits.sort_by(|a, b| {
        (a.matched_in != MatchedIn::Pref, &a.concept_id).cmp(&(b.matched_in != MatchedIn::Pref, &b.concept_id))
    });
    Ok(hits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeNode {
    pub concept_id: ConceptId,
    pub pref_label: String,
    pub children: Vec<TreeNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetTree {
    pub facet: FacetTag,
    pub children: Vec<TreeNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrowseResponse {
    pub ontology: String,
    pub facets: Vec<FacetTree>,
}

fn subtree(ontology: &Ontology, concept: &Concept) -> TreeNode {
    let mut children: Vec<&Concept> = ontology
        .children(concept.id.as_str())
        .iter()
        .filter_map(|id| ontology.concept(id.as_str()))
        .collect();
    sort_by_label(&mut children);
    TreeNode {
        concept_id: concept.id.clone(),
        pref_label: concept.pref_label.clone(),
        children: children.into_iter().map(|c| subtree(ontology, c)).collect(),
    }
}

fn sort_by_label(concepts: &mut [&Concept]) {
    concepts.sort_by(|a, b| (&a.pref_label, &a.id).cmp(&(&b.pref_label, &b.id)));
}

/// The facet forest, or one facet's tree. Siblings are ordered by prefLabel.
pub fn browse(registry: &OntologyRegistry, name: &str, facet: Option<&str>) -> Result<BrowseResponse, ApiError> {
    let entry = registered(registry, name)?;
    let facets: Vec<FacetTag> = match facet {
        None => FacetTag::ALL.to_vec(),
        Some(raw) => vec![raw
            .parse()
            .map_err(|_| ApiError::BadRequest(format!("invalid facet {raw:?}")))?],
    };
    let ontology = &entry.ontology;
    let facets = facets
        .into_iter()
        .map(|facet| {
            let mut roots: Vec<&Concept> = ontology.roots(facet).collect();
            sort_by_label(&mut roots);
            FacetTree {
                facet,
                children: roots.into_iter().map(|c| subtree(ontology, c)).collect(),
            }
        })
        .collect();
    Ok(BrowseResponse {
        ontology: ontology.name().to_string(),
        facets,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConceptRef {
    pub concept_id: ConceptId,
    pub pref_label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EdgeView {
    pub relation: String,
    pub subject: ConceptId,
    pub subject_label: String,
    pub object: ConceptId,
    pub object_label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConceptDetail {
    pub concept_id: ConceptId,
    pub pref_label: String,
    pub alt_labels: Vec<String>,
    pub facet: FacetTag,
    pub parent: Option<ConceptId>,
    pub definition: Option<String>,
    /// Nearest first.
    pub ancestors: Vec<ConceptRef>,
    pub outgoing: Vec<EdgeView>,
    pub incoming: Vec<EdgeView>,
}

pub fn concept_detail(registry: &OntologyRegistry, name: &str, id: &str) -> Result<ConceptDetail, ApiError> {
    let ontology = &registered(registry, name)?.ontology;
    let concept = ontology
        .concept(id)
        .ok_or_else(|| ApiError::UnknownConcept(id.to_string()))?;
    let label = |id: &ConceptId| {
        ontology
            .concept(id.as_str())
            .map(|c| c.pref_label.clone())
            .unwrap_or_default()
    };
    let view = |e: RelationEdge| EdgeView {
        subject_label: label(&e.subject),
        object_label: label(&e.object),
        relation: e.relation,
        subject: e.subject,
        object: e.object,
    };
    let ancestors = ontology
        .ancestors(id)
        .map_err(|_| ApiError::UnknownConcept(id.to_string()))?
        .into_iter()
        .map(|a| ConceptRef {
            pref_label: label(&a),
            concept_id: a,
        })
        .collect();
    let relations = ontology
        .relations_of(id)
        .map_err(|_| ApiError::UnknownConcept(id.to_string()))?;
    Ok(ConceptDetail {
        concept_id: concept.id.clone(),
        pref_label: concept.pref_label.clone(),
        alt_labels: concept.alt_labels.clone(),
        facet: concept.facet,
        parent: concept.parent.clone(),
        definition: concept.definition.clone(),
        ancestors,
        outgoing: relations.outgoing.into_iter().map(view).collect(),
        incoming: relations.incoming.into_iter().map(view).collect(),
    })
}

#[derive(Deserialize)]
struct IndexRequest {
    text: String,
}

/// Indexes the `text` of a JSON request body. Nothing is retained.
pub fn index_body(registry: &OntologyRegistry, name: &str, body: &[u8]) -> Result<DocumentIndexResult, ApiError> {
    let entry = registered(registry, name)?;
    let request: IndexRequest =
        serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(format!("malformed body: {e}")))?;
    if request.text.len() > MAX_TEXT_BYTES {
        return Err(ApiError::TooLarge);
    }
    Ok(index_document(&entry.automaton, &request.text))
}

pub fn stats(registry: &OntologyRegistry, name: &str) -> Result<FacetCounts, ApiError> {
    Ok(registered(registry, name)?.ontology.stats())
}

pub fn validation(registry: &OntologyRegistry, name: &str) -> Result<ValidationReport, ApiError> {
    Ok(validate(&registered(registry, name)?.ontology))
}

type Shared = State<Arc<OntologyRegistry>>;

async fn get_ontologies(State(registry): Shared) -> Response {
    json_body(&list_ontologies(&registry))
}

async fn get_tree(
    State(registry): Shared,
    UrlPath(name): UrlPath<String>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    browse(&registry, &name, params.get("facet").map(String::as_str)).map(|r| json_body(&r))
}

async fn get_concept(
    State(registry): Shared,
    UrlPath((name, id)): UrlPath<(String, String)>,
) -> Result<Response, ApiError> {
    concept_detail(&registry, &name, &id).map(|r| json_body(&r))
}

async fn get_search(
    State(registry): Shared,
    UrlPath(name): UrlPath<String>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let query = params.get("q").map(String::as_str).unwrap_or_default();
    search(&registry, &name, query).map(|r| json_body(&r))
}

async fn post_index(
    State(registry): Shared,
    UrlPath(name): UrlPath<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    index_body(&registry, &name, &body).map(|r| raw_json(r.to_json()))
}

async fn get_stats(State(registry): Shared, UrlPath(name): UrlPath<String>) -> Result<Response, ApiError> {
    stats(&registry, &name).map(|r| json_body(&r))
}

async fn get_validation(State(registry): Shared, UrlPath(name): UrlPath<String>) -> Result<Response, ApiError> {
    validation(&registry, &name).map(|r| raw_json(r.to_json()))
}

/// Builds the application router. `cors_origin` is `*` or one exact origin.
pub fn router(registry: Arc<OntologyRegistry>, cors_origin: &str) -> Router {
    let origin = if cors_origin == "*" {
        AllowOrigin::any()
    } else {
        match HeaderValue::from_str(cors_origin) {
            Ok(value) => AllowOrigin::exact(value),
            Err(_) => AllowOrigin::list([]),
        }
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([Method::GET, Method::POST, Method::OPTIONS])
        .allow_headers([header::CONTENT_TYPE]);

    Router::new()
        .route("/ontologies", get(get_ontologies))
        .route("/ontologies/{name}/tree", get(get_tree))
        .route("/ontologies/{name}/concepts/{id}", get(get_concept))
        .route("/ontologies/{name}/search", get(get_search))
        .route("/ontologies/{name}/index", post(post_index))
        .route("/ontologies/{name}/stats", get(get_stats))
        .route("/ontologies/{name}/validation", get(get_validation))
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .layer(cors)
        .with_state(registry)
}

/// Serves `registry` on `addr` until Ctrl-C.
pub async fn serve(registry: OntologyRegistry, addr: SocketAddr, cors_origin: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    let app = router(Arc::new(registry), cors_origin);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_ontology, RelationSchema};

    fn registry() -> OntologyRegistry {
        let id = |s: &str| ConceptId::new(s).unwrap();
        let o = build_ontology(
            "tiny",
            "1",
            vec![
                Concept::new(id("Drying"), "Drying", FacetTag::Processing),
                Concept::new(id("SupercriticalDrying"), "Supercritical drying", FacetTag::Processing)
                    .with_parent(id("Drying"))
                    .with_alt_label("CO2 drying"),
                Concept::new(id("AmbientDrying"), "Ambient pressure drying", FacetTag::Processing)
                    .with_parent(id("Drying")),
                Concept::new(id("Dryness"), "Dryness", FacetTag::Property).with_alt_label("moisture"),
            ],
            vec![],
            RelationSchema::default(),
        )
        .unwrap();
        let mut r = OntologyRegistry::new(NormalizationConfig::default());
        r.register(o, None).unwrap();
        r
    }

    #[test]
    fn search_orders_pref_before_alt() {
        let r = registry();
        let hits = search(&r, "tiny", "DRY").unwrap();
        let ids: Vec<_> = hits.iter().map(|h| h.concept_id.as_str()).collect();
        assert_eq!(ids, ["AmbientDrying", "Drying", "Dryness", "SupercriticalDrying"]);
        let hits = search(&r, "tiny", "co2").unwrap();
        assert_eq!(hits[0].matched_in, MatchedIn::Alt);
        assert_eq!(hits[0].label, "CO2 drying");
        assert!(search(&r, "tiny", "zzzz").unwrap().is_empty());
        assert_eq!(search(&r, "tiny", "  ").unwrap_err().status(), StatusCode::BAD_REQUEST);
        assert_eq!(search(&r, "nope", "x").unwrap_err().status(), StatusCode::NOT_FOUND);
    }

    #[test]
    fn browse_sorts_children_by_label() {
        let r = registry();
        let tree = browse(&r, "tiny", Some("Processing")).unwrap();
        assert_eq!(tree.facets.len(), 1);
        let drying = &tree.facets[0].children[0];
        let kids: Vec<_> = drying.children.iter().map(|c| c.concept_id.as_str()).collect();
        assert_eq!(kids, ["AmbientDrying", "SupercriticalDrying"]);
        assert_eq!(browse(&r, "tiny", None).unwrap().facets.len(), 4);
        assert_eq!(
            browse(&r, "tiny", Some("Properties")).unwrap_err().status(),
            StatusCode::BAD_REQUEST
        );
    }

    #[test]
    fn registry_rejects_duplicate_names() {
        let mut r = registry();
        let o = build_ontology("tiny", "2", vec![], vec![], RelationSchema::default()).unwrap();
        assert!(matches!(r.register(o, None), Err(RegistryError::DuplicateName(_))));
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn index_body_errors() {
        let r = registry();
        assert_eq!(
            index_body(&r, "tiny", b"{").unwrap_err().status(),
            StatusCode::BAD_REQUEST
        );
        assert_eq!(
            index_body(&r, "tiny", b"{\"txt\": \"a\"}").unwrap_err().status(),
            StatusCode::BAD_REQUEST
        );
        let big = serde_json::to_vec(&serde_json::json!({ "text": "a".repeat(MAX_TEXT_BYTES + 1) })).unwrap();
        assert_eq!(index_body(&r, "tiny", &big).unwrap_err(), ApiError::TooLarge);
        let ok = index_body(&r, "tiny", b"{\"text\": \"supercritical drying\"}").unwrap();
        assert_eq!(ok.notation.as_str(), "P:SupercriticalDrying");
    }
}
