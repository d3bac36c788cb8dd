//! Serve the committed fixtures over HTTP, as `facetforge serve` does.
//!
//! ```text
//! cargo run --example serve
//! curl 'localhost:8080/ontologies/battery-cathode/search?q=collector'
//! curl -X POST localhost:8080/ontologies/battery-cathode/index \
//!      -H 'content-type: application/json' -d '{"text": "active material on the current collector"}'
//! ```

use std::net::SocketAddr;
use std::path::Path;

use facetforge::service::{serve, OntologyRegistry, DEFAULT_PORT};
use facetforge::text::NormalizationConfig;

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let (registry, failures) = OntologyRegistry::load_dir(&dir, NormalizationConfig::default())?;
    for failure in failures {
        eprintln!("skipped {}: {}", failure.path.display(), failure.error);
    }
    let addr = SocketAddr::from(([127, 0, 0, 1], DEFAULT_PORT));
    eprintln!("listening on http://{addr} ({} ontologies)", registry.len());
    serve(registry, addr, "*").await?;
    Ok(())
}
