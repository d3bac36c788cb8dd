//! Query the service layer without a socket: browse a facet tree, search
//! labels and look up a concept's relationships.
//!
//! ```text
//! cargo run --example browse_concept
//! ```

use std::path::Path;

use facetforge::prelude::*;
use facetforge::service::{browse, concept_detail, search, OntologyRegistry, TreeNode};

fn print_tree(nodes: &[TreeNode], depth: usize) {
    for node in nodes {
        println!("{}{} ({})", "  ".repeat(depth), node.pref_label, node.concept_id);
        print_tree(&node.children, depth + 1);
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let (registry, failures) = OntologyRegistry::load_dir(&dir, NormalizationConfig::default())?;
    for failure in failures {
        eprintln!("skipped {}: {}", failure.path.display(), failure.error);
    }

    let tree = browse(&registry, "aerogel", Some("Processing"))?;
    print_tree(&tree.facets[0].children, 0);

    for hit in search(&registry, "battery-cathode", "particle")? {
        println!(
            "search: {} via {:?} label {:?}",
            hit.concept_id, hit.matched_in, hit.label
        );
    }

    let detail = concept_detail(&registry, "battery-cathode", "ActiveMaterial")?;
    println!("{} [{}]", detail.pref_label, detail.facet);
    for edge in detail.incoming.iter().chain(&detail.outgoing) {
        println!("  {} --{}--> {}", edge.subject_label, edge.relation, edge.object_label);
    }
    Ok(())
}
