mod common;

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use common::*;
use facetforge::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_facetforge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn seeded_v3_file(dir: &Path) -> std::path::PathBuf {
    let (name, version, mut concepts, mut edges, schema) = fixture(AEROGEL).into_parts();
    concepts.push(Concept::new(
        id("SolGelProcess"),
        "sol-gel process",
        FacetTag::Processing,
    ));
    edges.push(RelationEdge::new(
        id("ThermalConductivity"),
        "isSynthesizedBy",
        id("SolGelProcess"),
    ));
    let mutant = build_ontology(name, version, concepts, edges, schema).unwrap();
    let path = dir.join("seeded_v3.json");
    std::fs::write(&path, serialize_canonical_json(&mutant)).unwrap();
    path
}

#[test]
fn validate_exit_codes() {
    for name in FIXTURES {
        let out = run(&["validate", path_str(&fixture_path(name))]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["pass"], true);
    }

    let dir = tempfile::tempdir().unwrap();
    let out = run(&["validate", path_str(&seeded_v3_file(dir.path()))]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let codes: Vec<&str> = report["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["code"].as_str().unwrap())
        .collect();
    assert_eq!(codes, ["V3_DomainRangeMismatch"]);

    let malformed = dir.path().join("malformed.json");
    std::fs::write(&malformed, "{\n  \"name\": \"x\",\n  \"version\": \n").unwrap();
    let out = run(&["validate", path_str(&malformed)]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("4:1"), "{stderr}");
    assert!(out.stdout.is_empty());

    let out = run(&["validate", path_str(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_3() {
    let fixture = fixture_path(BATTERY);
    let fixture = path_str(&fixture);
    for args in [
        vec![],
        vec!["frobnicate"],
        vec!["validate"],
        vec!["convert", fixture],
        vec!["convert", fixture, "--to", "xml"],
        vec!["index", fixture],
        vec!["index", "--ontology", fixture, "t.txt", "--json", "--plain"],
        vec!["stats", fixture, "--bogus"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["validate", "--help"]).status.code(), Some(0));
}

#[test]
fn convert_pipe_reproduces_canonical_json() {
    for name in FIXTURES {
        let original = fixture_bytes(name);
        let ttl = run(&["convert", path_str(&fixture_path(name)), "--to", "ttl"]);
        assert_eq!(ttl.status.code(), Some(0));
        assert_eq!(
            String::from_utf8(ttl.stdout.clone()).unwrap(),
            serialize_skos_turtle(&fixture(name))
        );
        for source in ["/dev/stdin", "-"] {
            let back = run_with_stdin(&["convert", source, "--to", "json"], &ttl.stdout);
            assert_eq!(back.status.code(), Some(0), "{}", String::from_utf8_lossy(&back.stderr));
            assert_eq!(back.stdout, original, "{name} via {source}");
        }
    }
}

#[test]
fn stats_and_index_output() {
    let out = run(&["stats", path_str(&fixture_path(BATTERY))]);
    assert_eq!(out.status.code(), Some(0));
    let stats: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stats["concepts"]["Structure"], 5);
    assert_eq!(stats["labels"]["total"], 11);

    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("doc.txt");
    std::fs::write(&text, BATTERY_PARAGRAPHS[0]).unwrap();
    let ontology = fixture_path(BATTERY);
    let json = run(&["index", "--ontology", path_str(&ontology), path_str(&text)]);
    let explicit = run(&["index", "--ontology", path_str(&ontology), path_str(&text), "--json"]);
    assert_eq!(json.status.code(), Some(0));
    assert_eq!(json.stdout, explicit.stdout);
    let automaton = build_automaton(&fixture(BATTERY), NormalizationConfig::default()).unwrap();
    assert_eq!(
        String::from_utf8(json.stdout).unwrap(),
        index_document(&automaton, BATTERY_PARAGRAPHS[0]).to_json()
    );

    let plain = run(&["index", "--ontology", path_str(&ontology), path_str(&text), "--plain"]);
    assert_eq!(
        String::from_utf8(plain.stdout).unwrap(),
        "4-21\tCurrentCollector\tStructure\tcurrent collector\n\
         38-53\tActiveMaterial\tStructure\tactive material\n\
         notation\tS:ActiveMaterial\n"
    );

    let missing = run(&[
        "index",
        "--ontology",
        path_str(&ontology),
        path_str(&dir.path().join("nope.txt")),
    ]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn turtle_input_with_warnings_still_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("noisy.ttl");
    let ttl = serialize_skos_turtle(&fixture(AEROGEL))
        .replace("a skos:Concept ;", "a skos:Concept ;\n    skos:scopeNote \"n\" ;");
    std::fs::write(&path, ttl).unwrap();
    let out = run(&["validate", path_str(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(
        stderr.matches("UnknownPredicate").count(),
        fixture(AEROGEL).len(),
        "{stderr}"
    );
}

#[test]
fn serve_rejects_bad_configuration() {
    let out = run(&["serve", "--ontologies", "/nonexistent/dir", "--port", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["serve", "--ontologies", "."])
        .env("FACETFORGE_PORT", "not-a-port")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

fn free_port() -> u16 {
    TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port()
}

fn http_get(port: u16, path: &str) -> Option<String> {
    let mut stream = TcpStream::connect(("127.0.0.1", port)).ok()?;
    stream.set_read_timeout(Some(Duration::from_secs(5))).ok()?;
    write!(
        stream,
        "GET {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n"
    )
    .ok()?;
    let mut response = String::new();
    stream.read_to_string(&mut response).ok()?;
    Some(response)
}

#[test]
fn serve_answers_over_tcp() {
    let port = free_port();
    let fixtures_dir = fixture_path(BATTERY).parent().unwrap().to_path_buf();
    let mut child = bin()
        .args(["serve", "--ontologies", path_str(&fixtures_dir)])
        .env("FACETFORGE_PORT", port.to_string())
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let deadline = Instant::now() + Duration::from_secs(20);
    let response = loop {
        if let Some(r) = http_get(port, "/ontologies/battery-cathode/search?q=collector") {
            break Some(r);
        }
        if Instant::now() > deadline {
            break None;
        }
        std::thread::sleep(Duration::from_millis(50));
    };
    child.kill().unwrap();
    child.wait().unwrap();
    let response = response.expect("server came up");
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.contains("\"CurrentCollector\""), "{response}");
}
