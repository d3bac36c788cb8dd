mod common;

use common::*;
use facetforge::prelude::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn json_roundtrip(o: &Ontology) -> Ontology {
    let outcome = parse_canonical_json(&serialize_canonical_json(o)).expect("canonical JSON re-parses");
    assert!(outcome.warnings.is_empty(), "{:?}", outcome.warnings);
    outcome.ontology
}

fn turtle_roundtrip(o: &Ontology) -> Ontology {
    let outcome = parse_skos_turtle(&serialize_skos_turtle(o)).expect("turtle re-parses");
    assert!(outcome.warnings.is_empty(), "{:?}", outcome.warnings);
    outcome.ontology
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_ontologies_roundtrip_through_both_formats(seed in any::<u64>()) {
        let o = random_ontology(&mut rng(seed), Shape::SMALL);

        let json = serialize_canonical_json(&o);
        let back = json_roundtrip(&o);
        prop_assert_eq!(&back, &o);
        prop_assert_eq!(serialize_canonical_json(&back), json.clone());

        let ttl = serialize_skos_turtle(&o);
        let back = turtle_roundtrip(&o);
        prop_assert_eq!(&back, &o);
        prop_assert_eq!(serialize_skos_turtle(&back), ttl);
        prop_assert_eq!(serialize_canonical_json(&back), json);
    }
}

#[test]
fn fixtures_are_committed_in_canonical_form() {
    for name in FIXTURES {
        let bytes = fixture_bytes(name);
        let o = fixture(name);
        assert_eq!(serialize_canonical_json(&o), bytes, "{name}");
    }
}

#[test]
fn fixtures_roundtrip_and_reach_a_fixed_point() {
    for name in FIXTURES {
        let o = fixture(name);
        assert_eq!(json_roundtrip(&o), o, "{name}");
        assert_eq!(turtle_roundtrip(&o), o, "{name}");

        let once = serialize_canonical_json(&o);
        let twice = serialize_canonical_json(&json_roundtrip(&o));
        assert_eq!(once, twice);
        let once = serialize_skos_turtle(&o);
        let twice = serialize_skos_turtle(&turtle_roundtrip(&o));
        assert_eq!(once, twice);
    }
}

#[test]
fn serialization_ignores_input_order() {
    for name in FIXTURES {
        let o = fixture(name);
        let expected = serialize_canonical_json(&o);
        let mut doc: serde_json::Value = serde_json::from_slice(&fixture_bytes(name)).unwrap();
        for seed in 0..10 {
            let mut rng = rng(seed);
            for key in ["concepts", "edges", "schema"] {
                doc[key].as_array_mut().unwrap().shuffle(&mut rng);
            }
            let shuffled = serde_json::to_vec(&doc).unwrap();
            let parsed = parse_canonical_json(&shuffled).unwrap().ontology;
            assert_eq!(parsed, o);
            assert_eq!(serialize_canonical_json(&parsed), expected);
        }
    }
}

#[test]
fn stripping_unknown_predicates_changes_nothing_but_warnings() {
    for name in FIXTURES {
        let o = fixture(name);
        let clean = serialize_skos_turtle(&o);
        let mut noisy = String::new();
        let mut inserted = 0;
        for line in clean.lines() {
            noisy.push_str(line);
            noisy.push('\n');
            if line.ends_with("a skos:Concept ;") {
                noisy.push_str("    skos:scopeNote \"extra metadata\" ;\n");
                inserted += 1;
            }
        }
        let parsed = parse_skos_turtle(&noisy).unwrap();
        assert_eq!(parsed.ontology, o);
        assert_eq!(parsed.warnings.len(), inserted);
        assert!(parsed.warnings.iter().all(|w| w.code == "UnknownPredicate"));

        let stripped: String = noisy
            .lines()
            .filter(|l| !l.contains("skos:scopeNote"))
            .map(|l| format!("{l}\n"))
            .collect();
        let parsed = parse_skos_turtle(&stripped).unwrap();
        assert_eq!(parsed.ontology, o);
        assert!(parsed.warnings.is_empty());
    }
}

#[test]
fn cross_format_roundtrip_on_fixtures() {
    for name in FIXTURES {
        let from_json = parse_canonical_json(&fixture_bytes(name)).unwrap().ontology;
        let via_ttl = parse_skos_turtle(&serialize_skos_turtle(&from_json)).unwrap().ontology;
        assert_eq!(via_ttl, from_json);
        assert_eq!(serialize_canonical_json(&via_ttl), fixture_bytes(name));
    }
}

#[test]
fn one_concept_turtle_document() {
    let text = r#"@prefix skos: <http://www.w3.org/2004/02/skos/core#> .
@prefix mat: <https://facetforge.dev/ns/pspp#> .
@prefix ex: <https://facetforge.dev/ontology/aerogel/> .

ex: a mat:Ontology ; mat:name "aerogel" ; mat:version "0.1.0" .
ex:SolventFreezing mat:facet mat:Processing ; skos:prefLabel "Solvent Freezing" .
"#;
    let o = parse_skos_turtle(text).unwrap().ontology;
    assert_eq!(o.len(), 1);
    assert_eq!(o.concept("SolventFreezing").unwrap().facet, FacetTag::Processing);
    assert_eq!(o.stats().concepts.processing, 1);
}
