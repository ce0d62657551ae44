use proptest::prelude::*;
use protocheck::corpus;
use protocheck::lts_io::{lts_from_json, lts_to_dot, lts_to_json, LtsIoError};
use protocheck_core::semantics::{build_lts, ExploreConfig};
use protocheck_core::{fixtures, ProcessTerm};

#[test]
fn built_lts_round_trips() {
    for term in fixtures::all_terms() {
        let Ok(lts) = build_lts(&term, &ExploreConfig::for_term(&term)) else {
            continue;
        };
        let text = lts_to_json(&lts);
        let back = lts_from_json(&text).unwrap();
        assert_eq!(back, lts, "{term}");
        assert_eq!(lts_to_json(&back), text);
    }
}

#[test]
fn transitions_are_triples() {
    let term = ProcessTerm::Intent(fixtures::book_flight());
    let lts = build_lts(&term, &ExploreConfig::for_term(&term)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&lts_to_json(&lts)).unwrap();
    assert_eq!(v["initial"], 0);
    assert_eq!(v["truncated"], false);
    let first = &v["transitions"][0];
    assert_eq!(first.as_array().unwrap().len(), 3);
    assert!(first[1]["kind"].is_string());
}

#[test]
fn bad_indices_are_rejected() {
    let text = r#"{"states": [{"kind": "nil"}], "initial": 0, "transitions": [[0, {"kind": "execute", "name": "a"}, 4]], "truncated": false}"#;
    assert!(matches!(lts_from_json(text), Err(LtsIoError::BadIndex { states: 1 })));
}

#[test]
fn dot_lists_every_edge() {
    let term = ProcessTerm::Tool(fixtures::tool_write());
    let lts = build_lts(&term, &ExploreConfig::for_term(&term)).unwrap();
    let dot = lts_to_dot(&lts);
    assert_eq!(dot.matches(" -> ").count(), lts.transitions.len());
    assert!(dot.contains("approval(update_record, true)"));
    assert!(dot.trim_end().ends_with('}'));
}

proptest! {
    #[test]
    fn random_lts_round_trip(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let lts = corpus::random_lts(&mut rng, 8, &corpus::abstract_labels());
        prop_assert_eq!(lts_from_json(&lts_to_json(&lts)).unwrap(), lts);
    }
}
