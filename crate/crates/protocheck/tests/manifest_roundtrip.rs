use std::path::PathBuf;

use proptest::prelude::*;
use protocheck::corpus;
use protocheck::manifest::{emit_manifest, parse_mcp_manifest};
use protocheck::sgd::{emit_sgd_schema, parse_sgd_schema};
use protocheck_core::mapping::phi_plus;
use protocheck_core::{fixtures, McpRegistry, ProcessTerm, SgdRegistry, TriBool};

fn read(name: &str) -> String {
    std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)).unwrap()
}

#[test]
fn create_issue_fixture_is_byte_stable() {
    let text = read("github_create_issue.json");
    let reg = parse_mcp_manifest(&text).unwrap();
    assert_eq!(reg, McpRegistry::from_tools(vec![fixtures::github_create_issue()]));
    assert_eq!(reg.tools[0].schema.required, ["owner", "repo", "title"]);
    assert_eq!(emit_manifest(&reg), text);
}

#[test]
fn delete_user_metadata_is_read() {
    let reg = parse_mcp_manifest(&read("delete_user_plus.json")).unwrap();
    assert_eq!(reg.tools, vec![fixtures::delete_user_plus()]);
    assert_eq!(emit_manifest(&reg), read("delete_user_plus.json"));
}

#[test]
fn plus_image_of_book_flight_matches_hand_written_manifest() {
    let sgd = parse_sgd_schema(&read("book_flight_sgd.json")).unwrap();
    assert_eq!(sgd.intents, vec![fixtures::book_flight()]);
    let ProcessTerm::Tool(tool) = phi_plus(&ProcessTerm::Intent(sgd.intents[0].clone())).unwrap() else {
        panic!("intent maps to a tool")
    };
    assert_eq!(emit_manifest(&McpRegistry::from_tools(vec![tool])), read("book_flight_plus_manifest.json"));
}

#[test]
fn missing_transactional_flag_is_unknown_and_blocks_plus_mapping() {
    let text = r#"{"service_name": "S", "slots": [], "intents": [{"name": "Ping", "description": "Ping."}]}"#;
    let reg = parse_sgd_schema(text).unwrap();
    assert_eq!(reg.intents[0].transactional, TriBool::Unknown);
    assert_eq!(reg.warnings.len(), 1);
    assert!(phi_plus(&reg.to_term()).is_err());
}

#[test]
fn resources_prompts_and_caps_survive() {
    let text = r#"{"tools": [], "capabilities": ["tools", "sampling"],
        "resources": [{"uri": "file:///a", "content": "x", "mimeType": "text/plain"}],
        "prompts": [{"template": "Hi {name}", "arguments": ["name"], "name": "greet"}]}"#;
    let reg = parse_mcp_manifest(text).unwrap();
    assert_eq!(reg.server_caps.len(), 2);
    assert_eq!(reg.prompts[0].args, ["name"]);
    let emitted = emit_manifest(&reg);
    assert!(emitted.contains("\"mimeType\": \"text/plain\""));
    assert_eq!(parse_mcp_manifest(&emitted).unwrap(), reg);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_tool_registries_round_trip(seed in any::<u64>(), n in 0usize..6) {
        let mut rng = corpus::rng(seed);
        let reg = McpRegistry::from_tools((0..n).map(|i| corpus::normal_form_tool(&mut rng, i)).collect());
        let text = emit_manifest(&reg);
        let back = parse_mcp_manifest(&text).unwrap();
        prop_assert_eq!(&back, &reg);
        prop_assert_eq!(emit_manifest(&back), text);
    }

    #[test]
    fn generated_services_round_trip(seed in any::<u64>()) {
        // Distinct slot definitions per name, as a real service has.
        let mut rng = corpus::rng(seed);
        let intent = corpus::annotated_intent(&mut rng, 0);
        let reg = SgdRegistry { service_name: "svc".into(), intents: vec![intent], warnings: Vec::new() };
        let text = emit_sgd_schema(&reg).unwrap();
        prop_assert_eq!(parse_sgd_schema(&text).unwrap(), reg);
    }
}
