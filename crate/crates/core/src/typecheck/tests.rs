use super::*;
use crate::fixtures;
use crate::mapping::phi_plus_inverse;
use crate::term::{Dependency, JsonSchema, ProcessTerm, SideEffects, ToolMetadata};
use proptest::prelude::*;

#[test]
fn iata_description_counts() {
    assert_eq!(tokens(fixtures::IATA_DESCRIPTION).len(), 10);
    assert_eq!(entities(fixtures::IATA_DESCRIPTION), 3);
    assert!((semantic_density(fixtures::IATA_DESCRIPTION) - 0.3).abs() < 1e-12);
    assert_eq!(entities("departure"), 0);
    assert_eq!(semantic_density(""), 0.0);
}

#[test]
fn entity_rules() {
    assert_eq!(entities("Filter by stars:>100"), 2);
    assert_eq!(entities("Limited to 100 results"), 1);
    assert_eq!(entities("Use \"draft\" or 'final' but the user's name"), 2);
    assert_eq!(entities("Codes EU, US, UK apply"), 3);
    assert_eq!(entities("Only EU applies"), 0);
    assert_eq!(entities("Colour (such as red, green)"), 2);
    assert_eq!(entities("Note: nothing here"), 0);
}

#[test]
fn search_repositories_fails_summary_budget() {
    assert_eq!(tokens(fixtures::SEARCH_SUMMARY).len(), 5);
    assert_eq!(tokens(fixtures::SEARCH_DESCRIPTION).len(), 28);
    assert_eq!(entities(fixtures::SEARCH_DESCRIPTION), 5);
    let v = check_p4(&fixtures::search_repositories(), &TypecheckConfig::default());
    assert!(!v.pass);
    assert!(v.findings[0].contains("5 < 0.1 x 28 = 2.80"), "{:?}", v.findings);
}

#[test]
fn bare_tool_fails_every_principle() {
    let reg = McpRegistry::from_tools(vec![fixtures::delete_user()]);
    let r = typecheck_registry(&reg, &TypecheckConfig::default());
    assert!(!r.pass);
    assert_eq!(r.failing().len(), 5);
    assert_eq!(r.necessity.len(), 5);
    assert_eq!(r.to_report().status, Status::Fail);
}

#[test]
fn side_effect_rules() {
    assert!(check_p2(&fixtures::delete_user_plus()).pass);
    let v = check_p2(&fixtures::delete_user_unapproved());
    assert!(!v.pass);
    assert!(v.findings[0].contains("delete without approval"));
}

#[test]
fn failure_modes_need_resolvable_fallbacks() {
    let with = McpRegistry::from_tools(vec![fixtures::fetch_user_data(), fixtures::use_cached_data()]);
    assert!(check_p3(&fixtures::fetch_user_data(), &with).pass);
    let without = McpRegistry::from_tools(vec![fixtures::fetch_user_data()]);
    assert!(!check_p3(&fixtures::fetch_user_data(), &without).pass);
}

#[test]
fn dependency_graph_rules() {
    let reg = McpRegistry::from_tools(vec![fixtures::process_payment(), fixtures::create_order(), fixtures::verify_balance()]);
    assert!(check_p5(&reg).pass);

    let (mut a, mut b) = fixtures::dependent_pair();
    a.metadata.as_mut().unwrap().dependencies = Some(vec![Dependency::new("T_B", Relation::Requires)]);
    let cyclic = McpRegistry::from_tools(vec![a.clone(), b.clone()]);
    let v = check_p5(&cyclic);
    assert!(!v.pass);
    assert!(v.findings.iter().any(|f| f == "requires cycle: T_A -> T_B -> T_A"), "{:?}", v.findings);

    a.metadata.as_mut().unwrap().dependencies = Some(vec![Dependency::new("T_B", Relation::ExclusiveWith)]);
    let clash = McpRegistry::from_tools(vec![a, b.clone()]);
    assert!(check_p5(&clash).findings.iter().any(|f| f.contains("exclusive")));

    b.metadata.as_mut().unwrap().dependencies = Some(vec![Dependency::new("ghost", Relation::Requires)]);
    assert!(!check_p5(&McpRegistry::from_tools(vec![b])).pass);
}

#[test]
fn annotated_registry_passes_and_inverts() {
    let reg = fixtures::payment_registry();
    let r = typecheck_registry(&reg, &TypecheckConfig::default());
    assert!(r.pass, "{:?}", r.to_report());
    for t in &reg.tools {
        assert!(phi_plus_inverse(&ProcessTerm::Tool(t.clone())).is_ok());
    }
}

fn sized_tool(i: usize, desc_tokens: usize, summary_tokens: usize) -> Tool {
    let words = |n: usize| (0..n).map(|_| "word").collect::<Vec<_>>().join(" ");
    Tool::new(format!("t{i}"), words(desc_tokens), JsonSchema::default()).with_metadata(ToolMetadata {
        summary: Some(words(summary_tokens)),
        ..ToolMetadata::default()
    })
}

#[test]
fn token_budget_on_uniform_corpus() {
    let reg = McpRegistry::from_tools((0..50).map(|i| sized_tool(i, 100, 9)).collect());
    let r = token_report(&reg, &TypecheckConfig::default()).unwrap();
    assert_eq!((r.baseline, r.progressive, r.detailed), (5000, 950, 5));
    assert!((r.ratio - 0.19).abs() < 1e-12);
    assert!(r.below_fifth && r.summaries_within_bound);
    assert!(!r.k_below_summary_ratio);

    let single = McpRegistry::from_tools(vec![sized_tool(0, 100, 9)]);
    let r1 = token_report(&single, &TypecheckConfig::default()).unwrap();
    assert_eq!(r1.detailed, 1);
    assert!(!r1.below_fifth);

    let missing = McpRegistry::from_tools(vec![fixtures::delete_user()]);
    assert_eq!(
        token_report(&missing, &TypecheckConfig::default()),
        Err(TokenError::MissingSummary { tool: "delete_user".into() })
    );
}

#[test]
fn config_bounds() {
    assert!(TypecheckConfig::default().validate().is_ok());
    let bad = TypecheckConfig { tau: 0.0, ..TypecheckConfig::default() };
    assert!(bad.validate().is_err());
    let nan = TypecheckConfig { k: f64::NAN, ..TypecheckConfig::default() };
    assert!(nan.validate().is_err());
}

fn arb_plain_word() -> impl Strategy<Value = String> {
    prop_oneof!["[a-z]{1,8}", "[A-Z]{2,4},?", "[0-9]{1,3}", "\\(e\\.g\\., [a-z]{2}, [a-z]{2}\\)"]
}

proptest! {
    #[test]
    fn plain_words_never_raise_density(base in prop::collection::vec(arb_plain_word(), 1..12), extra in "[a-z]{1,8}") {
        let text = base.join(" ");
        let longer = alloc::format!("{text} {extra}");
        prop_assert!(semantic_density(&longer) <= semantic_density(&text));
        prop_assert_eq!(entities(&longer), entities(&text));
    }

    #[test]
    fn appended_entities_never_lower_the_count(base in prop::collection::vec(arb_plain_word(), 1..12), n in 1u32..1000) {
        let text = base.join(" ");
        let longer = alloc::format!("{text} >{n}");
        prop_assert!(entities(&longer) > entities(&text));
    }

    #[test]
    fn ceil_count_matches_integer_reference(num in 0usize..500, den in 1usize..50) {
        let want = num.div_ceil(den);
        prop_assert_eq!(ceil_count(num as f64 / den as f64), want);
    }

    #[test]
    fn typecheck_pass_implies_total_inverse(side in prop::sample::select(alloc::vec![SideEffects::Read, SideEffects::Write, SideEffects::Delete, SideEffects::None]), approval in any::<bool>()) {
        let mut t = fixtures::full_tool("x", side, alloc::vec![]);
        t.metadata.as_mut().unwrap().requires_approval = Some(approval);
        let reg = McpRegistry::from_tools(alloc::vec![t.clone()]);
        let r = typecheck_registry(&reg, &TypecheckConfig::default());
        prop_assert_eq!(r.pass, approval || !side.is_mutating());
        if r.pass {
            prop_assert!(phi_plus_inverse(&ProcessTerm::Tool(t)).is_ok());
        }
        prop_assert!(r.to_report().check == "typecheck");
    }
}
