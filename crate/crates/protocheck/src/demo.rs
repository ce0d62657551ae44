//! Replays every worked example end to end and reports a pass/fail matrix.

use protocheck_core::equivalence::{bisimilar, trace_equivalent, BisimMode, NormalizeOptions};
use protocheck_core::fixtures;
use protocheck_core::mapping::{
    phi, phi_inverse, phi_plus, phi_plus_inverse, report_diffs, round_trip_report, structural_eq, LossField,
    MapOutcome, RoundTripMode, UndefinedReason,
};
use protocheck_core::security::{
    check_approval_ordering, check_confinement, check_dependency_ordering, check_inert_descriptions,
};
use protocheck_core::semantics::{build_lts, traces, ExploreConfig, TransitionLabel};
use protocheck_core::term::{params, JsonSchema, PropertySpec, SlotType};
use protocheck_core::typecheck::{
    check_p2, check_p3, check_p4, check_p5, semantic_density, token_report, TypecheckConfig,
};
use protocheck_core::{Literal, McpRegistry, ProcessTerm, Status, Tool, TriBool};
use serde::Serialize;

use crate::corpus;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemoRow {
    pub example: String,
    pub status: Status,
}

fn lts(term: &ProcessTerm) -> protocheck_core::Lts {
    build_lts(term, &ExploreConfig::for_term(term)).expect("fixture terms are pure")
}

fn book_flight_trace() -> bool {
    let t = lts(&ProcessTerm::Intent(fixtures::book_flight()));
    traces(&t, 3).traces.iter().any(|tr| {
        matches!(
            tr.as_slice(),
            [TransitionLabel::Invoke { .. }, TransitionLabel::Execute { .. }, TransitionLabel::Result { .. }]
        )
    })
}

fn create_issue_trace() -> bool {
    let tool = ProcessTerm::Tool(fixtures::github_create_issue());
    let mut cfg = ExploreConfig::default();
    cfg.param_universe.insert("create_issue".into(), vec![fixtures::create_issue_params()]);
    let t = build_lts(&tool, &cfg).expect("pure");
    let want = [
        TransitionLabel::Call {
            name: "create_issue".into(),
            params: fixtures::create_issue_params(),
        },
        TransitionLabel::Tau {
            reason: protocheck_core::semantics::TauReason::Validate,
        },
        TransitionLabel::Execute {
            name: "create_issue".into(),
        },
        TransitionLabel::Result {
            output: Literal::text("ok:create_issue"),
        },
    ];
    traces(&t, 4).traces.contains(want.as_slice())
}

fn phi_image() -> bool {
    let want = Tool::new(
        "BookFlight",
        "Books a flight",
        JsonSchema {
            required: vec!["origin".into()],
            properties: [(
                "origin".to_string(),
                PropertySpec {
                    type_name: SlotType::String,
                    description: Some("Departure airport".into()),
                    enum_values: Some(fixtures::AIRPORTS.iter().map(|s| s.to_string()).collect()),
                },
            )]
            .into_iter()
            .collect(),
        },
    );
    phi(&ProcessTerm::Intent(fixtures::sgd_flight())).ok() == Some(ProcessTerm::Tool(want))
}

fn intent_bisimilar_to_image() -> bool {
    let s = ProcessTerm::Intent(fixtures::book_flight());
    let m = phi(&s).expect("sgd term");
    let cfg = ExploreConfig::for_term(&s);
    let (a, b) = (build_lts(&s, &cfg).expect("pure"), build_lts(&m, &cfg).expect("pure"));
    let unified = NormalizeOptions::unified();
    bisimilar(&a, &b, BisimMode::Weak, &unified).equivalent
        && trace_equivalent(&a, &b, 6, &unified).equivalent
        && !bisimilar(&a, &b, BisimMode::Strong, &unified).equivalent
}

fn transactionality_lost() -> bool {
    match phi_inverse(&ProcessTerm::Tool(fixtures::delete_user())) {
        Ok(MapOutcome::Mapped {
            term: ProcessTerm::Intent(i),
            warnings,
        }) => i.transactional == TriBool::Unknown && warnings.iter().any(|w| w.field == LossField::Transactionality),
        _ => false,
    }
}

fn undefined(term: ProcessTerm, reason: UndefinedReason) -> bool {
    matches!(phi_inverse(&term), Ok(o) if o.reason() == Some(reason))
}

fn plain_round_trip_diff() -> bool {
    let s = ProcessTerm::Intent(fixtures::book_flight());
    let Ok(r) = round_trip_report(&s, RoundTripMode::Plain) else {
        return false;
    };
    let diffs = report_diffs(&r);
    r.status == Status::Fail && diffs.len() == 1 && diffs.contains_key("BookFlight.transactional")
}

fn hidden_side_effect() -> bool {
    let (a, b) = fixtures::transfer_funds_pair();
    let back = |t: Tool| phi_inverse(&ProcessTerm::Tool(t)).ok().and_then(|o| o.term().cloned());
    match (back(a.clone()), back(b.clone())) {
        (Some(x), Some(y)) => structural_eq(&x, &y) && a.description != b.description,
        _ => false,
    }
}

fn plus_round_trip() -> bool {
    let s = ProcessTerm::Intent(fixtures::book_flight());
    phi_plus(&s).and_then(|m| phi_plus_inverse(&m)).ok() == Some(s)
}

fn density_anchors() -> bool {
    semantic_density("departure") == 0.0 && (semantic_density(fixtures::IATA_DESCRIPTION) - 0.3).abs() < 1e-12
}

fn p5_fixtures() -> bool {
    let ok = McpRegistry::from_tools(vec![fixtures::process_payment(), fixtures::create_order(), fixtures::verify_balance()]);
    let (mut a, b) = fixtures::dependent_pair();
    a.metadata.as_mut().expect("annotated").dependencies = Some(vec![protocheck_core::term::Dependency::new(
        "T_B",
        protocheck_core::term::Relation::Requires,
    )]);
    check_p5(&ok).pass && !check_p5(&McpRegistry::from_tools(vec![a, b])).pass
}

fn token_budget() -> bool {
    let cfg = TypecheckConfig::default();
    let fifty = token_report(&corpus::uniform_corpus(50, 100, 9), &cfg);
    let one = token_report(&corpus::uniform_corpus(1, 100, 9), &cfg);
    matches!((fifty, one), (Ok(f), Ok(o)) if f.below_fifth && (f.ratio - 0.19).abs() < 1e-9 && !o.below_fifth)
}

fn tools_lts(tools: Vec<Tool>) -> protocheck_core::Lts {
    lts(&ProcessTerm::par_all(tools.into_iter().map(ProcessTerm::Tool)))
}

fn approval_ordering() -> bool {
    let reg = McpRegistry::from_tools(vec![fixtures::tool_write()]);
    let bad = check_approval_ordering(&tools_lts(vec![fixtures::tool_write_severed()]), &reg);
    check_approval_ordering(&tools_lts(vec![fixtures::tool_write()]), &reg).passed() && bad.status == Status::Fail
}

fn dependency_ordering() -> bool {
    let (a, b) = fixtures::dependent_pair();
    let reg = McpRegistry::from_tools(vec![a.clone(), b.clone()]);
    let (sa, sb) = fixtures::dependent_pair_severed();
    check_dependency_ordering(&tools_lts(vec![a, b]), &reg).passed()
        && check_dependency_ordering(&tools_lts(vec![sa, sb]), &reg).status == Status::Fail
}

fn confinement() -> bool {
    check_confinement(&fixtures::tool_confined()).is_empty() && check_confinement(&fixtures::direct_leak()).len() == 1
}

fn inert_descriptions() -> bool {
    let reg = McpRegistry::from_tools(vec![fixtures::innocent_search()]);
    let clean = check_inert_descriptions(&reg, &[]);
    let misuse = ProcessTerm::call(fixtures::POISONED_DESCRIPTION, params([("query", Literal::text("x"))]));
    clean.passed() && !clean.warnings.is_empty() && check_inert_descriptions(&reg, &[misuse]).status == Status::Fail
}

/// A few seeded random intents checked against their images.
fn seeded_instances(seed: u64) -> bool {
    let mut rng = corpus::rng(seed);
    (0..20).all(|i| {
        let intent = corpus::random_intent(&mut rng, i);
        let cfg = corpus::matched_config(&intent);
        let s = ProcessTerm::Intent(intent);
        let m = phi(&s).expect("sgd term");
        let (a, b) = (build_lts(&s, &cfg).expect("pure"), build_lts(&m, &cfg).expect("pure"));
        bisimilar(&a, &b, BisimMode::Weak, &NormalizeOptions::unified()).equivalent
    })
}

/// Every example with its outcome.
pub fn demo_matrix(seed: u64) -> Vec<DemoRow> {
    let cfg = TypecheckConfig::default();
    let fetch_reg = McpRegistry::from_tools(vec![fixtures::fetch_user_data(), fixtures::use_cached_data()]);
    let checks: Vec<(&str, bool)> = vec![
        ("BookFlight trace invoke-execute-result", book_flight_trace()),
        ("create_issue trace call-validate-execute-result", create_issue_trace()),
        ("forward mapping image of the flight intent", phi_image()),
        ("BookFlight weakly bisimilar and trace equivalent to its image", intent_bisimilar_to_image()),
        ("plain inverse loses transactionality of delete_user", transactionality_lost()),
        ("resource has no intent counterpart", undefined(fixtures::app_log_resource(), UndefinedReason::NoSgdEquivalentResource)),
        ("capability negotiation has no intent counterpart", undefined(fixtures::init_discovery(), UndefinedReason::NoSgdEquivalentInitialize)),
        ("plain round trip differs only in transactionality", plain_round_trip_diff()),
        ("hidden side effect collapses under the plain inverse", hidden_side_effect()),
        ("metadata-preserving round trip is exact", plus_round_trip()),
        ("semantic density anchors", density_anchors()),
        ("delete without approval fails P2", !check_p2(&fixtures::delete_user_unapproved()).pass && check_p2(&fixtures::delete_user_plus()).pass),
        ("failure modes with fallback pass P3", check_p3(&fixtures::fetch_user_data(), &fetch_reg).pass),
        ("search_repositories summary over budget fails P4", !check_p4(&fixtures::search_repositories(), &cfg).pass),
        ("payment dependencies pass P5 and a 2-cycle fails", p5_fixtures()),
        ("50-tool progressive disclosure budget", token_budget()),
        ("approval ordering with severed mutant", approval_ordering()),
        ("dependency ordering with severed mutant", dependency_ordering()),
        ("credential confinement and direct leak", confinement()),
        ("poisoned description stays inert", inert_descriptions()),
        ("seeded random intents bisimilar to images", seeded_instances(seed)),
    ];
    checks
        .into_iter()
        .map(|(example, ok)| DemoRow {
            example: example.into(),
            status: if ok { Status::Pass } else { Status::Fail },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_examples_pass() {
        for row in super::demo_matrix(0) {
            assert_eq!(row.status, protocheck_core::Status::Pass, "{}", row.example);
        }
    }
}
