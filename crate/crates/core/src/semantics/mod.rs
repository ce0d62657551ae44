//! Transition rules of both calculi and bounded LTS construction.

mod config;
mod label;
mod lts;
mod step;

pub use config::{
    derive_params_for_intent, derive_params_for_tool, derive_universe, placeholder, ApprovalPolicy,
    EffectOracle, ExploreConfig, OracleEntry,
};
pub use label::{TauReason, TransitionLabel};
pub use lts::{build_lts, traces, Lts, TraceSet};
pub use step::{
    conforms, matches_filter, mcp_step, missing_slots, sgd_step, successors, violations, Move,
    StepError, Successors,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::term::{
        canonicalize, params, Intent, JsonSchema, Literal, ProcessTerm, PropertySpec, SlotDef, SlotType,
        TriBool,
    };
    use alloc::collections::BTreeMap;
    use alloc::string::String;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn labels(moves: &[Move]) -> Vec<String> {
        moves.iter().map(|(l, _)| alloc::format!("{l}")).collect()
    }

    #[test]
    fn nil_has_one_state_and_no_moves() {
        let cfg = ExploreConfig::default();
        assert!(sgd_step(&ProcessTerm::Nil, &cfg).unwrap().is_empty());
        let lts = build_lts(&ProcessTerm::Nil, &cfg).unwrap();
        assert_eq!((lts.len(), lts.transitions.len()), (1, 0));
        let t = traces(&lts, 3);
        assert_eq!(t.traces.len(), 1);
        assert!(t.traces.contains(&Vec::new()));
    }

    #[test]
    fn book_flight_lts_has_five_states() {
        // Intent, ExecuteS, ErrorT(MissingSlots), ResultT, Nil.
        let term = ProcessTerm::Intent(fixtures::book_flight());
        let lts = build_lts(&term, &ExploreConfig::for_term(&term)).unwrap();
        assert_eq!(lts.len(), 5);
        assert_eq!(lts.transitions.len(), 5);
        assert!(!lts.truncated);
        assert!(lts.is_well_formed());
    }

    #[test]
    fn book_flight_trace_invoke_execute_result() {
        let term = ProcessTerm::Intent(fixtures::book_flight());
        let lts = build_lts(&term, &ExploreConfig::for_term(&term)).unwrap();
        let ts = traces(&lts, 3);
        let found = ts.traces.iter().any(|t| {
            matches!(
                t.as_slice(),
                [
                    TransitionLabel::Invoke { .. },
                    TransitionLabel::Execute { .. },
                    TransitionLabel::Result { .. }
                ]
            )
        });
        assert!(found);
    }

    #[test]
    fn missing_date_is_reported() {
        let mut p = fixtures::book_flight_full_params();
        p.remove("date");
        let mut cfg = ExploreConfig::default();
        cfg.param_universe.insert("BookFlight".into(), vec![p.clone()]);
        let moves = sgd_step(&ProcessTerm::Intent(fixtures::book_flight()), &cfg).unwrap();
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].1, ProcessTerm::error("MissingSlots", "date"));
    }

    #[test]
    fn twin_resources_form_six_states() {
        // R|R, R|Res, Res|Res, R, Res, 0
        let r = fixtures::app_log_resource();
        let lts = build_lts(&ProcessTerm::par(r.clone(), r), &ExploreConfig::default()).unwrap();
        assert_eq!(lts.len(), 6);
    }

    #[test]
    fn create_issue_trace() {
        let tool = ProcessTerm::Tool(fixtures::github_create_issue());
        let mut cfg = ExploreConfig::default();
        cfg.param_universe
            .insert("create_issue".into(), vec![fixtures::create_issue_params()]);
        let lts = build_lts(&tool, &cfg).unwrap();
        let ts = traces(&lts, 4);
        let want = vec![
            TransitionLabel::Call {
                name: "create_issue".into(),
                params: fixtures::create_issue_params(),
            },
            TransitionLabel::Tau {
                reason: TauReason::Validate,
            },
            TransitionLabel::Execute {
                name: "create_issue".into(),
            },
            TransitionLabel::Result {
                output: Literal::text("ok:create_issue"),
            },
        ];
        assert!(ts.traces.contains(&want));
    }

    #[test]
    fn tool_write_traces_have_both_approval_branches() {
        let tool = ProcessTerm::Tool(fixtures::tool_write());
        let lts = build_lts(&tool, &ExploreConfig::for_term(&tool)).unwrap();
        let ts = traces(&lts, 5);
        let shapes: Vec<Vec<String>> = ts
            .traces
            .iter()
            .map(|t| t.iter().map(|l| alloc::format!("{l}")).collect())
            .collect();
        let has = |want: &[&str]| {
            shapes
                .iter()
                .any(|s| s.len() == want.len() && s.iter().zip(want).all(|(a, b)| a.starts_with(b)))
        };
        assert!(has(&["call(update_record", "tau[validate]", "approval(update_record, true)", "execute(update_record)", "result("]));
        assert!(has(&["call(update_record", "tau[validate]", "approval(update_record, false)", "result(\"cancelled\")"]));
    }

    #[test]
    fn wrong_calculus_is_rejected() {
        let cfg = ExploreConfig::default();
        let tool = ProcessTerm::Tool(fixtures::github_create_issue());
        let intent = ProcessTerm::Intent(fixtures::book_flight());
        assert_eq!(sgd_step(&tool, &cfg), Err(StepError::NotSgdTerm));
        assert_eq!(mcp_step(&intent, &cfg), Err(StepError::NotMcpTerm));
        assert_eq!(
            build_lts(&ProcessTerm::par(tool, intent), &cfg),
            Err(StepError::MixedCalculus)
        );
    }

    #[test]
    fn replication_is_bounded_and_reported() {
        let term = ProcessTerm::repl(fixtures::app_log_resource());
        let lts = build_lts(&term, &ExploreConfig::default()).unwrap();
        assert!(lts.truncated);
        let inert = ProcessTerm::repl(ProcessTerm::Nil);
        assert!(!build_lts(&inert, &ExploreConfig::default()).unwrap().truncated);
    }

    #[test]
    fn state_cap_truncates() {
        let r = fixtures::app_log_resource();
        let cfg = ExploreConfig {
            max_states: 3,
            ..ExploreConfig::default()
        };
        let lts = build_lts(&ProcessTerm::par(r.clone(), r), &cfg).unwrap();
        assert_eq!(lts.len(), 3);
        assert!(lts.truncated);
        assert!(lts.is_well_formed());
    }

    #[test]
    fn discovery_shows_summaries_then_details() {
        let list = ProcessTerm::ToolsList {
            tools: vec![fixtures::search_repositories(), fixtures::github_create_issue()],
            caps: Default::default(),
        };
        let cfg = ExploreConfig {
            discovery_filters: vec!["GITHUB".into()],
            ..ExploreConfig::default()
        };
        let moves = mcp_step(&list, &cfg).unwrap();
        // Matches search_repositories through its summary only.
        assert_eq!(labels(&moves), ["list(\"GITHUB\")"]);
        let ProcessTerm::ToolSummary { tool } = &moves[0].1 else {
            panic!("{:?}", moves[0].1)
        };
        let next = mcp_step(&moves[0].1, &cfg).unwrap();
        assert_eq!(next[0].0, TransitionLabel::Detail { name: tool.name.clone() });
    }

    #[test]
    fn successors_are_sorted_and_stable() {
        let term = ProcessTerm::par(
            ProcessTerm::Tool(fixtures::github_create_issue()),
            ProcessTerm::Intent(fixtures::book_flight()),
        );
        let cfg = ExploreConfig::for_term(&term);
        let a = successors(&term, &cfg);
        let b = successors(&term, &cfg);
        assert_eq!(a, b);
        let mut sorted = a.moves.clone();
        sorted.sort();
        assert_eq!(a.moves, sorted);
    }

    fn component_fixtures() -> Vec<ProcessTerm> {
        vec![
            ProcessTerm::Nil,
            fixtures::app_log_resource(),
            ProcessTerm::result(Literal::Integer(7)),
            ProcessTerm::error("E", "m"),
            ProcessTerm::Tool(fixtures::delete_user_plus()),
            ProcessTerm::call("t", params([("a", Literal::Integer(1))])),
            ProcessTerm::Token { from: "T_A".into() },
        ]
    }

    #[test]
    fn par_successors_match_interleaving() {
        let cfg = ExploreConfig::default();
        for a in component_fixtures() {
            for b in component_fixtures() {
                let got = successors(&ProcessTerm::par(a.clone(), b.clone()), &cfg).moves;
                let mut want = Vec::new();
                for (l, a2) in successors(&a, &cfg).moves {
                    want.push((l, canonicalize(&ProcessTerm::par(a2, b.clone()))));
                }
                for (l, b2) in successors(&b, &cfg).moves {
                    want.push((l, canonicalize(&ProcessTerm::par(a.clone(), b2))));
                }
                want.sort();
                want.dedup();
                assert_eq!(got, want, "{a} | {b}");
            }
        }
    }

    proptest! {
        #[test]
        fn validation_agrees_with_required_slot_check(
            slots in prop::collection::btree_map("[a-e]", prop::collection::vec(prop::sample::select(vec!["x", "y"]), 0..2), 0..5),
            split in 0usize..5,
            provided in prop::collection::btree_map("[a-f]", prop::sample::select(vec!["x", "y", "z"]), 0..6),
        ) {
            let mut intent = Intent::new("I", "d", TriBool::True);
            for (i, (name, mut vals)) in slots.into_iter().enumerate() {
                vals.sort();
                vals.dedup();
                let slot = SlotDef::new(name, SlotType::String, "").with_values(vals);
                if i < split { intent.required.push(slot) } else { intent.optional.push(slot) }
            }
            let schema = JsonSchema {
                required: intent.required.iter().map(|s| s.name.clone()).collect(),
                properties: intent.slots().map(|s| (s.name.clone(), PropertySpec {
                    type_name: s.type_name,
                    description: Some(s.description.clone()),
                    enum_values: if s.possible_values.is_empty() { None } else { Some(s.possible_values.clone()) },
                })).collect::<BTreeMap<_, _>>(),
            };
            let p: crate::term::Params = provided.into_iter().map(|(k, v)| (k, Literal::text(v))).collect();
            let enum_ok = intent.slots().all(|s| match p.get(&s.name) {
                Some(v) if !s.possible_values.is_empty() => s.possible_values.contains(&v.enum_form()),
                _ => true,
            });
            prop_assert_eq!(conforms(&p, &schema), missing_slots(&intent, &p).is_empty() && enum_ok);
        }
    }
}
