use super::*;
use crate::fixtures;
use crate::semantics::{build_lts, ExploreConfig};
use crate::term::{canonicalize, params, Relation, Tool};
use proptest::prelude::*;

fn lts_of(term: &ProcessTerm) -> Lts {
    build_lts(term, &ExploreConfig::for_term(term)).unwrap()
}

fn tools_term(tools: &[Tool]) -> ProcessTerm {
    ProcessTerm::par_all(tools.iter().cloned().map(ProcessTerm::Tool))
}

#[test]
fn approval_guard_is_respected() {
    let reg = McpRegistry::from_tools(vec![fixtures::tool_write()]);
    let guarded = lts_of(&tools_term(&[fixtures::tool_write()]));
    assert!(check_approval_ordering(&guarded, &reg).passed());
    let twice = lts_of(&tools_term(&[fixtures::tool_write(), fixtures::tool_write()]));
    assert!(check_approval_ordering(&twice, &reg).passed());
}

#[test]
fn severed_approval_is_caught_with_trace() {
    let reg = McpRegistry::from_tools(vec![fixtures::tool_write()]);
    let lts = lts_of(&tools_term(&[fixtures::tool_write_severed()]));
    let r = check_approval_ordering(&lts, &reg);
    assert_eq!(r.status, Status::Fail);
    let Some(Witness::Trace { labels, position }) = r.witnesses.iter().find(|w| matches!(w, Witness::Trace { .. })) else {
        panic!("{r:?}")
    };
    assert!(lts.replays(labels));
    assert_eq!(labels[position.unwrap()], TransitionLabel::Execute { name: "update_record".into() });
    assert!(oracle::approval_violation(&lts, &reg, 6).is_some());
}

#[test]
fn dependency_guard_is_respected() {
    let (a, b) = fixtures::dependent_pair();
    let reg = McpRegistry::from_tools(vec![a.clone(), b.clone()]);
    let lts = lts_of(&tools_term(&[a, b]));
    assert!(check_dependency_ordering(&lts, &reg).passed());
    assert!(oracle::dependency_violation(&lts, &reg, 12).is_none());

    let (sa, sb) = fixtures::dependent_pair_severed();
    let severed = lts_of(&tools_term(&[sa, sb]));
    let r = check_dependency_ordering(&severed, &reg);
    assert_eq!(r.status, Status::Fail);
    assert!(oracle::dependency_violation(&severed, &reg, 12).is_some());
}

#[test]
fn payment_chain() {
    let reg = McpRegistry::from_tools(fixtures::chain_tools(true));
    let guarded = lts_of(&tools_term(&fixtures::chain_tools(true)));
    assert!(check_dependency_ordering(&guarded, &reg).passed());
    let loose = lts_of(&tools_term(&fixtures::chain_tools(false)));
    assert!(!check_dependency_ordering(&loose, &reg).passed());
}

#[test]
fn truncated_clean_run_is_inconclusive() {
    let reg = McpRegistry::from_tools(vec![fixtures::tool_write()]);
    let lts = lts_of(&ProcessTerm::repl(ProcessTerm::Tool(fixtures::tool_write())));
    assert!(lts.truncated);
    assert_eq!(check_approval_ordering(&lts, &reg).status, Status::Inconclusive);
}

#[test]
fn confinement_findings() {
    assert!(check_confinement(&fixtures::tool_confined()).is_empty());
    let leak = check_confinement(&fixtures::direct_leak());
    assert_eq!(leak.len(), 1);
    assert_eq!(leak[0].channel, "key");
    assert_eq!(leak[0].position, "result payload");
    let in_params = ProcessTerm::restrict("k", ProcessTerm::call("t", params([("a", Literal::var("k"))])));
    assert_eq!(check_confinement(&in_params)[0].position, "parameter `a` of `t`");
    // Free names are not restricted.
    assert!(check_confinement(&ProcessTerm::result(Literal::var("key"))).is_empty());
    assert!(!confinement_report(&fixtures::direct_leak()).passed());
}

#[test]
fn poisoned_description_is_inert_but_flagged() {
    let reg = McpRegistry::from_tools(vec![fixtures::innocent_search()]);
    let r = check_inert_descriptions(&reg, &[]);
    assert!(r.passed());
    assert_eq!(r.warnings.len(), 1);

    let misuse = ProcessTerm::call(fixtures::POISONED_DESCRIPTION, params([("query", Literal::text("x"))]));
    let bad = check_inert_descriptions(&reg, &[misuse]);
    assert_eq!(bad.status, Status::Fail);
}

fn leaf_with(name: &str) -> impl Strategy<Value = ProcessTerm> {
    let n = String::from(name);
    prop_oneof![
        Just(ProcessTerm::result(Literal::var(n.clone()))),
        Just(ProcessTerm::result(Literal::text("plain"))),
        Just(ProcessTerm::call("t", params([("p", Literal::var(n.clone()))]))),
        Just(ProcessTerm::ToolCall { name: "t".into(), params: params([("p", Literal::Integer(1))]), credentials: vec![n] }),
        Just(ProcessTerm::Nil),
    ]
}

fn arb_labelled_lts() -> impl Strategy<Value = Lts> {
    (1usize..=8).prop_flat_map(|n| {
        let label = prop::sample::select(vec![
            TransitionLabel::Approval { tool: "w".into(), confirm: true },
            TransitionLabel::Execute { name: "w".into() },
            TransitionLabel::Execute { name: "r".into() },
            TransitionLabel::Execute { name: "a".into() },
        ]);
        // Acyclic, so bounded path enumeration is exhaustive.
        prop::collection::vec((0..n, label, 0..n), 0..=(2 * n)).prop_map(move |e| {
            let dag = e.into_iter().filter(|(s, _, t)| s != t).map(|(s, l, t)| (s.min(t), l, s.max(t))).collect();
            Lts::from_edges(n, 0, dag)
        })
    })
}

fn oracle_registry() -> McpRegistry {
    let (mut a, mut r) = fixtures::dependent_pair();
    a.name = "a".into();
    r.name = "r".into();
    r.metadata.as_mut().unwrap().dependencies = Some(vec![crate::term::Dependency::new("a", Relation::Requires)]);
    McpRegistry::from_tools(vec![a, r, fixtures::tool_write()].into_iter().map(|mut t| {
        if t.name == "update_record" {
            t.name = "w".into();
        }
        t
    }).collect())
}

proptest! {
    #[test]
    fn monitor_agrees_with_path_enumeration(lts in arb_labelled_lts()) {
        let reg = oracle_registry();
        let bound = lts.len();
        prop_assert_eq!(check_approval_ordering(&lts, &reg).passed(), oracle::approval_violation(&lts, &reg, bound).is_none());
        prop_assert_eq!(check_dependency_ordering(&lts, &reg).passed(), oracle::dependency_violation(&lts, &reg, bound).is_none());
    }

    #[test]
    fn confinement_ignores_binder_names_and_par_order(
        body in prop::collection::vec(leaf_with("key"), 1..4),
        rename in "[a-z]{1,4}",
    ) {
        let term = ProcessTerm::restrict("key", ProcessTerm::par_all(body.clone()));
        let renamed_body: Vec<ProcessTerm> = body.iter().rev().map(|t| crate::term::substitute(t, "key", &Literal::var(rename.clone()))).collect();
        let renamed = ProcessTerm::restrict(rename.clone(), ProcessTerm::par_all(renamed_body));
        let shape = |fs: Vec<ConfinementFinding>| fs.into_iter().map(|f| f.position).collect::<Vec<_>>();
        let a = shape(check_confinement(&term));
        prop_assert_eq!(&a, &shape(check_confinement(&renamed)));
        prop_assert_eq!(&a, &shape(check_confinement(&canonicalize(&term))));
    }
}
