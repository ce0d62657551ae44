//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use protocheck::corpus;
use protocheck_core::equivalence::{
    bisimilar, brute_force_bisim, trace_equivalent, BisimMode, NormalizeOptions,
};
use protocheck_core::fixtures;
use protocheck_core::mapping::{
    phi, phi_inverse, phi_plus, phi_plus_inverse, report_diffs, round_trip_report, structural_eq, LossField,
    MapError, MapOutcome, MetadataField, RoundTripMode, UndefinedReason,
};
use protocheck_core::report::Witness;
use protocheck_core::security::oracle::{approval_violation, dependency_violation};
use protocheck_core::security::{
    check_approval_ordering, check_confinement, check_dependency_ordering, check_inert_descriptions,
};
use protocheck_core::semantics::{Move, TauReason};
use protocheck_core::term::{params, Dependency, PropertySpec, Relation, SlotType};
use protocheck_core::typecheck::{
    check_p2, check_p3, check_p5, semantic_density, token_report, typecheck_registry, Principle, TypecheckConfig,
};
use protocheck_core::{
    build_lts, canonicalize, mcp_step, sgd_step, ExploreConfig, Intent, JsonSchema, Literal, Lts, McpRegistry,
    ProcessTerm, SlotDef, Status, Tool, TransitionLabel, TriBool,
};

const SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn lts_of(term: &ProcessTerm, cfg: &ExploreConfig) -> Lts {
    build_lts(term, cfg).expect("pure fixture term")
}

// Criterion 1 --------------------------------------------------------------

fn canon_set(moves: Vec<Move>) -> BTreeSet<Move> {
    moves.into_iter().map(|(l, t)| (l, canonicalize(&t))).collect()
}

struct RuleCase {
    rule: &'static str,
    term: ProcessTerm,
    cfg: ExploreConfig,
    sgd: bool,
    expected: Vec<Move>,
}

fn city_intent(t: TriBool) -> Intent {
    Intent::new("FindHotel", "Finds a hotel.", t).require(SlotDef::new("city", SlotType::String, "City name"))
}

fn paris() -> Literal {
    Literal::text("Paris")
}

fn issue_schema() -> JsonSchema {
    let prop = |desc: &str, values: Option<Vec<String>>| PropertySpec {
        type_name: SlotType::String,
        description: Some(desc.into()),
        enum_values: values,
    };
    JsonSchema {
        required: vec!["repo".into(), "title".into()],
        properties: [
            ("repo".to_string(), prop("Repository", None)),
            ("title".to_string(), prop("Issue title", None)),
            ("state".to_string(), prop("State", Some(vec!["open".into(), "closed".into()]))),
        ]
        .into_iter()
        .collect(),
    }
}

fn issue_tool() -> Tool {
    Tool::new("open_issue", "Opens an issue.", issue_schema())
}

fn rule_cases() -> Vec<RuleCase> {
    let with_universe = |name: &str, maps: Vec<protocheck_core::term::Params>| {
        let mut cfg = ExploreConfig::default();
        cfg.param_universe.insert(name.into(), maps);
        cfg
    };
    let full = params([("city", paris())]);
    let good_issue = params([("repo", Literal::text("r")), ("title", Literal::text("t"))]);
    let bad_issue = params([("title", Literal::text("t")), ("state", Literal::text("stale"))]);
    let summarized = Tool::new("beta_write", "Writes beta rows.", JsonSchema::default()).with_metadata(
        protocheck_core::ToolMetadata {
            summary: Some("Writes.".into()),
            ..Default::default()
        },
    );
    let plain = Tool::new("alpha_search", "Searches alpha.", JsonSchema::default());

    let init_cfg = ExploreConfig {
        server_caps: ["tools".to_string()].into_iter().collect(),
        server_tools: vec![plain.clone()],
        ..ExploreConfig::default()
    };
    let list_cfg = ExploreConfig {
        discovery_filters: vec![String::new(), "alpha".into()],
        ..ExploreConfig::default()
    };

    let mut exec_cfg = ExploreConfig::default();
    exec_cfg.effect_oracle = exec_cfg
        .effect_oracle
        .with("open_issue", good_issue.clone(), Literal::text("issue#1"));

    vec![
        RuleCase {
            rule: "INVOK-OK",
            term: ProcessTerm::Intent(city_intent(TriBool::True)),
            cfg: with_universe("FindHotel", vec![full.clone()]),
            sgd: true,
            expected: vec![(
                TransitionLabel::Invoke {
                    name: "FindHotel".into(),
                    params: full.clone(),
                },
                ProcessTerm::execute("FindHotel", full.clone(), TriBool::True),
            )],
        },
        RuleCase {
            rule: "INVOK-ERR",
            term: ProcessTerm::Intent(city_intent(TriBool::False)),
            cfg: with_universe("FindHotel", vec![params::<_, String>([])]),
            sgd: true,
            expected: vec![(
                TransitionLabel::Invoke {
                    name: "FindHotel".into(),
                    params: params::<_, String>([]),
                },
                ProcessTerm::error("MissingSlots", "city"),
            )],
        },
        RuleCase {
            rule: "COLLECT",
            term: ProcessTerm::collect(
                "city",
                paris(),
                ProcessTerm::execute("FindHotel", params([("city", Literal::var("city"))]), TriBool::True),
            ),
            cfg: ExploreConfig::default(),
            sgd: true,
            expected: vec![(
                TransitionLabel::Collect {
                    slot: "city".into(),
                    value: paris(),
                },
                ProcessTerm::execute("FindHotel", full.clone(), TriBool::True),
            )],
        },
        RuleCase {
            rule: "EXECUTE-TX",
            term: ProcessTerm::execute("FindHotel", full.clone(), TriBool::True),
            cfg: ExploreConfig::default(),
            sgd: true,
            expected: vec![(
                TransitionLabel::Execute {
                    name: "FindHotel".into(),
                },
                ProcessTerm::result(Literal::text("ok:FindHotel")),
            )],
        },
        RuleCase {
            rule: "EXECUTE",
            term: ProcessTerm::execute("FindHotel", full.clone(), TriBool::False),
            cfg: ExploreConfig::default(),
            sgd: true,
            expected: vec![(
                TransitionLabel::Execute {
                    name: "FindHotel".into(),
                },
                ProcessTerm::result(Literal::text("ok:FindHotel")),
            )],
        },
        RuleCase {
            rule: "PAR",
            term: ProcessTerm::par(
                ProcessTerm::result(paris()),
                ProcessTerm::execute("FindHotel", full.clone(), TriBool::False),
            ),
            cfg: ExploreConfig::default(),
            sgd: true,
            expected: vec![
                (
                    TransitionLabel::Result { output: paris() },
                    ProcessTerm::par(ProcessTerm::Nil, ProcessTerm::execute("FindHotel", full.clone(), TriBool::False)),
                ),
                (
                    TransitionLabel::Execute {
                        name: "FindHotel".into(),
                    },
                    ProcessTerm::par(
                        ProcessTerm::result(paris()),
                        ProcessTerm::result(Literal::text("ok:FindHotel")),
                    ),
                ),
            ],
        },
        RuleCase {
            rule: "RES",
            term: ProcessTerm::restrict("k", ProcessTerm::execute("FindHotel", full.clone(), TriBool::True)),
            cfg: ExploreConfig::default(),
            sgd: true,
            expected: vec![(
                TransitionLabel::Execute {
                    name: "FindHotel".into(),
                },
                ProcessTerm::restrict("k", ProcessTerm::result(Literal::text("ok:FindHotel"))),
            )],
        },
        RuleCase {
            rule: "INIT",
            term: ProcessTerm::Initialize {
                caps: ["sampling".to_string(), "tools".to_string()].into_iter().collect(),
            },
            cfg: init_cfg,
            sgd: false,
            expected: vec![(
                TransitionLabel::Tau {
                    reason: TauReason::Negotiate,
                },
                ProcessTerm::ToolsList {
                    tools: vec![plain.clone()],
                    caps: ["tools".to_string()].into_iter().collect(),
                },
            )],
        },
        RuleCase {
            rule: "DISCOVER",
            term: ProcessTerm::ToolsList {
                tools: vec![plain.clone(), summarized.clone()],
                caps: BTreeSet::new(),
            },
            cfg: list_cfg,
            sgd: false,
            expected: vec![
                (
                    TransitionLabel::List { filter: String::new() },
                    ProcessTerm::par(
                        ProcessTerm::Tool(plain.clone()),
                        ProcessTerm::ToolSummary { tool: summarized },
                    ),
                ),
                (
                    TransitionLabel::List { filter: "alpha".into() },
                    ProcessTerm::Tool(plain),
                ),
            ],
        },
        RuleCase {
            rule: "CALL",
            term: ProcessTerm::Tool(issue_tool()),
            cfg: with_universe("open_issue", vec![good_issue.clone(), bad_issue.clone()]),
            sgd: false,
            expected: [good_issue.clone(), bad_issue.clone()]
                .into_iter()
                .map(|p| {
                    (
                        TransitionLabel::Call {
                            name: "open_issue".into(),
                            params: p.clone(),
                        },
                        ProcessTerm::Validate {
                            tool: "open_issue".into(),
                            params: p,
                            schema: issue_schema(),
                            gate: None,
                        },
                    )
                })
                .collect(),
        },
        RuleCase {
            rule: "VALIDATE-OK",
            term: ProcessTerm::Validate {
                tool: "open_issue".into(),
                params: good_issue.clone(),
                schema: issue_schema(),
                gate: None,
            },
            cfg: ExploreConfig::default(),
            sgd: false,
            expected: vec![(
                TransitionLabel::Tau {
                    reason: TauReason::Validate,
                },
                ProcessTerm::call("open_issue", good_issue.clone()),
            )],
        },
        RuleCase {
            rule: "VALIDATE-ERR",
            term: ProcessTerm::Validate {
                tool: "open_issue".into(),
                params: bad_issue,
                schema: issue_schema(),
                gate: None,
            },
            cfg: ExploreConfig::default(),
            sgd: false,
            expected: vec![(
                TransitionLabel::Tau {
                    reason: TauReason::Validate,
                },
                ProcessTerm::error("ValidationError", "repo, state not in enum"),
            )],
        },
        RuleCase {
            rule: "EXECUTE (MCP)",
            term: ProcessTerm::call("open_issue", good_issue),
            cfg: exec_cfg,
            sgd: false,
            expected: vec![(
                TransitionLabel::Execute {
                    name: "open_issue".into(),
                },
                ProcessTerm::result(Literal::text("issue#1")),
            )],
        },
        RuleCase {
            rule: "RESOURCE",
            term: ProcessTerm::resource("file:///app.log", "boot ok"),
            cfg: ExploreConfig::default(),
            sgd: false,
            expected: vec![(
                TransitionLabel::Read {
                    uri: "file:///app.log".into(),
                },
                ProcessTerm::result(Literal::text("boot ok")),
            )],
        },
    ]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cases = rule_cases();
    for case in &cases {
        let moves = if case.sgd {
            sgd_step(&case.term, &case.cfg)
        } else {
            mcp_step(&case.term, &case.cfg)
        }
        .map_err(|e| format!("{}: {e}", case.rule))?;
        let got = canon_set(moves);
        let want = canon_set(case.expected.clone());
        ensure(got == want, || format!("{}: got {got:?}, want {want:?}", case.rule))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{}/14 rule fixtures exact in {elapsed:.2?}", cases.len()))
}

// Criteria 2 and 4 ---------------------------------------------------------

fn intent_corpus() -> Vec<Intent> {
    let mut rng = corpus::rng(SEED);
    (0..200).map(|i| corpus::random_intent(&mut rng, i)).collect()
}

fn intent_and_image(intent: &Intent) -> (Lts, Lts) {
    let cfg = corpus::matched_config(intent);
    let s = ProcessTerm::Intent(intent.clone());
    let m = phi(&s).expect("intent maps");
    (lts_of(&s, &cfg), lts_of(&m, &cfg))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let intents = intent_corpus();
    let flags: BTreeSet<TriBool> = intents.iter().map(|i| i.transactional).collect();
    ensure(flags.len() == 2, || "corpus lacks one transactionality value".into())?;
    let unified = NormalizeOptions::unified();
    let mut ok = 0;
    for intent in &intents {
        let (a, b) = intent_and_image(intent);
        let v = bisimilar(&a, &b, BisimMode::Weak, &unified);
        ensure(v.equivalent && !v.inconclusive, || format!("{} not bisimilar: {:?}", intent.name, v.witness))?;
        ok += 1;
    }
    let (a, b) = intent_and_image(&fixtures::book_flight());
    ensure(!bisimilar(&a, &b, BisimMode::Strong, &unified).equivalent, || {
        "BookFlight unexpectedly strongly bisimilar".into()
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("weak {ok}/200, strong fails on BookFlight, {elapsed:.2?}"))
}

fn criterion_4() -> Outcome {
    let unified = NormalizeOptions::unified();
    let mut ok = 0;
    for intent in intent_corpus() {
        let (a, b) = intent_and_image(&intent);
        let v = trace_equivalent(&a, &b, 6, &unified);
        ensure(v.equivalent, || format!("{} traces differ: {:?}", intent.name, v.witness))?;
        ok += 1;
    }
    let act = |n: &str| TransitionLabel::Execute { name: n.into() };
    // a.(b + c) against a.b + a.c
    let late = Lts::from_edges(4, 0, vec![(0, act("a"), 1), (1, act("b"), 2), (1, act("c"), 3)]);
    let early = Lts::from_edges(5, 0, vec![(0, act("a"), 1), (1, act("b"), 2), (0, act("a"), 3), (3, act("c"), 4)]);
    let opts = NormalizeOptions::default();
    let traces_eq = trace_equivalent(&late, &early, 6, &opts).equivalent;
    let bisim = bisimilar(&late, &early, BisimMode::Strong, &opts).equivalent
        || bisimilar(&late, &early, BisimMode::Weak, &opts).equivalent;
    ensure(traces_eq && !bisim, || format!("separating pair: traces {traces_eq}, bisimilar {bisim}"))?;
    Ok(format!("trace-equivalent {ok}/200; separating pair trace-equivalent, not bisimilar"))
}

// Criterion 3 --------------------------------------------------------------

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = corpus::rng(SEED);
    let labels = corpus::abstract_labels();
    let opts = NormalizeOptions::default();
    let mut equivalent = 0;
    for i in 0..500 {
        let (a, b) = corpus::random_lts_pair(&mut rng, 8, &labels);
        for mode in [BisimMode::Strong, BisimMode::Weak] {
            let fast = bisimilar(&a, &b, mode, &opts).equivalent;
            let slow = brute_force_bisim(&a, &b, mode, &opts).map_err(|e| e.to_string())?.equivalent;
            ensure(fast == slow, || format!("pair {i} {mode:?}: refinement {fast}, oracle {slow}"))?;
            equivalent += usize::from(fast);
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("500/500 pairs agree in both modes ({equivalent} equivalent verdicts), {elapsed:.2?}"))
}

// Criterion 5 --------------------------------------------------------------

fn criterion_5() -> Outcome {
    let mut passed = 0;

    match phi_inverse(&ProcessTerm::Tool(fixtures::delete_user())) {
        Ok(MapOutcome::Mapped {
            term: ProcessTerm::Intent(i),
            warnings,
        }) if i.transactional == TriBool::Unknown
            && warnings.iter().any(|w| w.field == LossField::Transactionality) =>
        {
            passed += 1
        }
        other => return Err(format!("delete_user inverse: {other:?}")),
    }

    for (term, reason) in [
        (fixtures::app_log_resource(), UndefinedReason::NoSgdEquivalentResource),
        (fixtures::init_discovery(), UndefinedReason::NoSgdEquivalentInitialize),
    ] {
        let got = phi_inverse(&term).map_err(|e| e.to_string())?.reason();
        ensure(got == Some(reason), || format!("expected {reason:?}, got {got:?}"))?;
        passed += 1;
    }

    let report = round_trip_report(&ProcessTerm::Intent(fixtures::book_flight()), RoundTripMode::Plain)
        .map_err(|e| e.to_string())?;
    let diffs = report_diffs(&report);
    let want = [("BookFlight.transactional".to_string(), ("true".to_string(), "unknown".to_string()))];
    ensure(report.status == Status::Fail && diffs == want.into_iter().collect(), || {
        format!("round trip diffs: {diffs:?}")
    })?;
    passed += 1;

    let (a, b) = fixtures::transfer_funds_pair();
    let back = |t: &Tool| phi_inverse(&ProcessTerm::Tool(t.clone())).ok().and_then(|o| o.term().cloned());
    match (back(&a), back(&b)) {
        (Some(x), Some(y)) if structural_eq(&x, &y) && a != b => passed += 1,
        other => return Err(format!("transfer_funds images: {other:?}")),
    }
    Ok(format!("{passed}/5 checks"))
}

// Criterion 6 --------------------------------------------------------------

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = corpus::rng(SEED);
    for i in 0..1000 {
        let intent = corpus::annotated_intent(&mut rng, i);
        let s = ProcessTerm::Intent(intent);
        let back = phi_plus(&s).and_then(|m| phi_plus_inverse(&m)).map_err(|e| format!("intent {i}: {e}"))?;
        ensure(back == s, || format!("intent {i} changed: {back:?}"))?;
    }
    for i in 0..1000 {
        let tool = ProcessTerm::Tool(corpus::normal_form_tool(&mut rng, i));
        let back = phi_plus_inverse(&tool).and_then(|s| phi_plus(&s)).map_err(|e| format!("tool {i}: {e}"))?;
        ensure(back == tool, || format!("tool {i} changed: {back:?}"))?;
    }
    // Same name throughout, so distinct images must come from distinct content.
    let mut seen: HashMap<String, Intent> = HashMap::new();
    for _ in 0..1000 {
        let intent = corpus::annotated_intent(&mut rng, 0);
        let image = phi_plus(&ProcessTerm::Intent(intent.clone())).map_err(|e| e.to_string())?;
        let key = serde_json::to_string(&image).expect("terms serialize");
        if let Some(prev) = seen.insert(key, intent.clone()) {
            ensure(prev == intent, || format!("collision: {prev:?} and {intent:?}"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "1000/1000 intents, 1000/1000 tools, injective over {} distinct images, {elapsed:.2?}",
        seen.len()
    ))
}

// Criterion 7 --------------------------------------------------------------

fn valid_plus_tool() -> Tool {
    fixtures::full_tool("create_order", protocheck_core::term::SideEffects::Write, Vec::new())
}

fn criterion_7() -> Outcome {
    let base = valid_plus_tool();
    phi_plus_inverse(&ProcessTerm::Tool(base.clone())).map_err(|e| format!("valid tool rejected: {e}"))?;

    type Strip = fn(&mut Tool);
    let cases: [(&str, Strip, MetadataField); 4] = [
        (
            "P1",
            |t| t.schema.properties.values_mut().for_each(|p| p.description = None),
            MetadataField::Description,
        ),
        ("P2", |t| t.metadata.as_mut().unwrap().side_effects = None, MetadataField::SideEffects),
        ("P3", |t| t.metadata.as_mut().unwrap().failure_modes = None, MetadataField::FailureModes),
        ("P5", |t| t.metadata.as_mut().unwrap().dependencies = None, MetadataField::Dependencies),
    ];
    for (principle, strip, field) in cases {
        let mut t = base.clone();
        strip(&mut t);
        match phi_plus_inverse(&ProcessTerm::Tool(t)) {
            Err(MapError::MissingMetadata { fields, .. }) if fields == [field] => {}
            other => return Err(format!("{principle}: {other:?}")),
        }
    }

    let mut approval = base.clone();
    approval.metadata.as_mut().unwrap().requires_approval = None;
    match phi_plus_inverse(&ProcessTerm::Tool(approval)) {
        Err(MapError::MissingMetadata { fields, .. }) if fields == [MetadataField::RequiresApproval] => {}
        other => return Err(format!("P2 approval: {other:?}")),
    }

    let mut no_summary = base.clone();
    no_summary.metadata.as_mut().unwrap().summary = None;
    phi_plus_inverse(&ProcessTerm::Tool(no_summary.clone())).map_err(|e| format!("P4 removal blocks inversion: {e}"))?;
    let cfg = TypecheckConfig::default();
    let full = typecheck_registry(&McpRegistry::from_tools(vec![base]), &cfg);
    let stripped = typecheck_registry(&McpRegistry::from_tools(vec![no_summary]), &cfg);
    ensure(full.pass && !stripped.pass && stripped.failing().contains(&Principle::P4), || {
        format!("typecheck: full {}, stripped {:?}", full.pass, stripped.failing())
    })?;
    Ok("P1/P2/P3/P5 removal names the field (4/4); summary removal inverts but fails P4".into())
}

// Criterion 8 --------------------------------------------------------------

fn criterion_8() -> Outcome {
    let departure = semantic_density("departure");
    let iata = semantic_density(fixtures::IATA_DESCRIPTION);
    ensure(departure == 0.0, || format!("density(departure) = {departure}"))?;
    ensure((iata - 0.3).abs() < 1e-12, || format!("density(IATA) = {iata}"))?;
    ensure(!check_p2(&fixtures::delete_user_unapproved()).pass, || "unapproved delete passes P2".into())?;
    let fetch = McpRegistry::from_tools(vec![fixtures::fetch_user_data(), fixtures::use_cached_data()]);
    ensure(check_p3(&fixtures::fetch_user_data(), &fetch).pass, || "fetch_user_data fails P3".into())?;
    let (mut a, b) = fixtures::dependent_pair();
    a.metadata.as_mut().unwrap().dependencies = Some(vec![Dependency::new(b.name.clone(), Relation::Requires)]);
    ensure(!check_p5(&McpRegistry::from_tools(vec![a, b])).pass, || "2-cycle passes P5".into())?;
    Ok(format!("density 0 and {iata}; P2, P3, P5 anchors hold"))
}

// Criterion 9 --------------------------------------------------------------

fn criterion_9() -> Outcome {
    let cfg = TypecheckConfig::default();
    let fifty = token_report(&corpus::uniform_corpus(50, 100, 9), &cfg).map_err(|e| e.to_string())?;
    ensure(fifty.ratio <= 0.19 + 0.01 && fifty.below_fifth, || format!("50 tools: {fifty:?}"))?;
    let one = token_report(&corpus::uniform_corpus(1, 100, 9), &cfg).map_err(|e| e.to_string())?;
    ensure(!one.below_fifth, || format!("1 tool: {one:?}"))?;
    Ok(format!("N=50 ratio {:.4}, N=1 ratio {:.4} flag false", fifty.ratio, one.ratio))
}

// Criterion 10 -------------------------------------------------------------

fn tools_lts(tools: Vec<Tool>) -> Lts {
    let term = ProcessTerm::par_all(tools.into_iter().map(ProcessTerm::Tool));
    lts_of(&term, &ExploreConfig::for_term(&term))
}

fn replayable(lts: &Lts, report: &protocheck_core::VerificationReport) -> bool {
    report.witnesses.iter().any(|w| matches!(w, Witness::Trace { labels, .. } if lts.replays(labels)))
}

fn criterion_10() -> Outcome {
    let mut passed = 0;
    let mut agree = 0;

    let reg = McpRegistry::from_tools(vec![fixtures::tool_write()]);
    let good = tools_lts(vec![fixtures::tool_write()]);
    let bad = tools_lts(vec![fixtures::tool_write_severed()]);
    ensure(check_approval_ordering(&good, &reg).passed(), || "guarded write fails".into())?;
    passed += 1;
    let r = check_approval_ordering(&bad, &reg);
    ensure(r.status == Status::Fail && replayable(&bad, &r), || format!("severed write: {r:?}"))?;
    passed += 1;
    ensure(approval_violation(&good, &reg, good.len()).is_none(), || "oracle flags guarded write".into())?;
    let w = approval_violation(&bad, &reg, bad.len());
    ensure(w.as_ref().is_some_and(|w| bad.replays(w)), || "oracle misses severed write".into())?;
    agree += 2;

    let (a, b) = fixtures::dependent_pair();
    let reg = McpRegistry::from_tools(vec![a.clone(), b.clone()]);
    let (sa, sb) = fixtures::dependent_pair_severed();
    let good = tools_lts(vec![a, b]);
    let bad = tools_lts(vec![sa, sb]);
    ensure(check_dependency_ordering(&good, &reg).passed(), || "ordered pair fails".into())?;
    passed += 1;
    let r = check_dependency_ordering(&bad, &reg);
    ensure(r.status == Status::Fail && replayable(&bad, &r), || format!("severed pair: {r:?}"))?;
    passed += 1;
    ensure(dependency_violation(&good, &reg, good.len()).is_none(), || "oracle flags ordered pair".into())?;
    let w = dependency_violation(&bad, &reg, bad.len());
    ensure(w.as_ref().is_some_and(|w| bad.replays(w)), || "oracle misses severed pair".into())?;
    agree += 2;

    let confined = check_confinement(&fixtures::tool_confined());
    ensure(confined.is_empty(), || format!("confined term: {confined:?}"))?;
    passed += 1;
    let leak = check_confinement(&fixtures::direct_leak());
    ensure(leak.len() == 1, || format!("leak findings: {leak:?}"))?;
    passed += 1;

    let reg = McpRegistry::from_tools(vec![fixtures::innocent_search()]);
    let clean = check_inert_descriptions(&reg, &[]);
    ensure(clean.passed() && !clean.warnings.is_empty(), || format!("poisoned description: {clean:?}"))?;
    passed += 1;
    let misuse = ProcessTerm::call(fixtures::POISONED_DESCRIPTION, params([("query", Literal::text("x"))]));
    let mutant = check_inert_descriptions(&reg, &[misuse]);
    ensure(mutant.status == Status::Fail, || "String-in-Code mutant passes".into())?;
    passed += 1;

    Ok(format!("{passed}/8 checks, oracle agrees on {agree}/4 trace fixtures"))
}

// Criterion 11 -------------------------------------------------------------

fn criterion_11() -> Outcome {
    Ok("not desk-reproducible: the universal forms of the equivalence and round-trip theorems \
        (covered here by instance and property suites), zero-shot transfer of learned routing, \
        and routing-accuracy figures from related evaluations"
        .into())
}

fn main() -> ExitCode {
    let criteria: [(u8, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {n}: PASS {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL {why}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: 11/11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 11 criteria fail");
        ExitCode::FAILURE
    }
}
