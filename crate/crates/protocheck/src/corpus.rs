//! Seeded generators for intents, MCP⁺ tools, random LTS pairs and token corpora.
//!
//! Every generator draws from a caller-supplied `ChaCha8Rng`, so a seed fixes
//! the whole corpus across platforms.

use std::collections::BTreeSet;

use protocheck_core::mapping::first_sentence;
use protocheck_core::semantics::{derive_params_for_intent, ExploreConfig};
use protocheck_core::term::{
    Dependency, FailureMode, PropertySpec, RecoveryStrategy, Relation, SideEffects, SlotType,
};
use protocheck_core::{Intent, JsonSchema, Lts, McpRegistry, ProcessTerm, SlotDef, Tool, ToolMetadata, TransitionLabel, TriBool};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const SLOT_NAMES: [&str; 12] = [
    "origin", "destination", "date", "class", "city", "guests", "amount", "account", "title", "owner", "time",
    "rating",
];
const TYPES: [SlotType; 5] = [SlotType::String, SlotType::Integer, SlotType::Number, SlotType::Boolean, SlotType::Date];
const WORDS: [&str; 10] = ["Books", "Finds", "Lists", "Updates", "a", "the", "reservation", "account", "for", "user"];

fn sentence(rng: &mut ChaCha8Rng, words: usize) -> String {
    (0..words).map(|_| *WORDS.choose(rng).expect("non-empty")).collect::<Vec<_>>().join(" ")
}

fn slot(rng: &mut ChaCha8Rng, name: &str) -> SlotDef {
    let type_name = *TYPES.choose(rng).expect("non-empty");
    let values = if type_name == SlotType::String && rng.gen_bool(0.4) {
        let n = rng.gen_range(1..=3);
        (0..n).map(|i| format!("{}{i}", name.to_uppercase())).collect()
    } else {
        Vec::new()
    };
    SlotDef::new(name, type_name, format!("The {name}")).with_values(values)
}

/// An intent with up to 4 required and 3 optional slots and a random flag.
/// Optional slots are kept in name order, the order a schema gives back.
pub fn random_intent(rng: &mut ChaCha8Rng, index: usize) -> Intent {
    let n_req = rng.gen_range(0..=4);
    let n_opt = rng.gen_range(0..=3);
    let mut names: Vec<&str> = SLOT_NAMES.to_vec();
    names.shuffle(rng);
    let desc_len = rng.gen_range(2..8);
    let description = format!("{}. {}", sentence(rng, desc_len), sentence(rng, 3));
    let mut intent = Intent::new(format!("Intent{index}"), description, TriBool::from_bool(rng.gen()));
    for name in &names[..n_req] {
        intent.required.push(slot(rng, name));
    }
    let mut optional: Vec<SlotDef> = names[n_req..n_req + n_opt].iter().map(|n| slot(rng, n)).collect();
    optional.sort_by(|a, b| a.name.cmp(&b.name));
    intent.optional = optional;
    intent
}

fn recovery(rng: &mut ChaCha8Rng) -> RecoveryStrategy {
    match rng.gen_range(0..4) {
        0 => RecoveryStrategy::Retry { n: rng.gen_range(1..5) },
        1 => RecoveryStrategy::Fallback {
            tool: format!("Fallback{}", rng.gen_range(0..3)),
        },
        2 => RecoveryStrategy::UserPrompt {
            message: sentence(rng, 4),
        },
        _ => RecoveryStrategy::Abort,
    }
}

/// A random intent carrying failure modes and dependencies.
pub fn annotated_intent(rng: &mut ChaCha8Rng, index: usize) -> Intent {
    let mut intent = random_intent(rng, index);
    for e in 0..rng.gen_range(0..=3) {
        intent.failure_modes.push(FailureMode::new(format!("Error{e}"), recovery(rng)));
    }
    let relations = [Relation::Requires, Relation::ProducesInputFor, Relation::ExclusiveWith];
    for _ in 0..rng.gen_range(0..=2) {
        let target = format!("Intent{}", rng.gen_range(0..index.max(1) + 5));
        intent
            .dependencies
            .push(Dependency::new(target, *relations.choose(rng).expect("non-empty")));
    }
    intent
}

/// A fully annotated tool in the form the metadata-preserving mapping
/// produces: read or write effects, approval exactly for writes, a summary
/// equal to the first sentence, and every property described.
pub fn normal_form_tool(rng: &mut ChaCha8Rng, index: usize) -> Tool {
    let intent = annotated_intent(rng, index);
    let mut properties = std::collections::BTreeMap::new();
    for s in intent.slots() {
        properties.insert(
            s.name.clone(),
            PropertySpec {
                type_name: s.type_name,
                description: Some(s.description.clone()),
                enum_values: (!s.possible_values.is_empty()).then(|| s.possible_values.clone()),
            },
        );
    }
    let write = rng.gen_bool(0.5);
    Tool::new(
        format!("tool_{index}"),
        intent.description.clone(),
        JsonSchema {
            required: intent.required.iter().map(|s| s.name.clone()).collect(),
            properties,
        },
    )
    .with_metadata(ToolMetadata {
        side_effects: Some(if write { SideEffects::Write } else { SideEffects::Read }),
        requires_approval: Some(write),
        failure_modes: Some(intent.failure_modes.clone()),
        summary: Some(first_sentence(&intent.description)),
        dependencies: Some(intent.dependencies),
    })
}

/// Exploration settings for an intent and its image: one conforming and one
/// deficient parameter map, shared by both sides.
pub fn matched_config(intent: &Intent) -> ExploreConfig {
    let mut cfg = ExploreConfig::default();
    cfg.param_universe.insert(intent.name.clone(), derive_params_for_intent(intent));
    cfg
}

/// Abstract labels for random LTSs.
pub fn abstract_labels() -> [TransitionLabel; 4] {
    [
        TransitionLabel::Execute { name: "a".into() },
        TransitionLabel::Execute { name: "b".into() },
        TransitionLabel::Read { uri: "c".into() },
        TransitionLabel::Tau {
            reason: protocheck_core::semantics::TauReason::Validate,
        },
    ]
}

/// A random LTS with at most `max_states` states over `labels`.
pub fn random_lts(rng: &mut ChaCha8Rng, max_states: usize, labels: &[TransitionLabel]) -> Lts {
    let n = rng.gen_range(1..=max_states);
    let m = rng.gen_range(0..=2 * n);
    let mut edges = BTreeSet::new();
    for _ in 0..m {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        let l = labels.choose(rng).expect("non-empty").clone();
        edges.insert((s, l, t));
    }
    Lts::from_edges(n, 0, edges.into_iter().collect())
}

/// A pair of random LTSs. A quarter of the pairs are a copy with states
/// renumbered, so that equivalent pairs are well represented.
pub fn random_lts_pair(rng: &mut ChaCha8Rng, max_states: usize, labels: &[TransitionLabel]) -> (Lts, Lts) {
    let a = random_lts(rng, max_states, labels);
    let b = if rng.gen_bool(0.25) {
        let mut perm: Vec<usize> = (0..a.len()).collect();
        perm.shuffle(rng);
        let edges = a.transitions.iter().map(|(s, l, t)| (perm[*s], l.clone(), perm[*t])).collect();
        Lts::from_edges(a.len(), perm[a.initial], edges)
    } else {
        random_lts(rng, max_states, labels)
    };
    (a, b)
}

/// `n` tools whose descriptions have `desc_tokens` tokens and whose
/// summaries have `summary_tokens`.
pub fn uniform_corpus(n: usize, desc_tokens: usize, summary_tokens: usize) -> McpRegistry {
    let words = |k: usize, w: &str| vec![w; k].join(" ");
    McpRegistry::from_tools(
        (0..n)
            .map(|i| {
                Tool::new(format!("tool_{i}"), words(desc_tokens, "detail"), JsonSchema::default()).with_metadata(
                    ToolMetadata {
                        summary: Some(words(summary_tokens, "brief")),
                        ..ToolMetadata::default()
                    },
                )
            })
            .collect(),
    )
}

/// The SGD term of an intent.
pub fn intent_term(intent: Intent) -> ProcessTerm {
    ProcessTerm::Intent(intent)
}
