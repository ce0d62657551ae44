use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::term::{Ident, Intent, Literal, Params, ProcessTerm, SlotType, Tool};

/// How the environment answers an approval request.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApprovalPolicy {
    /// Both a confirming and a refusing answer are possible.
    #[default]
    Both,
    AlwaysGrant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub name: Ident,
    pub params: Params,
    pub output: Literal,
}

/// Deterministic stand-in for the backend that executes intents and tools.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectOracle {
    pub entries: Vec<OracleEntry>,
}

impl EffectOracle {
    pub fn with(mut self, name: impl Into<String>, params: Params, output: Literal) -> Self {
        self.entries.push(OracleEntry {
            name: name.into(),
            params,
            output,
        });
        self
    }

    /// Table value, or `"ok:<name>"` when the pair is not listed.
    pub fn output(&self, name: &str, params: &Params) -> Literal {
        self.entries
            .iter()
            .find(|e| e.name == name && &e.params == params)
            .map(|e| e.output.clone())
            .unwrap_or_else(|| Literal::Text(alloc::format!("ok:{name}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploreConfig {
    pub max_states: usize,
    pub repl_unfold_bound: u32,
    /// Parameter maps offered at each `Invoke`/`Call` frontier, by name.
    /// Names without an entry fall back to [`derive_params`].
    pub param_universe: BTreeMap<Ident, Vec<Params>>,
    pub effect_oracle: EffectOracle,
    pub server_caps: BTreeSet<Ident>,
    /// Tools a negotiated server advertises.
    pub server_tools: Vec<Tool>,
    /// Filters tried at each discovery step.
    pub discovery_filters: Vec<String>,
    pub approval_policy: ApprovalPolicy,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            max_states: 10_000,
            repl_unfold_bound: 2,
            param_universe: BTreeMap::new(),
            effect_oracle: EffectOracle::default(),
            server_caps: BTreeSet::new(),
            server_tools: Vec::new(),
            discovery_filters: vec![String::new()],
            approval_policy: ApprovalPolicy::Both,
        }
    }
}

impl ExploreConfig {
    /// Default bounds with a universe derived from every intent and tool in `term`.
    pub fn for_term(term: &ProcessTerm) -> Self {
        ExploreConfig {
            param_universe: derive_universe(term),
            ..ExploreConfig::default()
        }
    }

    pub(crate) fn params_for(&self, name: &str, fallback: impl FnOnce() -> Vec<Params>) -> Vec<Params> {
        match self.param_universe.get(name) {
            Some(list) => list.clone(),
            None => fallback(),
        }
    }
}

/// A placeholder value that satisfies the slot's type and enum constraint.
pub fn placeholder(name: &str, type_name: SlotType, values: &[String]) -> Literal {
    if let Some(first) = values.first() {
        return Literal::Text(first.clone());
    }
    match type_name {
        SlotType::String => Literal::Text(alloc::format!("{name}-value")),
        SlotType::Integer => Literal::Integer(1),
        SlotType::Number => Literal::Decimal(crate::term::Decimal::new(1.5)),
        SlotType::Boolean => Literal::Boolean(true),
        SlotType::Date => Literal::Date(String::from("2026-03-15")),
    }
}

fn conforming_and_deficient(required: Vec<(Ident, Literal)>) -> Vec<Params> {
    let full: Params = required.iter().cloned().collect();
    let mut out = vec![full];
    if !required.is_empty() {
        out.push(required.into_iter().skip(1).collect());
    }
    out
}

/// One conforming map (every required slot filled) and, when something is
/// required, one deficient map missing the first required slot.
pub fn derive_params_for_intent(intent: &Intent) -> Vec<Params> {
    conforming_and_deficient(
        intent
            .required
            .iter()
            .map(|s| (s.name.clone(), placeholder(&s.name, s.type_name, &s.possible_values)))
            .collect(),
    )
}

pub fn derive_params_for_tool(tool: &Tool) -> Vec<Params> {
    conforming_and_deficient(
        tool.schema
            .required
            .iter()
            .map(|r| {
                let value = match tool.schema.properties.get(r) {
                    Some(p) => placeholder(r, p.type_name, p.enum_values.as_deref().unwrap_or(&[])),
                    None => Literal::Text(alloc::format!("{r}-value")),
                };
                (r.clone(), value)
            })
            .collect(),
    )
}

/// Universe entries for every intent and tool mentioned anywhere in `term`.
pub fn derive_universe(term: &ProcessTerm) -> BTreeMap<Ident, Vec<Params>> {
    let mut out = BTreeMap::new();
    collect_universe(term, &mut out);
    out
}

fn collect_universe(term: &ProcessTerm, out: &mut BTreeMap<Ident, Vec<Params>>) {
    match term {
        ProcessTerm::Intent(i) => {
            out.entry(i.name.clone()).or_insert_with(|| derive_params_for_intent(i));
        }
        ProcessTerm::Tool(t) | ProcessTerm::ToolSummary { tool: t } => {
            out.entry(t.name.clone()).or_insert_with(|| derive_params_for_tool(t));
        }
        ProcessTerm::ToolsList { tools, .. } => {
            for t in tools {
                out.entry(t.name.clone()).or_insert_with(|| derive_params_for_tool(t));
            }
        }
        ProcessTerm::Par { left, right } => {
            collect_universe(left, out);
            collect_universe(right, out);
        }
        ProcessTerm::Restrict { body, .. } | ProcessTerm::Repl { body, .. } => collect_universe(body, out),
        ProcessTerm::CollectSlot { then, .. } => collect_universe(then, out),
        _ => {}
    }
}
