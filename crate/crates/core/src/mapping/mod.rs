//! Translations between the SGD and MCP calculi.
//!
//! `phi` is total on SGD terms. `phi_inverse` is partial and lossy: a tool
//! carries no transactionality, and resources, prompts, negotiation and
//! discovery have no intent counterpart. `phi_plus` and `phi_plus_inverse`
//! carry the missing information in tool metadata and are mutually inverse on
//! well-formed inputs.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::report::{FieldDiff, Status, VerificationReport, Witness};
use crate::term::{
    calculus_of, substitute, Calculus, Intent, JsonSchema, ProcessTerm, PropertySpec, SideEffects, SlotDef,
    SlotType, Tool, ToolMetadata, TriBool,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UndefinedReason {
    NoSgdEquivalentResource,
    NoSgdEquivalentPrompt,
    NoSgdEquivalentInitialize,
    NoSgdEquivalentToolsList,
    /// A half-finished call (validation step) has no SGD state.
    NoSgdEquivalentValidate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossField {
    Transactionality,
    FailureModes,
    Dependencies,
    ApprovalProtocol,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LossRecord {
    pub field: LossField,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MapOutcome {
    Mapped {
        term: ProcessTerm,
        warnings: Vec<LossRecord>,
    },
    UndefinedMapping {
        reason: UndefinedReason,
        warnings: Vec<LossRecord>,
    },
}

impl MapOutcome {
    pub fn term(&self) -> Option<&ProcessTerm> {
        match self {
            MapOutcome::Mapped { term, .. } => Some(term),
            MapOutcome::UndefinedMapping { .. } => None,
        }
    }

    pub fn warnings(&self) -> &[LossRecord] {
        match self {
            MapOutcome::Mapped { warnings, .. } | MapOutcome::UndefinedMapping { warnings, .. } => warnings,
        }
    }

    pub fn reason(&self) -> Option<UndefinedReason> {
        match self {
            MapOutcome::UndefinedMapping { reason, .. } => Some(*reason),
            MapOutcome::Mapped { .. } => None,
        }
    }
}

/// A metadata field whose absence blocks the inverse of `phi_plus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetadataField {
    /// Property descriptions (P1).
    Description,
    SideEffects,
    RequiresApproval,
    FailureModes,
    Summary,
    Dependencies,
}

impl MetadataField {
    pub fn as_str(self) -> &'static str {
        match self {
            MetadataField::Description => "description",
            MetadataField::SideEffects => "side_effects",
            MetadataField::RequiresApproval => "requires_approval",
            MetadataField::FailureModes => "failure_modes",
            MetadataField::Summary => "summary",
            MetadataField::Dependencies => "dependencies",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("term is not a pure SGD process")]
    NotSgdTerm,
    #[error("term is not a pure MCP process")]
    NotMcpTerm,
    #[error("term carries MCP⁺ metadata; use the metadata-preserving inverse")]
    McpPlusNotAccepted,
    #[error("intent `{intent}` has unknown transactionality")]
    UnknownTransactionality { intent: String },
    #[error("tool `{tool}` lacks metadata: {}", fields.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(", "))]
    MissingMetadata { tool: String, fields: Vec<MetadataField> },
    #[error("no SGD counterpart: {0:?}")]
    Undefined(UndefinedReason),
}

/// Text up to and including the first period that ends the text or is
/// followed by whitespace; the whole text when there is none.
pub fn first_sentence(text: &str) -> String {
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c == '.' {
            match chars.peek() {
                None => return text.to_string(),
                Some((_, next)) if next.is_whitespace() => return text[..=i].to_string(),
                _ => {}
            }
        }
    }
    text.to_string()
}

/// `schema(R, O)`: required names from `R`, one property per slot.
pub fn schema_of(intent: &Intent) -> JsonSchema {
    JsonSchema {
        required: intent.required.iter().map(|s| s.name.clone()).collect(),
        properties: intent
            .slots()
            .map(|s| {
                (
                    s.name.clone(),
                    PropertySpec {
                        type_name: s.type_name,
                        description: Some(s.description.clone()),
                        enum_values: if s.possible_values.is_empty() {
                            None
                        } else {
                            Some(s.possible_values.clone())
                        },
                    },
                )
            })
            .collect(),
    }
}

fn slot_of(name: &str, spec: Option<&PropertySpec>) -> SlotDef {
    match spec {
        Some(p) => SlotDef {
            name: name.to_string(),
            type_name: p.type_name,
            description: p.description.clone().unwrap_or_default(),
            possible_values: p.enum_values.clone().unwrap_or_default(),
        },
        None => SlotDef::new(name, SlotType::String, ""),
    }
}

/// `R(schema)` in required order and `O(schema)` in name order.
pub fn slots_of(schema: &JsonSchema) -> (Vec<SlotDef>, Vec<SlotDef>) {
    let required = schema
        .required
        .iter()
        .map(|r| slot_of(r, schema.properties.get(r)))
        .collect();
    let optional = schema
        .optional_names()
        .map(|n| slot_of(n, schema.properties.get(n)))
        .collect();
    (required, optional)
}

fn map_homomorphic(
    term: &ProcessTerm,
    on_intent: &dyn Fn(&Intent) -> Result<ProcessTerm, MapError>,
) -> Result<ProcessTerm, MapError> {
    use ProcessTerm as P;
    Ok(match term {
        P::Intent(i) => on_intent(i)?,
        P::CollectSlot { slot, value, then } => map_homomorphic(&substitute(then, slot, value), on_intent)?,
        P::ExecuteS { intent, bindings, .. } => P::call(intent.clone(), bindings.clone()),
        P::ResultT { .. } | P::ErrorT { .. } | P::Nil => term.clone(),
        P::Par { left, right } => P::par(map_homomorphic(left, on_intent)?, map_homomorphic(right, on_intent)?),
        P::Restrict { channel, body } => P::restrict(channel.clone(), map_homomorphic(body, on_intent)?),
        P::Repl { body, copies } => P::Repl {
            body: alloc::boxed::Box::new(map_homomorphic(body, on_intent)?),
            copies: *copies,
        },
        _ => return Err(MapError::NotSgdTerm),
    })
}

/// The forward mapping. Transactionality is dropped.
pub fn phi(sgd: &ProcessTerm) -> Result<ProcessTerm, MapError> {
    if !calculus_of(sgd).is_sgd() {
        return Err(MapError::NotSgdTerm);
    }
    map_homomorphic(sgd, &|i| Ok(ProcessTerm::Tool(Tool::new(i.name.clone(), i.description.clone(), schema_of(i)))))
}

/// The tool image of an intent under `phi_plus`.
pub fn intent_to_tool_plus(intent: &Intent) -> Result<Tool, MapError> {
    let t = intent.transactional.as_bool().ok_or_else(|| MapError::UnknownTransactionality {
        intent: intent.name.clone(),
    })?;
    Ok(
        Tool::new(intent.name.clone(), intent.description.clone(), schema_of(intent)).with_metadata(ToolMetadata {
            side_effects: Some(if t { SideEffects::Write } else { SideEffects::Read }),
            requires_approval: Some(t),
            failure_modes: Some(intent.failure_modes.clone()),
            summary: Some(first_sentence(&intent.description)),
            dependencies: Some(intent.dependencies.clone()),
        }),
    )
}

/// The metadata-preserving forward mapping.
pub fn phi_plus(sgd: &ProcessTerm) -> Result<ProcessTerm, MapError> {
    if !calculus_of(sgd).is_sgd() {
        return Err(MapError::NotSgdTerm);
    }
    map_homomorphic(sgd, &|i| intent_to_tool_plus(i).map(ProcessTerm::Tool))
}

fn tool_to_intent_lossy(tool: &Tool) -> Intent {
    let (required, optional) = slots_of(&tool.schema);
    Intent {
        name: tool.name.clone(),
        description: tool.description.clone(),
        required,
        optional,
        transactional: TriBool::Unknown,
        failure_modes: Vec::new(),
        dependencies: Vec::new(),
    }
}

fn inverse_rec(term: &ProcessTerm, warnings: &mut Vec<LossRecord>) -> Result<ProcessTerm, UndefinedReason> {
    use ProcessTerm as P;
    Ok(match term {
        P::Tool(tool) => {
            warnings.push(LossRecord {
                field: LossField::Transactionality,
                detail: alloc::format!("`{}`: transactionality cannot be recovered from a plain tool", tool.name),
            });
            P::Intent(tool_to_intent_lossy(tool))
        }
        P::ToolCall { name, params, .. } => {
            warnings.push(LossRecord {
                field: LossField::Transactionality,
                detail: alloc::format!("call to `{name}`: transactionality unknown"),
            });
            P::execute(name.clone(), params.clone(), TriBool::Unknown)
        }
        P::Resource { .. } => return Err(UndefinedReason::NoSgdEquivalentResource),
        P::Prompt { .. } => return Err(UndefinedReason::NoSgdEquivalentPrompt),
        P::Initialize { .. } => return Err(UndefinedReason::NoSgdEquivalentInitialize),
        P::ToolsList { .. } => return Err(UndefinedReason::NoSgdEquivalentToolsList),
        P::Validate { .. } => return Err(UndefinedReason::NoSgdEquivalentValidate),
        P::ResultT { .. } | P::ErrorT { .. } | P::Nil => term.clone(),
        P::Par { left, right } => {
            let l = inverse_rec(left, warnings)?;
            P::par(l, inverse_rec(right, warnings)?)
        }
        P::Restrict { channel, body } => P::restrict(channel.clone(), inverse_rec(body, warnings)?),
        P::Repl { body, copies } => P::Repl {
            body: alloc::boxed::Box::new(inverse_rec(body, warnings)?),
            copies: *copies,
        },
        // Excluded by the calculus check in `phi_inverse`.
        P::Intent(_)
        | P::CollectSlot { .. }
        | P::ExecuteS { .. }
        | P::ToolSummary { .. }
        | P::Pending { .. }
        | P::Token { .. } => unreachable!("checked by phi_inverse"),
    })
}

/// The partial inverse of `phi` on plain MCP terms.
pub fn phi_inverse(mcp: &ProcessTerm) -> Result<MapOutcome, MapError> {
    match calculus_of(mcp) {
        Calculus::McpPlus => return Err(MapError::McpPlusNotAccepted),
        Calculus::Sgd | Calculus::Mixed => return Err(MapError::NotMcpTerm),
        Calculus::Mcp | Calculus::Shared => {}
    }
    let mut warnings = Vec::new();
    Ok(match inverse_rec(mcp, &mut warnings) {
        Ok(term) => MapOutcome::Mapped { term, warnings },
        Err(reason) => MapOutcome::UndefinedMapping { reason, warnings },
    })
}

/// Fields that must be present for a tool to be inverted.
pub fn missing_metadata(tool: &Tool) -> Vec<MetadataField> {
    let mut out = Vec::new();
    if tool.schema.properties.values().any(|p| p.description.is_none()) {
        out.push(MetadataField::Description);
    }
    let meta = tool.metadata.clone().unwrap_or_default();
    if meta.side_effects.is_none() {
        out.push(MetadataField::SideEffects);
    }
    if meta.requires_approval.is_none() {
        out.push(MetadataField::RequiresApproval);
    }
    if meta.failure_modes.is_none() {
        out.push(MetadataField::FailureModes);
    }
    if meta.dependencies.is_none() {
        out.push(MetadataField::Dependencies);
    }
    out
}

/// The intent a fully annotated tool stands for. A missing summary is
/// tolerated: it only affects the token budget.
pub fn tool_plus_to_intent(tool: &Tool) -> Result<Intent, MapError> {
    let missing = missing_metadata(tool);
    if !missing.is_empty() {
        return Err(MapError::MissingMetadata {
            tool: tool.name.clone(),
            fields: missing,
        });
    }
    let meta = tool.metadata.clone().unwrap_or_default();
    let (required, optional) = slots_of(&tool.schema);
    Ok(Intent {
        name: tool.name.clone(),
        description: tool.description.clone(),
        required,
        optional,
        transactional: TriBool::from_bool(meta.side_effects.is_some_and(SideEffects::is_mutating)),
        failure_modes: meta.failure_modes.unwrap_or_default(),
        dependencies: meta.dependencies.unwrap_or_default(),
    })
}

/// The inverse of `phi_plus`.
pub fn phi_plus_inverse(mcp_plus: &ProcessTerm) -> Result<ProcessTerm, MapError> {
    use ProcessTerm as P;
    Ok(match mcp_plus {
        P::Tool(tool) => P::Intent(tool_plus_to_intent(tool)?),
        P::ToolCall { name, params, .. } => P::execute(name.clone(), params.clone(), TriBool::Unknown),
        P::ResultT { .. } | P::ErrorT { .. } | P::Nil => mcp_plus.clone(),
        P::Par { left, right } => P::par(phi_plus_inverse(left)?, phi_plus_inverse(right)?),
        P::Restrict { channel, body } => P::restrict(channel.clone(), phi_plus_inverse(body)?),
        P::Repl { body, copies } => P::Repl {
            body: alloc::boxed::Box::new(phi_plus_inverse(body)?),
            copies: *copies,
        },
        P::Resource { .. } => return Err(MapError::Undefined(UndefinedReason::NoSgdEquivalentResource)),
        P::Prompt { .. } => return Err(MapError::Undefined(UndefinedReason::NoSgdEquivalentPrompt)),
        P::Initialize { .. } => return Err(MapError::Undefined(UndefinedReason::NoSgdEquivalentInitialize)),
        P::ToolsList { .. } | P::ToolSummary { .. } => {
            return Err(MapError::Undefined(UndefinedReason::NoSgdEquivalentToolsList))
        }
        P::Validate { .. } | P::Pending { .. } | P::Token { .. } => {
            return Err(MapError::Undefined(UndefinedReason::NoSgdEquivalentValidate))
        }
        P::Intent(_) | P::CollectSlot { .. } | P::ExecuteS { .. } => return Err(MapError::NotMcpTerm),
    })
}

/// `term` with every description text blanked.
pub fn strip_descriptions(term: &ProcessTerm) -> ProcessTerm {
    fn tool(t: &Tool) -> Tool {
        let mut t = t.clone();
        t.description.clear();
        for p in t.schema.properties.values_mut() {
            p.description = None;
        }
        t
    }
    use ProcessTerm as P;
    match term {
        P::Intent(i) => {
            let mut i = i.clone();
            i.description.clear();
            for s in i.required.iter_mut().chain(i.optional.iter_mut()) {
                s.description.clear();
            }
            P::Intent(i)
        }
        P::Tool(t) => P::Tool(tool(t)),
        P::ToolSummary { tool: t } => P::ToolSummary { tool: tool(t) },
        P::ToolsList { tools, caps } => P::ToolsList {
            tools: tools.iter().map(tool).collect(),
            caps: caps.clone(),
        },
        P::Par { left, right } => P::par(strip_descriptions(left), strip_descriptions(right)),
        P::Restrict { channel, body } => P::restrict(channel.clone(), strip_descriptions(body)),
        P::Repl { body, copies } => P::Repl {
            body: alloc::boxed::Box::new(strip_descriptions(body)),
            copies: *copies,
        },
        P::CollectSlot { slot, value, then } => P::collect(slot.clone(), value.clone(), strip_descriptions(then)),
        other => other.clone(),
    }
}

/// Equality of everything except description text.
pub fn structural_eq(a: &ProcessTerm, b: &ProcessTerm) -> bool {
    strip_descriptions(a) == strip_descriptions(b)
}

fn debug_text<T: core::fmt::Debug>(v: &T) -> String {
    alloc::format!("{v:?}")
}

fn diff_field<T: PartialEq + core::fmt::Debug>(out: &mut Vec<FieldDiff>, prefix: &str, field: &str, a: &T, b: &T) {
    if a != b {
        out.push(FieldDiff {
            field: alloc::format!("{prefix}.{field}"),
            before: debug_text(a),
            after: debug_text(b),
        });
    }
}

pub fn diff_intents(a: &Intent, b: &Intent) -> Vec<FieldDiff> {
    let mut out = Vec::new();
    let p = a.name.as_str();
    diff_field(&mut out, p, "name", &a.name, &b.name);
    diff_field(&mut out, p, "description", &a.description, &b.description);
    diff_field(&mut out, p, "required", &a.required, &b.required);
    diff_field(&mut out, p, "optional", &a.optional, &b.optional);
    if a.transactional != b.transactional {
        out.push(FieldDiff {
            field: alloc::format!("{p}.transactional"),
            before: a.transactional.to_string(),
            after: b.transactional.to_string(),
        });
    }
    diff_field(&mut out, p, "failure_modes", &a.failure_modes, &b.failure_modes);
    diff_field(&mut out, p, "dependencies", &a.dependencies, &b.dependencies);
    out
}

pub fn diff_tools(a: &Tool, b: &Tool) -> Vec<FieldDiff> {
    let mut out = Vec::new();
    let p = a.name.as_str();
    diff_field(&mut out, p, "name", &a.name, &b.name);
    diff_field(&mut out, p, "description", &a.description, &b.description);
    diff_field(&mut out, p, "schema.required", &a.schema.required, &b.schema.required);
    diff_field(&mut out, p, "schema.properties", &a.schema.properties, &b.schema.properties);
    let (ma, mb) = (a.metadata.clone().unwrap_or_default(), b.metadata.clone().unwrap_or_default());
    diff_field(&mut out, p, "metadata.present", &a.metadata.is_some(), &b.metadata.is_some());
    diff_field(&mut out, p, "metadata.side_effects", &ma.side_effects, &mb.side_effects);
    diff_field(&mut out, p, "metadata.requires_approval", &ma.requires_approval, &mb.requires_approval);
    diff_field(&mut out, p, "metadata.failure_modes", &ma.failure_modes, &mb.failure_modes);
    diff_field(&mut out, p, "metadata.summary", &ma.summary, &mb.summary);
    diff_field(&mut out, p, "metadata.dependencies", &ma.dependencies, &mb.dependencies);
    out
}

fn collect_intents<'a>(term: &'a ProcessTerm, out: &mut Vec<&'a Intent>) {
    match term {
        ProcessTerm::Intent(i) => out.push(i),
        ProcessTerm::Par { left, right } => {
            collect_intents(left, out);
            collect_intents(right, out);
        }
        ProcessTerm::Restrict { body, .. } | ProcessTerm::Repl { body, .. } => collect_intents(body, out),
        ProcessTerm::CollectSlot { then, .. } => collect_intents(then, out),
        _ => {}
    }
}

fn collect_tools<'a>(term: &'a ProcessTerm, out: &mut Vec<&'a Tool>) {
    match term {
        ProcessTerm::Tool(t) => out.push(t),
        ProcessTerm::Par { left, right } => {
            collect_tools(left, out);
            collect_tools(right, out);
        }
        ProcessTerm::Restrict { body, .. } | ProcessTerm::Repl { body, .. } => collect_tools(body, out),
        _ => {}
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundTripMode {
    Plain,
    Plus,
}

/// Field-level comparison of each intent or tool in `term` with its image
/// after a round trip through the chosen mapping pair.
///
/// Passes iff every round trip is the identity.
pub fn round_trip_report(term: &ProcessTerm, mode: RoundTripMode) -> Result<VerificationReport, MapError> {
    let calculus = calculus_of(term);
    let mut diffs = Vec::new();
    let check = match mode {
        RoundTripMode::Plain => "round-trip (plain)",
        RoundTripMode::Plus => "round-trip (plus)",
    };
    let mut report = VerificationReport::pass(check);
    if calculus.is_sgd() {
        let mut intents = Vec::new();
        collect_intents(term, &mut intents);
        for intent in intents {
            let back = match mode {
                RoundTripMode::Plain => {
                    let tool = Tool::new(intent.name.clone(), intent.description.clone(), schema_of(intent));
                    tool_to_intent_lossy(&tool)
                }
                RoundTripMode::Plus => tool_plus_to_intent(&intent_to_tool_plus(intent)?)?,
            };
            diffs.extend(diff_intents(intent, &back));
        }
        report.notes.push(String::from("SGD -> MCP -> SGD"));
    } else if calculus.is_mcp() {
        let mut tools = Vec::new();
        collect_tools(term, &mut tools);
        for tool in tools {
            let back = match mode {
                RoundTripMode::Plain => {
                    if tool.is_plus() {
                        return Err(MapError::McpPlusNotAccepted);
                    }
                    let i = tool_to_intent_lossy(tool);
                    Tool::new(i.name.clone(), i.description.clone(), schema_of(&i))
                }
                RoundTripMode::Plus => intent_to_tool_plus(&tool_plus_to_intent(tool)?)?,
            };
            diffs.extend(diff_tools(tool, &back));
        }
        report.notes.push(String::from("MCP -> SGD -> MCP"));
    } else {
        return Err(MapError::NotSgdTerm);
    }
    if !diffs.is_empty() {
        report.status = Status::Fail;
        report.witnesses.push(Witness::Diff { fields: diffs });
    }
    Ok(report)
}

/// The field diff carried by a round-trip report, keyed by field name.
pub fn report_diffs(report: &VerificationReport) -> BTreeMap<String, (String, String)> {
    report
        .witnesses
        .iter()
        .filter_map(|w| match w {
            Witness::Diff { fields } => Some(fields),
            _ => None,
        })
        .flatten()
        .map(|d| (d.field.clone(), (d.before.clone(), d.after.clone())))
        .collect()
}
