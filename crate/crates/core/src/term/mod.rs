//! The unified process-term language for SGD, MCP and MCP⁺.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

mod calculus;
mod congruence;
mod literal;
mod print;
mod syntax;

pub use calculus::{calculus_of, Calculus};
pub use congruence::{canonicalize, free_names, rename_free, substitute};
pub use literal::{Decimal, Ident, Literal, Params};
pub use syntax::{parse_term, ParseError};

/// Value type of a slot or schema property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotType {
    String,
    Integer,
    Number,
    Boolean,
    Date,
}

impl SlotType {
    pub fn as_str(self) -> &'static str {
        match self {
            SlotType::String => "string",
            SlotType::Integer => "integer",
            SlotType::Number => "number",
            SlotType::Boolean => "boolean",
            SlotType::Date => "date",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "string" => SlotType::String,
            "integer" => SlotType::Integer,
            "number" => SlotType::Number,
            "boolean" => SlotType::Boolean,
            "date" => SlotType::Date,
            _ => return None,
        })
    }
}

impl fmt::Display for SlotType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SlotDef {
    pub name: Ident,
    pub type_name: SlotType,
    pub description: String,
    #[serde(default)]
    pub possible_values: Vec<String>,
}

impl SlotDef {
    pub fn new(name: impl Into<String>, type_name: SlotType, description: impl Into<String>) -> Self {
        SlotDef {
            name: name.into(),
            type_name,
            description: description.into(),
            possible_values: Vec::new(),
        }
    }

    pub fn with_values<I, S>(mut self, values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.possible_values = values.into_iter().map(Into::into).collect();
        self
    }
}

/// Three-valued transactionality flag. `Unknown` is what the lossy reverse
/// mapping produces when no machine-readable annotation survives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl TriBool {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriBool::True
        } else {
            TriBool::False
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            TriBool::True => Some(true),
            TriBool::False => Some(false),
            TriBool::Unknown => None,
        }
    }
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriBool::True => "true",
            TriBool::False => "false",
            TriBool::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideEffects {
    Read,
    Write,
    Delete,
    None,
}

impl SideEffects {
    pub fn as_str(self) -> &'static str {
        match self {
            SideEffects::Read => "read",
            SideEffects::Write => "write",
            SideEffects::Delete => "delete",
            SideEffects::None => "none",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "read" => SideEffects::Read,
            "write" => SideEffects::Write,
            "delete" => SideEffects::Delete,
            "none" => SideEffects::None,
            _ => return None,
        })
    }

    /// Whether the effect mutates state and therefore needs approval.
    pub fn is_mutating(self) -> bool {
        matches!(self, SideEffects::Write | SideEffects::Delete)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecoveryStrategy {
    Retry { n: u32 },
    Fallback { tool: Ident },
    UserPrompt { message: String },
    Abort,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FailureMode {
    pub error: Ident,
    pub recovery: RecoveryStrategy,
}

impl FailureMode {
    pub fn new(error: impl Into<String>, recovery: RecoveryStrategy) -> Self {
        FailureMode {
            error: error.into(),
            recovery,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Requires,
    ProducesInputFor,
    ExclusiveWith,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Requires => "requires",
            Relation::ProducesInputFor => "produces_input_for",
            Relation::ExclusiveWith => "exclusive_with",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "requires" => Relation::Requires,
            "produces_input_for" => Relation::ProducesInputFor,
            "exclusive_with" => Relation::ExclusiveWith,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dependency {
    pub tool: Ident,
    pub relation: Relation,
}

impl Dependency {
    pub fn new(tool: impl Into<String>, relation: Relation) -> Self {
        Dependency {
            tool: tool.into(),
            relation,
        }
    }
}

/// An SGD intent: `Intent⟨n, d, R, O, t⟩` plus the optional recovery and
/// dependency annotations an SGD service record may carry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Intent {
    pub name: Ident,
    pub description: String,
    pub required: Vec<SlotDef>,
    pub optional: Vec<SlotDef>,
    pub transactional: TriBool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failure_modes: Vec<FailureMode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dependencies: Vec<Dependency>,
}

impl Intent {
    pub fn new(name: impl Into<String>, description: impl Into<String>, transactional: TriBool) -> Self {
        Intent {
            name: name.into(),
            description: description.into(),
            required: Vec::new(),
            optional: Vec::new(),
            transactional,
            failure_modes: Vec::new(),
            dependencies: Vec::new(),
        }
    }

    pub fn require(mut self, slot: SlotDef) -> Self {
        self.required.push(slot);
        self
    }

    pub fn optional(mut self, slot: SlotDef) -> Self {
        self.optional.push(slot);
        self
    }

    pub fn slots(&self) -> impl Iterator<Item = &SlotDef> {
        self.required.iter().chain(self.optional.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PropertySpec {
    pub type_name: SlotType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enum_values: Option<Vec<String>>,
}

/// The object-schema subset used by tool input schemas.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JsonSchema {
    pub required: Vec<Ident>,
    pub properties: BTreeMap<Ident, PropertySpec>,
}

impl JsonSchema {
    /// Names in `properties` that are not required, in name order.
    pub fn optional_names(&self) -> impl Iterator<Item = &Ident> {
        self.properties.keys().filter(move |k| !self.required.contains(k))
    }
}

/// MCP⁺ metadata. Every field is optional so that partially annotated tools
/// can be represented and rejected with a precise diagnostic.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ToolMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_effects: Option<SideEffects>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub requires_approval: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_modes: Option<Vec<FailureMode>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependencies: Option<Vec<Dependency>>,
}

impl ToolMetadata {
    /// Tools this one must wait for, in declaration order.
    pub fn required_tools(&self) -> Vec<Ident> {
        self.dependencies
            .iter()
            .flatten()
            .filter(|d| d.relation == Relation::Requires)
            .map(|d| d.tool.clone())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tool {
    pub name: Ident,
    pub description: String,
    pub schema: JsonSchema,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<ToolMetadata>,
}

impl Tool {
    pub fn new(name: impl Into<String>, description: impl Into<String>, schema: JsonSchema) -> Self {
        Tool {
            name: name.into(),
            description: description.into(),
            schema,
            metadata: None,
        }
    }

    pub fn with_metadata(mut self, metadata: ToolMetadata) -> Self {
        self.metadata = Some(metadata);
        self
    }

    pub fn is_plus(&self) -> bool {
        self.metadata.is_some()
    }

    pub fn summary(&self) -> Option<&str> {
        self.metadata.as_ref()?.summary.as_deref()
    }

    pub fn side_effects(&self) -> Option<SideEffects> {
        self.metadata.as_ref()?.side_effects
    }
}

/// Extra obligations an MCP⁺ call picks up between validation and execution.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Gate {
    /// Tools whose completion token must be observed first.
    pub awaiting: Vec<Ident>,
    /// Whether an explicit approval is required.
    pub approval: bool,
}

impl Gate {
    pub fn for_tool(tool: &Tool) -> Option<Gate> {
        let meta = tool.metadata.as_ref()?;
        Some(Gate {
            awaiting: meta.required_tools(),
            approval: meta.requires_approval == Some(true),
        })
    }
}

/// A process term of either calculus.
///
/// The JSON encoding is a tagged union keyed by `"kind"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessTerm {
    // Schema-guided dialogue.
    Intent(Intent),
    CollectSlot {
        slot: Ident,
        value: Literal,
        then: Box<ProcessTerm>,
    },
    #[serde(rename = "execute")]
    ExecuteS {
        intent: Ident,
        bindings: Params,
        transactional: TriBool,
    },

    // Model Context Protocol.
    Tool(Tool),
    Resource {
        uri: String,
        content: String,
    },
    Prompt {
        template: String,
        args: Vec<Ident>,
    },
    Initialize {
        caps: BTreeSet<Ident>,
    },
    ToolsList {
        tools: Vec<Tool>,
        #[serde(default)]
        caps: BTreeSet<Ident>,
    },
    ToolCall {
        name: Ident,
        params: Params,
        /// Names handed to the backend alongside the parameters
        /// (`execute⟨params, key⟩`); never part of any observable payload.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        credentials: Vec<Ident>,
    },
    Validate {
        tool: Ident,
        params: Params,
        schema: JsonSchema,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gate: Option<Gate>,
    },

    // MCP⁺ protocol states.
    /// A tool advertised by summary only; `detail(n)` reveals it.
    ToolSummary {
        tool: Tool,
    },
    /// A validated MCP⁺ call waiting on dependency tokens and/or approval.
    Pending {
        tool: Ident,
        params: Params,
        awaiting: Vec<Ident>,
        approval: bool,
    },
    /// Completion token published by an executed MCP⁺ tool.
    Token {
        from: Ident,
    },

    // Shared.
    #[serde(rename = "result")]
    ResultT {
        output: Literal,
    },
    #[serde(rename = "error")]
    ErrorT {
        error_type: Ident,
        message: String,
    },
    Par {
        left: Box<ProcessTerm>,
        right: Box<ProcessTerm>,
    },
    Restrict {
        channel: Ident,
        body: Box<ProcessTerm>,
    },
    Repl {
        body: Box<ProcessTerm>,
        /// Copies already spawned under bounded unfolding.
        #[serde(default)]
        copies: u32,
    },
    Nil,
}

impl ProcessTerm {
    pub fn par(left: ProcessTerm, right: ProcessTerm) -> Self {
        ProcessTerm::Par {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Right-nested parallel composition of all terms; `Nil` when empty.
    pub fn par_all<I: IntoIterator<Item = ProcessTerm>>(terms: I) -> Self {
        let mut items: Vec<ProcessTerm> = terms.into_iter().collect();
        let mut acc = match items.pop() {
            Some(t) => t,
            None => return ProcessTerm::Nil,
        };
        while let Some(t) = items.pop() {
            acc = ProcessTerm::par(t, acc);
        }
        acc
    }

    pub fn restrict(channel: impl Into<String>, body: ProcessTerm) -> Self {
        ProcessTerm::Restrict {
            channel: channel.into(),
            body: Box::new(body),
        }
    }

    pub fn repl(body: ProcessTerm) -> Self {
        ProcessTerm::Repl {
            body: Box::new(body),
            copies: 0,
        }
    }

    pub fn collect(slot: impl Into<String>, value: Literal, then: ProcessTerm) -> Self {
        ProcessTerm::CollectSlot {
            slot: slot.into(),
            value,
            then: Box::new(then),
        }
    }

    pub fn execute(intent: impl Into<String>, bindings: Params, transactional: TriBool) -> Self {
        ProcessTerm::ExecuteS {
            intent: intent.into(),
            bindings,
            transactional,
        }
    }

    pub fn call(name: impl Into<String>, params: Params) -> Self {
        ProcessTerm::ToolCall {
            name: name.into(),
            params,
            credentials: Vec::new(),
        }
    }

    pub fn result(output: Literal) -> Self {
        ProcessTerm::ResultT { output }
    }

    pub fn error(error_type: impl Into<String>, message: impl Into<String>) -> Self {
        ProcessTerm::ErrorT {
            error_type: error_type.into(),
            message: message.into(),
        }
    }

    pub fn resource(uri: impl Into<String>, content: impl Into<String>) -> Self {
        ProcessTerm::Resource {
            uri: uri.into(),
            content: content.into(),
        }
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, ProcessTerm::Nil)
    }

    /// Top-level parallel components, looking through nested `Par`.
    pub fn par_components(&self) -> Vec<&ProcessTerm> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![self];
        while let Some(t) = stack.pop() {
            match t {
                ProcessTerm::Par { left, right } => {
                    stack.push(right);
                    stack.push(left);
                }
                other => out.push(other),
            }
        }
        out
    }
}

/// Build a parameter map from `(name, literal)` pairs.
pub fn params<I, K>(pairs: I) -> Params
where
    I: IntoIterator<Item = (K, Literal)>,
    K: Into<String>,
{
    pairs.into_iter().map(|(k, v)| (k.into(), v)).collect()
}
