//! Collections of tools and intents as ingested from manifests and schemas.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::term::{Ident, Intent, ProcessTerm, Tool};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceDef {
    pub uri: String,
    pub content: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptDef {
    pub template: String,
    pub args: Vec<Ident>,
}

/// An MCP server's advertised surface.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct McpRegistry {
    pub tools: Vec<Tool>,
    #[serde(default)]
    pub resources: Vec<ResourceDef>,
    #[serde(default)]
    pub prompts: Vec<PromptDef>,
    #[serde(default)]
    pub server_caps: BTreeSet<Ident>,
    /// Unrecognised manifest keys, as raw JSON text, keyed by
    /// `""` for the top level or by tool name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extensions: BTreeMap<String, BTreeMap<String, String>>,
}

impl McpRegistry {
    pub fn from_tools(tools: Vec<Tool>) -> Self {
        McpRegistry {
            tools,
            ..McpRegistry::default()
        }
    }

    pub fn tool(&self, name: &str) -> Option<&Tool> {
        self.tools.iter().find(|t| t.name == name)
    }

    pub fn tool_names(&self) -> BTreeSet<&str> {
        self.tools.iter().map(|t| t.name.as_str()).collect()
    }

    /// First tool name that occurs more than once.
    pub fn duplicate_tool(&self) -> Option<&str> {
        let mut seen = BTreeSet::new();
        self.tools
            .iter()
            .map(|t| t.name.as_str())
            .find(|n| !seen.insert(*n))
    }

    /// Names of tools declared as write- or delete-capable.
    pub fn mutating_tools(&self) -> BTreeSet<Ident> {
        self.tools
            .iter()
            .filter(|t| t.side_effects().is_some_and(|s| s.is_mutating()))
            .map(|t| t.name.clone())
            .collect()
    }

    /// `(dependent, prerequisite)` pairs for every `Requires` declaration.
    pub fn requires_edges(&self) -> Vec<(Ident, Ident)> {
        let mut out = Vec::new();
        for t in &self.tools {
            if let Some(meta) = &t.metadata {
                for dep in meta.required_tools() {
                    out.push((t.name.clone(), dep));
                }
            }
        }
        out
    }

    /// The server as one process: every tool, resource and prompt in parallel.
    pub fn to_term(&self) -> ProcessTerm {
        let tools = self.tools.iter().cloned().map(ProcessTerm::Tool);
        let resources = self
            .resources
            .iter()
            .map(|r| ProcessTerm::resource(r.uri.clone(), r.content.clone()));
        let prompts = self.prompts.iter().map(|p| ProcessTerm::Prompt {
            template: p.template.clone(),
            args: p.args.clone(),
        });
        ProcessTerm::par_all(tools.chain(resources).chain(prompts))
    }
}

/// An SGD service: a named set of intents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SgdRegistry {
    pub service_name: String,
    pub intents: Vec<Intent>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SgdRegistry {
    pub fn intent(&self, name: &str) -> Option<&Intent> {
        self.intents.iter().find(|i| i.name == name)
    }

    pub fn to_term(&self) -> ProcessTerm {
        ProcessTerm::par_all(self.intents.iter().cloned().map(ProcessTerm::Intent))
    }
}
