use serde::{Deserialize, Serialize};

use super::ProcessTerm;

/// Which calculus a term belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Calculus {
    /// Only constructors common to both calculi (`0`, results, errors, operators).
    Shared,
    Sgd,
    Mcp,
    /// MCP with at least one metadata-carrying tool or MCP⁺ protocol state.
    McpPlus,
    /// SGD and MCP constructors in the same term.
    Mixed,
}

impl Calculus {
    fn join(self, other: Calculus) -> Calculus {
        use Calculus::*;
        match (self, other) {
            (Mixed, _) | (_, Mixed) => Mixed,
            (Shared, x) | (x, Shared) => x,
            (Sgd, Sgd) => Sgd,
            (Mcp, Mcp) => Mcp,
            (Mcp, McpPlus) | (McpPlus, Mcp) | (McpPlus, McpPlus) => McpPlus,
            (Sgd, _) | (_, Sgd) => Mixed,
        }
    }

    pub fn is_sgd(self) -> bool {
        matches!(self, Calculus::Sgd | Calculus::Shared)
    }

    pub fn is_mcp(self) -> bool {
        matches!(self, Calculus::Mcp | Calculus::McpPlus | Calculus::Shared)
    }
}

/// Classify a term by the constructors it uses.
pub fn calculus_of(term: &ProcessTerm) -> Calculus {
    use ProcessTerm::*;
    match term {
        Intent(_) | ExecuteS { .. } => Calculus::Sgd,
        CollectSlot { then, .. } => Calculus::Sgd.join(calculus_of(then)),
        Tool(tool) => {
            if tool.is_plus() {
                Calculus::McpPlus
            } else {
                Calculus::Mcp
            }
        }
        ToolsList { tools, .. } => {
            if tools.iter().any(|t| t.is_plus()) {
                Calculus::McpPlus
            } else {
                Calculus::Mcp
            }
        }
        Validate { gate, .. } => {
            if gate.is_some() {
                Calculus::McpPlus
            } else {
                Calculus::Mcp
            }
        }
        Resource { .. } | Prompt { .. } | Initialize { .. } | ToolCall { .. } => Calculus::Mcp,
        ToolSummary { .. } | Pending { .. } | Token { .. } => Calculus::McpPlus,
        ResultT { .. } | ErrorT { .. } | Nil => Calculus::Shared,
        Par { left, right } => calculus_of(left).join(calculus_of(right)),
        Restrict { body, .. } | Repl { body, .. } => calculus_of(body),
    }
}
