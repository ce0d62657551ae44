use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::config::{derive_params_for_intent, derive_params_for_tool, ApprovalPolicy, ExploreConfig};
use super::label::{TauReason, TransitionLabel};
use crate::term::{
    calculus_of, canonicalize, substitute, Calculus, Gate, Ident, Intent, JsonSchema, Literal, Params,
    ProcessTerm, Tool, TriBool,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("term is not a pure SGD process")]
    NotSgdTerm,
    #[error("term is not a pure MCP process")]
    NotMcpTerm,
    #[error("term mixes SGD and MCP constructors")]
    MixedCalculus,
}

pub type Move = (TransitionLabel, ProcessTerm);

/// Successors of a state, plus whether a replication bound cut some off.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Successors {
    pub moves: Vec<Move>,
    pub truncated: bool,
}

/// Required slots absent from `params`, in declaration order.
pub fn missing_slots(intent: &Intent, params: &Params) -> Vec<Ident> {
    intent
        .required
        .iter()
        .filter(|s| !params.contains_key(&s.name))
        .map(|s| s.name.clone())
        .collect()
}

/// Schema violations of `params`: missing required keys, then enum
/// mismatches. Empty iff the parameters conform.
pub fn violations(params: &Params, schema: &JsonSchema) -> Vec<String> {
    let mut out: Vec<String> = schema
        .required
        .iter()
        .filter(|r| !params.contains_key(*r))
        .cloned()
        .collect();
    for (k, v) in params {
        if let Some(allowed) = schema.properties.get(k).and_then(|p| p.enum_values.as_ref()) {
            if !allowed.contains(&v.enum_form()) {
                out.push(alloc::format!("{k} not in enum"));
            }
        }
    }
    out
}

pub fn conforms(params: &Params, schema: &JsonSchema) -> bool {
    violations(params, schema).is_empty()
}

/// Successors under the rules for SGD terms.
pub fn sgd_step(term: &ProcessTerm, config: &ExploreConfig) -> Result<Vec<Move>, StepError> {
    if !calculus_of(term).is_sgd() {
        return Err(StepError::NotSgdTerm);
    }
    Ok(successors(term, config).moves)
}

/// Successors under the rules for MCP and MCP⁺ terms.
pub fn mcp_step(term: &ProcessTerm, config: &ExploreConfig) -> Result<Vec<Move>, StepError> {
    if !calculus_of(term).is_mcp() {
        return Err(StepError::NotMcpTerm);
    }
    Ok(successors(term, config).moves)
}

pub(crate) fn check_pure(term: &ProcessTerm) -> Result<(), StepError> {
    if calculus_of(term) == Calculus::Mixed {
        Err(StepError::MixedCalculus)
    } else {
        Ok(())
    }
}

/// Canonical, sorted, de-duplicated successors of `term`.
pub fn successors(term: &ProcessTerm, config: &ExploreConfig) -> Successors {
    let mut tokens = BTreeSet::new();
    collect_tokens(term, &mut tokens);
    let mut out = Successors::default();
    raw_moves(term, config, &tokens, &mut out);
    for m in out.moves.iter_mut() {
        m.1 = canonicalize(&m.1);
    }
    out.moves.sort();
    out.moves.dedup();
    out
}

fn collect_tokens(term: &ProcessTerm, out: &mut BTreeSet<Ident>) {
    match term {
        ProcessTerm::Token { from } => {
            out.insert(from.clone());
        }
        ProcessTerm::Par { left, right } => {
            collect_tokens(left, out);
            collect_tokens(right, out);
        }
        ProcessTerm::Restrict { body, .. } => collect_tokens(body, out),
        _ => {}
    }
}

fn raw_moves(term: &ProcessTerm, config: &ExploreConfig, tokens: &BTreeSet<Ident>, out: &mut Successors) {
    use ProcessTerm as P;
    match term {
        P::Nil | P::Prompt { .. } | P::Token { .. } => {}

        P::Intent(intent) => {
            for p in config.params_for(&intent.name, || derive_params_for_intent(intent)) {
                let missing = missing_slots(intent, &p);
                let target = if missing.is_empty() {
                    P::execute(intent.name.clone(), p.clone(), intent.transactional)
                } else {
                    P::error("MissingSlots", missing.join(", "))
                };
                out.moves.push((
                    TransitionLabel::Invoke {
                        name: intent.name.clone(),
                        params: p,
                    },
                    target,
                ));
            }
        }

        P::CollectSlot { slot, value, then } => out.moves.push((
            TransitionLabel::Collect {
                slot: slot.clone(),
                value: value.clone(),
            },
            substitute(then, slot, value),
        )),

        P::ExecuteS {
            intent,
            bindings,
            transactional,
        } => {
            // Approval for a transactional intent is granted by the environment;
            // an unknown flag leaves the step undetermined.
            if *transactional != TriBool::Unknown {
                out.moves.push((
                    TransitionLabel::Execute { name: intent.clone() },
                    P::result(config.effect_oracle.output(intent, bindings)),
                ));
            }
        }

        P::Tool(tool) => call_moves(tool, config, out),

        P::Validate {
            tool,
            params,
            schema,
            gate,
        } => {
            let bad = violations(params, schema);
            let target = if !bad.is_empty() {
                P::error("ValidationError", bad.join(", "))
            } else {
                match gate {
                    None => P::call(tool.clone(), params.clone()),
                    Some(g) => P::Pending {
                        tool: tool.clone(),
                        params: params.clone(),
                        awaiting: g.awaiting.clone(),
                        approval: g.approval,
                    },
                }
            };
            out.moves.push((
                TransitionLabel::Tau {
                    reason: TauReason::Validate,
                },
                target,
            ));
        }

        P::ToolCall { name, params, .. } => out.moves.push((
            TransitionLabel::Execute { name: name.clone() },
            P::result(config.effect_oracle.output(name, params)),
        )),

        P::Pending {
            tool,
            params,
            awaiting,
            approval,
        } => {
            if let Some((first, rest)) = awaiting.split_first() {
                if tokens.contains(first) {
                    out.moves.push((
                        TransitionLabel::Requires { token: first.clone() },
                        P::Pending {
                            tool: tool.clone(),
                            params: params.clone(),
                            awaiting: rest.to_vec(),
                            approval: *approval,
                        },
                    ));
                }
            } else if *approval {
                out.moves.push((
                    TransitionLabel::Approval {
                        tool: tool.clone(),
                        confirm: true,
                    },
                    P::Pending {
                        tool: tool.clone(),
                        params: params.clone(),
                        awaiting: Vec::new(),
                        approval: false,
                    },
                ));
                if config.approval_policy == ApprovalPolicy::Both {
                    out.moves.push((
                        TransitionLabel::Approval {
                            tool: tool.clone(),
                            confirm: false,
                        },
                        P::result(Literal::text("cancelled")),
                    ));
                }
            } else {
                out.moves.push((
                    TransitionLabel::Execute { name: tool.clone() },
                    P::par(
                        P::result(config.effect_oracle.output(tool, params)),
                        P::Token { from: tool.clone() },
                    ),
                ));
            }
        }

        P::Resource { uri, content } => out.moves.push((
            TransitionLabel::Read { uri: uri.clone() },
            P::result(Literal::text(content.clone())),
        )),

        P::Initialize { caps } => out.moves.push((
            TransitionLabel::Tau {
                reason: TauReason::Negotiate,
            },
            P::ToolsList {
                tools: config.server_tools.clone(),
                caps: caps.intersection(&config.server_caps).cloned().collect(),
            },
        )),

        P::ToolsList { tools, .. } => {
            for filter in &config.discovery_filters {
                let shown = tools.iter().filter(|t| matches_filter(t, filter)).map(|t| {
                    if t.summary().is_some() {
                        P::ToolSummary { tool: t.clone() }
                    } else {
                        P::Tool(t.clone())
                    }
                });
                out.moves.push((
                    TransitionLabel::List { filter: filter.clone() },
                    P::par_all(shown),
                ));
            }
        }

        P::ToolSummary { tool } => out.moves.push((
            TransitionLabel::Detail {
                name: tool.name.clone(),
            },
            P::Tool(tool.clone()),
        )),

        P::ResultT { output } => out.moves.push((
            TransitionLabel::Result {
                output: output.clone(),
            },
            P::Nil,
        )),

        P::ErrorT { error_type, message } => out.moves.push((
            TransitionLabel::Error {
                error_type: error_type.clone(),
                message: message.clone(),
            },
            P::Nil,
        )),

        P::Par { .. } => {
            let parts = term.par_components();
            for (i, part) in parts.iter().enumerate() {
                let mut sub = Successors::default();
                raw_moves(part, config, tokens, &mut sub);
                out.truncated |= sub.truncated;
                for (label, next) in sub.moves {
                    let rebuilt = parts
                        .iter()
                        .enumerate()
                        .map(|(j, p)| if i == j { next.clone() } else { (*p).clone() });
                    out.moves.push((label, P::par_all(rebuilt)));
                }
            }
        }

        P::Restrict { channel, body } => {
            let mut sub = Successors::default();
            raw_moves(body, config, tokens, &mut sub);
            out.truncated |= sub.truncated;
            for (label, next) in sub.moves {
                out.moves.push((label, P::restrict(channel.clone(), next)));
            }
        }

        P::Repl { body, copies } => {
            let mut sub = Successors::default();
            raw_moves(body, config, tokens, &mut sub);
            if sub.moves.is_empty() {
                return;
            }
            if *copies >= config.repl_unfold_bound {
                out.truncated = true;
                return;
            }
            out.truncated |= sub.truncated;
            for (label, next) in sub.moves {
                out.moves.push((
                    label,
                    P::par(
                        next,
                        P::Repl {
                            body: body.clone(),
                            copies: copies + 1,
                        },
                    ),
                ));
            }
        }
    }
}

fn call_moves(tool: &Tool, config: &ExploreConfig, out: &mut Successors) {
    for p in config.params_for(&tool.name, || derive_params_for_tool(tool)) {
        out.moves.push((
            TransitionLabel::Call {
                name: tool.name.clone(),
                params: p.clone(),
            },
            ProcessTerm::Validate {
                tool: tool.name.clone(),
                params: p,
                schema: tool.schema.clone(),
                gate: Gate::for_tool(tool),
            },
        ));
    }
}

/// Case-insensitive substring match on the tool name or its summary.
pub fn matches_filter(tool: &Tool, filter: &str) -> bool {
    let needle = filter.to_lowercase();
    tool.name.to_lowercase().contains(&needle)
        || tool.summary().is_some_and(|s| s.to_lowercase().contains(&needle))
}
