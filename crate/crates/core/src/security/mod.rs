//! Ordering, confinement and description-isolation checks.
//!
//! The ordering checks run over every path of a finite LTS by exploring
//! the product of the LTS with a small monitor. [`oracle`] re-checks the
//! same properties by plain path enumeration.

pub mod oracle;

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use serde::{Deserialize, Serialize};

use crate::registry::McpRegistry;
use crate::report::{Status, VerificationReport, Witness};
use crate::semantics::{Lts, TransitionLabel};
use crate::term::{Ident, Literal, ProcessTerm, RecoveryStrategy};

/// Outstanding approvals per tool saturate here.
pub const APPROVAL_CAP: u8 = 8;

/// Breadth-first search of `lts` paired with a monitor. `step` returns the
/// next monitor state, or `Err` with a rule detail on violation.
fn monitor<M, F>(lts: &Lts, init: M, mut step: F) -> Option<(Vec<TransitionLabel>, String)>
where
    M: Ord + Clone,
    F: FnMut(&M, &TransitionLabel) -> Result<M, String>,
{
    let adj = lts.adjacency();
    type Node<M> = (usize, M);
    let mut parent: BTreeMap<Node<M>, Option<(Node<M>, TransitionLabel)>> = BTreeMap::new();
    let start = (lts.initial, init);
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        for (label, t) in &adj[node.0] {
            match step(&node.1, label) {
                Err(detail) => {
                    let mut path = vec![label.clone()];
                    let mut cur = node.clone();
                    while let Some(Some((prev, l))) = parent.get(&cur) {
                        path.push(l.clone());
                        cur = prev.clone();
                    }
                    path.reverse();
                    return Some((path, detail));
                }
                Ok(m) => {
                    let next = (*t, m);
                    if !parent.contains_key(&next) {
                        parent.insert(next.clone(), Some((node.clone(), label.clone())));
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    None
}

fn finish(check: &str, lts: &Lts, found: Option<(Vec<TransitionLabel>, String)>) -> VerificationReport {
    let mut report = VerificationReport::pass(check);
    match found {
        Some((labels, detail)) => {
            let position = labels.len() - 1;
            report.fail_with(Witness::Rule {
                rule: String::from(check),
                detail,
            });
            report.fail_with(Witness::Trace {
                labels,
                position: Some(position),
            });
        }
        None if lts.truncated => {
            report.status = Status::Inconclusive;
            report.notes.push(String::from("LTS truncated; only the explored part was checked"));
        }
        None => {}
    }
    report
}

/// Every `execute` of a write- or delete-capable tool is preceded by an
/// unconsumed `approval(tool, true)` on the same path.
pub fn check_approval_ordering(lts: &Lts, registry: &McpRegistry) -> VerificationReport {
    let mutating = registry.mutating_tools();
    let found = monitor(lts, BTreeMap::<Ident, u8>::new(), |granted, label| {
        let mut next = granted.clone();
        match label {
            TransitionLabel::Approval { tool, confirm: true } => {
                let c = next.entry(tool.clone()).or_insert(0);
                *c = (*c + 1).min(APPROVAL_CAP);
            }
            TransitionLabel::Execute { name } if mutating.contains(name) => match next.get_mut(name) {
                Some(c) if *c > 0 => *c -= 1,
                _ => return Err(format!("`{name}` executed without approval")),
            },
            _ => {}
        }
        Ok(next)
    });
    finish("approval-ordering", lts, found)
}

/// Every `execute(T)` with `T Requires U` comes after some `execute(U)`.
pub fn check_dependency_ordering(lts: &Lts, registry: &McpRegistry) -> VerificationReport {
    let mut needs: BTreeMap<Ident, Vec<Ident>> = BTreeMap::new();
    for (dependent, prereq) in registry.requires_edges() {
        needs.entry(dependent).or_default().push(prereq);
    }
    let relevant: BTreeSet<Ident> = needs.values().flatten().cloned().collect();
    let found = monitor(lts, BTreeSet::<Ident>::new(), |done, label| {
        let mut next = done.clone();
        if let TransitionLabel::Execute { name } = label {
            if let Some(missing) = needs.get(name).and_then(|ps| ps.iter().find(|p| !done.contains(*p))) {
                return Err(format!("`{name}` executed before its prerequisite `{missing}`"));
            }
            if relevant.contains(name) {
                next.insert(name.clone());
            }
        }
        Ok(next)
    });
    finish("dependency-ordering", lts, found)
}

/// A restricted name occurring in an observable position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConfinementFinding {
    pub channel: Ident,
    /// Where the name escapes, independent of binder names and par order.
    pub position: String,
}

fn leaks_in(lit: &Literal, bound: &[Ident], position: &str, out: &mut Vec<ConfinementFinding>) {
    if let Literal::Var(v) = lit {
        if bound.contains(v) {
            out.push(ConfinementFinding {
                channel: v.clone(),
                position: String::from(position),
            });
        }
    }
}

fn confine(term: &ProcessTerm, bound: &mut Vec<Ident>, out: &mut Vec<ConfinementFinding>) {
    use ProcessTerm as P;
    match term {
        P::Restrict { channel, body } => {
            bound.push(channel.clone());
            confine(body, bound, out);
            bound.pop();
        }
        P::Par { left, right } => {
            confine(left, bound, out);
            confine(right, bound, out);
        }
        P::Repl { body, .. } => confine(body, bound, out),
        P::ResultT { output } => leaks_in(output, bound, "result payload", out),
        P::CollectSlot { slot, value, then } => {
            leaks_in(value, bound, &format!("collected slot `{slot}`"), out);
            // The collected slot shadows an outer binder of the same name.
            let shadow = bound.iter().position(|b| b == slot);
            let saved = shadow.map(|i| bound.remove(i));
            confine(then, bound, out);
            if let (Some(i), Some(name)) = (shadow, saved) {
                bound.insert(i, name);
            }
        }
        P::ExecuteS { intent, bindings, .. } => {
            for (k, v) in bindings {
                leaks_in(v, bound, &format!("binding `{k}` of `{intent}`"), out);
            }
        }
        P::ToolCall { name, params, .. } | P::Validate { tool: name, params, .. } | P::Pending { tool: name, params, .. } => {
            for (k, v) in params {
                leaks_in(v, bound, &format!("parameter `{k}` of `{name}`"), out);
            }
        }
        _ => {}
    }
}

/// Restricted names that reach a result, a slot value or a call
/// parameter. Passing a name as a call credential is not a leak.
pub fn check_confinement(term: &ProcessTerm) -> Vec<ConfinementFinding> {
    let mut out = Vec::new();
    confine(term, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

pub fn confinement_report(term: &ProcessTerm) -> VerificationReport {
    let mut report = VerificationReport::pass("confinement")
        .with_note("syntactic check of observable positions; not a semantic secrecy proof");
    for f in check_confinement(term) {
        report.fail_with(Witness::Rule {
            rule: String::from("confinement"),
            detail: format!("`{}` escapes via {}", f.channel, f.position),
        });
    }
    report
}

/// Phrases that suggest a description is addressing the model.
pub const SUSPICIOUS_PHRASES: [&str; 6] = [
    "ignore previous instructions",
    "ignore all previous",
    "disregard previous",
    "exfiltrate",
    "system prompt",
    "you must now",
];

fn string_sorted(registry: &McpRegistry) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for t in &registry.tools {
        out.insert(t.description.clone());
        out.extend(t.schema.properties.values().filter_map(|p| p.description.clone()));
        if let Some(m) = &t.metadata {
            out.extend(m.summary.clone());
            for f in m.failure_modes.iter().flatten() {
                if let RecoveryStrategy::UserPrompt { message } = &f.recovery {
                    out.insert(message.clone());
                }
            }
        }
    }
    out.extend(registry.resources.iter().map(|r| r.content.clone()));
    out.extend(registry.prompts.iter().map(|p| p.template.clone()));
    out.remove("");
    out
}

fn code_positions(term: &ProcessTerm, out: &mut Vec<(String, String)>) {
    use ProcessTerm as P;
    let mut push = |what: &str, v: &str| out.push((String::from(what), String::from(v)));
    match term {
        P::ToolCall { name, credentials, .. } => {
            push("call target", name);
            for c in credentials {
                push("credential", c);
            }
        }
        P::Validate { tool, .. } | P::Pending { tool, .. } => push("call target", tool),
        P::Token { from } => push("token", from),
        P::ExecuteS { intent, .. } => push("execute target", intent),
        P::Tool(t) | P::ToolSummary { tool: t } => {
            if let Some(m) = &t.metadata {
                for d in m.dependencies.iter().flatten() {
                    push("dependency target", &d.tool);
                }
                for f in m.failure_modes.iter().flatten() {
                    if let RecoveryStrategy::Fallback { tool } = &f.recovery {
                        push("fallback target", tool);
                    }
                }
            }
        }
        P::ToolsList { tools, .. } => {
            for t in tools {
                code_positions(&P::Tool(t.clone()), out);
            }
        }
        P::Restrict { channel, body } => {
            out.push((String::from("channel"), channel.clone()));
            code_positions(body, out);
        }
        P::Par { left, right } => {
            code_positions(left, out);
            code_positions(right, out);
        }
        P::Repl { body, .. } | P::CollectSlot { then: body, .. } => code_positions(body, out),
        _ => {}
    }
}

/// Descriptions and other free text never occur where a name is acted on.
/// Suspicious phrasing is reported as a warning only.
pub fn check_inert_descriptions(registry: &McpRegistry, extra_terms: &[ProcessTerm]) -> VerificationReport {
    let texts = string_sorted(registry);
    let mut positions = Vec::new();
    code_positions(&registry.to_term(), &mut positions);
    for t in extra_terms {
        code_positions(t, &mut positions);
    }
    let mut report = VerificationReport::pass("inert-descriptions");
    for (what, value) in positions {
        if texts.contains(&value) {
            report.fail_with(Witness::Rule {
                rule: String::from("sort"),
                detail: format!("description text used as {what}: {value:?}"),
            });
        }
    }
    for t in &registry.tools {
        let lower = t.description.to_lowercase();
        if let Some(p) = SUSPICIOUS_PHRASES.iter().find(|p| lower.contains(*p)) {
            report.warnings.push(format!("`{}`: description contains {p:?}", t.name));
        }
    }
    report
}

#[cfg(test)]
mod tests;
