//! The five MCP⁺ metadata principles and the token budget.
//!
//! P1 semantic density of descriptions, P2 declared side effects with
//! approval on mutation, P3 failure modes with resolvable recovery, P4 a
//! short summary for progressive disclosure, P5 a well-formed dependency
//! graph. Each failing principle carries a note on what is lost without it.

mod text;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use serde::{Deserialize, Serialize};

use crate::registry::McpRegistry;
use crate::report::{Status, VerificationReport, Witness};
use crate::term::{RecoveryStrategy, Relation, Tool};

pub use text::{ceil_count, entities, semantic_density, tokens};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypecheckConfig {
    /// Minimum density per description.
    pub tau: f64,
    /// Summaries must be shorter than this fraction of the description.
    pub summary_ratio: f64,
    /// Fraction of tools whose full description is fetched.
    pub k: f64,
}

impl Default for TypecheckConfig {
    fn default() -> Self {
        TypecheckConfig {
            tau: 0.3,
            summary_ratio: 0.1,
            k: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{name} must lie in (0, 1], got {value}")]
    OutOfRange { name: &'static str, value: String },
}

impl TypecheckConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [("tau", self.tau), ("summary_ratio", self.summary_ratio), ("k", self.k)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(ConfigError::OutOfRange {
                    name,
                    value: format!("{v}"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Principle {
    P1,
    P2,
    P3,
    P4,
    P5,
}

impl Principle {
    pub const ALL: [Principle; 5] = [Principle::P1, Principle::P2, Principle::P3, Principle::P4, Principle::P5];

    pub fn code(self) -> &'static str {
        match self {
            Principle::P1 => "P1",
            Principle::P2 => "P2",
            Principle::P3 => "P3",
            Principle::P4 => "P4",
            Principle::P5 => "P5",
        }
    }

    /// What the mapping back to intents cannot recover when this fails.
    pub fn necessity(self) -> &'static str {
        match self {
            Principle::P1 => "slot meaning cannot be recovered from thin descriptions",
            Principle::P2 => "whether a call changes state is unknown, so transactionality is lost",
            Principle::P3 => "recovery behaviour on errors cannot be expressed",
            Principle::P4 => "behaviour is preserved but the discovery token budget is unmet",
            Principle::P5 => "call ordering between tools is left implicit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldDensity {
    pub field: String,
    pub tokens: usize,
    pub entities: usize,
    pub density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleVerdict {
    pub principle: Principle,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldDensity>,
}

impl RuleVerdict {
    fn new(principle: Principle, findings: Vec<String>) -> Self {
        RuleVerdict {
            principle,
            pass: findings.is_empty(),
            findings,
            fields: Vec::new(),
        }
    }
}

fn density_of(field: String, text: &str) -> FieldDensity {
    FieldDensity {
        field,
        tokens: tokens(text).len(),
        entities: entities(text),
        density: semantic_density(text),
    }
}

pub fn check_p1(tool: &Tool, cfg: &TypecheckConfig) -> RuleVerdict {
    let mut fields = vec![density_of(String::from("description"), &tool.description)];
    let mut findings = Vec::new();
    for (name, prop) in &tool.schema.properties {
        match &prop.description {
            Some(d) => fields.push(density_of(format!("properties.{name}"), d)),
            None => findings.push(format!("property `{name}` has no description")),
        }
    }
    for f in &fields {
        if f.density < cfg.tau {
            findings.push(format!(
                "{}: density {}/{} = {:.3} below {}",
                f.field, f.entities, f.tokens, f.density, cfg.tau
            ));
        }
    }
    let mut v = RuleVerdict::new(Principle::P1, findings);
    v.fields = fields;
    v
}

pub fn check_p2(tool: &Tool) -> RuleVerdict {
    let mut findings = Vec::new();
    match &tool.metadata {
        None => findings.push(String::from("no metadata")),
        Some(m) => {
            if m.side_effects.is_none() {
                findings.push(String::from("side_effects missing"));
            }
            if m.requires_approval.is_none() {
                findings.push(String::from("requires_approval missing"));
            }
            if let (Some(se), Some(false)) = (m.side_effects, m.requires_approval) {
                if se.is_mutating() {
                    findings.push(format!("side_effects {} without approval", se.as_str()));
                }
            }
        }
    }
    RuleVerdict::new(Principle::P2, findings)
}

pub fn check_p3(tool: &Tool, registry: &McpRegistry) -> RuleVerdict {
    let mut findings = Vec::new();
    match tool.metadata.as_ref().and_then(|m| m.failure_modes.as_ref()) {
        None => findings.push(String::from("failure_modes missing")),
        Some(modes) if modes.is_empty() => findings.push(String::from("failure_modes empty")),
        Some(modes) => {
            let mut seen = BTreeSet::new();
            for m in modes {
                if !seen.insert(m.error.as_str()) {
                    findings.push(format!("error `{}` listed twice", m.error));
                }
                match &m.recovery {
                    RecoveryStrategy::Retry { n: 0 } => findings.push(format!("`{}`: retry count is zero", m.error)),
                    RecoveryStrategy::Fallback { tool: target } if registry.tool(target).is_none() => {
                        findings.push(format!("`{}`: fallback `{target}` is not in the registry", m.error))
                    }
                    _ => {}
                }
            }
        }
    }
    RuleVerdict::new(Principle::P3, findings)
}

pub fn check_p4(tool: &Tool, cfg: &TypecheckConfig) -> RuleVerdict {
    let mut findings = Vec::new();
    match tool.summary() {
        None => findings.push(String::from("summary missing")),
        Some(s) if s.trim().is_empty() => findings.push(String::from("summary empty")),
        Some(s) => {
            let (ns, nd) = (tokens(s).len(), tokens(&tool.description).len());
            let bound = cfg.summary_ratio * nd as f64;
            if (ns as f64) >= bound {
                findings.push(format!(
                    "summary has {ns} tokens, description {nd}: {ns} < {} x {nd} = {bound:.2} does not hold",
                    cfg.summary_ratio
                ));
            }
        }
    }
    RuleVerdict::new(Principle::P4, findings)
}

/// A `Requires` cycle as a closed path, if one exists.
fn requires_cycle(registry: &McpRegistry) -> Option<Vec<String>> {
    let mut graph: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (from, to) in registry.requires_edges() {
        let from = registry.tool(&from).map(|t| t.name.as_str());
        let to = registry.tool(&to).map(|t| t.name.as_str());
        if let (Some(f), Some(t)) = (from, to) {
            graph.entry(f).or_default().push(t);
        }
    }
    // 0 unvisited, 1 on stack, 2 done
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    fn dfs<'a>(
        n: &'a str,
        graph: &BTreeMap<&'a str, Vec<&'a str>>,
        state: &mut BTreeMap<&'a str, u8>,
        stack: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        state.insert(n, 1);
        stack.push(n);
        for &m in graph.get(n).map(Vec::as_slice).unwrap_or(&[]) {
            match state.get(m).copied().unwrap_or(0) {
                1 => {
                    let at = stack.iter().position(|s| *s == m).unwrap_or(0);
                    let mut cycle: Vec<String> = stack[at..].iter().map(|s| String::from(*s)).collect();
                    cycle.push(String::from(m));
                    return Some(cycle);
                }
                0 => {
                    if let Some(c) = dfs(m, graph, state, stack) {
                        return Some(c);
                    }
                }
                _ => {}
            }
        }
        stack.pop();
        state.insert(n, 2);
        None
    }
    let nodes: Vec<&str> = graph.keys().copied().collect();
    for n in nodes {
        if state.get(n).copied().unwrap_or(0) == 0 {
            if let Some(c) = dfs(n, &graph, &mut state, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

pub fn check_p5(registry: &McpRegistry) -> RuleVerdict {
    let mut findings = Vec::new();
    let mut relations: BTreeSet<(&str, &str, Relation)> = BTreeSet::new();
    for tool in &registry.tools {
        let Some(deps) = tool.metadata.as_ref().and_then(|m| m.dependencies.as_ref()) else {
            findings.push(format!("`{}`: dependencies missing", tool.name));
            continue;
        };
        for d in deps {
            if registry.tool(&d.tool).is_none() {
                findings.push(format!("`{}`: dependency `{}` is not in the registry", tool.name, d.tool));
            }
            relations.insert((tool.name.as_str(), d.tool.as_str(), d.relation));
        }
    }
    for &(a, b, r) in &relations {
        if r == Relation::Requires
            && (relations.contains(&(a, b, Relation::ExclusiveWith)) || relations.contains(&(b, a, Relation::ExclusiveWith)))
        {
            findings.push(format!("`{a}` requires `{b}` but they are exclusive"));
        }
    }
    if let Some(cycle) = requires_cycle(registry) {
        findings.push(format!("requires cycle: {}", cycle.join(" -> ")));
    }
    RuleVerdict::new(Principle::P5, findings)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolVerdict {
    pub tool: String,
    /// P1 to P4, in order.
    pub rules: Vec<RuleVerdict>,
}

impl ToolVerdict {
    pub fn rule(&self, p: Principle) -> Option<&RuleVerdict> {
        self.rules.iter().find(|r| r.principle == p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NecessityNote {
    pub principle: Principle,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypecheckReport {
    pub tools: Vec<ToolVerdict>,
    pub p5: RuleVerdict,
    pub pass: bool,
    /// One entry per principle that fails anywhere.
    pub necessity: Vec<NecessityNote>,
}

impl TypecheckReport {
    /// Principles failing for at least one tool (or the registry).
    pub fn failing(&self) -> BTreeSet<Principle> {
        let mut out: BTreeSet<Principle> = self
            .tools
            .iter()
            .flat_map(|t| t.rules.iter().filter(|r| !r.pass).map(|r| r.principle))
            .collect();
        if !self.p5.pass {
            out.insert(Principle::P5);
        }
        out
    }

    pub fn to_report(&self) -> VerificationReport {
        let mut report = VerificationReport::pass("typecheck");
        for t in &self.tools {
            for r in t.rules.iter().filter(|r| !r.pass) {
                for f in &r.findings {
                    report.fail_with(Witness::Rule {
                        rule: String::from(r.principle.code()),
                        detail: format!("{}: {f}", t.tool),
                    });
                }
            }
        }
        for f in &self.p5.findings {
            report.fail_with(Witness::Rule {
                rule: String::from("P5"),
                detail: f.clone(),
            });
        }
        for n in &self.necessity {
            report.notes.push(format!("{}: {}", n.principle.code(), n.note));
        }
        if !self.pass {
            report.status = Status::Fail;
        }
        report
    }
}

pub fn typecheck_tool(tool: &Tool, registry: &McpRegistry, cfg: &TypecheckConfig) -> ToolVerdict {
    ToolVerdict {
        tool: tool.name.clone(),
        rules: vec![check_p1(tool, cfg), check_p2(tool), check_p3(tool, registry), check_p4(tool, cfg)],
    }
}

pub fn typecheck_registry(registry: &McpRegistry, cfg: &TypecheckConfig) -> TypecheckReport {
    let tools: Vec<ToolVerdict> = registry.tools.iter().map(|t| typecheck_tool(t, registry, cfg)).collect();
    let p5 = check_p5(registry);
    let mut report = TypecheckReport {
        tools,
        p5,
        pass: false,
        necessity: Vec::new(),
    };
    let failing = report.failing();
    report.pass = failing.is_empty();
    report.necessity = failing
        .into_iter()
        .map(|p| NecessityNote {
            principle: p,
            note: String::from(p.necessity()),
        })
        .collect();
    report
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TokenReport {
    pub tools: usize,
    /// Tools whose full description is fetched: the `ceil(k * N)` longest.
    pub detailed: usize,
    pub baseline: usize,
    pub progressive: usize,
    pub ratio: f64,
    /// `ratio < 0.2`.
    pub below_fifth: bool,
    /// Every summary meets the P4 bound.
    pub summaries_within_bound: bool,
    pub k_below_summary_ratio: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TokenError {
    #[error("tool `{tool}` has no summary")]
    MissingSummary { tool: String },
}

/// Discovery cost with every description against summaries plus the
/// worst-case set of detailed descriptions.
pub fn token_report(registry: &McpRegistry, cfg: &TypecheckConfig) -> Result<TokenReport, TokenError> {
    let mut desc = Vec::with_capacity(registry.tools.len());
    let mut summaries = 0usize;
    let mut within = true;
    for t in &registry.tools {
        let s = t.summary().ok_or_else(|| TokenError::MissingSummary { tool: t.name.clone() })?;
        let (ns, nd) = (tokens(s).len(), tokens(&t.description).len());
        within &= (ns as f64) < cfg.summary_ratio * nd as f64;
        summaries += ns;
        desc.push(nd);
    }
    let baseline: usize = desc.iter().sum();
    let n = desc.len();
    let detailed = ceil_count(cfg.k * n as f64).min(n);
    desc.sort_unstable_by(|a, b| b.cmp(a));
    let progressive = summaries + desc[..detailed].iter().sum::<usize>();
    let mut warnings = Vec::new();
    let ratio = if baseline == 0 {
        warnings.push(String::from("no description tokens; ratio undefined"));
        0.0
    } else {
        progressive as f64 / baseline as f64
    };
    if cfg.k.partial_cmp(&cfg.summary_ratio) != Some(core::cmp::Ordering::Less) {
        warnings.push(format!("k = {} is not below the summary ratio {}", cfg.k, cfg.summary_ratio));
    }
    Ok(TokenReport {
        tools: n,
        detailed,
        baseline,
        progressive,
        ratio,
        below_fifth: baseline > 0 && ratio < 0.2,
        summaries_within_bound: within,
        k_below_summary_ratio: cfg.k < cfg.summary_ratio,
        warnings,
    })
}

#[cfg(test)]
mod tests;
