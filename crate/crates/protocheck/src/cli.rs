//! The `protocheck` command line.
//!
//! Exit codes: 0 pass, 1 property failure, 2 input or usage error,
//! 3 inconclusive because a bound was hit.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use protocheck_core::equivalence::{bisimilar, trace_equivalent, BisimMode, EquivalenceVerdict, NormalizeOptions};
use protocheck_core::mapping::{
    phi, phi_inverse, phi_plus, phi_plus_inverse, round_trip_report, MapError, MapOutcome, RoundTripMode,
};
use protocheck_core::report::Witness;
use protocheck_core::security::{
    check_approval_ordering, check_dependency_ordering, check_inert_descriptions, confinement_report,
};
use protocheck_core::semantics::{build_lts, derive_universe, traces as lts_traces, ExploreConfig};
use protocheck_core::typecheck::{token_report, typecheck_registry, TypecheckConfig};
use protocheck_core::{
    parse_term, Lts, McpRegistry, ProcessTerm, SgdRegistry, Status, Tool, VerificationReport,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{demo, json, lts_io, manifest, sgd};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Weak,
    Strong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    SgdToMcp,
    McpToSgd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Approval,
    Deps,
    Confine,
    Inert,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "protocheck", version, about = "Formal checks for agent tool protocols")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text", env = "PROTOCHECK_FORMAT")]
    pub format: Format,
    /// Seed for generated corpora.
    #[arg(long, global = true, default_value_t = 0, env = "PROTOCHECK_SEED")]
    pub seed: u64,
    /// State cap for LTS construction.
    #[arg(long, global = true, default_value_t = 10_000, env = "PROTOCHECK_MAX_STATES")]
    pub max_states: usize,
    /// Copies a replicated process may spawn.
    #[arg(long, global = true, default_value_t = 2, env = "PROTOCHECK_REPL_BOUND")]
    pub repl_bound: u32,
    /// Bisimulation mode.
    #[arg(long, global = true, value_enum, default_value = "weak", env = "PROTOCHECK_MODE")]
    pub mode: Mode,
    /// Treat missing-slot and validation errors as the same action.
    #[arg(long, global = true, env = "PROTOCHECK_UNIFY_ERRORS")]
    pub unify_errors: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read a term, manifest, SGD schema or LTS and print it in canonical form.
    Parse { input: PathBuf },
    /// Build the labelled transition system of a term.
    Lts {
        input: PathBuf,
        /// Emit Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Map between the SGD and MCP calculi.
    Map {
        input: PathBuf,
        /// Mapping direction.
        #[arg(long, value_enum)]
        dir: Direction,
        /// Use the metadata-preserving mapping pair.
        #[arg(long)]
        plus: bool,
        /// Report the field differences of a full round trip instead.
        #[arg(long)]
        round_trip: bool,
    },
    /// Decide bisimilarity of two inputs.
    Bisim { left: PathBuf, right: PathBuf },
    /// List bounded traces of one input, or compare two.
    Traces {
        left: PathBuf,
        right: Option<PathBuf>,
        /// Longest trace explored.
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Check the five metadata principles.
    Typecheck {
        input: PathBuf,
        /// Minimum semantic density of each description.
        #[arg(long, default_value_t = 0.3, env = "PROTOCHECK_TAU")]
        tau: f64,
        /// Summaries must stay below this fraction of their description.
        #[arg(long, default_value_t = 0.1, env = "PROTOCHECK_SUMMARY_RATIO")]
        summary_ratio: f64,
        /// Fraction of tools whose full description is fetched.
        #[arg(short = 'k', long = "k", default_value_t = 0.1, env = "PROTOCHECK_K")]
        k: f64,
    },
    /// Token cost of full versus progressive tool disclosure.
    Tokens {
        input: PathBuf,
        /// Fraction of tools whose full description is fetched.
        #[arg(short = 'k', long = "k", default_value_t = 0.1, env = "PROTOCHECK_K")]
        k: f64,
        /// Summaries must stay below this fraction of their description.
        #[arg(long, default_value_t = 0.1, env = "PROTOCHECK_SUMMARY_RATIO")]
        summary_ratio: f64,
    },
    /// Verify ordering, confinement and description isolation.
    Verify {
        input: PathBuf,
        /// Property to check.
        #[arg(long, value_enum, default_value = "all")]
        property: Property,
        /// Manifest supplying tool metadata when the input is a bare LTS.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Replay every worked example and print a pass/fail matrix.
    Demo,
}

/// An input file after format detection.
#[derive(Clone, Debug)]
pub enum Input {
    Term(ProcessTerm),
    Mcp(McpRegistry),
    Sgd(SgdRegistry),
    Lts(Lts),
}

impl Input {
    fn term(&self) -> Result<ProcessTerm, String> {
        match self {
            Input::Term(t) => Ok(t.clone()),
            Input::Mcp(r) => Ok(r.to_term()),
            Input::Sgd(r) => Ok(r.to_term()),
            Input::Lts(_) => Err("expected a term, manifest or SGD schema, found an LTS".into()),
        }
    }

    /// The tools an input declares, as a registry.
    fn registry(&self) -> Result<McpRegistry, String> {
        match self {
            Input::Mcp(r) => Ok(r.clone()),
            Input::Term(t) => {
                let mut tools = Vec::new();
                collect_tools(t, &mut tools);
                Ok(McpRegistry::from_tools(tools))
            }
            _ => Err("expected an MCP manifest or term".into()),
        }
    }
}

fn collect_tools(term: &ProcessTerm, out: &mut Vec<Tool>) {
    match term {
        ProcessTerm::Tool(t) | ProcessTerm::ToolSummary { tool: t } => {
            if !out.iter().any(|x| x.name == t.name) {
                out.push(t.clone());
            }
        }
        ProcessTerm::ToolsList { tools, .. } => {
            for t in tools {
                collect_tools(&ProcessTerm::Tool(t.clone()), out);
            }
        }
        ProcessTerm::Par { left, right } => {
            collect_tools(left, out);
            collect_tools(right, out);
        }
        ProcessTerm::Restrict { body, .. } | ProcessTerm::Repl { body, .. } => collect_tools(body, out),
        _ => {}
    }
}

fn read_source(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Detect and parse an input: JSON with `kind`, `tools`, `service_name`
/// or `transitions`, otherwise concrete term syntax.
pub fn parse_input(text: &str) -> Result<Input, String> {
    let value: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) if text.trim_start().starts_with(['{', '[']) => return Err(format!("invalid JSON: {e}")),
        Err(_) => return parse_term(text).map(Input::Term).map_err(|e| e.to_string()),
    };
    let obj = value.as_object().ok_or("JSON input must be an object")?;
    // Term JSON is tagged by `kind` and may itself contain `tools`.
    if obj.contains_key("kind") {
        serde_json::from_value(value).map(Input::Term).map_err(|e| format!("invalid term JSON: {e}"))
    } else if obj.contains_key("tools") {
        manifest::parse_mcp_value(&value).map(Input::Mcp).map_err(|e| e.to_string())
    } else if obj.contains_key("service_name") || obj.contains_key("intents") {
        sgd::parse_sgd_value(&value).map(Input::Sgd).map_err(|e| e.to_string())
    } else if obj.contains_key("transitions") {
        lts_io::lts_from_value(value).map(Input::Lts).map_err(|e| e.to_string())
    } else {
        Err("unrecognised JSON input: expected `tools`, `service_name`, `transitions` or `kind`".into())
    }
}

pub fn load_input(path: &Path) -> Result<Input, String> {
    parse_input(&read_source(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// A failure that maps to exit code 2.
struct InputError(String);

impl<T: Into<String>> From<T> for InputError {
    fn from(s: T) -> Self {
        InputError(s.into())
    }
}

type CmdResult = Result<i32, InputError>;

impl Ctx<'_> {
    fn explore(&self, universe: BTreeMap<String, Vec<protocheck_core::term::Params>>) -> ExploreConfig {
        ExploreConfig {
            max_states: self.cli.max_states,
            repl_unfold_bound: self.cli.repl_bound,
            param_universe: universe,
            ..ExploreConfig::default()
        }
    }

    fn normalize(&self) -> NormalizeOptions {
        NormalizeOptions {
            unify_errors: self.cli.unify_errors,
        }
    }

    fn mode(&self) -> BisimMode {
        match self.cli.mode {
            Mode::Weak => BisimMode::Weak,
            Mode::Strong => BisimMode::Strong,
        }
    }

    fn build(&self, term: &ProcessTerm, universe: BTreeMap<String, Vec<protocheck_core::term::Params>>) -> Result<Lts, InputError> {
        if self.cli.max_states == 0 {
            return Err("--max-states must be positive".into());
        }
        build_lts(term, &self.explore(universe)).map_err(|e| InputError(e.to_string()))
    }

    fn write(&mut self, text: &str) {
        let _ = self.out.write_all(text.as_bytes());
    }

    fn emit<T: Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) {
        let s = match self.cli.format {
            Format::Json => json::report(&serde_json::to_value(value).expect("reports serialise")),
            Format::Text => text(),
        };
        self.write(&s);
    }

    fn warn(&mut self, msg: &str) {
        let _ = writeln!(self.err, "warning: {msg}");
    }
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = format!("{}: {}\n", r.check, status_word(r.status));
    for n in &r.notes {
        s.push_str(&format!("  note: {n}\n"));
    }
    for w in &r.warnings {
        s.push_str(&format!("  warning: {w}\n"));
    }
    for w in &r.witnesses {
        match w {
            Witness::Trace { labels, position } => {
                s.push_str("  trace:\n");
                for (i, l) in labels.iter().enumerate() {
                    let mark = if Some(i) == *position { "  <-" } else { "" };
                    s.push_str(&format!("    {i}: {l}{mark}\n"));
                }
            }
            Witness::Rule { rule, detail } => s.push_str(&format!("  {rule}: {detail}\n")),
            Witness::Diff { fields } => {
                for d in fields {
                    s.push_str(&format!("  {}: {} -> {}\n", d.field, d.before, d.after));
                }
            }
        }
    }
    s
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Inconclusive => "inconclusive",
    }
}

fn verdict_text(v: &EquivalenceVerdict, what: &str) -> String {
    let mut s = format!("{what}: {}\n", status_word(v.status()));
    if v.inconclusive {
        s.push_str(&format!("  note: truncated; on the explored part the systems are {}equivalent\n", if v.equivalent { "" } else { "not " }));
    }
    if let Some(w) = &v.witness {
        s.push_str(&format!("  witness: {}\n", serde_json::to_string(w).expect("serialises")));
    }
    s
}

fn cmd_parse(ctx: &mut Ctx, input: &Path) -> CmdResult {
    match load_input(input)? {
        Input::Term(t) => {
            let value = serde_json::to_value(&t).expect("terms serialise");
            let text = format!("{t}\n");
            match ctx.cli.format {
                Format::Json => ctx.write(&json::canonical(&value)),
                Format::Text => ctx.write(&text),
            }
        }
        Input::Mcp(r) => {
            let text = match ctx.cli.format {
                Format::Json => manifest::emit_manifest(&r),
                Format::Text => format!("{}\n", r.to_term()),
            };
            ctx.write(&text);
        }
        Input::Sgd(r) => {
            for w in &r.warnings {
                ctx.warn(w);
            }
            let text = match ctx.cli.format {
                Format::Json => sgd::emit_sgd_schema(&r).map_err(|e| e.to_string())?,
                Format::Text => format!("{}\n", r.to_term()),
            };
            ctx.write(&text);
        }
        Input::Lts(l) => {
            let text = match ctx.cli.format {
                Format::Json => lts_io::lts_to_json(&l),
                Format::Text => lts_io::lts_to_dot(&l),
            };
            ctx.write(&text);
        }
    }
    Ok(0)
}

fn truncation_code(truncated: bool) -> i32 {
    if truncated {
        Status::Inconclusive.exit_code()
    } else {
        0
    }
}

fn cmd_lts(ctx: &mut Ctx, input: &Path, dot: bool) -> CmdResult {
    let term = load_input(input)?.term()?;
    let lts = ctx.build(&term, derive_universe(&term))?;
    if lts.truncated {
        ctx.warn("exploration bound hit; the LTS is truncated");
    }
    let text = if dot {
        lts_io::lts_to_dot(&lts)
    } else {
        match ctx.cli.format {
            Format::Json => lts_io::lts_to_json(&lts),
            Format::Text => {
                let mut s = format!("states: {}\ntransitions: {}\ntruncated: {}\n", lts.len(), lts.transitions.len(), lts.truncated);
                for (a, l, b) in &lts.transitions {
                    s.push_str(&format!("  {a} --{l}--> {b}\n"));
                }
                s
            }
        }
    };
    ctx.write(&text);
    Ok(truncation_code(lts.truncated))
}

fn map_error(ctx: &mut Ctx, e: MapError) -> CmdResult {
    match e {
        MapError::NotSgdTerm | MapError::NotMcpTerm | MapError::McpPlusNotAccepted => Err(InputError(e.to_string())),
        other => {
            let mut r = VerificationReport::new("map", Status::Fail);
            r.fail_with(Witness::Rule {
                rule: "mapping".into(),
                detail: other.to_string(),
            });
            let value = json!({"status": "fail", "error": format!("{other:?}"), "message": other.to_string()});
            ctx.emit(&value, || report_text(&r));
            Ok(1)
        }
    }
}

fn registry_of_tools(term: &ProcessTerm) -> Option<McpRegistry> {
    let mut tools = Vec::new();
    for c in term.par_components() {
        match c {
            ProcessTerm::Tool(t) => tools.push(t.clone()),
            ProcessTerm::Nil => {}
            _ => return None,
        }
    }
    Some(McpRegistry::from_tools(tools))
}

fn sgd_of_intents(term: &ProcessTerm, service_name: String) -> Option<SgdRegistry> {
    let mut intents = Vec::new();
    for c in term.par_components() {
        match c {
            ProcessTerm::Intent(i) => intents.push(i.clone()),
            ProcessTerm::Nil => {}
            _ => return None,
        }
    }
    Some(SgdRegistry {
        service_name,
        intents,
        warnings: Vec::new(),
    })
}

fn cmd_map(ctx: &mut Ctx, input: &Path, dir: Direction, plus: bool, round_trip: bool) -> CmdResult {
    let loaded = load_input(input)?;
    if let Input::Sgd(r) = &loaded {
        for w in &r.warnings {
            ctx.warn(w);
        }
    }
    let term = loaded.term()?;
    if round_trip {
        let mode = if plus { RoundTripMode::Plus } else { RoundTripMode::Plain };
        return match round_trip_report(&term, mode) {
            Ok(r) => {
                ctx.emit(&r, || report_text(&r));
                Ok(r.status.exit_code())
            }
            Err(e) => map_error(ctx, e),
        };
    }
    let (mapped, warnings) = match (dir, plus) {
        (Direction::SgdToMcp, false) => (phi(&term), Vec::new()),
        (Direction::SgdToMcp, true) => (phi_plus(&term), Vec::new()),
        (Direction::McpToSgd, true) => (phi_plus_inverse(&term), Vec::new()),
        (Direction::McpToSgd, false) => match phi_inverse(&term) {
            Ok(MapOutcome::Mapped { term, warnings }) => (Ok(term), warnings),
            Ok(outcome @ MapOutcome::UndefinedMapping { .. }) => {
                let reason = outcome.reason().expect("undefined outcome");
                ctx.emit(&outcome, || format!("undefined mapping: {reason:?}\n"));
                return Ok(1);
            }
            Err(e) => (Err(e), Vec::new()),
        },
    };
    let mapped = match mapped {
        Ok(t) => t,
        Err(e) => return map_error(ctx, e),
    };
    for w in &warnings {
        ctx.warn(&format!("{:?}: {}", w.field, w.detail));
    }
    // Registries come back as files of the other format.
    let body = match (&loaded, dir) {
        (Input::Sgd(_), Direction::SgdToMcp) => registry_of_tools(&mapped).map(|r| manifest::emit_manifest(&r)),
        (Input::Mcp(_), Direction::McpToSgd) => sgd_of_intents(&mapped, input_stem(input))
            .map(|r| sgd::emit_sgd_schema(&r))
            .transpose()
            .map_err(|e| e.to_string())?,
        _ => None,
    };
    let text = match (body, ctx.cli.format) {
        (Some(file), Format::Json) => file,
        (_, Format::Json) => {
            let value = json!({"outcome": "mapped", "term": mapped, "warnings": warnings});
            json::report(&value)
        }
        (_, Format::Text) => format!("{mapped}\n"),
    };
    ctx.write(&text);
    Ok(0)
}

fn input_stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "service".into())
}

/// LTSs for two inputs, explored with one shared parameter universe.
fn build_pair(ctx: &Ctx, left: &Path, right: &Path) -> Result<(Lts, Lts), InputError> {
    let (a, b) = (load_input(left)?, load_input(right)?);
    let mut universe = BTreeMap::new();
    for input in [&a, &b] {
        if let Ok(t) = input.term() {
            for (k, v) in derive_universe(&t) {
                universe.entry(k).or_insert(v);
            }
        }
    }
    let side = |input: Input| match input {
        Input::Lts(l) => Ok(l),
        other => ctx.build(&other.term()?, universe.clone()),
    };
    Ok((side(a)?, side(b)?))
}

fn cmd_bisim(ctx: &mut Ctx, left: &Path, right: &Path) -> CmdResult {
    let (a, b) = build_pair(ctx, left, right)?;
    let v = bisimilar(&a, &b, ctx.mode(), &ctx.normalize());
    let what = match ctx.cli.mode {
        Mode::Weak => "weak bisimilarity",
        Mode::Strong => "strong bisimilarity",
    };
    ctx.emit(&v, || verdict_text(&v, what));
    Ok(v.status().exit_code())
}

fn cmd_traces(ctx: &mut Ctx, left: &Path, right: Option<&Path>, max_len: usize) -> CmdResult {
    match right {
        Some(r) => {
            let (a, b) = build_pair(ctx, left, r)?;
            let v = trace_equivalent(&a, &b, max_len, &ctx.normalize());
            ctx.emit(&v, || verdict_text(&v, "trace equivalence"));
            Ok(v.status().exit_code())
        }
        None => {
            let lts = match load_input(left)? {
                Input::Lts(l) => l,
                other => {
                    let t = other.term()?;
                    ctx.build(&t, derive_universe(&t))?
                }
            };
            let set = lts_traces(&lts, max_len);
            let as_text: Vec<Vec<String>> =
                set.traces.iter().map(|t| t.iter().map(ToString::to_string).collect()).collect();
            let value = json!({"max_len": max_len, "partial": set.partial, "traces": as_text});
            ctx.emit(&value, || {
                let mut s = String::new();
                for t in &as_text {
                    s.push_str(&if t.is_empty() { "ε".to_string() } else { t.join(" . ") });
                    s.push('\n');
                }
                s
            });
            Ok(truncation_code(set.partial))
        }
    }
}

fn typecheck_config(tau: f64, summary_ratio: f64, k: f64) -> Result<TypecheckConfig, InputError> {
    let cfg = TypecheckConfig { tau, summary_ratio, k };
    cfg.validate().map_err(|e| InputError(e.to_string()))?;
    Ok(cfg)
}

fn cmd_typecheck(ctx: &mut Ctx, input: &Path, cfg: TypecheckConfig) -> CmdResult {
    let reg = load_input(input)?.registry()?;
    let report = typecheck_registry(&reg, &cfg);
    let summary = report.to_report();
    ctx.emit(&report, || report_text(&summary));
    Ok(summary.status.exit_code())
}

fn cmd_tokens(ctx: &mut Ctx, input: &Path, cfg: TypecheckConfig) -> CmdResult {
    let reg = load_input(input)?.registry()?;
    match token_report(&reg, &cfg) {
        Ok(r) => {
            let pass = r.below_fifth && r.summaries_within_bound;
            ctx.emit(&r, || {
                let mut s = format!(
                    "tools: {}\ndetailed: {}\nbaseline tokens: {}\nprogressive tokens: {}\nratio: {:.6}\nbelow one fifth: {}\nsummaries within bound: {}\n",
                    r.tools, r.detailed, r.baseline, r.progressive, r.ratio, r.below_fifth, r.summaries_within_bound
                );
                for w in &r.warnings {
                    s.push_str(&format!("warning: {w}\n"));
                }
                s
            });
            Ok(if pass { 0 } else { 1 })
        }
        Err(e) => {
            let value = json!({"status": "fail", "error": e.to_string()});
            ctx.emit(&value, || format!("tokens: fail\n  {e}\n"));
            Ok(1)
        }
    }
}

/// Tool groups connected by dependency declarations. Ordering checks run
/// per group so unrelated tools do not multiply the state space.
fn dependency_components(reg: &McpRegistry) -> Vec<Vec<Tool>> {
    let names: Vec<&str> = reg.tools.iter().map(|t| t.name.as_str()).collect();
    let mut parent: Vec<usize> = (0..names.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for t in &reg.tools {
        let i = names.iter().position(|n| *n == t.name).expect("listed");
        for d in t.metadata.iter().flat_map(|m| m.dependencies.iter().flatten()) {
            if let Some(j) = names.iter().position(|n| *n == d.tool) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Tool>> = BTreeMap::new();
    for (i, t) in reg.tools.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(t.clone());
    }
    groups.into_values().collect()
}

fn merge(check: &str, parts: Vec<VerificationReport>) -> VerificationReport {
    let mut r = VerificationReport::pass(check);
    for p in parts {
        r.status = r.status.and(p.status);
        r.notes.extend(p.notes);
        r.warnings.extend(p.warnings);
        r.witnesses.extend(p.witnesses);
    }
    let notes: BTreeSet<String> = r.notes.drain(..).collect();
    r.notes = notes.into_iter().collect();
    r
}

fn cmd_verify(ctx: &mut Ctx, input: &Path, property: Property, registry: Option<&Path>) -> CmdResult {
    let loaded = load_input(input)?;
    let reg = match registry {
        Some(p) => match load_input(p)? {
            Input::Mcp(r) => r,
            _ => return Err("--registry expects an MCP manifest".into()),
        },
        None => match &loaded {
            Input::Lts(_) => return Err("an LTS input needs --registry for tool metadata".into()),
            other => other.registry()?,
        },
    };
    let want = |p: Property| property == p || property == Property::All;
    let mut reports = Vec::new();
    let ordering = want(Property::Approval) || want(Property::Deps);
    // Per-group LTSs for registries; the term itself otherwise.
    let systems: Vec<Lts> = if !ordering {
        Vec::new()
    } else {
        match &loaded {
            Input::Lts(l) => vec![l.clone()],
            Input::Mcp(r) => dependency_components(r)
                .into_iter()
                .map(|g| {
                    let t = ProcessTerm::par_all(g.into_iter().map(ProcessTerm::Tool));
                    ctx.build(&t, derive_universe(&t))
                })
                .collect::<Result<_, _>>()?,
            other => {
                let t = other.term()?;
                vec![ctx.build(&t, derive_universe(&t))?]
            }
        }
    };
    if want(Property::Approval) {
        reports.push(merge("approval-ordering", systems.iter().map(|l| check_approval_ordering(l, &reg)).collect()));
    }
    if want(Property::Deps) {
        reports.push(merge("dependency-ordering", systems.iter().map(|l| check_dependency_ordering(l, &reg)).collect()));
    }
    if want(Property::Confine) {
        match &loaded {
            Input::Lts(_) => return Err("confinement needs a term, not an LTS".into()),
            other => reports.push(confinement_report(&other.term()?)),
        }
    }
    if want(Property::Inert) {
        let extra: Vec<ProcessTerm> = match &loaded {
            Input::Term(t) => vec![t.clone()],
            _ => Vec::new(),
        };
        reports.push(check_inert_descriptions(&reg, &extra));
    }
    let status = reports.iter().fold(Status::Pass, |s, r| s.and(r.status));
    let value = json!({"status": status, "reports": reports});
    ctx.emit(&value, || reports.iter().map(report_text).collect());
    Ok(status.exit_code())
}

fn cmd_demo(ctx: &mut Ctx) -> CmdResult {
    let rows = demo::demo_matrix(ctx.cli.seed);
    let status = rows.iter().fold(Status::Pass, |s, r| s.and(r.status));
    let passed = rows.iter().filter(|r| r.status == Status::Pass).count();
    let value = json!({"status": status, "passed": passed, "total": rows.len(), "examples": rows});
    ctx.emit(&value, || {
        let mut s = String::new();
        for r in &rows {
            s.push_str(&format!("{:<5} {}\n", status_word(r.status).to_uppercase(), r.example));
        }
        s.push_str(&format!("{passed}/{} examples pass\n", rows.len()));
        s
    });
    Ok(status.exit_code())
}

fn dispatch(ctx: &mut Ctx) -> CmdResult {
    match &ctx.cli.command {
        Command::Parse { input } => cmd_parse(ctx, &input.clone()),
        Command::Lts { input, dot } => {
            let (input, dot) = (input.clone(), *dot);
            cmd_lts(ctx, &input, dot)
        }
        Command::Map { input, dir, plus, round_trip } => {
            let (input, dir, plus, rt) = (input.clone(), *dir, *plus, *round_trip);
            cmd_map(ctx, &input, dir, plus, rt)
        }
        Command::Bisim { left, right } => {
            let (l, r) = (left.clone(), right.clone());
            cmd_bisim(ctx, &l, &r)
        }
        Command::Traces { left, right, max_len } => {
            let (l, r, n) = (left.clone(), right.clone(), *max_len);
            cmd_traces(ctx, &l, r.as_deref(), n)
        }
        Command::Typecheck { input, tau, summary_ratio, k } => {
            let cfg = typecheck_config(*tau, *summary_ratio, *k)?;
            let input = input.clone();
            cmd_typecheck(ctx, &input, cfg)
        }
        Command::Tokens { input, k, summary_ratio } => {
            let cfg = typecheck_config(TypecheckConfig::default().tau, *summary_ratio, *k)?;
            let input = input.clone();
            cmd_tokens(ctx, &input, cfg)
        }
        Command::Verify { input, property, registry } => {
            let (input, p, reg) = (input.clone(), *property, registry.clone());
            cmd_verify(ctx, &input, p, reg.as_deref())
        }
        Command::Demo => cmd_demo(ctx),
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Ctx { cli: &cli, out, err };
    match dispatch(&mut ctx) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            2
        }
    }
}
