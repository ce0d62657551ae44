//! Pretty printer producing the concrete syntax accepted by `parse_term`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use super::literal::write_quoted;
use super::{Dependency, FailureMode, Intent, JsonSchema, ProcessTerm, RecoveryStrategy, Tool};

struct Quoted<'a>(&'a str);

impl fmt::Display for Quoted<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_quoted(f, self.0)
    }
}

/// A name as it must appear in source: bare when it lexes as one identifier.
pub(crate) struct Name<'a>(pub &'a str);

impl fmt::Display for Name<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut chars = self.0.chars();
        let bare = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            }
            _ => false,
        };
        if bare {
            f.write_str(self.0)
        } else {
            write_quoted(f, self.0)
        }
    }
}

struct Printer {
    out: String,
    indent: usize,
}

impl Printer {
    fn newline(&mut self) {
        self.out.push('\n');
        for _ in 0..self.indent {
            self.out.push_str("  ");
        }
    }

    fn names<'a, I: IntoIterator<Item = &'a String>>(&mut self, names: I) {
        let mut first = true;
        for n in names {
            if !first {
                self.out.push_str(", ");
            }
            first = false;
            let _ = write!(self.out, "{}", Name(n));
        }
    }

    fn params(&mut self, params: &super::Params) {
        self.out.push('{');
        let mut first = true;
        for (k, v) in params {
            if !first {
                self.out.push_str(", ");
            }
            first = false;
            let _ = write!(self.out, "{}: {}", Name(k), v);
        }
        self.out.push('}');
    }

    fn values(&mut self, values: &[String]) {
        self.out.push('[');
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            let _ = write!(self.out, "{}", Quoted(v));
        }
        self.out.push(']');
    }

    fn block(&mut self, clauses: Vec<String>) {
        if clauses.is_empty() {
            self.out.push_str("{}");
            return;
        }
        self.out.push('{');
        self.indent += 1;
        for c in clauses {
            self.newline();
            self.out.push_str(&c);
        }
        self.indent -= 1;
        self.newline();
        self.out.push('}');
    }

    fn term(&mut self, t: &ProcessTerm) {
        match t {
            ProcessTerm::Par { left, right } => {
                self.grouped(left, matches!(**left, ProcessTerm::Par { .. }));
                self.out.push_str(" | ");
                self.term(right);
            }
            _ => self.unary(t),
        }
    }

    fn grouped(&mut self, t: &ProcessTerm, parens: bool) {
        if parens {
            self.out.push('(');
            self.term(t);
            self.out.push(')');
        } else {
            self.unary(t);
        }
    }

    fn prefix_body(&mut self, body: &ProcessTerm) {
        self.grouped(body, matches!(body, ProcessTerm::Par { .. }));
    }

    fn unary(&mut self, t: &ProcessTerm) {
        match t {
            ProcessTerm::Par { .. } => {
                self.out.push('(');
                self.term(t);
                self.out.push(')');
            }
            ProcessTerm::Restrict { channel, body } => {
                let _ = write!(self.out, "(new {}) ", Name(channel));
                self.prefix_body(body);
            }
            ProcessTerm::Repl { body, copies } => {
                self.out.push('!');
                if *copies > 0 {
                    let _ = write!(self.out, "[{copies}] ");
                }
                self.prefix_body(body);
            }
            ProcessTerm::CollectSlot { slot, value, then } => {
                let _ = write!(self.out, "collect {} = {} . ", Name(slot), value);
                self.prefix_body(then);
            }
            _ => self.atom(t),
        }
    }

    fn atom(&mut self, t: &ProcessTerm) {
        match t {
            ProcessTerm::Nil => self.out.push('0'),
            ProcessTerm::Intent(intent) => self.intent(intent),
            ProcessTerm::Tool(tool) => self.tool(tool),
            ProcessTerm::ExecuteS {
                intent,
                bindings,
                transactional,
            } => {
                let _ = write!(self.out, "exec {} ", Name(intent));
                self.params(bindings);
                let _ = write!(self.out, " tx {transactional}");
            }
            ProcessTerm::Resource { uri, content } => {
                let _ = write!(self.out, "resource {} {}", Quoted(uri), Quoted(content));
            }
            ProcessTerm::Prompt { template, args } => {
                let _ = write!(self.out, "prompt {} (", Quoted(template));
                self.names(args);
                self.out.push(')');
            }
            ProcessTerm::Initialize { caps } => {
                self.out.push_str("init {");
                self.names(caps);
                self.out.push('}');
            }
            ProcessTerm::ToolsList { tools, caps } => {
                self.out.push_str("tools [");
                if !tools.is_empty() {
                    self.indent += 1;
                    for (i, tool) in tools.iter().enumerate() {
                        if i > 0 {
                            self.out.push(',');
                        }
                        self.newline();
                        self.tool(tool);
                    }
                    self.indent -= 1;
                    self.newline();
                }
                self.out.push(']');
                if !caps.is_empty() {
                    self.out.push_str(" caps {");
                    self.names(caps);
                    self.out.push('}');
                }
            }
            ProcessTerm::ToolCall {
                name,
                params,
                credentials,
            } => {
                let _ = write!(self.out, "call {} ", Name(name));
                self.params(params);
                if !credentials.is_empty() {
                    self.out.push_str(" with ");
                    self.names(credentials);
                }
            }
            ProcessTerm::Validate {
                tool,
                params,
                schema,
                gate,
            } => {
                let _ = write!(self.out, "validate {} ", Name(tool));
                self.params(params);
                self.out.push_str(" against ");
                let clauses = param_clauses(schema);
                self.block(clauses);
                if let Some(gate) = gate {
                    self.out.push_str(" gate (");
                    self.names(&gate.awaiting);
                    self.out.push(')');
                    if gate.approval {
                        self.out.push_str(" approval");
                    }
                }
            }
            ProcessTerm::ToolSummary { tool } => {
                self.out.push_str("summary ");
                self.tool(tool);
            }
            ProcessTerm::Pending {
                tool,
                params,
                awaiting,
                approval,
            } => {
                let _ = write!(self.out, "pending {} ", Name(tool));
                self.params(params);
                if !awaiting.is_empty() {
                    self.out.push_str(" awaiting (");
                    self.names(awaiting);
                    self.out.push(')');
                }
                if *approval {
                    self.out.push_str(" approval");
                }
            }
            ProcessTerm::Token { from } => {
                let _ = write!(self.out, "token {}", Name(from));
            }
            ProcessTerm::ResultT { output } => {
                let _ = write!(self.out, "result {output}");
            }
            ProcessTerm::ErrorT { error_type, message } => {
                let _ = write!(self.out, "error {} {}", Name(error_type), Quoted(message));
            }
            ProcessTerm::Par { .. }
            | ProcessTerm::Restrict { .. }
            | ProcessTerm::Repl { .. }
            | ProcessTerm::CollectSlot { .. } => self.unary(t),
        }
    }

    fn intent(&mut self, intent: &Intent) {
        let _ = write!(self.out, "intent {} ", Name(&intent.name));
        let mut clauses = alloc::vec![alloc::format!("description {}", Quoted(&intent.description))];
        for (slot, kind) in intent
            .required
            .iter()
            .map(|s| (s, "required"))
            .chain(intent.optional.iter().map(|s| (s, "optional")))
        {
            let mut c = alloc::format!(
                "slot {} : {} {} {}",
                Name(&slot.name),
                slot.type_name,
                kind,
                Quoted(&slot.description)
            );
            if !slot.possible_values.is_empty() {
                c.push(' ');
                c.push_str(&values_text(&slot.possible_values));
            }
            clauses.push(c);
        }
        clauses.push(alloc::format!("transactional {}", intent.transactional));
        if !intent.failure_modes.is_empty() {
            clauses.push(alloc::format!("failures {}", failures_text(&intent.failure_modes)));
        }
        if !intent.dependencies.is_empty() {
            clauses.push(alloc::format!("depends {}", deps_text(&intent.dependencies)));
        }
        self.block(clauses);
    }

    fn tool(&mut self, tool: &Tool) {
        let _ = write!(self.out, "tool {} ", Name(&tool.name));
        let mut clauses = alloc::vec![alloc::format!("description {}", Quoted(&tool.description))];
        clauses.extend(param_clauses(&tool.schema));
        if let Some(meta) = &tool.metadata {
            let before = clauses.len();
            if let Some(se) = meta.side_effects {
                clauses.push(alloc::format!("side_effects {}", se.as_str()));
            }
            if let Some(b) = meta.requires_approval {
                clauses.push(alloc::format!("requires_approval {b}"));
            }
            if let Some(s) = &meta.summary {
                clauses.push(alloc::format!("summary {}", Quoted(s)));
            }
            if let Some(f) = &meta.failure_modes {
                clauses.push(alloc::format!("failures {}", failures_text(f)));
            }
            if let Some(d) = &meta.dependencies {
                clauses.push(alloc::format!("depends {}", deps_text(d)));
            }
            if clauses.len() == before {
                clauses.push(String::from("plus"));
            }
        }
        self.block(clauses);
    }
}

fn values_text(values: &[String]) -> String {
    let mut p = Printer {
        out: String::new(),
        indent: 0,
    };
    p.values(values);
    p.out
}

/// Required properties first in declared order, then the rest by name, so the
/// parser rebuilds `required` exactly.
fn param_clauses(schema: &JsonSchema) -> Vec<String> {
    let mut out = Vec::new();
    let ordered = schema
        .required
        .iter()
        .map(|n| (n, true))
        .chain(schema.optional_names().map(|n| (n, false)));
    for (name, required) in ordered {
        let Some(spec) = schema.properties.get(name) else {
            continue;
        };
        let mut c = alloc::format!("param {} : {}", Name(name), spec.type_name);
        if required {
            c.push_str(" required");
        }
        if let Some(d) = &spec.description {
            let _ = write!(c, " {}", Quoted(d));
        }
        if let Some(values) = &spec.enum_values {
            c.push(' ');
            c.push_str(&values_text(values));
        }
        out.push(c);
    }
    out
}

fn failures_text(modes: &[FailureMode]) -> String {
    let mut s = String::from("[");
    for (i, m) in modes.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{} ", Name(&m.error));
        let _ = match &m.recovery {
            RecoveryStrategy::Retry { n } => write!(s, "retry {n}"),
            RecoveryStrategy::Fallback { tool } => write!(s, "fallback {}", Name(tool)),
            RecoveryStrategy::UserPrompt { message } => write!(s, "user_prompt {}", Quoted(message)),
            RecoveryStrategy::Abort => write!(s, "abort"),
        };
    }
    s.push(']');
    s
}

fn deps_text(deps: &[Dependency]) -> String {
    let mut s = String::from("[");
    for (i, d) in deps.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{} {}", Name(&d.tool), d.relation.as_str());
    }
    s.push(']');
    s
}

impl fmt::Display for ProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = Printer {
            out: String::new(),
            indent: 0,
        };
        p.term(self);
        f.write_str(&p.out)
    }
}
