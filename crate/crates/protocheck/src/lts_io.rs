//! LTS files: JSON for machines, Graphviz DOT for people.

use std::fmt::Write as _;

use protocheck_core::Lts;
use serde_json::Value;

use crate::json;

#[derive(Debug, thiserror::Error)]
pub enum LtsIoError {
    #[error("invalid LTS JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("LTS refers to a state index outside 0..{states}")]
    BadIndex { states: usize },
}

pub fn lts_value(lts: &Lts) -> Value {
    serde_json::to_value(lts).expect("LTS serialises")
}

pub fn lts_to_json(lts: &Lts) -> String {
    json::canonical(&lts_value(lts))
}

pub fn lts_from_value(value: Value) -> Result<Lts, LtsIoError> {
    let lts: Lts = serde_json::from_value(value)?;
    if lts.is_well_formed() {
        Ok(lts)
    } else {
        Err(LtsIoError::BadIndex { states: lts.len() })
    }
}

pub fn lts_from_json(text: &str) -> Result<Lts, LtsIoError> {
    lts_from_value(serde_json::from_str(text)?)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

/// Nodes are state indices, tooltips the printed state term.
pub fn lts_to_dot(lts: &Lts) -> String {
    let mut out = String::from("digraph lts {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (i, s) in lts.states.iter().enumerate() {
        let shape = if i == lts.initial { ", shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  s{i} [label=\"{i}\", tooltip=\"{}\"{shape}];", escape(&s.to_string()));
    }
    for (s, l, t) in &lts.transitions {
        let _ = writeln!(out, "  s{s} -> s{t} [label=\"{}\"];", escape(&l.to_string()));
    }
    if lts.truncated {
        out.push_str("  truncated [shape=note, label=\"truncated\"];\n");
    }
    out.push_str("}\n");
    out
}
