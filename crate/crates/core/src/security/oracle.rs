//! Path enumeration used to cross-check the monitor-based ordering checks.
//!
//! Every path of at most `max_len` labels is scanned from the start with a
//! fresh approval count and executed set. Exponential; only for small
//! systems.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::registry::McpRegistry;
use crate::semantics::{Lts, TransitionLabel};
use crate::term::Ident;

fn search(
    adj: &[Vec<(TransitionLabel, usize)>],
    s: usize,
    path: &mut Vec<TransitionLabel>,
    max_len: usize,
    bad: &dyn Fn(&[TransitionLabel], &TransitionLabel) -> bool,
) -> Option<Vec<TransitionLabel>> {
    if path.len() == max_len {
        return None;
    }
    for (l, t) in &adj[s] {
        if bad(path, l) {
            path.push(l.clone());
            return Some(path.clone());
        }
        path.push(l.clone());
        if let Some(p) = search(adj, *t, path, max_len, bad) {
            return Some(p);
        }
        path.pop();
    }
    None
}

/// A path on which a mutating tool runs without a matching prior approval.
pub fn approval_violation(lts: &Lts, registry: &McpRegistry, max_len: usize) -> Option<Vec<TransitionLabel>> {
    let mutating = registry.mutating_tools();
    let bad = |before: &[TransitionLabel], l: &TransitionLabel| match l {
        TransitionLabel::Execute { name } if mutating.contains(name) => {
            let approvals = before
                .iter()
                .filter(|b| matches!(b, TransitionLabel::Approval { tool, confirm: true } if tool == name))
                .count();
            let runs = before
                .iter()
                .filter(|b| matches!(b, TransitionLabel::Execute { name: n } if n == name))
                .count();
            approvals <= runs
        }
        _ => false,
    };
    search(&lts.adjacency(), lts.initial, &mut Vec::new(), max_len, &bad)
}

/// A path on which a tool runs before one of its prerequisites.
pub fn dependency_violation(lts: &Lts, registry: &McpRegistry, max_len: usize) -> Option<Vec<TransitionLabel>> {
    let mut needs: BTreeMap<Ident, BTreeSet<Ident>> = BTreeMap::new();
    for (d, p) in registry.requires_edges() {
        needs.entry(d).or_default().insert(p);
    }
    let bad = |before: &[TransitionLabel], l: &TransitionLabel| match l {
        TransitionLabel::Execute { name } => needs.get(name).is_some_and(|ps| {
            ps.iter()
                .any(|p| !before.iter().any(|b| matches!(b, TransitionLabel::Execute { name: n } if n == p)))
        }),
        _ => false,
    };
    search(&lts.adjacency(), lts.initial, &mut Vec::new(), max_len, &bad)
}
