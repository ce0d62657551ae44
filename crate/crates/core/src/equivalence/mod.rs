//! Bisimulation and trace equivalence across the two calculi.
//!
//! Labels from both sides are first normalised into a shared alphabet of
//! [`ActionClass`]es: `invoke` and `call` with equal arguments coincide,
//! every `tau` becomes [`ActionClass::Silent`], and (optionally) the two
//! missing-argument errors are identified. Strong bisimilarity is then
//! decided by partition refinement over the disjoint union of the two
//! systems; weak bisimilarity is strong bisimilarity of the saturated
//! systems.

mod brute;
mod refine;
mod trace;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::report::Status;
use crate::semantics::{Lts, TransitionLabel};
use crate::term::{Ident, Literal, Params};

pub use brute::{brute_force_bisim, BruteForceError, BRUTE_FORCE_PAIR_LIMIT};
pub use refine::{bisimilar, bisimulation_blocks};
pub use trace::trace_equivalent;

/// Error types that report a required argument as missing.
pub const MISSING_ARGUMENT_ERRORS: [&str; 2] = ["MissingSlots", "ValidationError"];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ActionClass {
    Invoke { name: Ident, params: Params },
    Silent,
    Execute { name: Ident },
    Result { output: Literal },
    Error { error_type: Ident, message: String },
    /// Either missing-argument error once they are unified.
    MissingRequired { message: String },
    Read { uri: String },
    List { filter: String },
    Approval { tool: Ident, confirm: bool },
    Requires { token: Ident },
    Detail { name: Ident },
}

impl core::fmt::Display for ActionClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ActionClass::Invoke { name, params } => {
                write!(f, "invoke({name}")?;
                for (k, v) in params {
                    write!(f, ", {k}={v}")?;
                }
                f.write_str(")")
            }
            ActionClass::Silent => f.write_str("tau"),
            ActionClass::Execute { name } => write!(f, "execute({name})"),
            ActionClass::Result { output } => write!(f, "result({output})"),
            ActionClass::Error { error_type, message } => write!(f, "error({error_type}, {message:?})"),
            ActionClass::MissingRequired { message } => write!(f, "missing_required({message:?})"),
            ActionClass::Read { uri } => write!(f, "read({uri})"),
            ActionClass::List { filter } => write!(f, "list({filter:?})"),
            ActionClass::Approval { tool, confirm } => write!(f, "approval({tool}, {confirm})"),
            ActionClass::Requires { token } => write!(f, "requires({token})"),
            ActionClass::Detail { name } => write!(f, "detail({name})"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeOptions {
    /// Identify `MissingSlots` and `ValidationError` errors with equal messages.
    pub unify_errors: bool,
}

impl NormalizeOptions {
    pub fn unified() -> Self {
        NormalizeOptions { unify_errors: true }
    }
}

/// Map a label of either calculus into the shared alphabet.
pub fn normalize_label(label: &TransitionLabel, opts: &NormalizeOptions) -> ActionClass {
    use TransitionLabel as L;
    match label {
        L::Invoke { name, params } | L::Call { name, params } => ActionClass::Invoke {
            name: name.clone(),
            params: params.clone(),
        },
        // Slot collection is internal to the dialogue.
        L::Tau { .. } | L::Collect { .. } => ActionClass::Silent,
        L::Execute { name } => ActionClass::Execute { name: name.clone() },
        L::Result { output } => ActionClass::Result { output: output.clone() },
        L::Error { error_type, message } => {
            if opts.unify_errors && MISSING_ARGUMENT_ERRORS.contains(&error_type.as_str()) {
                ActionClass::MissingRequired {
                    message: message.clone(),
                }
            } else {
                ActionClass::Error {
                    error_type: error_type.clone(),
                    message: message.clone(),
                }
            }
        }
        L::Read { uri } => ActionClass::Read { uri: uri.clone() },
        L::List { filter } => ActionClass::List { filter: filter.clone() },
        L::Approval { tool, confirm } => ActionClass::Approval {
            tool: tool.clone(),
            confirm: *confirm,
        },
        L::Requires { token } => ActionClass::Requires { token: token.clone() },
        L::Detail { name } => ActionClass::Detail { name: name.clone() },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BisimMode {
    Strong,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Why two systems are not equivalent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquivalenceWitness {
    /// An observable trace accepted by one side only.
    Trace { actions: Vec<ActionClass>, accepted_by: Side },
    /// After `path` the two sides reach `left` and `right`; `side` can do
    /// `action` and the other side cannot match it. With `unmatched` the
    /// other side has no `action` step at all; otherwise every such step
    /// leads to a state that is not bisimilar.
    Distinguish {
        path: Vec<ActionClass>,
        left: usize,
        right: usize,
        action: ActionClass,
        side: Side,
        unmatched: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    /// The answer on the explored part of both systems.
    pub equivalent: bool,
    /// Either system was truncated, so the answer is not certified.
    pub inconclusive: bool,
    pub witness: Option<EquivalenceWitness>,
}

impl EquivalenceVerdict {
    pub fn status(&self) -> Status {
        if self.inconclusive {
            Status::Inconclusive
        } else if self.equivalent {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// An LTS with labels interned over a shared alphabet. Used by every
/// decision procedure here.
#[derive(Clone, Debug)]
pub(crate) struct Graph {
    pub succ: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Alphabet {
    pub classes: Vec<ActionClass>,
    index: alloc::collections::BTreeMap<ActionClass, usize>,
}

impl Alphabet {
    pub fn intern(&mut self, c: ActionClass) -> usize {
        if let Some(&i) = self.index.get(&c) {
            return i;
        }
        let i = self.classes.len();
        self.index.insert(c.clone(), i);
        self.classes.push(c);
        i
    }

    pub fn silent(&mut self) -> usize {
        self.intern(ActionClass::Silent)
    }
}

impl Graph {
    pub fn from_lts(lts: &Lts, opts: &NormalizeOptions, alpha: &mut Alphabet) -> Graph {
        let mut succ = alloc::vec![Vec::new(); lts.len()];
        for (s, l, t) in &lts.transitions {
            succ[*s].push((alpha.intern(normalize_label(l, opts)), *t));
        }
        for row in succ.iter_mut() {
            row.sort_unstable();
            row.dedup();
        }
        Graph { succ }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    /// States reachable by zero or more silent steps.
    pub fn silent_closure(&self, s: usize, silent: usize) -> Vec<usize> {
        let mut seen = alloc::collections::BTreeSet::from([s]);
        let mut stack = alloc::vec![s];
        while let Some(p) = stack.pop() {
            for &(a, q) in &self.succ[p] {
                if a == silent && seen.insert(q) {
                    stack.push(q);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Weak transitions as strong ones: `s =a=> t` for visible `a` and the
    /// reflexive-transitive silent closure.
    pub fn saturate(&self, silent: usize) -> Graph {
        let closure: Vec<Vec<usize>> = (0..self.len()).map(|s| self.silent_closure(s, silent)).collect();
        let mut succ = Vec::with_capacity(self.len());
        for s in 0..self.len() {
            let mut row = alloc::collections::BTreeSet::new();
            for &r in &closure[s] {
                row.insert((silent, r));
                for &(a, q) in &self.succ[r] {
                    if a != silent {
                        for &t in &closure[q] {
                            row.insert((a, t));
                        }
                    }
                }
            }
            succ.push(row.into_iter().collect());
        }
        Graph { succ }
    }

    /// Disjoint union; the states of `other` are shifted by `self.len()`.
    pub fn union(&self, other: &Graph) -> Graph {
        let off = self.len();
        let mut succ = self.succ.clone();
        succ.extend(
            other
                .succ
                .iter()
                .map(|row| row.iter().map(|&(a, t)| (a, t + off)).collect()),
        );
        Graph { succ }
    }

    pub fn step(&self, s: usize, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.succ[s].iter().filter(move |(b, _)| *b == a).map(|(_, t)| *t)
    }

    pub fn enabled(&self, s: usize) -> alloc::collections::BTreeSet<usize> {
        self.succ[s].iter().map(|(a, _)| *a).collect()
    }
}

/// Both systems over one alphabet, saturated in weak mode.
pub(crate) fn prepare(a: &Lts, b: &Lts, mode: BisimMode, opts: &NormalizeOptions) -> (Graph, Graph, Alphabet) {
    let mut alpha = Alphabet::default();
    let silent = alpha.silent();
    let (ga, gb) = (Graph::from_lts(a, opts, &mut alpha), Graph::from_lts(b, opts, &mut alpha));
    match mode {
        BisimMode::Strong => (ga, gb, alpha),
        BisimMode::Weak => (ga.saturate(silent), gb.saturate(silent), alpha),
    }
}

impl EquivalenceWitness {
    /// Re-check the witness against the two systems with the exhaustive
    /// relation. Independent of the refinement that produced it.
    pub fn holds(&self, a: &Lts, b: &Lts, mode: BisimMode, opts: &NormalizeOptions) -> bool {
        match self {
            EquivalenceWitness::Trace { actions, accepted_by } => {
                let (l, r) = (trace::accepts(a, actions, opts), trace::accepts(b, actions, opts));
                match accepted_by {
                    Side::Left => l && !r,
                    Side::Right => r && !l,
                }
            }
            EquivalenceWitness::Distinguish {
                path,
                left,
                right,
                action,
                side,
                unmatched,
            } => brute::distinguishes(a, b, mode, opts, path, (*left, *right), action, *side, *unmatched),
        }
    }
}
