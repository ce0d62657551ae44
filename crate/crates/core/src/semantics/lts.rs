use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::config::ExploreConfig;
use super::label::TransitionLabel;
use super::step::{check_pure, successors, StepError};
use crate::term::{canonicalize, Literal, ProcessTerm};

/// A finite labelled transition system over canonical states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lts {
    pub states: Vec<ProcessTerm>,
    pub initial: usize,
    pub transitions: Vec<(usize, TransitionLabel, usize)>,
    pub truncated: bool,
}

impl Lts {
    /// An LTS given only by its edges; states are numbered placeholders.
    pub fn from_edges(n: usize, initial: usize, transitions: Vec<(usize, TransitionLabel, usize)>) -> Self {
        Lts {
            states: (0..n)
                .map(|i| ProcessTerm::result(Literal::Integer(i as i64)))
                .collect(),
            initial,
            transitions,
            truncated: false,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Outgoing edges per state, in transition order.
    pub fn adjacency(&self) -> Vec<Vec<(TransitionLabel, usize)>> {
        let mut out = alloc::vec![Vec::new(); self.states.len()];
        for (s, l, t) in &self.transitions {
            out[*s].push((l.clone(), *t));
        }
        out
    }

    /// Whether every edge endpoint names a state.
    pub fn is_well_formed(&self) -> bool {
        let n = self.states.len();
        self.initial < n && self.transitions.iter().all(|(s, _, t)| *s < n && *t < n)
    }

    /// Replay `labels` from the initial state; true if some path matches.
    pub fn replays(&self, labels: &[TransitionLabel]) -> bool {
        let adj = self.adjacency();
        let mut current = BTreeSet::from([self.initial]);
        for l in labels {
            current = current
                .iter()
                .flat_map(|s| adj[*s].iter().filter(|(m, _)| m == l).map(|(_, t)| *t))
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        true
    }
}

/// Breadth-first exploration from `term` until closure or `max_states`.
pub fn build_lts(term: &ProcessTerm, config: &ExploreConfig) -> Result<Lts, StepError> {
    check_pure(term)?;
    let start = canonicalize(term);
    let mut index: BTreeMap<ProcessTerm, usize> = BTreeMap::new();
    let mut states = alloc::vec![start.clone()];
    index.insert(start, 0);
    let mut transitions = Vec::new();
    let mut truncated = false;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let succ = successors(&states[s], config);
        truncated |= succ.truncated;
        for (label, next) in succ.moves {
            let t = match index.get(&next) {
                Some(&t) => t,
                None => {
                    if states.len() >= config.max_states {
                        truncated = true;
                        continue;
                    }
                    let t = states.len();
                    index.insert(next.clone(), t);
                    states.push(next);
                    queue.push_back(t);
                    t
                }
            };
            transitions.push((s, label, t));
        }
    }
    Ok(Lts {
        states,
        initial: 0,
        transitions,
        truncated,
    })
}

/// Label sequences of bounded length from the initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSet {
    pub traces: BTreeSet<Vec<TransitionLabel>>,
    /// The LTS was truncated, so longer behaviour may be missing.
    pub partial: bool,
}

/// Every label sequence of length at most `max_len`, including the empty one.
pub fn traces(lts: &Lts, max_len: usize) -> TraceSet {
    let adj = lts.adjacency();
    let mut traces = BTreeSet::new();
    let mut frontier: BTreeSet<(Vec<TransitionLabel>, usize)> = BTreeSet::from([(Vec::new(), lts.initial)]);
    for _ in 0..=max_len {
        let mut next = BTreeSet::new();
        for (prefix, s) in &frontier {
            traces.insert(prefix.clone());
            if prefix.len() == max_len {
                continue;
            }
            for (l, t) in &adj[*s] {
                let mut longer = prefix.clone();
                longer.push(l.clone());
                next.insert((longer, *t));
            }
        }
        frontier = next;
    }
    TraceSet {
        traces,
        partial: lts.truncated,
    }
}
