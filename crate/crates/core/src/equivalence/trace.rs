//! Bounded observable-trace equivalence by subset construction.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use super::{Alphabet, EquivalenceVerdict, EquivalenceWitness, Graph, NormalizeOptions, Side};
use crate::semantics::Lts;

fn close(g: &Graph, set: &BTreeSet<usize>, silent: usize) -> BTreeSet<usize> {
    set.iter().flat_map(|s| g.silent_closure(*s, silent)).collect()
}

fn visible(g: &Graph, set: &BTreeSet<usize>, silent: usize) -> BTreeSet<usize> {
    set.iter()
        .flat_map(|s| g.succ[*s].iter().map(|(a, _)| *a))
        .filter(|a| *a != silent)
        .collect()
}

fn after(g: &Graph, set: &BTreeSet<usize>, a: usize, silent: usize) -> BTreeSet<usize> {
    let stepped = set.iter().flat_map(|s| g.step(*s, a)).collect();
    close(g, &stepped, silent)
}

/// Compare the observable traces of `a` and `b` up to `max_len` visible
/// actions. Silent steps are erased.
pub fn trace_equivalent(a: &Lts, b: &Lts, max_len: usize, opts: &NormalizeOptions) -> EquivalenceVerdict {
    let mut alpha = Alphabet::default();
    let silent = alpha.silent();
    let (ga, gb) = (Graph::from_lts(a, opts, &mut alpha), Graph::from_lts(b, opts, &mut alpha));
    let start = (
        close(&ga, &BTreeSet::from([a.initial]), silent),
        close(&gb, &BTreeSet::from([b.initial]), silent),
    );
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([(Vec::<usize>::new(), start.0, start.1)]);
    let mut witness = None;
    'search: while let Some((prefix, sa, sb)) = queue.pop_front() {
        if prefix.len() >= max_len {
            continue;
        }
        let (va, vb) = (visible(&ga, &sa, silent), visible(&gb, &sb, silent));
        for (side, extra) in [(Side::Left, va.difference(&vb).next()), (Side::Right, vb.difference(&va).next())] {
            if let Some(&x) = extra {
                let mut actions: Vec<_> = prefix.iter().map(|i| alpha.classes[*i].clone()).collect();
                actions.push(alpha.classes[x].clone());
                witness = Some(EquivalenceWitness::Trace {
                    actions,
                    accepted_by: side,
                });
                break 'search;
            }
        }
        for x in va {
            let next = (after(&ga, &sa, x, silent), after(&gb, &sb, x, silent));
            if seen.insert(next.clone()) {
                let mut longer = prefix.clone();
                longer.push(x);
                queue.push_back((longer, next.0, next.1));
            }
        }
    }
    EquivalenceVerdict {
        equivalent: witness.is_none(),
        inconclusive: a.truncated || b.truncated,
        witness,
    }
}

/// Whether `lts` can perform the visible sequence `actions`, silent steps
/// allowed anywhere.
pub(crate) fn accepts(lts: &Lts, actions: &[super::ActionClass], opts: &NormalizeOptions) -> bool {
    let mut alpha = Alphabet::default();
    let silent = alpha.silent();
    let g = Graph::from_lts(lts, opts, &mut alpha);
    let mut cur = close(&g, &BTreeSet::from([lts.initial]), silent);
    for c in actions {
        let a = alpha.intern(c.clone());
        cur = after(&g, &cur, a, silent);
        if cur.is_empty() {
            return false;
        }
    }
    true
}
