//! Splitter-based partition refinement.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use super::{prepare, BisimMode, EquivalenceVerdict, EquivalenceWitness, Graph, NormalizeOptions, Side};
use crate::semantics::Lts;

/// Coarsest partition of `g` stable under every action. Returns the block
/// index of each state.
pub(crate) fn refine(g: &Graph) -> Vec<usize> {
    let n = g.len();
    let mut pred: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); n];
    for (s, row) in g.succ.iter().enumerate() {
        for &(a, t) in row {
            pred[t].push((a, s));
        }
    }
    let mut block_of = alloc::vec![0usize; n];
    let mut blocks: Vec<Vec<usize>> = alloc::vec![(0..n).collect()];
    let mut queued = alloc::vec![true];
    let mut work = VecDeque::from([0usize]);
    while let Some(b) = work.pop_front() {
        queued[b] = false;
        let mut pre: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &t in &blocks[b] {
            for &(a, s) in &pred[t] {
                pre.entry(a).or_default().insert(s);
            }
        }
        for sources in pre.values() {
            let mut touched: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &s in sources {
                touched.entry(block_of[s]).or_default().push(s);
            }
            for (x, inside) in touched {
                if inside.len() == blocks[x].len() {
                    continue;
                }
                let new = blocks.len();
                for &s in &inside {
                    block_of[s] = new;
                }
                blocks[x].retain(|s| block_of[*s] == x);
                blocks.push(inside);
                queued.push(false);
                for y in [x, new] {
                    if !queued[y] {
                        queued[y] = true;
                        work.push_back(y);
                    }
                }
            }
        }
    }
    block_of
}

/// Bisimulation classes of the disjoint union of `a` and `b`: the block of
/// each state of `a`, then of each state of `b`.
pub fn bisimulation_blocks(a: &Lts, b: &Lts, mode: BisimMode, opts: &NormalizeOptions) -> (Vec<usize>, Vec<usize>) {
    let (ga, gb, _) = prepare(a, b, mode, opts);
    let blocks = refine(&ga.union(&gb));
    let right = blocks[ga.len()..].to_vec();
    let mut left = blocks;
    left.truncate(ga.len());
    (left, right)
}

/// Decide bisimilarity of the initial states of `a` and `b`.
pub fn bisimilar(a: &Lts, b: &Lts, mode: BisimMode, opts: &NormalizeOptions) -> EquivalenceVerdict {
    let (ga, gb, alpha) = prepare(a, b, mode, opts);
    let off = ga.len();
    let u = ga.union(&gb);
    let blocks = refine(&u);
    let equivalent = blocks[a.initial] == blocks[off + b.initial];
    let witness = if equivalent {
        None
    } else {
        let Found { path, p, q, action, side, unmatched } = find_witness(&u, &blocks, a.initial, off + b.initial);
        Some(EquivalenceWitness::Distinguish {
            path: path.into_iter().map(|i| alpha.classes[i].clone()).collect(),
            left: p,
            right: q - off,
            action: alpha.classes[action].clone(),
            side,
            unmatched,
        })
    };
    EquivalenceVerdict {
        equivalent,
        inconclusive: a.truncated || b.truncated,
        witness,
    }
}

struct Found {
    path: Vec<usize>,
    p: usize,
    q: usize,
    action: usize,
    side: Side,
    unmatched: bool,
}

/// Breadth-first search over pairs of inequivalent states for an action one
/// side cannot perform at all. Falls back to the first pair and action that
/// break the bisimulation condition.
fn find_witness(u: &Graph, blocks: &[usize], p0: usize, q0: usize) -> Found {
    let mut seen = BTreeSet::from([(p0, q0)]);
    let mut queue = VecDeque::from([(alloc::vec![], p0, q0)]);
    let mut fallback: Option<Found> = None;
    while let Some((path, p, q)) = queue.pop_front() {
        let (ep, eq) = (u.enabled(p), u.enabled(q));
        if let Some(&a) = ep.difference(&eq).next() {
            return Found { path, p, q, action: a, side: Side::Left, unmatched: true };
        }
        if let Some(&a) = eq.difference(&ep).next() {
            return Found { path, p, q, action: a, side: Side::Right, unmatched: true };
        }
        for (side, from, to) in [(Side::Left, p, q), (Side::Right, q, p)] {
            for &(a, x) in &u.succ[from] {
                let matches: Vec<usize> = u.step(to, a).collect();
                if matches.iter().any(|y| blocks[*y] == blocks[x]) {
                    continue;
                }
                if fallback.is_none() {
                    fallback = Some(Found { path: path.clone(), p, q, action: a, side, unmatched: false });
                }
                for y in matches {
                    let pair = if side == Side::Left { (x, y) } else { (y, x) };
                    if seen.insert(pair) {
                        let mut longer = path.clone();
                        longer.push(a);
                        queue.push_back((longer, pair.0, pair.1));
                    }
                }
            }
        }
    }
    fallback.expect("inequivalent states have a distinguishing step")
}
