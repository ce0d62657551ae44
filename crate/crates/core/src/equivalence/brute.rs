//! Greatest-fixpoint bisimilarity by exhaustive pair elimination.
//!
//! Kept deliberately naive and separate from the refinement code: labels
//! stay as [`ActionClass`] values and silent closure is a boolean matrix.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{normalize_label, ActionClass, BisimMode, EquivalenceVerdict, EquivalenceWitness, NormalizeOptions, Side};
use crate::semantics::Lts;

/// Largest `|A| * |B|` accepted.
pub const BRUTE_FORCE_PAIR_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BruteForceError {
    #[error("{pairs} state pairs exceed the brute-force limit")]
    TooLarge { pairs: usize },
}

type Edges = Vec<BTreeSet<(ActionClass, usize)>>;

fn edges(lts: &Lts, mode: BisimMode, opts: &NormalizeOptions) -> Edges {
    let n = lts.len();
    let mut strong: Edges = alloc::vec![BTreeSet::new(); n];
    for (s, l, t) in &lts.transitions {
        strong[*s].insert((normalize_label(l, opts), *t));
    }
    if mode == BisimMode::Strong {
        return strong;
    }
    // reach[i][j]: j is reachable from i by zero or more silent steps.
    let mut reach = alloc::vec![alloc::vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
        for (a, t) in &strong[i] {
            if *a == ActionClass::Silent {
                row[*t] = true;
            }
        }
    }
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut().filter(|r| r[k]) {
            for (cell, &v) in row.iter_mut().zip(&via) {
                *cell |= v;
            }
        }
    }
    let mut weak: Edges = alloc::vec![BTreeSet::new(); n];
    for i in 0..n {
        for m in 0..n {
            if !reach[i][m] {
                continue;
            }
            weak[i].insert((ActionClass::Silent, m));
            for (a, t) in &strong[m] {
                if *a == ActionClass::Silent {
                    continue;
                }
                for (j, _) in reach[*t].iter().enumerate().filter(|(_, r)| **r) {
                    weak[i].insert((a.clone(), j));
                }
            }
        }
    }
    weak
}

/// Largest bisimulation between the states of `a` and of `b`.
fn relation(ea: &Edges, eb: &Edges) -> Vec<Vec<bool>> {
    let mut rel = alloc::vec![alloc::vec![true; eb.len()]; ea.len()];
    let simulates = |rel: &Vec<Vec<bool>>, from: &BTreeSet<(ActionClass, usize)>, to: &BTreeSet<(ActionClass, usize)>, flip: bool| {
        from.iter().all(|(a, x)| {
            to.iter().any(|(b, y)| a == b && if flip { rel[*y][*x] } else { rel[*x][*y] })
        })
    };
    loop {
        let mut changed = false;
        for p in 0..ea.len() {
            for q in 0..eb.len() {
                if rel[p][q] && !(simulates(&rel, &ea[p], &eb[q], false) && simulates(&rel, &eb[q], &ea[p], true)) {
                    rel[p][q] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

/// A step of `s` that the other state cannot answer within `rel`.
fn failing_step(
    rel: &[Vec<bool>],
    ea: &Edges,
    eb: &Edges,
    p: usize,
    q: usize,
) -> Option<(ActionClass, Side, bool)> {
    for (a, x) in &ea[p] {
        let answers: Vec<usize> = eb[q].iter().filter(|(b, _)| b == a).map(|(_, y)| *y).collect();
        if !answers.iter().any(|y| rel[*x][*y]) {
            return Some((a.clone(), Side::Left, answers.is_empty()));
        }
    }
    for (b, y) in &eb[q] {
        let answers: Vec<usize> = ea[p].iter().filter(|(a, _)| a == b).map(|(_, x)| *x).collect();
        if !answers.iter().any(|x| rel[*x][*y]) {
            return Some((b.clone(), Side::Right, answers.is_empty()));
        }
    }
    None
}

/// Reference decision procedure for small systems.
pub fn brute_force_bisim(
    a: &Lts,
    b: &Lts,
    mode: BisimMode,
    opts: &NormalizeOptions,
) -> Result<EquivalenceVerdict, BruteForceError> {
    let pairs = a.len().saturating_mul(b.len());
    if pairs > BRUTE_FORCE_PAIR_LIMIT {
        return Err(BruteForceError::TooLarge { pairs });
    }
    let (ea, eb) = (edges(a, mode, opts), edges(b, mode, opts));
    let rel = relation(&ea, &eb);
    let equivalent = rel[a.initial][b.initial];
    let witness = if equivalent {
        None
    } else {
        let (action, side, unmatched) =
            failing_step(&rel, &ea, &eb, a.initial, b.initial).expect("unrelated pair has a failing step");
        Some(EquivalenceWitness::Distinguish {
            path: Vec::new(),
            left: a.initial,
            right: b.initial,
            action,
            side,
            unmatched,
        })
    };
    Ok(EquivalenceVerdict {
        equivalent,
        inconclusive: a.truncated || b.truncated,
        witness,
    })
}

fn reach_by(edges: &Edges, start: usize, path: &[ActionClass]) -> BTreeSet<usize> {
    let mut cur = BTreeSet::from([start]);
    for a in path {
        cur = cur
            .iter()
            .flat_map(|s| edges[*s].iter().filter(|(b, _)| b == a).map(|(_, t)| *t))
            .collect();
    }
    cur
}

/// Check a state-pair witness against the exhaustive relation.
#[allow(clippy::too_many_arguments)]
pub(crate) fn distinguishes(
    a: &Lts,
    b: &Lts,
    mode: BisimMode,
    opts: &NormalizeOptions,
    path: &[ActionClass],
    (l, r): (usize, usize),
    action: &ActionClass,
    side: Side,
    unmatched: bool,
) -> bool {
    if l >= a.len() || r >= b.len() {
        return false;
    }
    let (ea, eb) = (edges(a, mode, opts), edges(b, mode, opts));
    if !reach_by(&ea, a.initial, path).contains(&l) || !reach_by(&eb, b.initial, path).contains(&r) {
        return false;
    }
    let rel = relation(&ea, &eb);
    if rel[l][r] {
        return false;
    }
    let step = |e: &Edges, s: usize| -> Vec<usize> { e[s].iter().filter(|(c, _)| c == action).map(|(_, t)| *t).collect() };
    let (mine, theirs) = match side {
        Side::Left => (step(&ea, l), step(&eb, r)),
        Side::Right => (step(&eb, r), step(&ea, l)),
    };
    if mine.is_empty() {
        return false;
    }
    if unmatched {
        return theirs.is_empty();
    }
    mine.iter().any(|x| {
        theirs.iter().all(|y| match side {
            Side::Left => !rel[*x][*y],
            Side::Right => !rel[*y][*x],
        })
    })
}
