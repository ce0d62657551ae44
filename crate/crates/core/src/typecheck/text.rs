//! Token and entity counting for description text.
//!
//! A token is a maximal run of ASCII alphanumerics, lowercased. An entity is
//! a concrete value the reader could act on: an item of a parenthesised
//! example list, an upper-case code in a comma-separated run, a numeric
//! bound, a `key:value` qualifier, a number, or a quoted literal. Entities
//! are anchored at a token and each token counts at most once.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

fn spans(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_ascii_alphanumeric(), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, text.len()));
    }
    out
}

pub fn tokens(text: &str) -> Vec<String> {
    spans(text).into_iter().map(|(s, e)| text[s..e].to_ascii_lowercase()).collect()
}

/// Whitespace-separated words with their byte offsets.
fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn trim_punct(w: &str) -> (usize, &str) {
    let core = w.trim_start_matches(|c: char| !c.is_ascii_alphanumeric());
    let lead = w.len() - core.len();
    (lead, core.trim_end_matches(|c: char| !c.is_ascii_alphanumeric()))
}

struct Anchors<'a> {
    spans: &'a [(usize, usize)],
    set: BTreeSet<usize>,
}

impl Anchors<'_> {
    /// Anchor at the first token starting in `[from, to)`.
    fn mark(&mut self, from: usize, to: usize) {
        if let Some(i) = self.spans.iter().position(|(s, _)| *s >= from && *s < to) {
            self.set.insert(i);
        }
    }
}

const EXAMPLE_MARKERS: [&str; 3] = ["e.g.", "for example", "such as"];

fn example_lists(text: &str, anchors: &mut Anchors<'_>) {
    let mut rest = 0;
    while let Some(open) = text[rest..].find('(').map(|i| i + rest) {
        let close = text[open..].find(')').map_or(text.len(), |i| i + open);
        let inner = &text[open + 1..close];
        let lead = inner.len() - inner.trim_start().len();
        let body = inner.trim_start();
        let lower = body.to_ascii_lowercase();
        if let Some(marker) = EXAMPLE_MARKERS.iter().find(|m| lower.starts_with(*m)) {
            let mut pos = open + 1 + lead + marker.len();
            for item in text[pos..close].split(',') {
                anchors.mark(pos, pos + item.len());
                pos += item.len() + 1;
            }
        }
        rest = close.min(text.len() - 1) + 1;
        if rest >= text.len() {
            break;
        }
    }
}

fn is_code(core: &str) -> bool {
    (2..=5).contains(&core.len()) && core.bytes().all(|b| b.is_ascii_uppercase())
}

fn code_runs(ws: &[(usize, &str)], anchors: &mut Anchors<'_>) {
    let mut run: Vec<usize> = Vec::new();
    let flush = |run: &mut Vec<usize>, anchors: &mut Anchors<'_>| {
        if run.len() >= 2 {
            for &i in run.iter() {
                let (off, w) = ws[i];
                let (lead, core) = trim_punct(w);
                anchors.mark(off + lead, off + lead + core.len());
            }
        }
        run.clear();
    };
    for (i, (_, w)) in ws.iter().enumerate() {
        let (_, core) = trim_punct(w);
        if !is_code(core) {
            flush(&mut run, anchors);
            continue;
        }
        let continues = run.last().is_some_and(|&j| ws[j].1.trim_end_matches(')').ends_with(','));
        if !continues {
            flush(&mut run, anchors);
        }
        run.push(i);
    }
    flush(&mut run, anchors);
}

fn numeric_bounds(text: &str, anchors: &mut Anchors<'_>) {
    let b = text.as_bytes();
    for i in 0..b.len() {
        if b[i] == b'<' || b[i] == b'>' {
            let mut j = i + 1;
            if b.get(j) == Some(&b'=') {
                j += 1;
            }
            if b.get(j).is_some_and(u8::is_ascii_digit) {
                anchors.mark(j, j + 1);
            }
        }
    }
}

fn is_number(core: &str) -> bool {
    core.starts_with(|c: char| c.is_ascii_digit())
        && core.chars().all(|c| c.is_ascii_digit() || matches!(c, '-' | '.' | '/'))
}

fn word_entities(ws: &[(usize, &str)], anchors: &mut Anchors<'_>) {
    for (off, w) in ws {
        let (lead, core) = trim_punct(w);
        let qualifier = w.char_indices().any(|(i, c)| {
            c == ':'
                && i > 0
                && w.as_bytes()[i - 1].is_ascii_alphanumeric()
                && w[i + 1..].chars().next().is_some_and(|n| !n.is_whitespace() && n != ',')
        });
        if qualifier || (!core.is_empty() && is_number(core)) {
            anchors.mark(off + lead, off + w.len());
        }
    }
}

fn quoted(text: &str, anchors: &mut Anchors<'_>) {
    for q in ['"', '`'] {
        let positions: Vec<usize> = text.match_indices(q).map(|(i, _)| i).collect();
        for pair in positions.chunks_exact(2) {
            anchors.mark(pair[0] + 1, pair[1]);
        }
    }
    // Single quotes only when they open a word, so apostrophes are ignored.
    let b = text.as_bytes();
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'\'' && (i == 0 || b[i - 1].is_ascii_whitespace() || b[i - 1] == b'(') {
            if let Some(end) = text[i + 1..].find('\'').map(|e| e + i + 1) {
                anchors.mark(i + 1, end);
                i = end + 1;
                continue;
            }
        }
        i += 1;
    }
}

/// Number of distinct entity-bearing tokens in `text`.
pub fn entities(text: &str) -> usize {
    let sp = spans(text);
    let ws = words(text);
    let mut anchors = Anchors {
        spans: &sp,
        set: BTreeSet::new(),
    };
    example_lists(text, &mut anchors);
    code_runs(&ws, &mut anchors);
    numeric_bounds(text, &mut anchors);
    word_entities(&ws, &mut anchors);
    quoted(text, &mut anchors);
    anchors.set.len()
}

/// Entities per token; `0` for text without tokens.
pub fn semantic_density(text: &str) -> f64 {
    let n = tokens(text).len();
    if n == 0 {
        0.0
    } else {
        entities(text) as f64 / n as f64
    }
}

/// Smallest integer not below `x`, for non-negative `x`, tolerant of
/// representation error just above an integer.
pub fn ceil_count(x: f64) -> usize {
    if x <= 0.0 {
        return 0;
    }
    let t = x as usize;
    if (t as f64) < x - 1e-9 {
        t + 1
    } else {
        t
    }
}
