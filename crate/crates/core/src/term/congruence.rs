//! Structural congruence, substitution and free names.
//!
//! Canonical forms implement the standard laws: `|` is associative and
//! commutative with `0` as unit, and restriction binders are alpha-renamed to
//! positional names `#0`, `#1`, ... by nesting depth. Replication is left
//! intact. Two terms are structurally congruent iff their canonical forms are
//! equal.
//!
//! Name occurrences are `Literal::Var` values in payload positions plus the
//! credential list of a `ToolCall`. `(new c) P` binds `c` in `P`; a
//! `collect s = v . P` prefix binds `s` in `P`, since collection will fill it.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Ident, Literal, Params, ProcessTerm};

/// Canonical representative of the structural-congruence class of `term`.
pub fn canonicalize(term: &ProcessTerm) -> ProcessTerm {
    canon(term, 0)
}

fn canon(term: &ProcessTerm, depth: usize) -> ProcessTerm {
    match term {
        ProcessTerm::Par { .. } => {
            let mut parts = Vec::new();
            for child in term.par_components() {
                let c = canon(child, depth);
                for piece in c.par_components() {
                    if !piece.is_nil() {
                        parts.push(piece.clone());
                    }
                }
            }
            parts.sort();
            ProcessTerm::par_all(parts)
        }
        ProcessTerm::Restrict { channel, body } => {
            let fresh = format!("#{depth}");
            let renamed = if *channel == fresh {
                (**body).clone()
            } else {
                rename_free(body, channel, &fresh)
            };
            ProcessTerm::Restrict {
                channel: fresh,
                body: Box::new(canon(&renamed, depth + 1)),
            }
        }
        ProcessTerm::Repl { body, copies } => ProcessTerm::Repl {
            body: Box::new(canon(body, depth)),
            copies: *copies,
        },
        ProcessTerm::CollectSlot { slot, value, then } => ProcessTerm::CollectSlot {
            slot: slot.clone(),
            value: value.clone(),
            then: Box::new(canon(then, depth)),
        },
        ProcessTerm::Intent(intent) => {
            let mut intent = intent.clone();
            intent.optional.sort_by(|a, b| a.name.cmp(&b.name));
            ProcessTerm::Intent(intent)
        }
        other => other.clone(),
    }
}

/// `term[slot ↦ value]`: replace free occurrences of the name `slot` in
/// value positions. Restriction binders are renamed when needed to avoid
/// capturing a name inside `value`.
pub fn substitute(term: &ProcessTerm, slot: &str, value: &Literal) -> ProcessTerm {
    subst(term, slot, value, false)
}

/// Alpha-rename free occurrences of `from` to `to`, including credential
/// positions.
pub fn rename_free(term: &ProcessTerm, from: &str, to: &str) -> ProcessTerm {
    subst(term, from, &Literal::Var(String::from(to)), true)
}

/// Names occurring free in `term`.
pub fn free_names(term: &ProcessTerm) -> BTreeSet<Ident> {
    let mut out = BTreeSet::new();
    collect_free(term, &mut Vec::new(), &mut out);
    out
}

fn collect_free(term: &ProcessTerm, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    let note = |lit: &Literal, bound: &Vec<Ident>, out: &mut BTreeSet<Ident>| {
        if let Literal::Var(n) = lit {
            if !bound.contains(n) {
                out.insert(n.clone());
            }
        }
    };
    match term {
        ProcessTerm::CollectSlot { slot, value, then } => {
            note(value, bound, out);
            bound.push(slot.clone());
            collect_free(then, bound, out);
            bound.pop();
        }
        ProcessTerm::ExecuteS { bindings, .. } => {
            bindings.values().for_each(|v| note(v, bound, out));
        }
        ProcessTerm::ToolCall {
            params,
            credentials,
            ..
        } => {
            params.values().for_each(|v| note(v, bound, out));
            for c in credentials {
                if !bound.contains(c) {
                    out.insert(c.clone());
                }
            }
        }
        ProcessTerm::Validate { params, .. } | ProcessTerm::Pending { params, .. } => {
            params.values().for_each(|v| note(v, bound, out));
        }
        ProcessTerm::ResultT { output } => note(output, bound, out),
        ProcessTerm::Par { left, right } => {
            collect_free(left, bound, out);
            collect_free(right, bound, out);
        }
        ProcessTerm::Restrict { channel, body } => {
            bound.push(channel.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        ProcessTerm::Repl { body, .. } => collect_free(body, bound, out),
        ProcessTerm::Intent(_)
        | ProcessTerm::Tool(_)
        | ProcessTerm::Resource { .. }
        | ProcessTerm::Prompt { .. }
        | ProcessTerm::Initialize { .. }
        | ProcessTerm::ToolsList { .. }
        | ProcessTerm::ToolSummary { .. }
        | ProcessTerm::Token { .. }
        | ProcessTerm::ErrorT { .. }
        | ProcessTerm::Nil => {}
    }
}

fn subst_lit(lit: &Literal, from: &str, to: &Literal) -> Literal {
    match lit {
        Literal::Var(n) if n == from => to.clone(),
        other => other.clone(),
    }
}

fn subst_params(params: &Params, from: &str, to: &Literal) -> Params {
    params
        .iter()
        .map(|(k, v)| (k.clone(), subst_lit(v, from, to)))
        .collect()
}

fn names_of(lit: &Literal) -> Option<&Ident> {
    match lit {
        Literal::Var(n) => Some(n),
        _ => None,
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<Ident>) -> Ident {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

fn subst(term: &ProcessTerm, from: &str, to: &Literal, credentials: bool) -> ProcessTerm {
    match term {
        ProcessTerm::CollectSlot { slot, value, then } => {
            let value = subst_lit(value, from, to);
            if slot == from {
                return ProcessTerm::CollectSlot {
                    slot: slot.clone(),
                    value,
                    then: then.clone(),
                };
            }
            ProcessTerm::CollectSlot {
                slot: slot.clone(),
                value,
                then: Box::new(subst(then, from, to, credentials)),
            }
        }
        ProcessTerm::ExecuteS {
            intent,
            bindings,
            transactional,
        } => ProcessTerm::ExecuteS {
            intent: intent.clone(),
            bindings: subst_params(bindings, from, to),
            transactional: *transactional,
        },
        ProcessTerm::ToolCall {
            name,
            params,
            credentials: creds,
        } => {
            let creds = if credentials {
                let target = names_of(to);
                creds
                    .iter()
                    .map(|c| match target {
                        Some(t) if c == from => t.clone(),
                        _ => c.clone(),
                    })
                    .collect()
            } else {
                creds.clone()
            };
            ProcessTerm::ToolCall {
                name: name.clone(),
                params: subst_params(params, from, to),
                credentials: creds,
            }
        }
        ProcessTerm::Validate {
            tool,
            params,
            schema,
            gate,
        } => ProcessTerm::Validate {
            tool: tool.clone(),
            params: subst_params(params, from, to),
            schema: schema.clone(),
            gate: gate.clone(),
        },
        ProcessTerm::Pending {
            tool,
            params,
            awaiting,
            approval,
        } => ProcessTerm::Pending {
            tool: tool.clone(),
            params: subst_params(params, from, to),
            awaiting: awaiting.clone(),
            approval: *approval,
        },
        ProcessTerm::ResultT { output } => ProcessTerm::ResultT {
            output: subst_lit(output, from, to),
        },
        ProcessTerm::Par { left, right } => ProcessTerm::Par {
            left: Box::new(subst(left, from, to, credentials)),
            right: Box::new(subst(right, from, to, credentials)),
        },
        ProcessTerm::Restrict { channel, body } => {
            if channel == from {
                return term.clone();
            }
            match names_of(to) {
                Some(n) if n == channel && free_names(body).contains(from) => {
                    let mut avoid = free_names(body);
                    avoid.insert(n.clone());
                    avoid.insert(String::from(from));
                    let fresh = fresh_name(channel, &avoid);
                    let body = rename_free(body, channel, &fresh);
                    ProcessTerm::Restrict {
                        channel: fresh,
                        body: Box::new(subst(&body, from, to, credentials)),
                    }
                }
                _ => ProcessTerm::Restrict {
                    channel: channel.clone(),
                    body: Box::new(subst(body, from, to, credentials)),
                },
            }
        }
        ProcessTerm::Repl { body, copies } => ProcessTerm::Repl {
            body: Box::new(subst(body, from, to, credentials)),
            copies: *copies,
        },
        other => other.clone(),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::term::{params, parse_term, TriBool};
    use alloc::vec;
    use proptest::prelude::*;

    fn p(src: &str) -> ProcessTerm {
        parse_term(src).expect("parse")
    }

    #[test]
    fn nil_is_unit_of_par() {
        let x = p("result \"x\"");
        assert_eq!(canonicalize(&ProcessTerm::par(ProcessTerm::Nil, x.clone())), x);
    }

    #[test]
    fn par_is_commutative() {
        let a = p("result 1");
        let b = p("error E \"m\"");
        assert_eq!(
            canonicalize(&ProcessTerm::par(a.clone(), b.clone())),
            canonicalize(&ProcessTerm::par(b, a))
        );
    }

    #[test]
    fn alpha_equivalent_restrictions_coincide() {
        let left = p("(new c) result ?c");
        let right = p("(new d) result ?d");
        assert_eq!(canonicalize(&left), canonicalize(&right));
        assert_ne!(left, right);
    }

    #[test]
    fn substitute_single_binding() {
        let t = ProcessTerm::execute("f", params([("origin", Literal::var("x"))]), TriBool::False);
        let got = substitute(&t, "x", &Literal::text("ZRH"));
        let want = ProcessTerm::execute("f", params([("origin", Literal::text("ZRH"))]), TriBool::False);
        assert_eq!(got, want);
    }

    #[test]
    fn substitute_absent_is_identity() {
        assert_eq!(substitute(&ProcessTerm::Nil, "x", &Literal::text("v")), ProcessTerm::Nil);
    }

    #[test]
    fn substitute_avoids_capture() {
        // (new k) result ?x   with x := ?k  must not capture the outer k.
        let t = p("(new k) (result ?x | result ?k)");
        let got = substitute(&t, "x", &Literal::var("k"));
        assert!(free_names(&got).contains("k"));
        assert_eq!(free_names(&got).len(), 1);
    }

    #[test]
    fn substitute_stops_at_shadowing_binder() {
        let t = p("(new x) result ?x");
        assert_eq!(substitute(&t, "x", &Literal::text("v")), t);
    }

    #[test]
    fn free_names_of_bound_and_nil() {
        assert!(free_names(&p("(new key) call t {k: ?key}")).is_empty());
        assert!(free_names(&ProcessTerm::Nil).is_empty());
    }

    #[test]
    fn free_names_outer_distinct_from_bound() {
        // (new c) result ?c | result ?c : only the right-hand c is free.
        let t = p("(new c) result ?c | result ?c");
        assert_eq!(free_names(&t), BTreeSet::from([String::from("c")]));
        // After alpha-renaming the bound one is #0 and the free one remains c.
        let canon = canonicalize(&t);
        assert_eq!(free_names(&canon), BTreeSet::from([String::from("c")]));
        let text = alloc::format!("{canon}");
        assert!(text.contains("#0"), "{text}");
    }

    #[test]
    fn credentials_are_names() {
        let t = p("call t {} with key");
        assert_eq!(free_names(&t), BTreeSet::from([String::from("key")]));
        let renamed = rename_free(&t, "key", "k2");
        assert_eq!(free_names(&renamed), BTreeSet::from([String::from("k2")]));
    }

    fn binder_count(t: &ProcessTerm) -> usize {
        match t {
            ProcessTerm::Restrict { body, .. } => 1 + binder_count(body),
            ProcessTerm::Par { left, right } => binder_count(left) + binder_count(right),
            ProcessTerm::Repl { body, .. } => binder_count(body),
            ProcessTerm::CollectSlot { then, .. } => binder_count(then),
            _ => 0,
        }
    }

    pub(crate) fn arb_leaf() -> impl Strategy<Value = ProcessTerm> {
        let name = prop::sample::select(vec!["a", "b", "c", "k"]);
        prop_oneof![
            Just(ProcessTerm::Nil),
            name.clone().prop_map(|n| ProcessTerm::result(Literal::var(n))),
            (0i64..3).prop_map(|i| ProcessTerm::result(Literal::Integer(i))),
            name.clone().prop_map(|n| ProcessTerm::error("E", n)),
            name.prop_map(|n| ProcessTerm::call("t", params([("p", Literal::var(n))]))),
            Just(ProcessTerm::resource("file:///x", "c")),
        ]
    }

    pub(crate) fn arb_term() -> impl Strategy<Value = ProcessTerm> {
        arb_leaf().prop_recursive(4, 24, 3, |inner| {
            let name = prop::sample::select(vec!["a", "b", "c", "k"]);
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| ProcessTerm::par(l, r)),
                (name, inner.clone()).prop_map(|(n, b)| ProcessTerm::restrict(n, b)),
                inner.prop_map(ProcessTerm::repl),
            ]
        })
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(t in arb_term()) {
            let once = canonicalize(&t);
            prop_assert_eq!(canonicalize(&once), once);
        }

        #[test]
        fn canonical_forms_ignore_par_order(a in arb_term(), b in arb_term(), c in arb_term()) {
            let x = ProcessTerm::par(a.clone(), ProcessTerm::par(b.clone(), c.clone()));
            let y = ProcessTerm::par(ProcessTerm::par(c, ProcessTerm::Nil), ProcessTerm::par(b, a));
            prop_assert_eq!(canonicalize(&x), canonicalize(&y));
        }

        #[test]
        fn substitute_keeps_binder_multiset(t in arb_term(), v in prop::sample::select(vec!["a", "k", "z"])) {
            let s = substitute(&t, "a", &Literal::var(v));
            prop_assert_eq!(binder_count(&s), binder_count(&t));
        }

        #[test]
        fn canonicalize_preserves_free_names(t in arb_term()) {
            prop_assert_eq!(free_names(&canonicalize(&t)), free_names(&t));
        }
    }
}
