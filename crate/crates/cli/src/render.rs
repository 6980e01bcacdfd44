//! JSON views and plain-text rendering of pipeline products.

use std::collections::BTreeSet;
use std::fmt::Write;

use argonto_core::engine::ArgId;
use argonto_core::tasks::{Answer, Compiled, QueryResult, Witness};
use argonto_core::translation::WellDefinedReport;
use argonto_core::ArgumentationTheory;
use serde_json::{json, Value};

pub fn theory_json(t: &ArgumentationTheory) -> Value {
    let rules: Vec<Value> = t
        .rules()
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "body": r.body,
                "head": r.head,
                "strict": r.is_strict(),
                "principle": r.principle(),
                "fresh": r.fresh,
                "origin": r.origin,
            })
        })
        .collect();
    let principles: Vec<Value> = t
        .principles
        .iter()
        .map(|p| json!({ "id": p.id, "text": p.text }))
        .collect();
    let priorities: Vec<String> = t.order.declared().iter().map(|d| d.to_string()).collect();
    json!({
        "premises": t.premises,
        "rules": rules,
        "principles": principles,
        "priorities": priorities,
        "diagnostics": t.diagnostics,
    })
}

pub fn arguments_json(c: &Compiled) -> Value {
    json!({
        "arguments": c.store.arguments(),
        "diagnostics": c.diagnostics(),
    })
}

fn ids(set: impl IntoIterator<Item = ArgId>) -> String {
    set.into_iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn arguments_text(c: &Compiled) -> String {
    let mut out = String::new();
    for a in c.store.arguments() {
        match &a.top_rule {
            None => writeln!(out, "{}: {}", a.id, a.conclusion),
            Some(r) => {
                let arrow = if a.defeasible_top { "=>" } else { "->" };
                writeln!(
                    out,
                    "{}: {} {arrow} {}  [{r}]",
                    a.id,
                    ids(a.subs.iter().copied()),
                    a.conclusion
                )
            }
        }
        .unwrap();
    }
    out
}

pub fn af_text(c: &Compiled) -> String {
    let mut out = String::new();
    writeln!(out, "attacks:").unwrap();
    for a in &c.attacks {
        let kind = serde_json::to_value(a.kind).unwrap();
        writeln!(
            out,
            "  {} -> {} on {} ({})",
            a.attacker,
            a.target,
            a.locus,
            kind.as_str().unwrap_or_default()
        )
        .unwrap();
    }
    writeln!(out, "defeats:").unwrap();
    for (a, b) in &c.defeats {
        writeln!(out, "  {a} -> {b}").unwrap();
    }
    out
}

pub fn extensions_text(exts: &[BTreeSet<ArgId>]) -> String {
    let mut out = String::new();
    for e in exts {
        writeln!(out, "{{{}}}", ids(e.iter().copied())).unwrap();
    }
    out
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Argument(a) => a.to_string(),
        Witness::Pair { attacker, target } => format!("{attacker} -> {target}"),
    }
}

pub fn result_text(r: &QueryResult) -> String {
    let mut out = String::new();
    let answer = match (&r.answer, r.task.as_str()) {
        (Answer::Bool(true), "check") => "consistent".to_string(),
        (Answer::Bool(false), "check") => "inconsistent".to_string(),
        (Answer::Bool(true), _) => "accepted".to_string(),
        (Answer::Bool(false), _) => "not accepted".to_string(),
        (Answer::Set(s), _) => format!("{{{}}}", s.join(", ")),
        (Answer::Sets(sets), _) => sets
            .iter()
            .map(|s| format!("{{{}}}", s.join(", ")))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    writeln!(out, "{answer}").unwrap();
    if !r.witnesses.is_empty() {
        writeln!(
            out,
            "witnesses: {}",
            join(r.witnesses.iter().map(witness_text))
        )
        .unwrap();
    }
    for d in &r.diagnostics {
        writeln!(out, "note: {d}").unwrap();
    }
    out
}

pub fn explain_text(r: &QueryResult, c: &Compiled) -> String {
    let mut out = String::new();
    for e in r.explanations.iter().flatten() {
        writeln!(out, "{} via {}", e.assertion, e.argument).unwrap();
        writeln!(
            out,
            "  how: {{{}}} ∪ {{{}}}",
            join(&e.how.premises),
            e.how.rules.join(", ")
        )
        .unwrap();
        if e.why.is_empty() {
            writeln!(out, "  why: undefeated").unwrap();
        }
        for w in &e.why {
            writeln!(
                out,
                "  why: {} gives {{{}}} ∪ {{{}}}",
                w.argument,
                join(&w.premises),
                w.rules.join(", ")
            )
            .unwrap();
        }
        writeln!(out, "  ordering: {{{}}}", e.ordering.join(", ")).unwrap();
        let principles: BTreeSet<&str> = c
            .store
            .get(e.argument)
            .last_principles
            .iter()
            .map(String::as_str)
            .collect();
        for p in principles {
            if let Some(decl) = c.theory.principles.iter().find(|d| d.id == p) {
                writeln!(out, "  principle {p}: {}", decl.text).unwrap();
            }
        }
    }
    out
}

pub fn well_defined_text(r: &WellDefinedReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{}",
        if r.passed {
            "well-defined"
        } else {
            "not well-defined"
        }
    )
    .unwrap();
    for m in &r.missing_transpositions {
        writeln!(
            out,
            "missing transposition of {} at {}: {}",
            m.rule,
            m.position + 1,
            m.expected
        )
        .unwrap();
    }
    for id in &r.untransposable {
        writeln!(out, "not transposable: {id}").unwrap();
    }
    for w in &r.contradictory_arguments {
        writeln!(
            out,
            "premises of {} derive {} and its complement: {{{}}}",
            w.argument,
            w.formula,
            join(&w.premises)
        )
        .unwrap();
    }
    for v in &r.classicality_violations {
        writeln!(
            out,
            "classicality fails for {} in {{{}}}",
            v.element,
            join(&v.set)
        )
        .unwrap();
    }
    for n in &r.notes {
        writeln!(out, "note: {n}").unwrap();
    }
    out
}
