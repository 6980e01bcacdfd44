use std::fmt::Write;

use super::{Mode, Ontology, RuleDecl};
use crate::formula::{Formula, Literal, Term};

const HEADER: &str = "# argonto ontology\n";

/// Renders an ontology in the line syntax accepted by [`super::parse_ontology`].
pub fn serialize_ontology(o: &Ontology) -> String {
    let mut out = String::from(HEADER);
    for p in &o.principles {
        let text = p.text.replace('\\', "\\\\").replace('"', "\\\"");
        writeln!(out, "PRINCIPLE {} \"{text}\"", p.id).unwrap();
    }
    for p in &o.priorities {
        writeln!(out, "PRIORITY {p}").unwrap();
    }
    for a in &o.tbox {
        let op = if a.form.is_equivalence() {
            "EQUIV"
        } else {
            "SUBSUMED_BY"
        };
        writeln!(out, "TBOX {} {}: {} {op} {}", a.id, a.mode, a.lhs, a.rhs).unwrap();
    }
    for r in &o.rules {
        writeln!(out, "RULE {}", rule_text(r)).unwrap();
    }
    for r in &o.undercuts {
        writeln!(out, "UNDERCUT {}", rule_text(r)).unwrap();
    }
    for a in &o.abox {
        writeln!(out, "ABOX {}", a.literal).unwrap();
    }
    out
}

fn literal_text(l: &Literal, fresh: &[String]) -> String {
    let args: Vec<String> = l
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) if fresh.contains(v) => format!("?{v}"),
            other => other.to_string(),
        })
        .collect();
    format!(
        "{}{}({})",
        if l.positive { "" } else { "~" },
        l.predicate,
        args.join(", ")
    )
}

fn rule_text(r: &RuleDecl) -> String {
    let body: Vec<String> = r.body.iter().map(|l| literal_text(l, &[])).collect();
    let head = match &r.head {
        Formula::Lit(l) => literal_text(l, &r.fresh),
        Formula::Or(a, b) => format!(
            "{} OR {}",
            literal_text(a, &r.fresh),
            literal_text(b, &r.fresh)
        ),
        naming @ Formula::Applicable { .. } => naming.to_string(),
    };
    let arrow = match r.mode {
        Mode::Strict => "->",
        Mode::Defeasible(_) => "=>",
    };
    format!("{} {}: {} {arrow} {head}", r.id, r.mode, body.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    #[test]
    fn empty_ontology_is_header_only() {
        assert_eq!(serialize_ontology(&Ontology::default()), HEADER);
    }

    #[test]
    fn fresh_marker_round_trips() {
        let src = "RULE r strict: C(x) -> P(x, ?b)\n";
        let o = parse_ontology(src).unwrap();
        let text = serialize_ontology(&o);
        assert!(text.contains("P(x, ?b)"));
        assert_eq!(parse_ontology(&text).unwrap(), o);
    }

    #[test]
    fn principle_text_escapes() {
        let src = "PRINCIPLE p \"say \\\"hi\\\" \\\\ bye\"\n";
        let o = parse_ontology(src).unwrap();
        assert_eq!(o.principles[0].text, "say \"hi\" \\ bye");
        assert_eq!(parse_ontology(&serialize_ontology(&o)).unwrap(), o);
    }
}
