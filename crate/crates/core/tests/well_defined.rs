mod support;

use argonto_core::engine::Limits;
use argonto_core::translation::{check_well_defined, translate_ontology, TranslateOptions};
use support::running_example::ontology;

#[test]
fn corpus_is_closed_under_transposition() {
    let t = translate_ontology(&ontology(), &TranslateOptions::default()).unwrap();
    let ids: Vec<&str> = t.strict_rules().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, vec!["r10", "r10'", "r11", "r12", "r11'", "r12'"]);
    let report = check_well_defined(&t, 3, &Limits::default());
    assert!(
        report.transposition_closed(),
        "{:?}",
        report.missing_transpositions
    );
    assert!(report.untransposable.is_empty());
}

#[test]
fn removing_a_transposition_is_detected() {
    let t = translate_ontology(&ontology(), &TranslateOptions::default()).unwrap();
    let report = check_well_defined(&t.without_rule("r11'"), 3, &Limits::default());
    assert_eq!(report.missing_transpositions.len(), 1);
    let m = &report.missing_transpositions[0];
    assert_eq!(m.rule, "r11");
    assert_eq!(m.expected, "?: ~LeaveCar(x) -> ~transferToSafePlace(x, y)");
    assert!(!report.passed);
}

#[test]
fn corpus_premises_derive_no_contradiction_strictly() {
    let t = translate_ontology(&ontology(), &TranslateOptions::default()).unwrap();
    let report = check_well_defined(&t, 3, &Limits::default());
    assert!(report.contradictory_arguments.is_empty());
    assert!(report.classicality_violations.is_empty());
}

#[test]
fn contradictory_premise_set_is_reported() {
    let o = argonto_core::parse_ontology(
        "RULE r strict: a(x) -> b(x)\nRULE s strict: a(x) -> ~b(x)\nABOX a(c)\n",
    )
    .unwrap();
    let t = translate_ontology(&o, &TranslateOptions::default()).unwrap();
    let report = check_well_defined(&t, 3, &Limits::default());
    assert!(!report.contradictory_arguments.is_empty());
    assert_eq!(report.contradictory_arguments[0].premises.len(), 1);
}
