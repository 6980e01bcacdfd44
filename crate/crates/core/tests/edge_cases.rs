use argonto_core::ontology::parse_ground_literal;
use argonto_core::semantics::{AcceptanceMode, Semantics};
use argonto_core::tasks::{consistency_check, Answer, Compiled, Reasoner, Settings, Witness};
use argonto_core::{parse_ontology, Formula, TaskError};

fn compile(src: &str) -> Compiled {
    Compiled::new(&parse_ontology(src).unwrap(), &Settings::default()).unwrap()
}

#[test]
fn empty_theory() {
    let c = compile("");
    assert!(c.store.is_empty());
    assert_eq!(consistency_check(&c).answer_bool(), Some(true));
    for s in [
        Semantics::Complete,
        Semantics::Grounded,
        Semantics::Preferred,
    ] {
        let r = Reasoner::new(&c, s, AcceptanceMode::Sceptical).unwrap();
        assert_eq!(r.collective_acceptance(), vec![Vec::<Formula>::new()]);
    }
}

#[test]
fn direct_complement_is_inconsistent() {
    let c = compile("ABOX a(c)\nABOX ~a(c)\n");
    let r = consistency_check(&c);
    assert_eq!(r.answer_bool(), Some(false));
    assert!(r.witnesses.contains(&Witness::Pair {
        attacker: argonto_core::ArgId(1),
        target: argonto_core::ArgId(2)
    }));
    // Neither side is sceptically accepted; both are credulously accepted.
    let sc = Reasoner::new(&c, Semantics::Preferred, AcceptanceMode::Sceptical).unwrap();
    let cr = Reasoner::new(&c, Semantics::Preferred, AcceptanceMode::Credulous).unwrap();
    let a = Formula::Lit(parse_ground_literal("a(c)").unwrap());
    assert_eq!(sc.assertion_acceptance(&a).answer_bool(), Some(false));
    assert_eq!(cr.assertion_acceptance(&a).answer_bool(), Some(true));
}

#[test]
fn unattacked_premises_are_always_accepted() {
    let c = compile("ABOX Driver(PS1)\nABOX Injury(Injury1)\n");
    assert_eq!(consistency_check(&c).answer_bool(), Some(true));
    for s in [
        Semantics::Complete,
        Semantics::Grounded,
        Semantics::Preferred,
    ] {
        for m in [AcceptanceMode::Sceptical, AcceptanceMode::Credulous] {
            let r = Reasoner::new(&c, s, m).unwrap();
            let f = Formula::Lit(parse_ground_literal("Driver(PS1)").unwrap());
            let res = r.assertion_acceptance(&f);
            assert_eq!(res.answer_bool(), Some(true));
            assert_eq!(res.witnesses.len(), 1);
        }
    }
}

#[test]
fn unknown_predicate_is_flagged() {
    let c = compile("ABOX Driver(PS1)\n");
    let r = Reasoner::new(&c, Semantics::Grounded, AcceptanceMode::Sceptical).unwrap();
    let res = r.assertion_acceptance(&Formula::Lit(parse_ground_literal("Pilot(PS1)").unwrap()));
    assert_eq!(res.answer, Answer::Bool(false));
    assert!(res.diagnostics.iter().any(|d| d.contains("unknown")));
}

#[test]
fn undercut_defeats_regardless_of_preference() {
    let c = compile(
        "PRINCIPLE lo \"l\"\nPRINCIPLE hi \"h\"\nPRIORITY lo < hi\n\
         RULE n defeasible(hi): A(x) => B(x)\n\
         UNDERCUT u defeasible(lo): C(x) => ~applicable(n)\n\
         ABOX A(a)\nABOX C(a)\n",
    );
    assert_eq!(c.store.len(), 4);
    let r = Reasoner::new(&c, Semantics::Grounded, AcceptanceMode::Sceptical).unwrap();
    let b = Formula::Lit(parse_ground_literal("B(a)").unwrap());
    assert_eq!(r.assertion_acceptance(&b).answer_bool(), Some(false));
}

#[test]
fn existential_restriction_introduces_skolem_witnesses() {
    let c = compile("TBOX e strict: Car SUBSUMED_BY EXISTS hasOwner.Person\nABOX Car(c1)\n");
    let r = Reasoner::new(&c, Semantics::Grounded, AcceptanceMode::Sceptical).unwrap();
    let class = argonto_core::ontology::parse_concept_expr("EXISTS hasOwner.Person").unwrap();
    let res = r.instance_check("c1", &class, false).unwrap();
    assert_eq!(res.answer_bool(), Some(true));
    assert_eq!(res.witnesses.len(), 2);
}

#[test]
fn same_extension_flag_tightens_credulous_conjunctions() {
    // a and b each sit in one of two preferred extensions, never together.
    let c = compile(
        "PRINCIPLE p \"p\"\n\
         RULE n1 defeasible(p): S(x) => A(x)\n\
         RULE n2 defeasible(p): S(x) => B(x)\n\
         RULE k strict: A(x) -> ~B(x)\n\
         ABOX S(s)\n",
    );
    let r = Reasoner::new(&c, Semantics::Preferred, AcceptanceMode::Credulous).unwrap();
    let class = argonto_core::ontology::parse_concept_expr("A AND B").unwrap();
    let loose = r.instance_check("s", &class, false).unwrap();
    let strict = r.instance_check("s", &class, true).unwrap();
    assert_eq!(loose.answer_bool(), Some(true));
    assert_eq!(strict.answer_bool(), Some(false));
}

#[test]
fn nothing_is_not_a_query_class() {
    let c = compile("ABOX A(a)\n");
    let r = Reasoner::new(&c, Semantics::Grounded, AcceptanceMode::Sceptical).unwrap();
    let err = r
        .instance_check("a", &argonto_core::ontology::ConceptExpr::Nothing, false)
        .unwrap_err();
    assert!(matches!(err, TaskError::UnsupportedClass(_)));
}

#[test]
fn sceptical_implies_credulous() {
    let c = compile("ABOX a(c)\nABOX ~a(c)\nABOX b(c)\n");
    for s in [
        Semantics::Complete,
        Semantics::Grounded,
        Semantics::Preferred,
    ] {
        let sc = Reasoner::new(&c, s, AcceptanceMode::Sceptical).unwrap();
        let cr = Reasoner::new(&c, s, AcceptanceMode::Credulous).unwrap();
        for a in c.store.ids() {
            if sc.is_justified(a) {
                assert!(cr.is_justified(a));
            }
        }
    }
}
