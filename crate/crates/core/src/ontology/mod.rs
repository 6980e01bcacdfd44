//! Legal ontologies: TBox axioms, ABox assertions, principles and their
//! priorities, plus explicitly written rules.

mod parse;
mod serialize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::formula::{Formula, Literal};

pub use parse::{parse_concept_expr, parse_ground_literal, parse_ontology, parse_priority};
pub use parse::{ParseError, ParseErrorKind};
pub use serialize::serialize_ontology;

/// `strict`, or `defeasible(<principle>)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Strict,
    Defeasible(String),
}

impl Mode {
    pub fn is_strict(&self) -> bool {
        matches!(self, Mode::Strict)
    }

    pub fn principle(&self) -> Option<&str> {
        match self {
            Mode::Strict => None,
            Mode::Defeasible(p) => Some(p),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Strict => f.write_str("strict"),
            Mode::Defeasible(p) => write!(f, "defeasible({p})"),
        }
    }
}

/// The concept constructors accepted in TBox axioms and instance queries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConceptExpr {
    Atomic(String),
    Not(String),
    And(Box<ConceptExpr>, Box<ConceptExpr>),
    Or(String, String),
    Exists { role: String, filler: String },
    Forall { role: String, filler: String },
    Nothing,
}

impl ConceptExpr {
    pub fn atomic(name: impl Into<String>) -> Self {
        ConceptExpr::Atomic(name.into())
    }

    pub fn and(a: ConceptExpr, b: ConceptExpr) -> Self {
        ConceptExpr::And(Box::new(a), Box::new(b))
    }

    /// Flattened conjuncts, left to right.
    pub fn conjuncts(&self) -> Vec<&ConceptExpr> {
        match self {
            ConceptExpr::And(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            other => vec![other],
        }
    }

    fn is_literal(&self) -> bool {
        matches!(self, ConceptExpr::Atomic(_) | ConceptExpr::Not(_))
    }

    /// Predicate names with the arity they are used at.
    pub fn predicates(&self, out: &mut Vec<(String, usize)>) {
        match self {
            ConceptExpr::Atomic(c) | ConceptExpr::Not(c) => out.push((c.clone(), 1)),
            ConceptExpr::And(a, b) => {
                a.predicates(out);
                b.predicates(out);
            }
            ConceptExpr::Or(a, b) => {
                out.push((a.clone(), 1));
                out.push((b.clone(), 1));
            }
            ConceptExpr::Exists { role, filler } | ConceptExpr::Forall { role, filler } => {
                out.push((role.clone(), 2));
                out.push((filler.clone(), 1));
            }
            ConceptExpr::Nothing => {}
        }
    }
}

impl fmt::Display for ConceptExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConceptExpr::Atomic(c) => f.write_str(c),
            ConceptExpr::Not(c) => write!(f, "NOT {c}"),
            ConceptExpr::And(a, b) => {
                write!(f, "{a} AND ")?;
                if matches!(**b, ConceptExpr::And(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            ConceptExpr::Or(a, b) => write!(f, "{a} OR {b}"),
            ConceptExpr::Exists { role, filler } => write!(f, "EXISTS {role}.{filler}"),
            ConceptExpr::Forall { role, filler } => write!(f, "FORALL {role}.{filler}"),
            ConceptExpr::Nothing => f.write_str("NOTHING"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AxiomSide {
    Concept(ConceptExpr),
    Role(String),
}

impl fmt::Display for AxiomSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomSide::Concept(c) => write!(f, "{c}"),
            AxiomSide::Role(r) => f.write_str(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomForm {
    Subsumption,
    Equivalence,
    RoleSubsumption,
    RoleEquivalence,
    Disjointness,
}

impl AxiomForm {
    pub fn is_equivalence(self) -> bool {
        matches!(self, AxiomForm::Equivalence | AxiomForm::RoleEquivalence)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TBoxAxiom {
    pub id: String,
    pub lhs: AxiomSide,
    pub rhs: AxiomSide,
    pub form: AxiomForm,
    pub mode: Mode,
}

impl TBoxAxiom {
    /// Builds a concept axiom, checking that its shape is one the translation
    /// knows how to map.
    pub fn concept(
        id: impl Into<String>,
        lhs: ConceptExpr,
        rhs: ConceptExpr,
        equivalence: bool,
        mode: Mode,
    ) -> Result<Self, String> {
        let form = classify_concept_axiom(&lhs, &rhs, equivalence)?;
        Ok(TBoxAxiom {
            id: id.into(),
            lhs: AxiomSide::Concept(lhs),
            rhs: AxiomSide::Concept(rhs),
            form,
            mode,
        })
    }

    pub fn role(
        id: impl Into<String>,
        sub: impl Into<String>,
        sup: impl Into<String>,
        equivalence: bool,
        mode: Mode,
    ) -> Self {
        TBoxAxiom {
            id: id.into(),
            lhs: AxiomSide::Role(sub.into()),
            rhs: AxiomSide::Role(sup.into()),
            form: if equivalence {
                AxiomForm::RoleEquivalence
            } else {
                AxiomForm::RoleSubsumption
            },
            mode,
        }
    }
}

/// Accepts exactly the mapped axiom shapes: the rows of the DL-to-rule table
/// plus existential restrictions and conjunctions on the left-hand side.
pub fn classify_concept_axiom(
    lhs: &ConceptExpr,
    rhs: &ConceptExpr,
    equivalence: bool,
) -> Result<AxiomForm, String> {
    use ConceptExpr::*;
    if equivalence {
        return match (lhs, rhs) {
            (Atomic(_), Atomic(_)) => Ok(AxiomForm::Equivalence),
            _ => Err(format!(
                "EQUIV is only supported between atomic concepts or roles, got `{lhs}` EQUIV `{rhs}`"
            )),
        };
    }
    if *rhs == Nothing {
        let parts = lhs.conjuncts();
        if parts.len() < 2 || !parts.iter().all(|c| c.is_literal()) {
            return Err(format!(
                "disjointness needs a conjunction of at least two (negated) atomic concepts, got `{lhs}`"
            ));
        }
        return Ok(AxiomForm::Disjointness);
    }
    for c in lhs.conjuncts() {
        match c {
            Atomic(_) | Not(_) | Exists { .. } => {}
            other => return Err(format!("unsupported left-hand side component `{other}`")),
        }
    }
    match rhs {
        Atomic(_) | Not(_) | Or(..) | Exists { .. } | Forall { .. } => {}
        And(..) => {
            if let Some(bad) = rhs.conjuncts().into_iter().find(|c| !c.is_literal()) {
                return Err(format!(
                    "right-hand side conjunctions may only contain (negated) atomic concepts, got `{bad}`"
                ));
            }
        }
        Nothing => unreachable!(),
    }
    Ok(AxiomForm::Subsumption)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AboxAssertion {
    pub literal: Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrincipleDecl {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PriorityKind {
    Less,
    Equal,
}

/// `lower < higher` or `lower = higher`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PriorityDecl {
    pub lower: String,
    pub higher: String,
    pub kind: PriorityKind,
}

impl PriorityDecl {
    pub fn less(lower: impl Into<String>, higher: impl Into<String>) -> Self {
        PriorityDecl {
            lower: lower.into(),
            higher: higher.into(),
            kind: PriorityKind::Less,
        }
    }
}

impl fmt::Display for PriorityDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            PriorityKind::Less => "<",
            PriorityKind::Equal => "=",
        };
        write!(f, "{} {op} {}", self.lower, self.higher)
    }
}

/// An explicitly written rule. Undercutters have head `~applicable(<rule>)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleDecl {
    pub id: String,
    pub mode: Mode,
    pub body: Vec<Literal>,
    pub head: Formula,
    /// Head-only variables that stand for newly introduced individuals.
    pub fresh: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ontology {
    pub tbox: Vec<TBoxAxiom>,
    pub abox: Vec<AboxAssertion>,
    pub principles: Vec<PrincipleDecl>,
    pub priorities: Vec<PriorityDecl>,
    pub rules: Vec<RuleDecl>,
    pub undercuts: Vec<RuleDecl>,
}

impl Ontology {
    pub fn priority_order(&self) -> PriorityOrder {
        PriorityOrder::new(
            self.principles.iter().map(|p| p.id.clone()),
            &self.priorities,
        )
    }

    /// Same ontology with its priority declarations replaced.
    pub fn with_priorities(&self, priorities: Vec<PriorityDecl>) -> Result<Self, String> {
        for p in &priorities {
            for id in [&p.lower, &p.higher] {
                if !self.principles.iter().any(|d| &d.id == id) {
                    return Err(format!("priority refers to undeclared principle `{id}`"));
                }
            }
        }
        Ok(Ontology {
            priorities,
            ..self.clone()
        })
    }

    /// Predicate arities as used anywhere in the ontology.
    pub fn signature(&self) -> BTreeMap<String, usize> {
        let mut uses = Vec::new();
        for a in &self.tbox {
            for side in [&a.lhs, &a.rhs] {
                match side {
                    AxiomSide::Concept(c) => c.predicates(&mut uses),
                    AxiomSide::Role(r) => uses.push((r.clone(), 2)),
                }
            }
        }
        for a in &self.abox {
            uses.push((a.literal.predicate.clone(), a.literal.arity()));
        }
        for r in self.rules.iter().chain(&self.undercuts) {
            for l in &r.body {
                uses.push((l.predicate.clone(), l.arity()));
            }
            match &r.head {
                Formula::Lit(l) => uses.push((l.predicate.clone(), l.arity())),
                Formula::Or(a, b) => {
                    uses.push((a.predicate.clone(), a.arity()));
                    uses.push((b.predicate.clone(), b.arity()));
                }
                Formula::Applicable { .. } => {}
            }
        }
        uses.into_iter().collect()
    }

    pub fn principle(&self, id: &str) -> Option<&PrincipleDecl> {
        self.principles.iter().find(|p| p.id == id)
    }
}

/// Reflexive-transitive closure of the declared priority pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PriorityOrder {
    principles: Vec<String>,
    le: BTreeSet<(String, String)>,
    declared: Vec<PriorityDecl>,
    cycles: Vec<(String, String)>,
}

impl PriorityOrder {
    pub fn new(principles: impl IntoIterator<Item = String>, decls: &[PriorityDecl]) -> Self {
        let mut ids: Vec<String> = principles.into_iter().collect();
        for d in decls {
            for id in [&d.lower, &d.higher] {
                if !ids.contains(id) {
                    ids.push(id.clone());
                }
            }
        }
        let strict_only: Vec<(String, String)> = decls
            .iter()
            .filter(|d| d.kind == PriorityKind::Less)
            .map(|d| (d.lower.clone(), d.higher.clone()))
            .collect();
        let mut all = strict_only.clone();
        for d in decls.iter().filter(|d| d.kind == PriorityKind::Equal) {
            all.push((d.lower.clone(), d.higher.clone()));
            all.push((d.higher.clone(), d.lower.clone()));
        }
        let le = closure(&ids, &all);
        let lt_closure = closure(&ids, &strict_only);
        let cycles = lt_closure
            .iter()
            .filter(|(a, b)| a < b && lt_closure.contains(&(b.clone(), a.clone())))
            .cloned()
            .collect();
        PriorityOrder {
            principles: ids,
            le,
            declared: decls.to_vec(),
            cycles,
        }
    }

    /// `a ≤ b`.
    pub fn le(&self, a: &str, b: &str) -> bool {
        a == b || self.le.contains(&(a.to_string(), b.to_string()))
    }

    /// `a < b`: `a ≤ b` and not `b ≤ a`.
    pub fn lt(&self, a: &str, b: &str) -> bool {
        self.le(a, b) && !self.le(b, a)
    }

    pub fn principles(&self) -> &[String] {
        &self.principles
    }

    pub fn declared(&self) -> &[PriorityDecl] {
        &self.declared
    }

    /// Pairs of distinct principles made mutually ≤ by `<` declarations alone.
    pub fn cycles(&self) -> &[(String, String)] {
        &self.cycles
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(String, String)> {
        self.le.iter()
    }
}

fn closure(ids: &[String], edges: &[(String, String)]) -> BTreeSet<(String, String)> {
    let n = ids.len();
    let idx: BTreeMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in edges {
        m[idx[a.as_str()]][idx[b.as_str()]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                let row_k = m[k].clone();
                for (cell, reach) in m[i].iter_mut().zip(row_k) {
                    *cell |= reach;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if m[i][j] {
                out.insert((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn priority_closure_is_transitive() {
        let order = PriorityOrder::new(
            ["p0", "p1", "p2"].map(String::from),
            &[
                PriorityDecl::less("p2", "p1"),
                PriorityDecl::less("p1", "p0"),
            ],
        );
        assert!(order.le("p2", "p0"));
        assert!(order.lt("p2", "p0"));
        assert!(!order.le("p0", "p2"));
        assert!(order.le("p1", "p1"));
        assert!(order.cycles().is_empty());
    }

    #[test]
    fn equality_and_cycles() {
        let eq = PriorityOrder::new(
            ["a", "b"].map(String::from),
            &[PriorityDecl {
                lower: "a".into(),
                higher: "b".into(),
                kind: PriorityKind::Equal,
            }],
        );
        assert!(eq.le("a", "b") && eq.le("b", "a"));
        assert!(eq.cycles().is_empty());

        let cyc = PriorityOrder::new(
            ["a", "b"].map(String::from),
            &[PriorityDecl::less("a", "b"), PriorityDecl::less("b", "a")],
        );
        assert_eq!(cyc.cycles(), &[("a".to_string(), "b".to_string())]);
        assert!(!cyc.lt("a", "b"));
    }

    #[test]
    fn shape_classification() {
        use ConceptExpr::*;
        let a = || Atomic("A".into());
        let b = || Atomic("B".into());
        assert_eq!(
            classify_concept_axiom(&ConceptExpr::and(a(), b()), &Nothing, false),
            Ok(AxiomForm::Disjointness)
        );
        assert!(classify_concept_axiom(&a(), &Nothing, false).is_err());
        assert!(classify_concept_axiom(&Or("A".into(), "B".into()), &b(), false).is_err());
        assert!(classify_concept_axiom(
            &Forall {
                role: "P".into(),
                filler: "D".into()
            },
            &b(),
            false
        )
        .is_err());
        assert!(classify_concept_axiom(
            &a(),
            &ConceptExpr::and(b(), Or("C".into(), "D".into())),
            false
        )
        .is_err());
        assert!(classify_concept_axiom(&ConceptExpr::and(a(), b()), &b(), true).is_err());
    }
}
