//! Compiles an [`Ontology`] into an argumentation theory: TBox axioms become
//! strict rules or norms, ABox assertions become premises, and the strict part
//! can be closed under transposition.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{construct_arguments, strict_closure, Limits};
use crate::formula::{Formula, Literal, Term};
use crate::ontology::{
    AxiomForm, AxiomSide, ConceptExpr, Mode, Ontology, PrincipleDecl, PriorityOrder, RuleDecl,
    TBoxAxiom,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("axiom `{axiom}` has an unsupported shape: {reason}")]
    UnsupportedShape { axiom: String, reason: String },
    #[error("rule id `{0}` is produced more than once")]
    IdCollision(String),
    #[error("undercutter `{undercut}` targets unknown rule `{target}`")]
    UnknownUndercutTarget { undercut: String, target: String },
    #[error("undercutter `{undercut}` targets strict rule `{target}`")]
    StrictUndercutTarget { undercut: String, target: String },
    #[error("norm `{rule}` refers to undeclared principle `{principle}`")]
    UndeclaredPrinciple { rule: String, principle: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleOrigin {
    Axiom { axiom: String },
    Declared,
    Undercut,
    Transposition { of: String, position: usize },
}

/// A strict rule or a norm. Norms carry their principle in `mode`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub id: String,
    pub body: Vec<Formula>,
    pub head: Formula,
    pub mode: Mode,
    /// Head-only variables instantiated with skolem individuals.
    pub fresh: BTreeSet<String>,
    pub origin: RuleOrigin,
}

impl Rule {
    pub fn is_strict(&self) -> bool {
        self.mode.is_strict()
    }

    pub fn principle(&self) -> Option<&str> {
        self.mode.principle()
    }

    /// The naming atom `applicable(id)`; only norms have one.
    pub fn name(&self) -> Option<Formula> {
        (!self.is_strict()).then(|| Formula::applicable(self.id.clone(), true))
    }

    /// Variables of the head bound neither by the body nor as fresh.
    pub fn unbound_head_vars(&self) -> Vec<String> {
        let body: BTreeSet<&str> = self.body.iter().flat_map(|f| f.variables()).collect();
        let mut out: Vec<String> = Vec::new();
        for v in self.head.variables() {
            if !body.contains(v) && !self.fresh.contains(v) && !out.iter().any(|o| o == v) {
                out.push(v.to_string());
            }
        }
        out
    }

    /// Key identifying the rule up to variable renaming and body order.
    pub fn canonical_key(&self) -> String {
        let n = self.body.len();
        let mut orders: Vec<Vec<usize>> = Vec::new();
        if n <= 6 {
            permutations(n, &mut Vec::new(), &mut vec![false; n], &mut orders);
        } else {
            orders.push((0..n).collect());
        }
        let kind = if self.is_strict() { "->" } else { "=>" };
        orders
            .iter()
            .map(|order| {
                let mut names: BTreeMap<String, String> = BTreeMap::new();
                let mut rename = |v: &str| {
                    let k = names.len();
                    let prefix = if self.fresh.contains(v) { "?" } else { "v" };
                    names
                        .entry(v.to_string())
                        .or_insert_with(|| format!("{prefix}{k}"))
                        .clone()
                };
                let head = self.head.rename_vars(&mut rename);
                let body: Vec<String> = order
                    .iter()
                    .map(|&i| self.body[i].rename_vars(&mut rename).to_string())
                    .collect();
                format!("{} {kind} {head}", body.join(", "))
            })
            .min()
            .unwrap_or_default()
    }
}

fn permutations(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for i in 0..n {
        if !used[i] {
            used[i] = true;
            cur.push(i);
            permutations(n, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.body.iter().map(|b| b.to_string()).collect();
        let arrow = if self.is_strict() { "->" } else { "=>" };
        write!(f, "{}: {} {arrow} {}", self.id, body.join(", "), self.head)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranslateOptions {
    /// Close the strict rules under transposition.
    pub transpose: bool,
    /// Emit `C(x) ⤳ P(x, fresh)` for `C ⊑ ∀P.D`, as the mapping table prints it.
    pub table_verbatim: bool,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            transpose: true,
            table_verbatim: true,
        }
    }
}

/// Premises, strict rules, norms and the principle ordering.
#[derive(Debug, Clone)]
pub struct ArgumentationTheory {
    pub premises: Vec<Formula>,
    rules: Vec<Rule>,
    index: BTreeMap<String, usize>,
    pub principles: Vec<PrincipleDecl>,
    pub order: PriorityOrder,
    pub diagnostics: Vec<String>,
}

impl ArgumentationTheory {
    pub fn new(
        premises: Vec<Formula>,
        rules: Vec<Rule>,
        principles: Vec<PrincipleDecl>,
        order: PriorityOrder,
    ) -> Result<Self, TranslateError> {
        let mut index = BTreeMap::new();
        for (i, r) in rules.iter().enumerate() {
            if index.insert(r.id.clone(), i).is_some() {
                return Err(TranslateError::IdCollision(r.id.clone()));
            }
        }
        let mut seen = HashSet::new();
        let premises = premises
            .into_iter()
            .filter(|p| seen.insert(p.clone()))
            .collect();
        Ok(ArgumentationTheory {
            premises,
            rules,
            index,
            principles,
            order,
            diagnostics: Vec::new(),
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.index.get(id).map(|&i| &self.rules[i])
    }

    pub fn strict_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(|r| r.is_strict())
    }

    pub fn norms(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(|r| !r.is_strict())
    }

    /// Copy of the theory without the named rule.
    pub fn without_rule(&self, id: &str) -> ArgumentationTheory {
        let rules: Vec<Rule> = self.rules.iter().filter(|r| r.id != id).cloned().collect();
        let mut t = ArgumentationTheory::new(
            self.premises.clone(),
            rules,
            self.principles.clone(),
            self.order.clone(),
        )
        .expect("removing a rule keeps ids unique");
        t.diagnostics = self.diagnostics.clone();
        t
    }

    /// Copy of the theory with a different principle ordering.
    pub fn with_order(&self, order: PriorityOrder) -> ArgumentationTheory {
        ArgumentationTheory {
            order,
            ..self.clone()
        }
    }
}

struct VarGen {
    next: usize,
}

impl VarGen {
    fn fresh(&mut self) -> String {
        self.next += 1;
        if self.next == 1 {
            "y".to_string()
        } else {
            format!("y{}", self.next)
        }
    }
}

fn unary(c: &str, v: &str, positive: bool) -> Formula {
    Formula::Lit(Literal::new(c, vec![Term::var(v)], positive))
}

fn binary(p: &str, a: &str, b: &str) -> Formula {
    Formula::Lit(Literal::pos(p, vec![Term::var(a), Term::var(b)]))
}

fn shape_err(a: &TBoxAxiom, reason: impl Into<String>) -> TranslateError {
    TranslateError::UnsupportedShape {
        axiom: a.id.clone(),
        reason: reason.into(),
    }
}

fn concept_literal(c: &ConceptExpr, v: &str) -> Option<Formula> {
    match c {
        ConceptExpr::Atomic(n) => Some(unary(n, v, true)),
        ConceptExpr::Not(n) => Some(unary(n, v, false)),
        _ => None,
    }
}

/// Antecedent literals for a left-hand side over subject variable `x`.
fn antecedents(
    a: &TBoxAxiom,
    lhs: &ConceptExpr,
    vars: &mut VarGen,
) -> Result<Vec<Formula>, TranslateError> {
    let mut body = Vec::new();
    for c in lhs.conjuncts() {
        match c {
            ConceptExpr::Exists { role, filler } => {
                let y = vars.fresh();
                body.push(binary(role, "x", &y));
                body.push(unary(filler, &y, true));
            }
            other => body.push(
                concept_literal(other, "x")
                    .ok_or_else(|| shape_err(a, format!("`{other}` on the left-hand side")))?,
            ),
        }
    }
    Ok(body)
}

/// Maps one TBox axiom to its rules. The first rule is named after the axiom,
/// later ones add a prime each (`d`, `d'`, `d''`).
pub fn translate_axiom(
    a: &TBoxAxiom,
    opts: &TranslateOptions,
) -> Result<Vec<Rule>, TranslateError> {
    // (body, head, fresh variables)
    let mut out: Vec<(Vec<Formula>, Formula, Vec<String>)> = Vec::new();
    let mut vars = VarGen { next: 0 };
    match (a.form, &a.lhs, &a.rhs) {
        (AxiomForm::RoleSubsumption, AxiomSide::Role(p), AxiomSide::Role(q)) => {
            out.push((vec![binary(p, "x", "y")], binary(q, "x", "y"), vec![]));
        }
        (AxiomForm::RoleEquivalence, AxiomSide::Role(p), AxiomSide::Role(q)) => {
            out.push((vec![binary(p, "x", "y")], binary(q, "x", "y"), vec![]));
            out.push((vec![binary(q, "x", "y")], binary(p, "x", "y"), vec![]));
        }
        (
            AxiomForm::Equivalence,
            AxiomSide::Concept(ConceptExpr::Atomic(c)),
            AxiomSide::Concept(ConceptExpr::Atomic(d)),
        ) => {
            out.push((vec![unary(c, "x", true)], unary(d, "x", true), vec![]));
            out.push((vec![unary(d, "x", true)], unary(c, "x", true), vec![]));
        }
        (AxiomForm::Disjointness, AxiomSide::Concept(lhs), _) => {
            let lits = lhs
                .conjuncts()
                .into_iter()
                .map(|c| concept_literal(c, "x"))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| shape_err(a, "disjointness over non-literal concepts"))?;
            // The last conjunct is negated first: `C ⊓ D ⊑ ⊥` gives `C -> ¬D`, then `D -> ¬C`.
            for i in (0..lits.len()).rev() {
                let body: Vec<Formula> = lits
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, l)| l.clone())
                    .collect();
                let head = lits[i].complement().expect("literal");
                out.push((body, head, vec![]));
            }
        }
        (AxiomForm::Subsumption, AxiomSide::Concept(lhs), AxiomSide::Concept(rhs)) => {
            let body = antecedents(a, lhs, &mut vars)?;
            match rhs {
                ConceptExpr::Atomic(_) | ConceptExpr::Not(_) => {
                    out.push((body, concept_literal(rhs, "x").unwrap(), vec![]));
                }
                ConceptExpr::And(..) => {
                    for c in rhs.conjuncts() {
                        let head = concept_literal(c, "x").ok_or_else(|| {
                            shape_err(a, format!("`{c}` in a right-hand side conjunction"))
                        })?;
                        out.push((body.clone(), head, vec![]));
                    }
                }
                ConceptExpr::Or(d, z) => {
                    let dx = Literal::pos(d.as_str(), vec![Term::var("x")]);
                    let zx = Literal::pos(z.as_str(), vec![Term::var("x")]);
                    out.push((body.clone(), Formula::Or(dx.clone(), zx.clone()), vec![]));
                    let mut b2 = body.clone();
                    b2.push(Formula::Lit(dx.negated()));
                    out.push((b2, Formula::Lit(zx.clone()), vec![]));
                    let mut b3 = body;
                    b3.push(Formula::Lit(zx.negated()));
                    out.push((b3, Formula::Lit(dx), vec![]));
                }
                ConceptExpr::Exists { role, filler } => {
                    let y = vars.fresh();
                    out.push((body.clone(), binary(role, "x", &y), vec![y.clone()]));
                    let mut b2 = body;
                    b2.push(binary(role, "x", &y));
                    out.push((b2, unary(filler, &y, true), vec![]));
                }
                ConceptExpr::Forall { role, filler } => {
                    let y = vars.fresh();
                    let mut b1 = body.clone();
                    b1.push(binary(role, "x", &y));
                    out.push((b1, unary(filler, &y, true), vec![]));
                    if opts.table_verbatim {
                        out.push((body, binary(role, "x", &y), vec![y]));
                    }
                }
                ConceptExpr::Nothing => return Err(shape_err(a, "NOTHING needs a conjunction")),
            }
        }
        _ => return Err(shape_err(a, "axiom form does not match its sides")),
    }

    let mut rules: Vec<Rule> = Vec::new();
    let mut keys = HashSet::new();
    for (body, head, fresh) in out {
        let rule = Rule {
            id: String::new(),
            body,
            head,
            mode: a.mode.clone(),
            fresh: fresh.into_iter().collect(),
            origin: RuleOrigin::Axiom {
                axiom: a.id.clone(),
            },
        };
        if keys.insert(rule.canonical_key()) {
            rules.push(rule);
        }
    }
    for (i, r) in rules.iter_mut().enumerate() {
        r.id = format!("{}{}", a.id, "'".repeat(i));
    }
    Ok(rules)
}

fn declared_rule(d: &RuleDecl, origin: RuleOrigin) -> Rule {
    Rule {
        id: d.id.clone(),
        body: d.body.iter().cloned().map(Formula::Lit).collect(),
        head: d.head.clone(),
        mode: d.mode.clone(),
        fresh: d.fresh.iter().cloned().collect(),
        origin,
    }
}

/// Result of closing a rule set under transposition.
#[derive(Debug, Clone)]
pub struct Transposition {
    /// Input rules followed by the added transpositions.
    pub rules: Vec<Rule>,
    pub added: Vec<String>,
    /// Strict rules with a disjunctive head or body element (no complement).
    pub skipped: Vec<String>,
}

fn transposed(r: &Rule, i: usize) -> Option<Rule> {
    let neg_head = r.head.complement()?;
    let neg_i = r.body[i].complement()?;
    let mut body = r.body.clone();
    body[i] = neg_head;
    Some(Rule {
        id: String::new(),
        body,
        head: neg_i,
        mode: Mode::Strict,
        fresh: BTreeSet::new(),
        origin: RuleOrigin::Transposition {
            of: r.id.clone(),
            position: i,
        },
    })
}

fn transposable(r: &Rule) -> bool {
    r.head.complement().is_some() && r.body.iter().all(|b| b.complement().is_some())
}

/// Adds, for every strict rule `φ1..φn -> ψ`, each rule
/// `φ1..-ψ..φn -> -φi` that is not already present (up to renaming).
/// Norms pass through untouched. Idempotent.
pub fn transpose_strict(rules: &[Rule]) -> Transposition {
    let mut all = rules.to_vec();
    let mut ids: HashSet<String> = all.iter().map(|r| r.id.clone()).collect();
    let mut keys: HashSet<String> = all
        .iter()
        .filter(|r| r.is_strict())
        .map(Rule::canonical_key)
        .collect();
    let mut added = Vec::new();
    let mut skipped = Vec::new();
    let mut work: Vec<usize> = (0..all.len()).filter(|&i| all[i].is_strict()).collect();
    work.reverse();
    while let Some(idx) = work.pop() {
        let r = all[idx].clone();
        if !transposable(&r) {
            if !skipped.contains(&r.id) {
                skipped.push(r.id.clone());
            }
            continue;
        }
        for i in 0..r.body.len() {
            let Some(mut t) = transposed(&r, i) else {
                continue;
            };
            if !keys.insert(t.canonical_key()) {
                continue;
            }
            let mut id = if r.body.len() == 1 {
                format!("{}'", r.id)
            } else {
                format!("{}'{}", r.id, i + 1)
            };
            while ids.contains(&id) {
                id.push('\'');
            }
            ids.insert(id.clone());
            t.id = id.clone();
            added.push(id);
            all.push(t);
            work.push(all.len() - 1);
        }
    }
    Transposition {
        rules: all,
        added,
        skipped,
    }
}

/// Builds the theory for an ontology.
pub fn translate_ontology(
    o: &Ontology,
    opts: &TranslateOptions,
) -> Result<ArgumentationTheory, TranslateError> {
    let premises: Vec<Formula> = o
        .abox
        .iter()
        .map(|a| Formula::Lit(a.literal.clone()))
        .collect();
    let mut rules = Vec::new();
    let mut diagnostics = Vec::new();
    for a in &o.tbox {
        if opts.table_verbatim && matches!(a.rhs, AxiomSide::Concept(ConceptExpr::Forall { .. })) {
            diagnostics.push(format!(
                "axiom `{}`: universal restriction also emits an existential-style rule (table-verbatim mapping)",
                a.id
            ));
        }
        rules.extend(translate_axiom(a, opts)?);
    }
    for d in &o.rules {
        rules.push(declared_rule(d, RuleOrigin::Declared));
    }
    for d in &o.undercuts {
        rules.push(declared_rule(d, RuleOrigin::Undercut));
    }

    let mut seen = HashSet::new();
    for r in &rules {
        if !seen.insert(r.id.as_str()) {
            return Err(TranslateError::IdCollision(r.id.clone()));
        }
        if let Mode::Defeasible(p) = &r.mode {
            if o.principle(p).is_none() {
                return Err(TranslateError::UndeclaredPrinciple {
                    rule: r.id.clone(),
                    principle: p.clone(),
                });
            }
        }
    }
    for u in &o.undercuts {
        if let Formula::Applicable { rule: target, .. } = &u.head {
            match rules.iter().find(|r| &r.id == target) {
                None => {
                    return Err(TranslateError::UnknownUndercutTarget {
                        undercut: u.id.clone(),
                        target: target.clone(),
                    })
                }
                Some(r) if r.is_strict() => {
                    return Err(TranslateError::StrictUndercutTarget {
                        undercut: u.id.clone(),
                        target: target.clone(),
                    })
                }
                Some(_) => {}
            }
        }
    }

    if opts.transpose {
        let t = transpose_strict(&rules);
        for id in &t.skipped {
            diagnostics.push(format!(
                "strict rule `{id}` has a disjunction and is not transposed"
            ));
        }
        rules = t.rules;
    }

    let order = o.priority_order();
    for (a, b) in order.cycles() {
        diagnostics.push(format!("priority cycle between `{a}` and `{b}`"));
    }
    let mut theory = ArgumentationTheory::new(premises, rules, o.principles.clone(), order)?;
    theory.diagnostics = diagnostics;
    Ok(theory)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MissingTransposition {
    pub rule: String,
    pub position: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContradictionWitness {
    pub argument: String,
    pub premises: Vec<Formula>,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalityViolation {
    pub set: Vec<Formula>,
    pub element: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellDefinedReport {
    pub passed: bool,
    pub missing_transpositions: Vec<MissingTransposition>,
    pub untransposable: Vec<String>,
    pub contradictory_arguments: Vec<ContradictionWitness>,
    pub classicality_violations: Vec<ClassicalityViolation>,
    pub notes: Vec<String>,
}

impl WellDefinedReport {
    pub fn transposition_closed(&self) -> bool {
        self.missing_transpositions.is_empty()
    }
}

fn contradiction(set: &BTreeSet<Formula>) -> Option<Formula> {
    set.iter()
        .find(|f| f.complement().is_some_and(|c| set.contains(&c)))
        .cloned()
}

/// Checks transposition closure, that no argument's premises strictly derive
/// a contradiction, and classicality of minimal inconsistent premise subsets
/// of size up to `max_subset`.
pub fn check_well_defined(
    t: &ArgumentationTheory,
    max_subset: usize,
    limits: &Limits,
) -> WellDefinedReport {
    let mut notes = Vec::new();
    let strict: Vec<Rule> = t.strict_rules().cloned().collect();
    let keys: HashSet<String> = strict.iter().map(Rule::canonical_key).collect();

    let mut missing = Vec::new();
    let mut untransposable = Vec::new();
    for r in &strict {
        if !transposable(r) {
            untransposable.push(r.id.clone());
            continue;
        }
        for i in 0..r.body.len() {
            if let Some(tr) = transposed(r, i) {
                if !keys.contains(&tr.canonical_key()) {
                    let mut shown = tr.clone();
                    shown.id = "?".into();
                    missing.push(MissingTransposition {
                        rule: r.id.clone(),
                        position: i,
                        expected: shown.to_string(),
                    });
                }
            }
        }
    }

    let mut contradictory = Vec::new();
    match construct_arguments(t, limits) {
        Ok(store) => {
            let mut checked: HashSet<BTreeSet<Formula>> = HashSet::new();
            for a in store.arguments() {
                if !checked.insert(a.premises.clone()) {
                    continue;
                }
                let q: Vec<Formula> = a.premises.iter().cloned().collect();
                match strict_closure(&q, &strict, limits) {
                    Ok(cl) => {
                        if let Some(f) = contradiction(&cl) {
                            contradictory.push(ContradictionWitness {
                                argument: a.id.to_string(),
                                premises: q,
                                formula: f,
                            });
                        }
                    }
                    Err(e) => notes.push(format!("closure of {}'s premises: {e}", a.id)),
                }
            }
        }
        Err(e) => notes.push(format!("argument construction skipped: {e}")),
    }

    let mut violations = Vec::new();
    let k = &t.premises;
    let mut inconsistent: Vec<BTreeSet<usize>> = Vec::new();
    let closure_of = |idx: &BTreeSet<usize>| -> Option<BTreeSet<Formula>> {
        let q: Vec<Formula> = idx.iter().map(|&i| k[i].clone()).collect();
        strict_closure(&q, &strict, limits).ok()
    };
    for size in 1..=max_subset.min(k.len()) {
        for subset in combinations(k.len(), size) {
            let set: BTreeSet<usize> = subset.into_iter().collect();
            if inconsistent.iter().any(|s| s.is_subset(&set)) {
                continue;
            }
            let Some(cl) = closure_of(&set) else {
                notes.push("closure budget exceeded during classicality check".into());
                continue;
            };
            if contradiction(&cl).is_none() {
                continue;
            }
            for &i in &set {
                let Some(neg) = k[i].complement() else {
                    continue;
                };
                let mut rest = set.clone();
                rest.remove(&i);
                let derives = closure_of(&rest).is_some_and(|c| c.contains(&neg));
                if !derives {
                    violations.push(ClassicalityViolation {
                        set: set.iter().map(|&j| k[j].clone()).collect(),
                        element: k[i].clone(),
                    });
                }
            }
            inconsistent.push(set);
        }
    }

    WellDefinedReport {
        passed: missing.is_empty() && contradictory.is_empty() && violations.is_empty(),
        missing_transpositions: missing,
        untransposable,
        contradictory_arguments: contradictory,
        classicality_violations: violations,
        notes,
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
