//! Queries over a compiled ontology: consistency, acceptance, instance
//! checking, collective acceptance, draft queries and explanations.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::engine::{construct_arguments, ArgId, Argument, ArgumentStore, EngineError, Limits};
use crate::formula::{Formula, Individual, Literal, Term};
use crate::ontology::{ConceptExpr, Ontology};
use crate::preferences::{
    attack_pairs, compute_attacks, compute_defeats, defeat_framework, Attack,
};
use crate::semantics::{
    extensions, AcceptanceMode, Framework, Semantics, SemanticsError, DEFAULT_NODE_LIMIT,
};
use crate::translation::{
    translate_ontology, ArgumentationTheory, TranslateError, TranslateOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaskError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("`{0}` is not accepted")]
    NotAccepted(String),
    #[error("no argument concludes `{0}`")]
    Unknown(String),
    #[error("unsupported class expression `{0}`")]
    UnsupportedClass(String),
}

impl TaskError {
    /// Budget errors from argument construction or extension search.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            TaskError::Engine(EngineError::BudgetExceeded { .. })
                | TaskError::Semantics(SemanticsError::BudgetExceeded { .. })
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub translate: TranslateOptions,
    pub limits: Limits,
    /// Labelling search budget.
    pub node_limit: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            translate: TranslateOptions::default(),
            limits: Limits::default(),
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

/// Every pipeline product for one ontology and one priority ordering.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub theory: ArgumentationTheory,
    pub store: ArgumentStore,
    pub attacks: Vec<Attack>,
    pub defeats: Vec<(ArgId, ArgId)>,
    pub framework: Framework,
    pub node_limit: usize,
}

impl Compiled {
    pub fn new(o: &Ontology, settings: &Settings) -> Result<Self, TaskError> {
        let theory = translate_ontology(o, &settings.translate)?;
        Compiled::from_theory(theory, settings)
    }

    pub fn from_theory(
        theory: ArgumentationTheory,
        settings: &Settings,
    ) -> Result<Self, TaskError> {
        let store = construct_arguments(&theory, &settings.limits)?;
        let attacks = compute_attacks(&store);
        let defeats = compute_defeats(&store, &attacks, &theory.order);
        let framework = defeat_framework(store.len(), &defeats);
        Ok(Compiled {
            theory,
            store,
            attacks,
            defeats,
            framework,
            node_limit: settings.node_limit,
        })
    }

    pub fn attack_pairs(&self) -> Vec<(ArgId, ArgId)> {
        attack_pairs(&self.attacks)
    }

    /// Extensions as argument ids, in canonical order.
    pub fn extensions(&self, semantics: Semantics) -> Result<Vec<BTreeSet<ArgId>>, TaskError> {
        let exts = extensions(&self.framework, semantics, self.node_limit)?;
        Ok(exts
            .into_iter()
            .map(|e| e.into_iter().map(|i| ArgId(i + 1)).collect())
            .collect())
    }

    /// Diagnostics from translation and construction.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut d = self.theory.diagnostics.clone();
        d.extend(self.store.diagnostics().iter().cloned());
        d
    }

    fn known_predicate(&self, f: &Formula) -> bool {
        let name = match f {
            Formula::Lit(l) => l.predicate.as_str(),
            Formula::Or(a, _) => a.predicate.as_str(),
            Formula::Applicable { rule, .. } => return self.theory.rule(rule).is_some(),
        };
        let mentions = |g: &Formula| match g {
            Formula::Lit(l) => l.predicate == name,
            Formula::Or(a, b) => a.predicate == name || b.predicate == name,
            Formula::Applicable { .. } => false,
        };
        self.theory.premises.iter().any(mentions)
            || self
                .theory
                .rules()
                .iter()
                .any(|r| mentions(&r.head) || r.body.iter().any(mentions))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Answer {
    Bool(bool),
    Set(Vec<String>),
    Sets(Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Argument(ArgId),
    Pair { attacker: ArgId, target: ArgId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Part {
    pub argument: ArgId,
    pub premises: Vec<Formula>,
    pub rules: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Explanation {
    pub assertion: Formula,
    pub argument: ArgId,
    pub how: Part,
    pub why: Vec<Part>,
    pub ordering: Vec<String>,
}

impl Explanation {
    /// Union of the why-part premises.
    pub fn why_premises(&self) -> BTreeSet<Formula> {
        self.why
            .iter()
            .flat_map(|p| p.premises.iter().cloned())
            .collect()
    }

    /// Union of the why-part rules.
    pub fn why_rules(&self) -> BTreeSet<String> {
        self.why
            .iter()
            .flat_map(|p| p.rules.iter().cloned())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub task: String,
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semantics: Option<Semantics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<AcceptanceMode>,
    pub answer: Answer,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explanations: Option<Vec<Explanation>>,
    pub diagnostics: Vec<String>,
}

impl QueryResult {
    pub fn answer_bool(&self) -> Option<bool> {
        match self.answer {
            Answer::Bool(b) => Some(b),
            _ => None,
        }
    }
}

fn arg_witnesses(ids: impl IntoIterator<Item = ArgId>) -> Vec<Witness> {
    let set: BTreeSet<ArgId> = ids.into_iter().collect();
    set.into_iter().map(Witness::Argument).collect()
}

/// The ontology is consistent iff no argument attacks another. Witnesses are
/// the attacks made directly on the attacked argument (not on a sub-argument).
pub fn consistency_check(c: &Compiled) -> QueryResult {
    let direct: BTreeSet<(ArgId, ArgId)> = c
        .attacks
        .iter()
        .filter(|a| a.target == a.locus)
        .map(|a| (a.attacker, a.target))
        .collect();
    QueryResult {
        task: "check".into(),
        input: String::new(),
        semantics: None,
        mode: None,
        answer: Answer::Bool(c.attacks.is_empty()),
        witnesses: direct
            .into_iter()
            .map(|(attacker, target)| Witness::Pair { attacker, target })
            .collect(),
        explanations: None,
        diagnostics: c.diagnostics(),
    }
}

/// Query context for one semantics and acceptance mode.
pub struct Reasoner<'a> {
    pub compiled: &'a Compiled,
    pub semantics: Semantics,
    pub mode: AcceptanceMode,
    exts: Vec<BTreeSet<ArgId>>,
}

impl<'a> Reasoner<'a> {
    pub fn new(
        compiled: &'a Compiled,
        semantics: Semantics,
        mode: AcceptanceMode,
    ) -> Result<Self, TaskError> {
        let exts = compiled.extensions(semantics)?;
        Ok(Reasoner {
            compiled,
            semantics,
            mode,
            exts,
        })
    }

    pub fn extensions(&self) -> &[BTreeSet<ArgId>] {
        &self.exts
    }

    pub fn is_justified(&self, a: ArgId) -> bool {
        match self.mode {
            AcceptanceMode::Sceptical => {
                !self.exts.is_empty() && self.exts.iter().all(|e| e.contains(&a))
            }
            AcceptanceMode::Credulous => self.exts.iter().any(|e| e.contains(&a)),
        }
    }

    /// Justified arguments concluding `f`.
    pub fn justified_for(&self, f: &Formula) -> Vec<ArgId> {
        self.compiled
            .store
            .with_conclusion(f)
            .iter()
            .copied()
            .filter(|&a| self.is_justified(a))
            .collect()
    }

    fn result(
        &self,
        task: &str,
        input: String,
        answer: Answer,
        witnesses: Vec<Witness>,
    ) -> QueryResult {
        QueryResult {
            task: task.into(),
            input,
            semantics: Some(self.semantics),
            mode: Some(self.mode),
            answer,
            witnesses,
            explanations: None,
            diagnostics: self.compiled.diagnostics(),
        }
    }

    pub fn assertion_acceptance(&self, x: &Formula) -> QueryResult {
        let ws = self.justified_for(x);
        let mut r = self.result(
            "accept",
            x.to_string(),
            Answer::Bool(!ws.is_empty()),
            arg_witnesses(ws),
        );
        if !self.compiled.known_predicate(x) {
            r.diagnostics
                .push(format!("`{x}` uses a predicate unknown to the ontology"));
        }
        r
    }

    /// Checks `individual : class`. With `same_extension` in credulous mode
    /// all witnesses must come from one extension.
    pub fn instance_check(
        &self,
        individual: &str,
        class: &ConceptExpr,
        same_extension: bool,
    ) -> Result<QueryResult, TaskError> {
        check_shape(class)?;
        let found = if same_extension && self.mode == AcceptanceMode::Credulous {
            self.exts
                .iter()
                .find_map(|e| self.instance_witnesses(individual, class, &|a| e.contains(&a)))
        } else {
            self.instance_witnesses(individual, class, &|a| self.is_justified(a))
        };
        let answer = found.is_some();
        Ok(self.result(
            "instance",
            format!("{individual} : {class}"),
            Answer::Bool(answer),
            arg_witnesses(found.unwrap_or_default()),
        ))
    }

    fn supported(&self, f: &Formula, ok: &dyn Fn(ArgId) -> bool) -> Vec<ArgId> {
        self.compiled
            .store
            .with_conclusion(f)
            .iter()
            .copied()
            .filter(|&a| ok(a))
            .collect()
    }

    fn first(&self, f: &Formula, ok: &dyn Fn(ArgId) -> bool) -> Option<ArgId> {
        self.supported(f, ok).into_iter().next()
    }

    /// Role fillers `y` with a supported `P(x, y)`, by individual name.
    fn fillers(&self, role: &str, x: &str, ok: &dyn Fn(ArgId) -> bool) -> Vec<(Formula, ArgId)> {
        let mut out = Vec::new();
        for f in self.compiled.store.conclusions() {
            let Formula::Lit(l) = f else { continue };
            if l.predicate != role || !l.positive || l.args.len() != 2 {
                continue;
            }
            if !matches!(&l.args[0], Term::Ind(i) if i.name == x) {
                continue;
            }
            if let Some(a) = self.first(f, ok) {
                out.push((f.clone(), a));
            }
        }
        out
    }

    fn instance_witnesses(
        &self,
        x: &str,
        class: &ConceptExpr,
        ok: &dyn Fn(ArgId) -> bool,
    ) -> Option<Vec<ArgId>> {
        let at = |c: &str, positive: bool| unary_for(c, x, positive, &self.compiled.store);
        match class {
            ConceptExpr::Atomic(c) => self.first(&at(c, true), ok).map(|a| vec![a]),
            ConceptExpr::Not(c) => self.first(&at(c, false), ok).map(|a| vec![a]),
            ConceptExpr::And(l, r) => {
                let mut w = self.instance_witnesses(x, l, ok)?;
                w.extend(self.instance_witnesses(x, r, ok)?);
                Some(w)
            }
            ConceptExpr::Or(d, z) => self
                .first(&at(d, true), ok)
                .or_else(|| self.first(&at(z, true), ok))
                .map(|a| vec![a]),
            ConceptExpr::Exists { role, filler } => {
                self.fillers(role, x, ok).into_iter().find_map(|(f, a)| {
                    let y = second_arg(&f)?;
                    let d = self.first(&unary_for(filler, &y, true, &self.compiled.store), ok)?;
                    Some(vec![a, d])
                })
            }
            ConceptExpr::Forall { role, filler } => {
                let fillers = self.fillers(role, x, ok);
                if fillers.is_empty() {
                    return None;
                }
                let mut w = Vec::new();
                for (f, a) in fillers {
                    let y = second_arg(&f)?;
                    let d = self.first(&unary_for(filler, &y, true, &self.compiled.store), ok)?;
                    w.push(a);
                    w.push(d);
                }
                Some(w)
            }
            ConceptExpr::Nothing => None,
        }
    }

    /// One conclusion set per extension, deduplicated and sorted.
    pub fn collective_acceptance(&self) -> Vec<Vec<Formula>> {
        self.exts
            .iter()
            .map(|e| {
                let set: BTreeSet<&Formula> = e
                    .iter()
                    .map(|&a| &self.compiled.store.get(a).conclusion)
                    .collect();
                let mut v: Vec<Formula> = set.into_iter().cloned().collect();
                v.sort_by_key(|f| f.to_string());
                v
            })
            .collect()
    }

    pub fn collective_result(&self) -> QueryResult {
        let sets = self.collective_acceptance();
        let answer = Answer::Sets(
            sets.iter()
                .map(|s| s.iter().map(|f| f.to_string()).collect())
                .collect(),
        );
        let ws = arg_witnesses(self.exts.iter().flatten().copied());
        self.result("conclusions", String::new(), answer, ws)
    }

    /// Conclusions held in every extension (sceptical) or some extension
    /// (credulous), each with one supporting argument.
    fn held(&self) -> BTreeMap<Formula, ArgId> {
        let mut counts: BTreeMap<Formula, (usize, ArgId)> = BTreeMap::new();
        for e in &self.exts {
            let mut seen = BTreeSet::new();
            for &a in e {
                let f = &self.compiled.store.get(a).conclusion;
                if seen.insert(f.clone()) {
                    let entry = counts.entry(f.clone()).or_insert((0, a));
                    entry.0 += 1;
                }
            }
        }
        let need = match self.mode {
            AcceptanceMode::Sceptical => self.exts.len(),
            AcceptanceMode::Credulous => 1,
        };
        counts
            .into_iter()
            .filter(|(_, (n, _))| *n >= need && *n > 0)
            .map(|(f, (_, a))| (f, a))
            .collect()
    }

    /// Individuals `x` with `C(x)` among the accepted conclusions.
    pub fn instances_of_concept(&self, concept: &str) -> QueryResult {
        let mut names = BTreeSet::new();
        let mut ws = Vec::new();
        for (f, a) in self.held() {
            if let Formula::Lit(l) = &f {
                if l.predicate == concept && l.positive && l.args.len() == 1 {
                    if let Term::Ind(i) = &l.args[0] {
                        names.insert(i.name.clone());
                        ws.push(a);
                    }
                }
            }
        }
        self.result(
            "instances-of",
            concept.to_string(),
            Answer::Set(names.into_iter().collect()),
            arg_witnesses(ws),
        )
    }

    /// Unary predicates `C` with `C(x)` among the accepted conclusions.
    pub fn concepts_of_individual(&self, individual: &str) -> QueryResult {
        let mut names = BTreeSet::new();
        let mut ws = Vec::new();
        for (f, a) in self.held() {
            if let Formula::Lit(l) = &f {
                if l.positive
                    && l.args.len() == 1
                    && matches!(&l.args[0], Term::Ind(i) if i.name == individual)
                {
                    names.insert(l.predicate.clone());
                    ws.push(a);
                }
            }
        }
        self.result(
            "concepts-of",
            individual.to_string(),
            Answer::Set(names.into_iter().collect()),
            arg_witnesses(ws),
        )
    }

    /// One explanation per justified argument concluding `x`.
    pub fn explain(&self, x: &Formula, norms_only: bool) -> Result<QueryResult, TaskError> {
        let store = &self.compiled.store;
        if store.with_conclusion(x).is_empty() {
            return Err(TaskError::Unknown(x.to_string()));
        }
        let justified = self.justified_for(x);
        if justified.is_empty() {
            return Err(TaskError::NotAccepted(x.to_string()));
        }
        let ordering: Vec<String> = self
            .compiled
            .theory
            .order
            .declared()
            .iter()
            .map(|d| d.to_string())
            .collect();
        let part = |a: &Argument| Part {
            argument: a.id,
            premises: a.premises.iter().cloned().collect(),
            rules: a
                .rules
                .iter()
                .filter(|r| {
                    !norms_only || self.compiled.theory.rule(r).is_some_and(|r| !r.is_strict())
                })
                .cloned()
                .collect(),
        };
        let defeats = &self.compiled.defeats;
        let mut explanations = Vec::new();
        for &a in &justified {
            let ext = self.exts.iter().find(|e| e.contains(&a));
            let defeaters: BTreeSet<ArgId> = defeats
                .iter()
                .filter(|(_, t)| *t == a)
                .map(|(d, _)| *d)
                .collect();
            let defenders: BTreeSet<ArgId> = defeats
                .iter()
                .filter(|(b, d)| defeaters.contains(d) && ext.is_some_and(|e| e.contains(b)))
                .map(|(b, _)| *b)
                .collect();
            explanations.push(Explanation {
                assertion: x.clone(),
                argument: a,
                how: part(store.get(a)),
                why: defenders.into_iter().map(|b| part(store.get(b))).collect(),
                ordering: ordering.clone(),
            });
        }
        let mut r = self.result(
            "explain",
            x.to_string(),
            Answer::Bool(true),
            arg_witnesses(justified),
        );
        r.explanations = Some(explanations);
        Ok(r)
    }
}

fn check_shape(class: &ConceptExpr) -> Result<(), TaskError> {
    match class {
        ConceptExpr::Nothing => Err(TaskError::UnsupportedClass(class.to_string())),
        ConceptExpr::And(l, r) => {
            check_shape(l)?;
            check_shape(r)
        }
        _ => Ok(()),
    }
}

fn second_arg(f: &Formula) -> Option<String> {
    match f {
        Formula::Lit(l) => match l.args.get(1)? {
            Term::Ind(i) => Some(i.name.clone()),
            Term::Var(_) => None,
        },
        _ => None,
    }
}

/// `C(x)` using the stored individual named `x` when there is one, so that
/// skolem fillers compare equal to the stored conclusions.
fn unary_for(c: &str, x: &str, positive: bool, store: &ArgumentStore) -> Formula {
    let ind = store
        .conclusions()
        .flat_map(|f| f.individuals())
        .find(|i| i.name == x)
        .cloned()
        .unwrap_or_else(|| Individual::named(x));
    Formula::Lit(Literal::new(c, vec![Term::Ind(ind)], positive))
}
