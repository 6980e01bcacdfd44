//! Grounding and argument construction.
//!
//! Arguments are built bottom-up in rounds. Round 0 turns every premise into
//! an argument; each later round applies rule instances whose body has at
//! least one sub-argument from the previous round. Within a round candidates
//! are sorted by `rule(sub ids)` so that numbering is deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formula::{Formula, Individual, Substitution};
use crate::translation::{ArgumentationTheory, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("argument budget of {limit} exceeded")]
    BudgetExceeded { limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest nesting depth of skolem individuals; deeper instances are blocked.
    pub max_skolem_depth: u32,
    /// Upper bound on arguments (or derived formulas for closures).
    pub max_arguments: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_skolem_depth: 1,
            max_arguments: 100_000,
        }
    }
}

/// Argument identifier, printed `A1`, `A2`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArgId(pub usize);

impl ArgId {
    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for ArgId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.0)
    }
}

impl Serialize for ArgId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Argument {
    pub id: ArgId,
    pub conclusion: Formula,
    /// `None` for premise arguments.
    pub top_rule: Option<String>,
    /// Immediate sub-arguments, in body order.
    pub subs: Vec<ArgId>,
    /// All sub-arguments, including the argument itself.
    #[serde(skip)]
    pub sub_arguments: BTreeSet<ArgId>,
    #[serde(rename = "prem")]
    pub premises: BTreeSet<Formula>,
    pub def_rules: BTreeSet<String>,
    #[serde(skip)]
    pub rules: BTreeSet<String>,
    pub last_norms: BTreeSet<String>,
    #[serde(rename = "lastPrin")]
    pub last_principles: BTreeSet<String>,
    /// Whether the top rule is a norm.
    #[serde(skip)]
    pub defeasible_top: bool,
}

impl Argument {
    pub fn is_premise(&self) -> bool {
        self.top_rule.is_none()
    }

    /// True when no norm is used anywhere in the argument.
    pub fn is_strict(&self) -> bool {
        self.def_rules.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct ArgumentStore {
    args: Vec<Argument>,
    by_conclusion: BTreeMap<Formula, Vec<ArgId>>,
    diagnostics: Vec<String>,
}

impl ArgumentStore {
    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn get(&self, id: ArgId) -> &Argument {
        &self.args[id.index()]
    }

    pub fn arguments(&self) -> &[Argument] {
        &self.args
    }

    pub fn ids(&self) -> impl Iterator<Item = ArgId> + '_ {
        self.args.iter().map(|a| a.id)
    }

    pub fn with_conclusion(&self, f: &Formula) -> &[ArgId] {
        self.by_conclusion.get(f).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Distinct conclusions in formula order.
    pub fn conclusions(&self) -> impl Iterator<Item = &Formula> {
        self.by_conclusion.keys()
    }

    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }

    /// Finds the argument with the given top rule and immediate sub-arguments.
    pub fn find(
        &self,
        top_rule: Option<&str>,
        subs: &[ArgId],
        conclusion: &Formula,
    ) -> Option<ArgId> {
        self.with_conclusion(conclusion)
            .iter()
            .copied()
            .find(|&id| {
                let a = self.get(id);
                a.top_rule.as_deref() == top_rule && a.subs == subs
            })
    }

    fn push_premise(&mut self, f: Formula) -> ArgId {
        let id = ArgId(self.args.len() + 1);
        self.args.push(Argument {
            id,
            conclusion: f.clone(),
            top_rule: None,
            subs: Vec::new(),
            sub_arguments: BTreeSet::from([id]),
            premises: BTreeSet::from([f.clone()]),
            def_rules: BTreeSet::new(),
            rules: BTreeSet::new(),
            last_norms: BTreeSet::new(),
            last_principles: BTreeSet::new(),
            defeasible_top: false,
        });
        self.by_conclusion.entry(f).or_default().push(id);
        id
    }

    fn push_inference(&mut self, rule: &Rule, subs: Vec<ArgId>, conclusion: Formula) -> ArgId {
        let id = ArgId(self.args.len() + 1);
        let mut sub_arguments = BTreeSet::from([id]);
        let mut premises = BTreeSet::new();
        let mut def_rules = BTreeSet::new();
        let mut rules = BTreeSet::from([rule.id.clone()]);
        let mut last_norms = BTreeSet::new();
        for &s in &subs {
            let a = self.get(s);
            sub_arguments.extend(a.sub_arguments.iter().copied());
            premises.extend(a.premises.iter().cloned());
            def_rules.extend(a.def_rules.iter().cloned());
            rules.extend(a.rules.iter().cloned());
            if rule.is_strict() {
                last_norms.extend(a.last_norms.iter().cloned());
            }
        }
        let mut last_principles = BTreeSet::new();
        if let Some(p) = rule.principle() {
            def_rules.insert(rule.id.clone());
            last_norms = BTreeSet::from([rule.id.clone()]);
            last_principles.insert(p.to_string());
        } else {
            for s in &subs {
                last_principles.extend(self.get(*s).last_principles.iter().cloned());
            }
        }
        self.args.push(Argument {
            id,
            conclusion: conclusion.clone(),
            top_rule: Some(rule.id.clone()),
            subs,
            sub_arguments,
            premises,
            def_rules,
            rules,
            last_norms,
            last_principles,
            defeasible_top: !rule.is_strict(),
        });
        self.by_conclusion.entry(conclusion).or_default().push(id);
        id
    }
}

/// Ground formulas grouped by predicate shape for matching.
#[derive(Debug, Default)]
struct FactIndex {
    groups: HashMap<(u8, String, bool), Vec<Formula>>,
    all: HashSet<Formula>,
}

fn shape(f: &Formula) -> (u8, String, bool) {
    match f {
        Formula::Lit(l) => (0, l.predicate.clone(), l.positive),
        Formula::Or(a, b) => (1, format!("{}|{}", a.predicate, b.predicate), a.positive),
        Formula::Applicable { rule, positive } => (2, rule.clone(), *positive),
    }
}

impl FactIndex {
    fn insert(&mut self, f: Formula) -> bool {
        if self.all.insert(f.clone()) {
            self.groups.entry(shape(&f)).or_default().push(f);
            true
        } else {
            false
        }
    }

    fn candidates(&self, pattern: &Formula) -> &[Formula] {
        self.groups
            .get(&shape(pattern))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

fn match_body(
    body: &[Formula],
    facts: &FactIndex,
    theta: Substitution,
    out: &mut Vec<Substitution>,
) {
    let Some((first, rest)) = body.split_first() else {
        out.push(theta);
        return;
    };
    for fact in facts.candidates(first) {
        if let Some(next) = theta.match_formula(first, fact) {
            match_body(rest, facts, next, out);
        }
    }
}

/// A ground rule instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Instance {
    body: Vec<Formula>,
    head: Formula,
}

/// All ground instances of `rule` whose body holds in `facts`.
///
/// Fresh head variables get skolem individuals keyed by the body
/// substitution. Remaining head-only variables are bound by matching the
/// complement of the head against `facts`, so an instance is produced only
/// where its conclusion can contradict something already derived.
fn instances(
    rule: &Rule,
    facts: &FactIndex,
    max_depth: u32,
    blocked: &mut BTreeSet<String>,
) -> Vec<Instance> {
    let mut thetas = Vec::new();
    match_body(&rule.body, facts, Substitution::default(), &mut thetas);
    let unbound = rule.unbound_head_vars();
    let mut out = BTreeSet::new();
    for theta in thetas {
        let body: Vec<Formula> = rule.body.iter().map(|b| b.substitute(&theta)).collect();
        let mut full = theta.clone();
        if !rule.fresh.is_empty() {
            let depth = 1 + theta.0.values().map(Individual::depth).max().unwrap_or(0);
            if depth > max_depth {
                blocked.insert(format!(
                    "rule `{}` blocked at skolem depth {depth} for {{{}}}",
                    rule.id,
                    theta.key()
                ));
                continue;
            }
            let key = theta.key();
            for v in &rule.fresh {
                full.bind(v, Individual::skolem(&rule.id, v, &key, depth));
            }
        }
        let head = rule.head.substitute(&full);
        if unbound.is_empty() {
            out.insert(Instance { body, head });
            continue;
        }
        let Some(comp) = head.complement() else {
            continue;
        };
        for fact in facts.candidates(&comp) {
            if let Some(s) = Substitution::default().match_formula(&comp, fact) {
                out.insert(Instance {
                    body: body.clone(),
                    head: head.substitute(&s),
                });
            }
        }
    }
    out.into_iter().filter(|i| i.head.is_ground()).collect()
}

/// Builds every non-circular argument of the theory.
pub fn construct_arguments(
    t: &ArgumentationTheory,
    limits: &Limits,
) -> Result<ArgumentStore, EngineError> {
    let mut store = ArgumentStore::default();
    let mut facts = FactIndex::default();
    let mut blocked = BTreeSet::new();
    let mut delta: BTreeSet<ArgId> = BTreeSet::new();
    for p in &t.premises {
        delta.insert(store.push_premise(p.clone()));
        facts.insert(p.clone());
        if store.len() > limits.max_arguments {
            return Err(EngineError::BudgetExceeded {
                limit: limits.max_arguments,
            });
        }
    }
    let mut seen: HashSet<(String, Vec<ArgId>, Formula)> = HashSet::new();
    while !delta.is_empty() {
        let mut candidates: BTreeMap<String, (usize, Vec<ArgId>, Formula)> = BTreeMap::new();
        for (ri, rule) in t.rules().iter().enumerate() {
            for inst in instances(rule, &facts, limits.max_skolem_depth, &mut blocked) {
                let choices: Vec<&[ArgId]> =
                    inst.body.iter().map(|b| store.with_conclusion(b)).collect();
                for combo in delta_combinations(&choices, &delta) {
                    let circular = combo.iter().any(|&s| {
                        store
                            .get(s)
                            .sub_arguments
                            .iter()
                            .any(|&x| store.get(x).conclusion == inst.head)
                    });
                    if circular {
                        continue;
                    }
                    let key = (rule.id.clone(), combo.clone(), inst.head.clone());
                    if seen.contains(&key) {
                        continue;
                    }
                    let ids: Vec<String> = combo.iter().map(ArgId::to_string).collect();
                    let label = format!("{}({}) {}", rule.id, ids.join(","), inst.head);
                    candidates.insert(label, (ri, combo, inst.head.clone()));
                }
            }
        }
        delta.clear();
        for (_, (ri, subs, head)) in candidates {
            let rule = &t.rules()[ri];
            seen.insert((rule.id.clone(), subs.clone(), head.clone()));
            delta.insert(store.push_inference(rule, subs, head.clone()));
            facts.insert(head);
            if store.len() > limits.max_arguments {
                return Err(EngineError::BudgetExceeded {
                    limit: limits.max_arguments,
                });
            }
        }
    }
    store.diagnostics = blocked.into_iter().collect();
    Ok(store)
}

/// Sub-argument tuples with at least one member from `delta`. Each tuple is
/// produced once: position `j` is the first one drawn from `delta`.
fn delta_combinations(choices: &[&[ArgId]], delta: &BTreeSet<ArgId>) -> Vec<Vec<ArgId>> {
    let mut out = Vec::new();
    if choices.is_empty() {
        return out;
    }
    for j in 0..choices.len() {
        let pools: Vec<Vec<ArgId>> = choices
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.iter()
                    .copied()
                    .filter(|id| match i.cmp(&j) {
                        std::cmp::Ordering::Less => !delta.contains(id),
                        std::cmp::Ordering::Equal => delta.contains(id),
                        std::cmp::Ordering::Greater => true,
                    })
                    .collect()
            })
            .collect();
        product(&pools, &mut Vec::new(), &mut out);
    }
    out
}

fn product(pools: &[Vec<ArgId>], cur: &mut Vec<ArgId>, out: &mut Vec<Vec<ArgId>>) {
    let Some((first, rest)) = pools.split_first() else {
        out.push(cur.clone());
        return;
    };
    for &id in first {
        cur.push(id);
        product(rest, cur, out);
        cur.pop();
    }
}

/// Everything derivable from `q` with the given strict rules.
pub fn strict_closure(
    q: &[Formula],
    strict: &[Rule],
    limits: &Limits,
) -> Result<BTreeSet<Formula>, EngineError> {
    let mut facts = FactIndex::default();
    for f in q {
        facts.insert(f.clone());
    }
    let mut blocked = BTreeSet::new();
    loop {
        let mut changed = false;
        for r in strict.iter().filter(|r| r.is_strict()) {
            for inst in instances(r, &facts, limits.max_skolem_depth, &mut blocked) {
                changed |= facts.insert(inst.head);
            }
        }
        if facts.all.len() > limits.max_arguments {
            return Err(EngineError::BudgetExceeded {
                limit: limits.max_arguments,
            });
        }
        if !changed {
            break;
        }
    }
    Ok(facts.all.into_iter().collect())
}
