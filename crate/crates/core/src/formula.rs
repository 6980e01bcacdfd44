//! First-order literals, terms and the formulas of the argumentation language.
//!
//! The language is closed under negation for literals and naming atoms.
//! Disjunctions only appear as rule heads produced by `C ⊑ D ⊔ Z` and have no
//! complement.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

/// Reserved predicate for the naming atoms of defeasible rules.
pub const APPLICABLE: &str = "applicable";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndividualKind {
    Named,
    /// Engine-generated witness for a fresh head variable.
    Skolem {
        depth: u32,
        rule: String,
        key: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Individual {
    pub name: String,
    pub kind: IndividualKind,
}

impl Individual {
    pub fn named(name: impl Into<String>) -> Self {
        Individual {
            name: name.into(),
            kind: IndividualKind::Named,
        }
    }

    /// Skolem constant for `var` of `rule` under the body substitution `key`.
    pub fn skolem(rule: &str, var: &str, key: &str, depth: u32) -> Self {
        Individual {
            name: format!("sk:{rule}:{var}[{key}]"),
            kind: IndividualKind::Skolem {
                depth,
                rule: rule.to_string(),
                key: format!("{var}|{key}"),
            },
        }
    }

    pub fn depth(&self) -> u32 {
        match self.kind {
            IndividualKind::Named => 0,
            IndividualKind::Skolem { depth, .. } => depth,
        }
    }

    pub fn is_skolem(&self) -> bool {
        matches!(self.kind, IndividualKind::Skolem { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Ind(Individual),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn named(name: impl Into<String>) -> Self {
        Term::Ind(Individual::named(name))
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Ind(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Ind(i) => write!(f, "{}", i.name),
        }
    }
}

/// A possibly negated predicate application.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<Term>,
    pub positive: bool,
}

impl Literal {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>, positive: bool) -> Self {
        Literal {
            predicate: predicate.into(),
            args,
            positive,
        }
    }

    pub fn pos(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self::new(predicate, args, true)
    }

    pub fn neg(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self::new(predicate, args, false)
    }

    /// Ground literal over named individuals.
    pub fn ground(predicate: &str, individuals: &[&str], positive: bool) -> Self {
        Self::new(
            predicate,
            individuals.iter().map(|i| Term::named(*i)).collect(),
            positive,
        )
    }

    pub fn negated(&self) -> Literal {
        Literal {
            positive: !self.positive,
            ..self.clone()
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Ind(_) => None,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}(", self.predicate)?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Lit(Literal),
    Or(Literal, Literal),
    /// `applicable(rule)` or its negation.
    Applicable {
        rule: String,
        positive: bool,
    },
}

impl Formula {
    pub fn lit(l: Literal) -> Self {
        Formula::Lit(l)
    }

    pub fn applicable(rule: impl Into<String>, positive: bool) -> Self {
        Formula::Applicable {
            rule: rule.into(),
            positive,
        }
    }

    /// `-φ`: sign flip for literals and naming atoms, undefined for disjunctions.
    pub fn complement(&self) -> Option<Formula> {
        match self {
            Formula::Lit(l) => Some(Formula::Lit(l.negated())),
            Formula::Applicable { rule, positive } => Some(Formula::Applicable {
                rule: rule.clone(),
                positive: !positive,
            }),
            Formula::Or(..) => None,
        }
    }

    pub fn is_complement_of(&self, other: &Formula) -> bool {
        self.complement().as_ref() == Some(other)
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Formula::Lit(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Formula::Lit(l) => l.is_ground(),
            Formula::Or(a, b) => a.is_ground() && b.is_ground(),
            Formula::Applicable { .. } => true,
        }
    }

    pub fn variables(&self) -> Vec<&str> {
        match self {
            Formula::Lit(l) => l.variables().collect(),
            Formula::Or(a, b) => a.variables().chain(b.variables()).collect(),
            Formula::Applicable { .. } => Vec::new(),
        }
    }

    /// Individuals mentioned by the formula.
    pub fn individuals(&self) -> Vec<&Individual> {
        let lits: Vec<&Literal> = match self {
            Formula::Lit(l) => vec![l],
            Formula::Or(a, b) => vec![a, b],
            Formula::Applicable { .. } => vec![],
        };
        lits.into_iter()
            .flat_map(|l| l.args.iter())
            .filter_map(|t| match t {
                Term::Ind(i) => Some(i),
                Term::Var(_) => None,
            })
            .collect()
    }

    pub fn substitute(&self, s: &Substitution) -> Formula {
        match self {
            Formula::Lit(l) => Formula::Lit(s.apply(l)),
            Formula::Or(a, b) => Formula::Or(s.apply(a), s.apply(b)),
            Formula::Applicable { .. } => self.clone(),
        }
    }

    /// Renames variables through `f`; terms that are individuals are untouched.
    pub fn rename_vars(&self, f: &mut impl FnMut(&str) -> String) -> Formula {
        let ren = |l: &Literal, f: &mut dyn FnMut(&str) -> String| Literal {
            predicate: l.predicate.clone(),
            positive: l.positive,
            args: l
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => Term::Var(f(v)),
                    other => other.clone(),
                })
                .collect(),
        };
        match self {
            Formula::Lit(l) => Formula::Lit(ren(l, f)),
            Formula::Or(a, b) => {
                let a = ren(a, f);
                Formula::Or(a, ren(b, f))
            }
            Formula::Applicable { .. } => self.clone(),
        }
    }
}

impl From<Literal> for Formula {
    fn from(l: Literal) -> Self {
        Formula::Lit(l)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Lit(l) => write!(f, "{l}"),
            Formula::Or(a, b) => write!(f, "{a} OR {b}"),
            Formula::Applicable { rule, positive } => {
                if !positive {
                    f.write_str("~")?;
                }
                write!(f, "{APPLICABLE}({rule})")
            }
        }
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Variable bindings to individuals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution(pub BTreeMap<String, Individual>);

impl Substitution {
    pub fn get(&self, var: &str) -> Option<&Individual> {
        self.0.get(var)
    }

    pub fn bind(&mut self, var: &str, ind: Individual) {
        self.0.insert(var.to_string(), ind);
    }

    pub fn apply(&self, l: &Literal) -> Literal {
        Literal {
            predicate: l.predicate.clone(),
            positive: l.positive,
            args: l
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => match self.0.get(v) {
                        Some(i) => Term::Ind(i.clone()),
                        None => t.clone(),
                    },
                    other => other.clone(),
                })
                .collect(),
        }
    }

    /// Canonical `x=PS1,y=Injury1` rendering, used to key skolem constants.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(|(k, v)| format!("{k}={}", v.name))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Extends `self` so that `pattern` becomes equal to the ground `fact`.
    pub fn match_literal(&self, pattern: &Literal, fact: &Literal) -> Option<Substitution> {
        if pattern.predicate != fact.predicate
            || pattern.positive != fact.positive
            || pattern.args.len() != fact.args.len()
        {
            return None;
        }
        let mut out = self.clone();
        for (p, g) in pattern.args.iter().zip(&fact.args) {
            let Term::Ind(gi) = g else { return None };
            match p {
                Term::Ind(pi) => {
                    if pi != gi {
                        return None;
                    }
                }
                Term::Var(v) => match out.0.get(v) {
                    Some(bound) if bound != gi => return None,
                    Some(_) => {}
                    None => {
                        out.0.insert(v.clone(), gi.clone());
                    }
                },
            }
        }
        Some(out)
    }

    /// Formula-level matching; disjunctions match component-wise in order and
    /// naming atoms match only themselves.
    pub fn match_formula(&self, pattern: &Formula, fact: &Formula) -> Option<Substitution> {
        match (pattern, fact) {
            (Formula::Lit(p), Formula::Lit(g)) => self.match_literal(p, g),
            (Formula::Or(p1, p2), Formula::Or(g1, g2)) => self
                .match_literal(p1, g1)
                .and_then(|s| s.match_literal(p2, g2)),
            (Formula::Applicable { .. }, Formula::Applicable { .. }) => {
                (pattern == fact).then(|| self.clone())
            }
            _ => None,
        }
    }
}
