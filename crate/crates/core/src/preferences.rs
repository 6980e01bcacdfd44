//! Attacks between arguments, the last-link argument ordering and defeats.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;

use crate::engine::{ArgId, Argument, ArgumentStore};
use crate::formula::Formula;
use crate::ontology::PriorityOrder;
use crate::semantics::Framework;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackKind {
    Undercut,
    Rebut,
    Undermine,
}

/// `attacker` attacks `target` on its sub-argument `locus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Attack {
    pub attacker: ArgId,
    pub target: ArgId,
    pub locus: ArgId,
    pub kind: AttackKind,
}

/// Every attack, sorted by attacker, target, locus and kind.
pub fn compute_attacks(store: &ArgumentStore) -> Vec<Attack> {
    let mut supers: Vec<Vec<ArgId>> = vec![Vec::new(); store.len()];
    for a in store.arguments() {
        for s in &a.sub_arguments {
            supers[s.index()].push(a.id);
        }
    }
    let mut by_top_rule: std::collections::HashMap<&str, Vec<ArgId>> = Default::default();
    for a in store.arguments() {
        if let Some(r) = &a.top_rule {
            by_top_rule.entry(r.as_str()).or_default().push(a.id);
        }
    }

    let mut out = BTreeSet::new();
    for a in store.arguments() {
        let Some(comp) = a.conclusion.complement() else {
            continue;
        };
        let mut loci: Vec<(ArgId, AttackKind)> = Vec::new();
        if let Formula::Applicable {
            rule,
            positive: false,
        } = &a.conclusion
        {
            for &b in by_top_rule.get(rule.as_str()).into_iter().flatten() {
                if store.get(b).defeasible_top {
                    loci.push((b, AttackKind::Undercut));
                }
            }
        }
        for &b in store.with_conclusion(&comp) {
            let arg = store.get(b);
            if arg.defeasible_top {
                loci.push((b, AttackKind::Rebut));
            } else if arg.is_premise() {
                loci.push((b, AttackKind::Undermine));
            }
        }
        for (locus, kind) in loci {
            for &target in &supers[locus.index()] {
                out.insert(Attack {
                    attacker: a.id,
                    target,
                    locus,
                    kind,
                });
            }
        }
    }
    out.into_iter().collect()
}

/// Democratic comparison of principle sets: `b ⪯ a` holds when every
/// principle of `b` is at most some principle of `a`. An empty set stands for
/// a norm-free argument and is strictly above every non-empty set.
pub fn democratic_le(b: &BTreeSet<String>, a: &BTreeSet<String>, order: &PriorityOrder) -> bool {
    match (b.is_empty(), a.is_empty()) {
        (true, true) => true,
        (true, false) => false,
        (false, true) => true,
        (false, false) => b.iter().all(|p| a.iter().any(|q| order.le(p, q))),
    }
}

/// Last-link ordering of arguments over their last principles.
#[derive(Debug, Clone)]
pub struct PreferenceModel<'a> {
    pub order: &'a PriorityOrder,
}

impl<'a> PreferenceModel<'a> {
    pub fn new(order: &'a PriorityOrder) -> Self {
        PreferenceModel { order }
    }

    /// `b ⪯ a`
    pub fn le(&self, b: &Argument, a: &Argument) -> bool {
        democratic_le(&b.last_principles, &a.last_principles, self.order)
    }

    /// `b ≺ a`
    pub fn lt(&self, b: &Argument, a: &Argument) -> bool {
        self.le(b, a) && !self.le(a, b)
    }

    /// Undercuts always succeed; rebuts and undermines succeed unless the
    /// attacker is strictly weaker than the attacked argument.
    pub fn succeeds(&self, store: &ArgumentStore, attack: &Attack) -> bool {
        match attack.kind {
            AttackKind::Undercut => true,
            AttackKind::Rebut | AttackKind::Undermine => {
                !self.lt(store.get(attack.attacker), store.get(attack.target))
            }
        }
    }
}

/// Distinct `(attacker, target)` pairs with at least one successful attack.
pub fn compute_defeats(
    store: &ArgumentStore,
    attacks: &[Attack],
    order: &PriorityOrder,
) -> Vec<(ArgId, ArgId)> {
    let model = PreferenceModel::new(order);
    let pairs: BTreeSet<(ArgId, ArgId)> = attacks
        .iter()
        .filter(|a| model.succeeds(store, a))
        .map(|a| (a.attacker, a.target))
        .collect();
    pairs.into_iter().collect()
}

/// Distinct `(attacker, target)` pairs of the attack relation.
pub fn attack_pairs(attacks: &[Attack]) -> Vec<(ArgId, ArgId)> {
    let pairs: BTreeSet<(ArgId, ArgId)> = attacks.iter().map(|a| (a.attacker, a.target)).collect();
    pairs.into_iter().collect()
}

/// The defeat graph as an abstract framework; argument `Ak` is node `k - 1`.
pub fn defeat_framework(n: usize, defeats: &[(ArgId, ArgId)]) -> Framework {
    Framework::new(n, defeats.iter().map(|(a, b)| (a.index(), b.index())))
}

#[derive(Debug, Clone, Serialize)]
pub struct AfDump {
    pub arguments: Vec<ArgId>,
    pub attacks: Vec<Attack>,
    pub defeats: Vec<(ArgId, ArgId)>,
}

/// ASPARTIX-style text: one `arg/1` fact per argument, one `att/2` per defeat.
pub fn to_apx(n: usize, defeats: &[(ArgId, ArgId)]) -> String {
    let mut out = String::new();
    for i in 1..=n {
        writeln!(out, "arg(a{i}).").unwrap();
    }
    for (a, b) in defeats {
        writeln!(out, "att(a{},a{}).", a.0, b.0).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::PriorityDecl;

    fn ps(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn order(pairs: &[(&str, &str)]) -> PriorityOrder {
        let decls: Vec<PriorityDecl> = pairs
            .iter()
            .map(|(a, b)| PriorityDecl::less(*a, *b))
            .collect();
        PriorityOrder::new(["p1", "p2", "p3"].map(String::from), &decls)
    }

    #[test]
    fn norm_free_is_strictly_maximal() {
        let o = order(&[]);
        assert!(democratic_le(&ps(&[]), &ps(&[]), &o));
        assert!(democratic_le(&ps(&["p1"]), &ps(&[]), &o));
        assert!(!democratic_le(&ps(&[]), &ps(&["p1"]), &o));
    }

    #[test]
    fn democratic_comparison() {
        let o = order(&[("p2", "p1")]);
        assert!(democratic_le(&ps(&["p2"]), &ps(&["p1"]), &o));
        assert!(!democratic_le(&ps(&["p1"]), &ps(&["p2"]), &o));
        assert!(!democratic_le(&ps(&["p3"]), &ps(&["p2"]), &o));
        assert!(democratic_le(&ps(&["p2", "p1"]), &ps(&["p1", "p3"]), &o));
        assert!(!democratic_le(&ps(&["p2", "p3"]), &ps(&["p1"]), &o));
    }

    #[test]
    fn apx_output() {
        assert_eq!(
            to_apx(2, &[(ArgId(2), ArgId(1))]),
            "arg(a1).\narg(a2).\natt(a2,a1).\n"
        );
    }
}
