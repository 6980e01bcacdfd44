//! Extension-based semantics over an abstract framework of numbered arguments.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("search budget of {limit} labelling nodes exceeded")]
    BudgetExceeded { limit: usize },
    #[error("unknown semantics `{0}` (expected co, gr or pr)")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Semantics {
    #[serde(rename = "co")]
    Complete,
    #[serde(rename = "gr")]
    Grounded,
    #[serde(rename = "pr")]
    Preferred,
}

impl FromStr for Semantics {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "co" | "complete" => Ok(Semantics::Complete),
            "gr" | "grounded" => Ok(Semantics::Grounded),
            "pr" | "preferred" => Ok(Semantics::Preferred),
            other => Err(SemanticsError::Unknown(other.to_string())),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Complete => "co",
            Semantics::Grounded => "gr",
            Semantics::Preferred => "pr",
        })
    }
}

/// Attack graph over arguments `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Framework {
    n: usize,
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
}

impl Framework {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut attackers = vec![BTreeSet::new(); n];
        let mut targets = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            assert!(
                a < n && b < n,
                "edge ({a}, {b}) outside framework of size {n}"
            );
            attackers[b].insert(a);
            targets[a].insert(b);
        }
        Framework {
            n,
            attackers: attackers
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
            targets: targets
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn attackers(&self, a: usize) -> &[usize] {
        &self.attackers[a]
    }

    pub fn targets(&self, a: usize) -> &[usize] {
        &self.targets[a]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| self.targets[a].iter().map(move |&b| (a, b)))
    }

    pub fn is_conflict_free(&self, s: &BTreeSet<usize>) -> bool {
        s.iter()
            .all(|&a| self.targets[a].iter().all(|b| !s.contains(b)))
    }

    /// Every attacker of `a` is attacked by some member of `s`.
    pub fn defends(&self, s: &BTreeSet<usize>, a: usize) -> bool {
        self.attackers[a]
            .iter()
            .all(|&b| self.attackers[b].iter().any(|c| s.contains(c)))
    }

    pub fn is_complete(&self, s: &BTreeSet<usize>) -> bool {
        self.is_conflict_free(s) && (0..self.n).all(|a| s.contains(&a) == self.defends(s, a))
    }
}

/// Least fixpoint of the characteristic function.
pub fn grounded(fw: &Framework) -> BTreeSet<usize> {
    let mut s = BTreeSet::new();
    loop {
        let next: BTreeSet<usize> = (0..fw.n).filter(|&a| fw.defends(&s, a)).collect();
        if next == s {
            return s;
        }
        s = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    In,
    Out,
    Undec,
}

struct Search<'a> {
    fw: &'a Framework,
    labels: Vec<Option<Label>>,
    nodes: usize,
    limit: usize,
    found: Vec<BTreeSet<usize>>,
}

impl Search<'_> {
    /// Rejects labels that can no longer be completed legally.
    fn consistent(&self, a: usize) -> bool {
        let fw = self.fw;
        let label = |x: usize| self.labels[x];
        let check = |x: usize| -> bool {
            let Some(l) = label(x) else { return true };
            let att = &fw.attackers[x];
            let any_in = att.iter().any(|&b| label(b) == Some(Label::In));
            let all_out = att.iter().all(|&b| label(b) == Some(Label::Out));
            match l {
                Label::In => att
                    .iter()
                    .all(|&b| matches!(label(b), Some(Label::Out) | None)),
                Label::Out => any_in || att.iter().any(|&b| label(b).is_none()),
                Label::Undec => !any_in && !all_out,
            }
        };
        check(a) && fw.targets[a].iter().all(|&t| check(t))
    }

    fn run(&mut self, next: usize) -> Result<(), SemanticsError> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(SemanticsError::BudgetExceeded { limit: self.limit });
        }
        let Some(a) = (next..self.fw.n).find(|&a| self.labels[a].is_none()) else {
            let ext: BTreeSet<usize> = (0..self.fw.n)
                .filter(|&a| self.labels[a] == Some(Label::In))
                .collect();
            if self.fw.is_complete(&ext) {
                self.found.push(ext);
            }
            return Ok(());
        };
        for l in [Label::In, Label::Out, Label::Undec] {
            self.labels[a] = Some(l);
            if self.consistent(a) {
                self.run(a + 1)?;
            }
        }
        self.labels[a] = None;
        Ok(())
    }
}

/// All complete extensions, in canonical order.
///
/// Backtracks over three-valued labellings starting from the grounded
/// labelling; `limit` bounds the number of search nodes.
pub fn complete_extensions(
    fw: &Framework,
    limit: usize,
) -> Result<Vec<BTreeSet<usize>>, SemanticsError> {
    let g = grounded(fw);
    let mut labels = vec![None; fw.n];
    for &a in &g {
        labels[a] = Some(Label::In);
        for &t in &fw.targets[a] {
            labels[t] = Some(Label::Out);
        }
    }
    let mut search = Search {
        fw,
        labels,
        nodes: 0,
        limit,
        found: Vec::new(),
    };
    search.run(0)?;
    let mut found = search.found;
    canonical_sort(&mut found);
    found.dedup();
    Ok(found)
}

/// The subset-maximal complete extensions.
pub fn preferred_extensions(
    fw: &Framework,
    limit: usize,
) -> Result<Vec<BTreeSet<usize>>, SemanticsError> {
    let complete = complete_extensions(fw, limit)?;
    let mut out: Vec<BTreeSet<usize>> = complete
        .iter()
        .filter(|e| !complete.iter().any(|f| f.len() > e.len() && e.is_subset(f)))
        .cloned()
        .collect();
    canonical_sort(&mut out);
    Ok(out)
}

/// Sorts by the ascending member list.
pub fn canonical_sort(exts: &mut [BTreeSet<usize>]) {
    exts.sort_by(|a, b| a.iter().cmp(b.iter()));
}

pub fn extensions(
    fw: &Framework,
    semantics: Semantics,
    limit: usize,
) -> Result<Vec<BTreeSet<usize>>, SemanticsError> {
    match semantics {
        Semantics::Grounded => Ok(vec![grounded(fw)]),
        Semantics::Complete => complete_extensions(fw, limit),
        Semantics::Preferred => preferred_extensions(fw, limit),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AcceptanceMode {
    Sceptical,
    Credulous,
}

impl FromStr for AcceptanceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sceptical" | "skeptical" => Ok(AcceptanceMode::Sceptical),
            "credulous" => Ok(AcceptanceMode::Credulous),
            other => Err(format!(
                "unknown mode `{other}` (expected sceptical or credulous)"
            )),
        }
    }
}

impl fmt::Display for AcceptanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AcceptanceMode::Sceptical => "sceptical",
            AcceptanceMode::Credulous => "credulous",
        })
    }
}

/// Whether `a` is in every extension (sceptical) or some extension (credulous).
/// With no extensions nothing is accepted.
pub fn accepted(exts: &[BTreeSet<usize>], a: usize, mode: AcceptanceMode) -> bool {
    match mode {
        AcceptanceMode::Sceptical => !exts.is_empty() && exts.iter().all(|e| e.contains(&a)),
        AcceptanceMode::Credulous => exts.iter().any(|e| e.contains(&a)),
    }
}

/// Default search budget for labelling enumeration.
pub const DEFAULT_NODE_LIMIT: usize = 5_000_000;

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn mutual_attack() {
        let fw = Framework::new(2, [(0, 1), (1, 0)]);
        assert!(grounded(&fw).is_empty());
        assert_eq!(
            complete_extensions(&fw, 1000).unwrap(),
            vec![set(&[]), set(&[0]), set(&[1])]
        );
        assert_eq!(
            preferred_extensions(&fw, 1000).unwrap(),
            vec![set(&[0]), set(&[1])]
        );
    }

    #[test]
    fn chain_and_self_attack() {
        let fw = Framework::new(3, [(0, 1), (1, 2)]);
        assert_eq!(grounded(&fw), set(&[0, 2]));
        let fw = Framework::new(2, [(0, 0), (0, 1)]);
        assert_eq!(complete_extensions(&fw, 1000).unwrap(), vec![set(&[])]);
    }

    #[test]
    fn empty_framework() {
        let fw = Framework::new(0, []);
        assert_eq!(complete_extensions(&fw, 10).unwrap(), vec![set(&[])]);
        assert!(!accepted(&[set(&[])], 0, AcceptanceMode::Credulous));
    }

    #[test]
    fn budget() {
        let edges: Vec<(usize, usize)> = (0..20).map(|i| (i, i ^ 1)).collect();
        let fw = Framework::new(20, edges);
        assert_eq!(
            complete_extensions(&fw, 50),
            Err(SemanticsError::BudgetExceeded { limit: 50 })
        );
    }

    #[test]
    fn parse_names() {
        assert_eq!("pr".parse::<Semantics>().unwrap(), Semantics::Preferred);
        assert!("xx".parse::<Semantics>().is_err());
        assert_eq!(
            "credulous".parse::<AcceptanceMode>().unwrap(),
            AcceptanceMode::Credulous
        );
    }
}
