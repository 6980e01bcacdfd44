//! Reference semantics by exhaustive subset enumeration.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Complete extensions of `(0..n, edges)`, checked subset by subset.
pub fn brute_complete(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let attacks = |a: usize, b: usize| edges.contains(&(a, b));
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let conflict = s.iter().any(|&a| s.iter().any(|&b| attacks(a, b)));
        if conflict {
            continue;
        }
        let defended = |a: usize| {
            (0..n)
                .filter(|&b| attacks(b, a))
                .all(|b| s.iter().any(|&c| attacks(c, b)))
        };
        if (0..n).all(|a| s.contains(&a) == defended(a)) {
            out.push(s.into_iter().collect());
        }
    }
    sorted(out)
}

/// The unique subset-least complete extension.
pub fn brute_grounded(complete: &[BTreeSet<usize>]) -> Option<BTreeSet<usize>> {
    let least: Vec<&BTreeSet<usize>> = complete
        .iter()
        .filter(|e| complete.iter().all(|f| e.is_subset(f)))
        .collect();
    match least.as_slice() {
        [one] => Some((*one).clone()),
        _ => None,
    }
}

pub fn brute_preferred(complete: &[BTreeSet<usize>]) -> Vec<BTreeSet<usize>> {
    sorted(
        complete
            .iter()
            .filter(|e| !complete.iter().any(|f| f != *e && e.is_subset(f)))
            .cloned()
            .collect(),
    )
}

pub fn sorted(mut v: Vec<BTreeSet<usize>>) -> Vec<BTreeSet<usize>> {
    v.sort_by(|a, b| a.iter().cmp(b.iter()));
    v
}
