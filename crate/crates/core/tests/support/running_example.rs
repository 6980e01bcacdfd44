//! The published argument structure of the autonomous-vehicle example and a
//! structural matcher from it to a computed argument store.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use argonto_core::engine::{ArgId, ArgumentStore};
use argonto_core::ontology::{parse_ontology, parse_priority, Ontology};

pub const AV_SOURCE: &str = include_str!("../../corpus/av.onto");

/// (conclusion, top rule, immediate sub-arguments by published index).
pub const ARGUMENTS: [(&str, Option<&str>, &[usize]); 22] = [
    ("Driver(PS1)", None, &[]),
    ("Intoxicated(PS1)", None, &[]),
    ("Injury(Injury1)", None, &[]),
    ("hitAndRun(PS1, Injury1)", None, &[]),
    ("CauseAccident(PS1)", None, &[]),
    ("causeDeath(PS1, Injury1)", None, &[]),
    ("NeedEmergencyAid(Injury1)", None, &[]),
    ("Sober(PS1)", Some("r1"), &[1]),
    ("~LeaveCar(PS1)", Some("r2"), &[2]),
    ("BeRevokedDrivingLicense(PS1)", Some("r3"), &[1, 2]),
    ("TakeCriminalResponsibility(PS1)", Some("r4"), &[1, 2]),
    ("TakeCriminalResponsibility(PS1)", Some("r5"), &[4]),
    ("AggravatedPunishment(PS1)", Some("r6"), &[4, 6]),
    ("AggravatedPunishment(PS1)", Some("r7"), &[1, 2, 4]),
    ("transferToSafePlace(PS1, Injury1)", Some("r8"), &[3, 5]),
    ("doNecessaryAid(PS1, Injury1)", Some("r9"), &[3, 5, 7]),
    ("~Intoxicated(PS1)", Some("r10"), &[8]),
    ("~Sober(PS1)", Some("r10'"), &[2]),
    ("LeaveCar(PS1)", Some("r11"), &[15]),
    ("~transferToSafePlace(PS1, Injury1)", Some("r11'"), &[9]),
    ("LeaveCar(PS1)", Some("r12"), &[16]),
    ("~doNecessaryAid(PS1, Injury1)", Some("r12'"), &[9]),
];

/// Attack relation, attacker to attacked arguments.
pub const ATTACKS: [(usize, &[usize]); 6] = [
    (17, &[2, 9, 10, 11, 14, 18, 20, 22]),
    (18, &[8, 17]),
    (19, &[9, 20, 22]),
    (20, &[15, 19]),
    (21, &[9, 20, 22]),
    (22, &[16, 21]),
];

/// Defeats under `p2 < p1`.
pub const DEFEATS_D: [(usize, &[usize]); 4] = [
    (17, &[9, 10, 11, 14, 20, 22]),
    (18, &[8, 17]),
    (19, &[9, 20, 22]),
    (21, &[9, 20, 22]),
];

/// Defeats under `p1 < p2`.
pub const DEFEATS_D_PRIME: [(usize, &[usize]); 4] = [
    (17, &[9, 10, 11, 14, 20, 22]),
    (18, &[8, 17]),
    (20, &[15, 19]),
    (22, &[16, 21]),
];

pub const EXTENSION_E: [usize; 17] = [1, 2, 3, 4, 5, 6, 7, 10, 11, 12, 13, 14, 15, 16, 18, 19, 21];
pub const EXTENSION_E_PRIME: [usize; 16] = [1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 13, 14, 18, 20, 22];

/// Conclusions collectively accepted under `p2 < p1`.
pub const CONCLUSIONS_E: [&str; 14] = [
    "Driver(PS1)",
    "Intoxicated(PS1)",
    "hitAndRun(PS1, Injury1)",
    "Injury(Injury1)",
    "causeDeath(PS1, Injury1)",
    "CauseAccident(PS1)",
    "NeedEmergencyAid(Injury1)",
    "BeRevokedDrivingLicense(PS1)",
    "TakeCriminalResponsibility(PS1)",
    "AggravatedPunishment(PS1)",
    "transferToSafePlace(PS1, Injury1)",
    "doNecessaryAid(PS1, Injury1)",
    "~Sober(PS1)",
    "LeaveCar(PS1)",
];

pub fn pairs(rel: &[(usize, &[usize])]) -> BTreeSet<(usize, usize)> {
    rel.iter()
        .flat_map(|(a, ts)| ts.iter().map(move |t| (*a, *t)))
        .collect()
}

pub fn ontology() -> Ontology {
    parse_ontology(AV_SOURCE).expect("corpus parses")
}

/// The corpus with its priority declarations replaced by `priority`.
pub fn ontology_with(priority: &str) -> Ontology {
    ontology()
        .with_priorities(vec![parse_priority(priority).unwrap()])
        .unwrap()
}

/// Matches computed arguments to published indices by conclusion, top rule
/// and sub-argument structure. Returns `Err` describing the first mismatch.
pub fn bijection(store: &ArgumentStore) -> Result<BTreeMap<usize, ArgId>, String> {
    let mut map: BTreeMap<usize, ArgId> = BTreeMap::new();
    for (k, (conc, top, subs)) in ARGUMENTS.iter().enumerate() {
        let k = k + 1;
        let want_subs: BTreeSet<ArgId> = subs.iter().map(|s| map[s]).collect();
        let found: Vec<ArgId> = store
            .arguments()
            .iter()
            .filter(|a| {
                a.conclusion.to_string() == *conc
                    && a.top_rule.as_deref() == *top
                    && a.subs.len() == subs.len()
                    && a.subs.iter().copied().collect::<BTreeSet<_>>() == want_subs
            })
            .map(|a| a.id)
            .collect();
        match found.as_slice() {
            [one] => {
                map.insert(k, *one);
            }
            [] => return Err(format!("no computed argument matches α{k} ({conc})")),
            _ => return Err(format!("α{k} ({conc}) matches {} arguments", found.len())),
        }
    }
    let image: BTreeSet<ArgId> = map.values().copied().collect();
    if image.len() != ARGUMENTS.len() || store.len() != ARGUMENTS.len() {
        return Err(format!(
            "{} computed arguments for {} published ones",
            store.len(),
            ARGUMENTS.len()
        ));
    }
    Ok(map)
}

/// Published index of each computed argument.
pub fn inverse(map: &BTreeMap<usize, ArgId>) -> BTreeMap<ArgId, usize> {
    map.iter().map(|(k, v)| (*v, *k)).collect()
}
