//! Minimal inconsistent subsets (MUS) and minimal correction sets (MCS) over
//! designated soft facts.
//!
//! Consistency of an ASP program is not monotone in its facts: adding a fact
//! can restore an answer set. Neither search below assumes that supersets of
//! an inconsistent set are inconsistent. Candidate sets are enumerated by
//! size and every one is checked by a direct solver call; a set is skipped
//! only when it contains an already reported set, which is exactly the
//! ⊆-minimality condition.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ast::{Atom, Program, Rule};
use crate::error::InconsistencyError;
use crate::ground::{ground_with, GroundConfig};
use crate::stable::{enumerate_with, SolverConfig};

/// Default bound on the number of soft facts searched exhaustively.
pub const DEFAULT_MAX_SOFT: usize = 20;

/// Hard rules that are always kept, plus soft facts that may be dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoftPartition {
    pub hard: Program,
    pub soft: Vec<Atom>,
}

impl SoftPartition {
    /// Soft facts are the rules carrying a `%soft` marker.
    pub fn from_markers(p: &Program) -> Result<SoftPartition, InconsistencyError> {
        let mut soft = Vec::new();
        for (i, r) in p.rules.iter().enumerate() {
            if p.is_soft(i) {
                let a = r.as_fact().ok_or_else(|| InconsistencyError::SoftNotFact(r.to_string()))?;
                soft.push(a.clone());
            }
        }
        let hard = p.filter_rules(|i, _| !p.is_soft(i));
        Ok(SoftPartition::new(hard, soft))
    }

    /// Soft facts are all facts whose predicate is listed.
    pub fn from_predicates(p: &Program, predicates: &[&str]) -> SoftPartition {
        let is_soft = |r: &Rule| r.as_fact().is_some_and(|a| predicates.contains(&a.predicate.as_str()));
        let soft = p.rules.iter().filter(|r| is_soft(r)).filter_map(Rule::as_fact).cloned().collect();
        let hard = p.filter_rules(|_, r| !is_soft(r));
        SoftPartition::new(hard, soft)
    }

    /// Duplicate soft facts are merged.
    pub fn new(hard: Program, soft: Vec<Atom>) -> SoftPartition {
        let mut unique: Vec<Atom> = Vec::new();
        for a in soft {
            if !unique.contains(&a) {
                unique.push(a);
            }
        }
        SoftPartition { hard, soft: unique }
    }

    /// `hard` plus the soft facts at the given indices.
    pub fn program_with(&self, indices: &BTreeSet<usize>) -> Program {
        self.hard.with_facts(indices.iter().map(|&i| &self.soft[i]))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct InconsistencyConfig {
    pub max_soft: usize,
    pub ground: GroundConfig,
    pub solver: SolverConfig,
}

impl Default for InconsistencyConfig {
    fn default() -> Self {
        InconsistencyConfig {
            max_soft: DEFAULT_MAX_SOFT,
            ground: GroundConfig::default(),
            solver: SolverConfig::default(),
        }
    }
}

/// True iff the program has at least one answer set.
pub fn is_consistent(p: &Program) -> Result<bool, InconsistencyError> {
    is_consistent_with(p, &InconsistencyConfig::default())
}

fn is_consistent_with(p: &Program, config: &InconsistencyConfig) -> Result<bool, InconsistencyError> {
    let g = ground_with(p, config.ground)?;
    Ok(!enumerate_with(&g, Some(1), config.solver)?.is_empty())
}

fn subsets_of_size(n: usize, k: usize) -> Vec<BTreeSet<usize>> {
    fn go(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        if acc.len() == k {
            out.push(acc.iter().copied().collect());
            return;
        }
        for i in start..n {
            if n - i < k - acc.len() {
                break;
            }
            acc.push(i);
            go(i + 1, n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Up to `k` ⊆-minimal index sets satisfying `hit`, smallest first, then
/// lexicographic.
fn minimal_sets(
    n: usize,
    k: usize,
    mut hit: impl FnMut(&BTreeSet<usize>) -> Result<bool, InconsistencyError>,
) -> Result<Vec<BTreeSet<usize>>, InconsistencyError> {
    let mut found: Vec<BTreeSet<usize>> = Vec::new();
    for size in 0..=n {
        for s in subsets_of_size(n, size) {
            if found.len() >= k {
                return Ok(found);
            }
            if found.iter().any(|f| f.is_subset(&s)) {
                continue;
            }
            if hit(&s)? {
                found.push(s);
            }
        }
    }
    Ok(found)
}

fn prepare(sp: &SoftPartition, config: &InconsistencyConfig) -> Result<(), InconsistencyError> {
    if sp.soft.len() > config.max_soft {
        return Err(InconsistencyError::Capacity(sp.soft.len(), config.max_soft));
    }
    if !is_consistent_with(&sp.hard, config)? {
        return Err(InconsistencyError::HardCoreInconsistent);
    }
    Ok(())
}

fn to_atoms(sp: &SoftPartition, sets: Vec<BTreeSet<usize>>) -> Vec<Vec<Atom>> {
    sets.into_iter()
        .map(|s| s.into_iter().map(|i| sp.soft[i].clone()).collect())
        .collect()
}

/// Up to `k` ⊆-minimal sets M of soft facts with `hard ∪ M` inconsistent.
pub fn minimal_inconsistent_subsets(sp: &SoftPartition, k: usize) -> Result<Vec<Vec<Atom>>, InconsistencyError> {
    minimal_inconsistent_subsets_with(sp, k, &InconsistencyConfig::default())
}

pub fn minimal_inconsistent_subsets_with(
    sp: &SoftPartition,
    k: usize,
    config: &InconsistencyConfig,
) -> Result<Vec<Vec<Atom>>, InconsistencyError> {
    prepare(sp, config)?;
    let sets = minimal_sets(sp.soft.len(), k, |m| Ok(!is_consistent_with(&sp.program_with(m), config)?))?;
    Ok(to_atoms(sp, sets))
}

/// Up to `k` ⊆-minimal sets R of soft facts with `hard ∪ (soft ∖ R)`
/// consistent.
pub fn minimal_correction_sets(sp: &SoftPartition, k: usize) -> Result<Vec<Vec<Atom>>, InconsistencyError> {
    minimal_correction_sets_with(sp, k, &InconsistencyConfig::default())
}

pub fn minimal_correction_sets_with(
    sp: &SoftPartition,
    k: usize,
    config: &InconsistencyConfig,
) -> Result<Vec<Vec<Atom>>, InconsistencyError> {
    prepare(sp, config)?;
    let n = sp.soft.len();
    let sets = minimal_sets(n, k, |r| {
        let kept: BTreeSet<usize> = (0..n).filter(|i| !r.contains(i)).collect();
        is_consistent_with(&sp.program_with(&kept), config)
    })?;
    Ok(to_atoms(sp, sets))
}

/// All ⊆-minimal hitting sets of `family` over the elements it mentions,
/// smallest first.
pub fn minimal_hitting_sets<T: Ord + Clone>(family: &[BTreeSet<T>]) -> Vec<BTreeSet<T>> {
    let universe: Vec<T> = family.iter().flatten().cloned().collect::<BTreeSet<T>>().into_iter().collect();
    let sets = minimal_sets(universe.len(), usize::MAX, |h| {
        Ok(family.iter().all(|m| m.iter().any(|x| h.iter().any(|&i| universe[i] == *x))))
    })
    .expect("pure predicate");
    sets.into_iter()
        .map(|s| s.into_iter().map(|i| universe[i].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_atom_list, parse_program};

    fn sp(hard: &str, soft: &str) -> SoftPartition {
        SoftPartition::new(parse_program(hard).unwrap(), parse_atom_list(soft).unwrap())
    }

    fn sets(v: &[&str]) -> Vec<Vec<Atom>> {
        v.iter().map(|s| parse_atom_list(s).unwrap()).collect()
    }

    #[test]
    fn consistency() {
        assert!(is_consistent(&parse_program("a.").unwrap()).unwrap());
        assert!(!is_consistent(&parse_program("a. :- a.").unwrap()).unwrap());
    }

    #[test]
    fn single_conflict() {
        let s = sp(":- a.", "a");
        assert_eq!(minimal_correction_sets(&s, 10).unwrap(), sets(&["a"]));
        assert_eq!(minimal_inconsistent_subsets(&s, 10).unwrap(), sets(&["a"]));
    }

    #[test]
    fn pair_conflict() {
        let s = sp(":- a, b.", "a, b");
        assert_eq!(minimal_correction_sets(&s, 10).unwrap(), sets(&["a", "b"]));
        let s = sp(":- a, b.", "a, b, c");
        assert_eq!(minimal_inconsistent_subsets(&s, 10).unwrap(), sets(&["a, b"]));
        assert_eq!(minimal_inconsistent_subsets(&s, 0).unwrap(), sets(&[]));
    }

    #[test]
    fn consistent_program() {
        let s = sp("x :- a.", "a, b");
        assert_eq!(minimal_correction_sets(&s, 10).unwrap(), vec![Vec::<Atom>::new()]);
        assert_eq!(minimal_inconsistent_subsets(&s, 10).unwrap(), sets(&[]));
    }

    #[test]
    fn hard_core() {
        let s = sp("a. :- a.", "b");
        assert_eq!(minimal_correction_sets(&s, 1), Err(InconsistencyError::HardCoreInconsistent));
        assert_eq!(minimal_inconsistent_subsets(&s, 1), Err(InconsistencyError::HardCoreInconsistent));
    }

    #[test]
    fn adding_a_soft_fact_restores_consistency() {
        // {a} is inconsistent but {a, r} is not.
        let s = sp("p :- a. :- p, not q. q :- r.", "a, r");
        assert_eq!(minimal_inconsistent_subsets(&s, 10).unwrap(), sets(&["a"]));
        assert_eq!(minimal_correction_sets(&s, 10).unwrap(), sets(&[""]));
    }

    #[test]
    fn markers_and_predicates() {
        let p = parse_program("a. %soft\nb.\n:- a, b.").unwrap();
        let s = SoftPartition::from_markers(&p).unwrap();
        assert_eq!(s.soft, parse_atom_list("a").unwrap());
        assert_eq!(s.hard.len(), 2);
        let s = SoftPartition::from_predicates(&p, &["a", "b"]);
        assert_eq!(s.soft, parse_atom_list("a, b").unwrap());
        let p = parse_program("x :- y. %soft").unwrap();
        assert!(matches!(SoftPartition::from_markers(&p), Err(InconsistencyError::SoftNotFact(_))));
    }

    #[test]
    fn hitting_sets() {
        let fam = vec![BTreeSet::from([1, 2]), BTreeSet::from([2, 3])];
        assert_eq!(
            minimal_hitting_sets(&fam),
            vec![BTreeSet::from([2]), BTreeSet::from([1, 3])]
        );
        assert_eq!(minimal_hitting_sets::<u8>(&[]), vec![BTreeSet::new()]);
    }

    #[test]
    fn capacity() {
        let s = sp("", "a, b, c");
        let config = InconsistencyConfig { max_soft: 2, ..Default::default() };
        assert_eq!(
            minimal_correction_sets_with(&s, 1, &config),
            Err(InconsistencyError::Capacity(3, 2))
        );
    }
}
