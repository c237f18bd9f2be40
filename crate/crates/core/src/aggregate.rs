//! Abstract constraint atoms and their satisfaction/violation witnesses.
//!
//! A ground aggregate `#sum{w1:a1; ...; wn:an} op k` is the pair `(D, C)`
//! with domain `D = {a1..an}` and `C` the subsets of `D` whose weight sum
//! satisfies `op k`. A witness is a partial interpretation `(S, N)` of the
//! domain, with `S` taken from the true atoms and `N` from the false ones,
//! that fixes the aggregate's truth value for every completion: every
//! `J ⊆ D` with `S ⊆ J` and `J ∩ N = ∅` agrees with the explained verdict.
//! Witnesses are reported ⊆-minimal.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::ast::{AggregateFunction, Comparison};
use crate::error::WitnessError;
use crate::interp::{AtomId, Interpretation};

pub const DEFAULT_WITNESS_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstraintAtom {
    /// Distinct domain atoms with their weights, in source order.
    pub elements: Vec<(AtomId, i64)>,
    pub function: AggregateFunction,
    pub comparison: Comparison,
    pub bound: i64,
}

impl ConstraintAtom {
    /// Builds a constraint atom, merging repeated atoms: identical
    /// `(weight, atom)` pairs count once, distinct weights for the same atom
    /// add up.
    pub fn new(
        elements: impl IntoIterator<Item = (AtomId, i64)>,
        function: AggregateFunction,
        comparison: Comparison,
        bound: i64,
    ) -> Self {
        let mut merged: Vec<(AtomId, i64)> = Vec::new();
        let mut seen: HashMap<AtomId, Vec<i64>> = HashMap::new();
        for (atom, weight) in elements {
            let weight = if function == AggregateFunction::Count { 1 } else { weight };
            let weights = seen.entry(atom).or_default();
            if weights.contains(&weight) {
                continue;
            }
            weights.push(weight);
            match merged.iter_mut().find(|(a, _)| *a == atom) {
                Some((_, w)) => *w += weight,
                None => merged.push((atom, weight)),
            }
        }
        ConstraintAtom {
            elements: merged,
            function,
            comparison,
            bound,
        }
    }

    pub fn domain(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.elements.iter().map(|(a, _)| *a)
    }

    pub fn in_domain(&self, atom: AtomId) -> bool {
        self.elements.iter().any(|(a, _)| *a == atom)
    }

    pub fn value_with(&self, truth: impl Fn(AtomId) -> bool) -> i64 {
        self.elements
            .iter()
            .filter(|(a, _)| truth(*a))
            .map(|(_, w)| *w)
            .sum()
    }

    pub fn eval_with(&self, truth: impl Fn(AtomId) -> bool) -> bool {
        self.comparison.holds(self.value_with(truth), self.bound)
    }

    pub fn eval(&self, i: &Interpretation) -> bool {
        self.eval_with(|a| i.contains(a))
    }

    /// Three-valued evaluation under a partial assignment. `None` means the
    /// value is not determined by the assigned atoms (or could not be
    /// decided cheaply; never a wrong definite answer).
    pub fn eval_partial(&self, value: impl Fn(AtomId) -> Option<bool>) -> Option<bool> {
        let (mut fixed, mut lo, mut hi) = (0i64, 0i64, 0i64);
        let mut unknown = false;
        for &(a, w) in &self.elements {
            match value(a) {
                Some(true) => fixed += w,
                Some(false) => {}
                None => {
                    unknown = true;
                    if w < 0 {
                        lo += w;
                    } else {
                        hi += w;
                    }
                }
            }
        }
        if !unknown {
            return Some(self.comparison.holds(fixed, self.bound));
        }
        let (min, max) = (fixed + lo, fixed + hi);
        let (at_min, at_max) = (
            self.comparison.holds(min, self.bound),
            self.comparison.holds(max, self.bound),
        );
        match self.comparison {
            Comparison::Eq | Comparison::Ne => {
                let inside = (min..=max).contains(&self.bound);
                let equal_always = min == max && min == self.bound;
                match (self.comparison, inside, equal_always) {
                    (Comparison::Eq, false, _) => Some(false),
                    (Comparison::Eq, _, true) => Some(true),
                    (Comparison::Ne, false, _) => Some(true),
                    (Comparison::Ne, _, true) => Some(false),
                    _ => None,
                }
            }
            _ if at_min == at_max => Some(at_min),
            _ => None,
        }
    }

    /// Whether all weights are positive and the comparison is `>`/`>=`,
    /// making the atom monotone in its domain.
    pub fn is_monotone(&self) -> bool {
        matches!(self.comparison, Comparison::Gt | Comparison::Ge)
            && self.elements.iter().all(|(_, w)| *w > 0)
    }

    /// The same atom with the complementary comparison.
    pub fn complement(&self) -> ConstraintAtom {
        ConstraintAtom {
            comparison: self.comparison.complement(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Satisfaction,
    Violation,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Satisfaction => Polarity::Violation,
            Polarity::Violation => Polarity::Satisfaction,
        }
    }

    fn target(self) -> bool {
        self == Polarity::Satisfaction
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub must_true: BTreeSet<AtomId>,
    pub must_false: BTreeSet<AtomId>,
    pub polarity: Polarity,
}

impl Witness {
    pub fn size(&self) -> usize {
        self.must_true.len() + self.must_false.len()
    }

    fn sort_key(&self) -> (usize, Vec<AtomId>, Vec<AtomId>) {
        (
            self.size(),
            self.must_true.iter().copied().collect(),
            self.must_false.iter().copied().collect(),
        )
    }
}

impl Ord for Witness {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then(self.polarity.cmp(&other.polarity))
    }
}

impl PartialOrd for Witness {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSet {
    pub witnesses: Vec<Witness>,
    /// More minimal witnesses exist than were returned.
    pub truncated: bool,
}

/// Whether fixing the `chosen` elements to their values in `truth` settles
/// the comparison to `target` regardless of the remaining domain atoms.
/// Uses the attainable value interval for ordering comparisons and the
/// exact set of attainable sums for `=`/`!=`.
fn forces(c: &ConstraintAtom, chosen: &[bool], truth: &[bool], target: bool) -> bool {
    let mut fixed = 0i64;
    let mut free = Vec::new();
    for (k, &(_, w)) in c.elements.iter().enumerate() {
        if chosen[k] {
            if truth[k] {
                fixed += w;
            }
        } else {
            free.push(w);
        }
    }
    match c.comparison {
        Comparison::Eq | Comparison::Ne => {
            let mut sums: BTreeSet<i64> = BTreeSet::from([fixed]);
            for w in free {
                let shifted: Vec<i64> = sums.iter().map(|s| s + w).collect();
                sums.extend(shifted);
            }
            sums.iter().all(|&v| c.comparison.holds(v, c.bound) == target)
        }
        _ => {
            let min = fixed + free.iter().filter(|w| **w < 0).sum::<i64>();
            let max = fixed + free.iter().filter(|w| **w > 0).sum::<i64>();
            c.comparison.holds(min, c.bound) == target && c.comparison.holds(max, c.bound) == target
        }
    }
}

/// Exhaustive completion check: every completion of `w` over the domain
/// gives the truth value `w.polarity` asks for. Exponential in the number
/// of unconstrained domain atoms.
pub fn forces_by_enumeration(c: &ConstraintAtom, w: &Witness) -> bool {
    let free: Vec<usize> = c
        .elements
        .iter()
        .enumerate()
        .filter(|(_, (a, _))| !w.must_true.contains(a) && !w.must_false.contains(a))
        .map(|(k, _)| k)
        .collect();
    let target = w.polarity.target();
    (0u64..(1u64 << free.len())).all(|mask| {
        let value: i64 = c
            .elements
            .iter()
            .enumerate()
            .filter(|(k, (a, _))| {
                w.must_true.contains(a)
                    || free
                        .iter()
                        .position(|f| f == k)
                        .is_some_and(|pos| mask & (1 << pos) != 0)
            })
            .map(|(_, (_, wt))| *wt)
            .sum();
        c.comparison.holds(value, c.bound) == target
    })
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    for i in (0..k).rev() {
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn witnesses(
    c: &ConstraintAtom,
    i: &Interpretation,
    polarity: Polarity,
    cap: usize,
) -> WitnessSet {
    witnesses_within(c, i, polarity, |_| true, cap)
}

/// Minimal witnesses of the given polarity that only mention atoms for
/// which `allowed` holds. Each is also minimal among unrestricted witnesses,
/// since every subset of an allowed set is allowed. The caller is
/// responsible for `polarity` matching the value of `c` under `i`.
pub fn witnesses_within(
    c: &ConstraintAtom,
    i: &Interpretation,
    polarity: Polarity,
    allowed: impl Fn(AtomId) -> bool,
    cap: usize,
) -> WitnessSet {
    // Canonical domain order keeps results independent of element order.
    let mut order: Vec<usize> = (0..c.elements.len())
        .filter(|&k| allowed(c.elements[k].0))
        .collect();
    order.sort_by_key(|&k| c.elements[k].0);
    let n = order.len();
    let truth: Vec<bool> = c.elements.iter().map(|(a, _)| i.contains(*a)).collect();
    let target = polarity.target();

    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut out = WitnessSet::default();
    'sizes: for k in 0..=n {
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            let members: Vec<usize> = comb.iter().map(|&p| order[p]).collect();
            let dominated = found
                .iter()
                .any(|w| w.iter().all(|x| members.contains(x)));
            if !dominated {
                let mut chosen = vec![false; c.elements.len()];
                for &m in &members {
                    chosen[m] = true;
                }
                if forces(c, &chosen, &truth, target) {
                    if out.witnesses.len() == cap {
                        out.truncated = true;
                        break 'sizes;
                    }
                    let mut w = Witness {
                        must_true: BTreeSet::new(),
                        must_false: BTreeSet::new(),
                        polarity,
                    };
                    for &m in &members {
                        let atom = c.elements[m].0;
                        if truth[m] {
                            w.must_true.insert(atom);
                        } else {
                            w.must_false.insert(atom);
                        }
                    }
                    out.witnesses.push(w);
                    found.push(members);
                }
            }
            if k == 0 || !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    out.witnesses.sort();
    out
}

/// All ⊆-minimal witnesses explaining why `c` holds in `i`, up to `cap`.
pub fn satisfaction_witnesses_capped(
    c: &ConstraintAtom,
    i: &Interpretation,
    cap: usize,
) -> Result<WitnessSet, WitnessError> {
    if !c.eval(i) {
        return Err(WitnessError::NotSatisfied);
    }
    Ok(witnesses(c, i, Polarity::Satisfaction, cap))
}

/// All ⊆-minimal witnesses explaining why `c` fails in `i`, up to `cap`.
pub fn violation_witnesses_capped(
    c: &ConstraintAtom,
    i: &Interpretation,
    cap: usize,
) -> Result<WitnessSet, WitnessError> {
    if c.eval(i) {
        return Err(WitnessError::Satisfied);
    }
    Ok(witnesses(c, i, Polarity::Violation, cap))
}

pub fn satisfaction_witnesses(
    c: &ConstraintAtom,
    i: &Interpretation,
) -> Result<WitnessSet, WitnessError> {
    satisfaction_witnesses_capped(c, i, DEFAULT_WITNESS_CAP)
}

pub fn violation_witnesses(
    c: &ConstraintAtom,
    i: &Interpretation,
) -> Result<WitnessSet, WitnessError> {
    violation_witnesses_capped(c, i, DEFAULT_WITNESS_CAP)
}

/// Witnesses for whichever truth value `c` has under `i`.
pub fn witnesses_for(c: &ConstraintAtom, i: &Interpretation, cap: usize) -> WitnessSet {
    let polarity = if c.eval(i) {
        Polarity::Satisfaction
    } else {
        Polarity::Violation
    };
    witnesses(c, i, polarity, cap)
}
