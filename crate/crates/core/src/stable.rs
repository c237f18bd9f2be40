//! Answer-set semantics over ground programs.
//!
//! An interpretation `I` is an answer set of `P` when it is a model of `P`
//! and a ⊆-minimal model of the FLP reduct of `P` relative to `I` (the rules
//! whose whole body, aggregates included, is true in `I`). On aggregate-free
//! programs this agrees with the Gelfond-Lifschitz reduct.
//!
//! [`enumerate_answer_sets`] searches over total assignments with unit and
//! support propagation and verifies every total candidate with
//! [`is_answer_set`]. [`brute_force_answer_sets`] is the exhaustive
//! reference used to cross-check it.

use crate::error::SolveError;
use crate::ground::{GroundLiteral, GroundProgram, GroundRule};
use crate::interp::{AtomId, Interpretation};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
pub const BRUTE_FORCE_MAX_ATOMS: usize = 20;

/// A negation- and aggregate-free ground program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductProgram {
    pub rules: Vec<GroundRule>,
}

pub fn satisfies(i: &Interpretation, r: &GroundRule) -> bool {
    r.satisfied_by(i)
}

pub fn is_model(rules: &[GroundRule], i: &Interpretation) -> bool {
    rules.iter().all(|r| r.satisfied_by(i))
}

/// Gelfond-Lifschitz reduct: drop every rule with a negated body atom in
/// `i`, and strip the negative body of the rest.
pub fn gl_reduct(p: &GroundProgram, i: &Interpretation) -> Result<ReductProgram, SolveError> {
    if p.has_aggregates() {
        return Err(SolveError::AggregatePresent);
    }
    let rules = p
        .rules
        .iter()
        .filter(|r| r.negative_body().all(|b| !i.contains(b)))
        .map(|r| GroundRule {
            head: r.head.clone(),
            body: r
                .body
                .iter()
                .filter(|l| matches!(l, GroundLiteral::Atom { negated: false, .. }))
                .cloned()
                .collect(),
        })
        .collect();
    Ok(ReductProgram { rules })
}

/// FLP reduct: the rules whose entire body is satisfied by `i`.
pub fn flp_reduct(p: &GroundProgram, i: &Interpretation) -> GroundProgram {
    GroundProgram::new(
        p.rules.iter().filter(|r| r.body_holds(i)).cloned().collect(),
        p.atoms.clone(),
    )
}

fn flp_rules<'a>(p: &'a GroundProgram, i: &Interpretation) -> Vec<&'a GroundRule> {
    p.rules.iter().filter(|r| r.body_holds(i)).collect()
}

/// Search for a model of `rules` strictly contained in `i`.
///
/// Single-atom removals are tried first; the remaining search assigns the
/// members of `i` one at a time (dropping first) and prunes any partial
/// subset under which some rule already has a true body and a false head.
fn smaller_model(
    rules: &[&GroundRule],
    i: &Interpretation,
) -> Option<Interpretation> {
    let members: Vec<AtomId> = i.iter().collect();
    for &a in &members {
        let mut j = i.clone();
        j.remove(a);
        if rules.iter().all(|r| r.satisfied_by(&j)) {
            return Some(j);
        }
    }
    if members.len() < 2 {
        return None;
    }
    let position = |a: AtomId| members.binary_search(&a).ok();
    let mut state: Vec<Option<bool>> = vec![None; members.len()];

    fn violated(
        rules: &[&GroundRule],
        value: &impl Fn(AtomId) -> Option<bool>,
    ) -> bool {
        rules.iter().any(|r| {
            r.head.iter().all(|&h| value(h) == Some(false))
                && r.body.iter().all(|l| l.value_partial(value) == Some(true))
        })
    }

    fn descend(
        k: usize,
        state: &mut Vec<Option<bool>>,
        rules: &[&GroundRule],
        position: &impl Fn(AtomId) -> Option<usize>,
    ) -> bool {
        let value = |a: AtomId| match position(a) {
            Some(p) => state[p],
            None => Some(false),
        };
        if violated(rules, &value) {
            return false;
        }
        if k == state.len() {
            return state.contains(&Some(false));
        }
        for choice in [false, true] {
            state[k] = Some(choice);
            if descend(k + 1, state, rules, position) {
                return true;
            }
        }
        state[k] = None;
        false
    }

    if descend(0, &mut state, rules, &position) {
        Some(
            members
                .iter()
                .zip(&state)
                .filter(|(_, s)| **s == Some(true))
                .map(|(a, _)| *a)
                .collect(),
        )
    } else {
        None
    }
}

/// Whether `i` is a ⊆-minimal model of `rules`.
pub fn is_minimal_model(rules: &[GroundRule], i: &Interpretation) -> Result<bool, SolveError> {
    if !is_model(rules, i) {
        return Err(SolveError::NotAModel);
    }
    let refs: Vec<&GroundRule> = rules.iter().collect();
    Ok(smaller_model(&refs, i).is_none())
}

pub fn is_answer_set(p: &GroundProgram, i: &Interpretation) -> bool {
    if i.max_atom().is_some_and(|a| a.index() >= p.atoms.len()) {
        return false;
    }
    if !is_model(&p.rules, i) {
        return false;
    }
    smaller_model(&flp_rules(p, i), i).is_none()
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Maximum number of search nodes before giving up.
    pub node_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

struct Search<'a> {
    p: &'a GroundProgram,
    head_occurrences: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
    limit: Option<usize>,
    found: Vec<Interpretation>,
}

impl<'a> Search<'a> {
    fn new(p: &'a GroundProgram, limit: Option<usize>, config: SolverConfig) -> Self {
        let mut head_occurrences = vec![Vec::new(); p.atoms.len()];
        for (idx, r) in p.rules.iter().enumerate() {
            for &h in &r.head {
                if !head_occurrences[h.index()].contains(&idx) {
                    head_occurrences[h.index()].push(idx);
                }
            }
        }
        Search {
            p,
            head_occurrences,
            nodes: 0,
            budget: config.node_budget,
            limit,
            found: Vec::new(),
        }
    }

    /// Unit and support propagation to fixpoint. Returns false on conflict.
    fn propagate(&self, assign: &mut [Option<bool>]) -> bool {
        loop {
            let mut changed = false;
            for r in &self.p.rules {
                let value = |a: AtomId| assign[a.index()];
                let mut unknown_lits = 0;
                let mut last_unknown = None;
                let mut body_false = false;
                for l in &r.body {
                    match l.value_partial(&value) {
                        Some(false) => {
                            body_false = true;
                            break;
                        }
                        Some(true) => {}
                        None => {
                            unknown_lits += 1;
                            last_unknown = Some(l);
                        }
                    }
                }
                if body_false || r.head.iter().any(|&h| value(h) == Some(true)) {
                    continue;
                }
                let unknown_heads: Vec<AtomId> =
                    r.head.iter().copied().filter(|&h| value(h).is_none()).collect();
                if unknown_lits == 0 {
                    match unknown_heads.as_slice() {
                        [] => return false,
                        [only] => {
                            assign[only.index()] = Some(true);
                            changed = true;
                        }
                        _ => {}
                    }
                } else if unknown_lits == 1 && unknown_heads.is_empty() {
                    if let Some(GroundLiteral::Atom { atom, negated }) = last_unknown {
                        assign[atom.index()] = Some(*negated);
                        changed = true;
                    }
                }
            }
            for a in 0..assign.len() {
                if assign[a] == Some(false) {
                    continue;
                }
                let value = |x: AtomId| assign[x.index()];
                let supported = self.head_occurrences[a].iter().any(|&ri| {
                    let r = &self.p.rules[ri];
                    r.head
                        .iter()
                        .all(|&h| h.index() == a || value(h) != Some(true))
                        && r.body.iter().all(|l| l.value_partial(&value) != Some(false))
                });
                if !supported {
                    if assign[a] == Some(true) {
                        return false;
                    }
                    assign[a] = Some(false);
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Returns Ok(true) once the requested number of answer sets is found.
    fn run(&mut self, mut assign: Vec<Option<bool>>) -> Result<bool, SolveError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolveError::Capacity {
                budget: self.budget,
            });
        }
        if !self.propagate(&mut assign) {
            return Ok(false);
        }
        match assign.iter().position(Option::is_none) {
            None => {
                let candidate: Interpretation = assign
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v == Some(true))
                    .map(|(k, _)| AtomId(k as u32))
                    .collect();
                if is_answer_set(self.p, &candidate) {
                    self.found.push(candidate);
                    if self.limit.is_some_and(|l| self.found.len() >= l) {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Some(x) => {
                for choice in [true, false] {
                    let mut next = assign.clone();
                    next[x] = Some(choice);
                    if self.run(next)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

/// All answer sets (or the first `limit`) in canonical order.
pub fn enumerate_answer_sets(
    p: &GroundProgram,
    limit: Option<usize>,
) -> Result<Vec<Interpretation>, SolveError> {
    enumerate_with(p, limit, SolverConfig::default())
}

pub fn enumerate_with(
    p: &GroundProgram,
    limit: Option<usize>,
    config: SolverConfig,
) -> Result<Vec<Interpretation>, SolveError> {
    if limit == Some(0) {
        return Ok(Vec::new());
    }
    let mut search = Search::new(p, limit, config);
    search.run(vec![None; p.atoms.len()])?;
    Ok(search.found)
}

/// Exhaustive answer-set check: model test plus a scan of every proper
/// subset for a smaller model of the FLP reduct.
pub fn is_answer_set_exhaustive(p: &GroundProgram, i: &Interpretation) -> bool {
    if !is_model(&p.rules, i) {
        return false;
    }
    let reduct = flp_rules(p, i);
    let members: Vec<AtomId> = i.iter().collect();
    let full = (1u64 << members.len()) - 1;
    (0..full).all(|mask| {
        let j: Interpretation = members
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, a)| *a)
            .collect();
        !reduct.iter().all(|r| r.satisfied_by(&j))
    })
}

/// Reference enumeration over all subsets of the Herbrand base.
pub fn brute_force_answer_sets(p: &GroundProgram) -> Result<Vec<Interpretation>, SolveError> {
    let n = p.atoms.len();
    if n > BRUTE_FORCE_MAX_ATOMS {
        return Err(SolveError::TooLarge {
            atoms: n,
            max: BRUTE_FORCE_MAX_ATOMS,
        });
    }
    let mut out: Vec<Interpretation> = (0u64..(1u64 << n))
        .map(|mask| {
            (0..n)
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| AtomId(k as u32))
                .collect::<Interpretation>()
        })
        .filter(|i| is_answer_set_exhaustive(p, i))
        .collect();
    out.sort();
    Ok(out)
}

/// Atoms true in some answer set.
pub fn brave_consequences(p: &GroundProgram) -> Result<Interpretation, SolveError> {
    Ok(enumerate_answer_sets(p, None)?
        .iter()
        .flat_map(Interpretation::iter)
        .collect())
}

/// Atoms true in every answer set; an inconsistent program is an error.
pub fn cautious_consequences(p: &GroundProgram) -> Result<Interpretation, SolveError> {
    let sets = enumerate_answer_sets(p, None)?;
    let (first, rest) = sets.split_first().ok_or(SolveError::NoAnswerSets)?;
    Ok(first
        .iter()
        .filter(|a| rest.iter().all(|s| s.contains(*a)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::ground;
    use crate::parser::{parse_atom, parse_program};

    fn gp(src: &str) -> GroundProgram {
        ground(&parse_program(src).unwrap()).unwrap()
    }

    fn interp(p: &GroundProgram, atoms: &[&str]) -> Interpretation {
        atoms
            .iter()
            .map(|s| p.atom_id(&parse_atom(s).unwrap()).unwrap())
            .collect()
    }

    fn names(p: &GroundProgram, sets: &[Interpretation]) -> Vec<String> {
        sets.iter().map(|i| p.format_interpretation(i)).collect()
    }

    #[test]
    fn rule_satisfaction() {
        let p = gp("a :- b.");
        let r = &p.rules[0];
        assert!(satisfies(&interp(&p, &["a"]), r));
        assert!(!satisfies(&interp(&p, &["b"]), r));
        let p = gp("sat :- #sum{2:a; 1:b; 1:c} > 1.");
        assert!(!satisfies(&interp(&p, &["a", "b", "c"]), &p.rules[0]));
    }

    #[test]
    fn gl_reduct_examples() {
        let p = gp("a :- not b.");
        assert_eq!(gl_reduct(&p, &interp(&p, &["a"])).unwrap().rules.len(), 1);
        assert!(gl_reduct(&p, &interp(&p, &["a"])).unwrap().rules[0].body.is_empty());
        assert!(gl_reduct(&p, &interp(&p, &["b"])).unwrap().rules.is_empty());
        let p = gp("a :- b. b | c.");
        let r = gl_reduct(&p, &interp(&p, &["c"])).unwrap();
        assert_eq!(r.rules, p.rules);
        let p = gp("s :- #count{a} > 0.");
        assert_eq!(gl_reduct(&p, &Interpretation::new()), Err(SolveError::AggregatePresent));
    }

    #[test]
    fn flp_reduct_examples() {
        let p = gp("sat :- #sum{2:a; 1:b; 1:c} > 1. a.");
        let i = interp(&p, &["a", "sat"]);
        assert_eq!(flp_reduct(&p, &i).rules.len(), 2);
        assert!(is_answer_set(&p, &i));
        let p = gp("a.");
        let empty = Interpretation::new();
        assert_eq!(flp_reduct(&p, &empty).rules.len(), 1);
        assert!(!is_model(&flp_reduct(&p, &empty).rules, &empty));
    }

    #[test]
    fn minimal_model_examples() {
        let p = gp("a | b.");
        assert_eq!(is_minimal_model(&p.rules, &interp(&p, &["a"])), Ok(true));
        assert_eq!(is_minimal_model(&p.rules, &interp(&p, &["a", "b"])), Ok(false));
        assert_eq!(
            is_minimal_model(&p.rules, &Interpretation::new()),
            Err(SolveError::NotAModel)
        );
    }

    #[test]
    fn minimality_needs_multi_atom_removal() {
        // {a,b,c} is a model, every single removal is not, but {c} is.
        let p = gp("c. a :- b. b :- a. a | b :- d.");
        let i = interp(&p, &["a", "b", "c"]);
        assert_eq!(is_minimal_model(&p.rules, &i), Ok(false));
    }

    #[test]
    fn answer_set_examples() {
        let p = gp("a :- not b. b :- not a.");
        assert!(is_answer_set(&p, &interp(&p, &["a"])));
        assert!(is_answer_set(&p, &interp(&p, &["b"])));
        assert!(!is_answer_set(&p, &interp(&p, &["a", "b"])));
        assert!(!is_answer_set(&p, &Interpretation::new()));
    }

    #[test]
    fn enumeration_examples() {
        let p = gp("a | b.");
        assert_eq!(names(&p, &enumerate_answer_sets(&p, None).unwrap()), ["{a}", "{b}"]);
        let p = gp("a. :- a.");
        assert!(enumerate_answer_sets(&p, None).unwrap().is_empty());
        let p = GroundProgram::default();
        assert_eq!(enumerate_answer_sets(&p, None).unwrap(), vec![Interpretation::new()]);
    }

    #[test]
    fn enumeration_matches_oracle_on_examples() {
        for src in [
            "a | b.",
            "a. :- a.",
            "a :- not b. b :- not a.",
            "a :- not a.",
            "a :- b. b :- a.",
            "{a; b; c}. :- a, b.",
            "1 {a; b} 1.",
            "p :- #sum{1:q; -1:r} = 0. {q; r}.",
            "a | b. a :- b. b :- a.",
        ] {
            let p = gp(src);
            assert_eq!(
                enumerate_answer_sets(&p, None).unwrap(),
                brute_force_answer_sets(&p).unwrap(),
                "{src}"
            );
        }
    }

    #[test]
    fn bounded_choice_answer_sets() {
        let p = gp("1 {a; b} 1.");
        let visible: Vec<String> = enumerate_answer_sets(&p, None)
            .unwrap()
            .iter()
            .map(|i| p.format_interpretation(i))
            .collect();
        assert_eq!(visible, ["{a}", "{b}"]);
    }

    #[test]
    fn limit_returns_canonical_prefix() {
        let p = gp("{a; b; c}.");
        let all = enumerate_answer_sets(&p, None).unwrap();
        assert_eq!(all.len(), 8);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_answer_sets(&p, Some(3)).unwrap(), all[..3].to_vec());
    }

    #[test]
    fn budget_exhaustion() {
        let p = gp("{a; b; c; d; e; f}.");
        let err = enumerate_with(&p, None, SolverConfig { node_budget: 5 }).unwrap_err();
        assert_eq!(err, SolveError::Capacity { budget: 5 });
    }

    #[test]
    fn brute_force_limit() {
        let src: String = (0..21).map(|k| format!("a{k}. ")).collect();
        assert!(matches!(
            brute_force_answer_sets(&gp(&src)),
            Err(SolveError::TooLarge { atoms: 21, .. })
        ));
    }

    #[test]
    fn brave_and_cautious() {
        let p = gp("a :- not b. b :- not a.");
        assert_eq!(brave_consequences(&p).unwrap(), interp(&p, &["a", "b"]));
        assert!(cautious_consequences(&p).unwrap().is_empty());
        let p = gp("a.");
        assert_eq!(brave_consequences(&p).unwrap(), interp(&p, &["a"]));
        assert_eq!(cautious_consequences(&p).unwrap(), interp(&p, &["a"]));
        let p = gp("a. :- a.");
        assert!(brave_consequences(&p).unwrap().is_empty());
        assert_eq!(cautious_consequences(&p), Err(SolveError::NoAnswerSets));
    }

    #[test]
    fn flp_self_support_through_aggregate_rejected() {
        // p :- #count{p} >= 0 would be self-supporting only if minimality failed.
        let p = gp("p :- #count{p} > 0.");
        assert_eq!(names(&p, &enumerate_answer_sets(&p, None).unwrap()), ["{}"]);
    }
}
