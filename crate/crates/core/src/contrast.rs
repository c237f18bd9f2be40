//! Contrastive explanations over perturbed fact bases, and abduction.
//!
//! A [`FactSpace`] lists the candidate facts that may be added or removed.
//! Candidates are grouped into families with an exact cardinality (for
//! example exactly one `eyes(_)` fact); candidates outside any family are
//! free. The program's rules and its non-candidate facts stay fixed.
//!
//! [`contrast`] searches fact bases in order of increasing distance from the
//! current one, re-grounding and re-solving each, and returns the first hit
//! under a deterministic tie-break. The search is exact: every fact base at a
//! smaller distance is evaluated first.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ast::{Atom, Program};
use crate::error::{ContrastError, SpaceError};
use crate::ground::{ground_with, GroundConfig, GroundProgram};
use crate::parser::parse_atom;
use crate::stable::{enumerate_with, SolverConfig};

/// Default ceiling on the number of fact bases one query may evaluate.
pub const DEFAULT_EVALUATION_LIMIT: usize = 100_000;
/// Largest abducible set [`abduce`] will search exhaustively.
pub const MAX_ABDUCIBLES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub name: String,
    pub exactly: usize,
    /// Indices into [`FactSpace::candidates`].
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactSpace {
    pub candidates: Vec<Atom>,
    pub families: Vec<Family>,
}

impl FactSpace {
    /// Parse the text format:
    ///
    /// ```text
    /// free(1)
    /// family eyes exactly 1:
    /// eyes(2)
    /// eyes(5)
    /// ```
    ///
    /// Lines before the first `family` header are free candidates; `%`
    /// starts a comment.
    pub fn parse(text: &str) -> Result<FactSpace, SpaceError> {
        let mut space = FactSpace::default();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('%').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("family ") {
                let syntax = |message: &str| SpaceError::Syntax {
                    line: line_no,
                    message: message.to_string(),
                };
                let rest = rest
                    .trim()
                    .strip_suffix(':')
                    .ok_or_else(|| syntax("family header must end with `:`"))?;
                let words: Vec<&str> = rest.split_whitespace().collect();
                let [name, "exactly", k] = words.as_slice() else {
                    return Err(syntax("expected `family <name> exactly <n>:`"));
                };
                let exactly = k.parse().map_err(|_| syntax("cardinality must be a non-negative integer"))?;
                if space.families.iter().any(|f| f.name == *name) {
                    return Err(syntax("family declared twice"));
                }
                space.families.push(Family {
                    name: name.to_string(),
                    exactly,
                    members: Vec::new(),
                });
                continue;
            }
            let atom = parse_atom(line).map_err(|e| SpaceError::Syntax {
                line: line_no,
                message: e.to_string(),
            })?;
            if !atom.is_ground() {
                return Err(SpaceError::Syntax {
                    line: line_no,
                    message: format!("candidate `{atom}` is not ground"),
                });
            }
            if space.candidates.contains(&atom) {
                return Err(SpaceError::Duplicate(atom.to_string()));
            }
            space.candidates.push(atom);
            let idx = space.candidates.len() - 1;
            if let Some(f) = space.families.last_mut() {
                f.members.push(idx);
            }
        }
        space.validate()?;
        Ok(space)
    }

    /// A space of unconstrained candidates.
    pub fn free(candidates: impl IntoIterator<Item = Atom>) -> Result<FactSpace, SpaceError> {
        let mut space = FactSpace::default();
        for a in candidates {
            if space.candidates.contains(&a) {
                return Err(SpaceError::Duplicate(a.to_string()));
            }
            space.candidates.push(a);
        }
        Ok(space)
    }

    pub fn validate(&self) -> Result<(), SpaceError> {
        let mut owner = vec![None; self.candidates.len()];
        for f in &self.families {
            if f.members.is_empty() || f.exactly > f.members.len() {
                return Err(SpaceError::Infeasible {
                    name: f.name.clone(),
                    exactly: f.exactly,
                    size: f.members.len(),
                });
            }
            for &m in &f.members {
                match owner.get_mut(m) {
                    Some(slot @ None) => *slot = Some(()),
                    Some(Some(())) => return Err(SpaceError::Duplicate(self.candidates[m].to_string())),
                    None => {
                        return Err(SpaceError::Syntax {
                            line: 0,
                            message: format!("family `{}` refers to candidate {m}", f.name),
                        })
                    }
                }
            }
        }
        Ok(())
    }

    pub fn index_of(&self, atom: &Atom) -> Option<usize> {
        self.candidates.iter().position(|c| c == atom)
    }

    /// Candidates not in any family.
    pub fn free_candidates(&self) -> Vec<usize> {
        let owned: BTreeSet<usize> = self.families.iter().flat_map(|f| f.members.iter().copied()).collect();
        (0..self.candidates.len()).filter(|i| !owned.contains(i)).collect()
    }

    /// Whether a set of candidate indices meets every family cardinality.
    pub fn respects(&self, facts: &BTreeSet<usize>) -> bool {
        self.families
            .iter()
            .all(|f| f.members.iter().filter(|m| facts.contains(m)).count() == f.exactly)
    }

    /// Every family-respecting fact base, as candidate index sets.
    pub fn all_fact_bases(&self) -> Vec<BTreeSet<usize>> {
        let mut out = vec![BTreeSet::new()];
        let mut groups: Vec<Vec<BTreeSet<usize>>> = self
            .families
            .iter()
            .map(|f| k_subsets(&f.members, f.exactly))
            .collect();
        groups.extend(self.free_candidates().into_iter().map(|c| vec![BTreeSet::new(), BTreeSet::from([c])]));
        for g in groups {
            out = out
                .iter()
                .flat_map(|base| {
                    g.iter().map(move |choice| base.union(choice).copied().collect())
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for FactSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.free_candidates() {
            writeln!(f, "{}", self.candidates[c])?;
        }
        for fam in &self.families {
            writeln!(f, "family {} exactly {}:", fam.name, fam.exactly)?;
            for &m in &fam.members {
                writeln!(f, "{}", self.candidates[m])?;
            }
        }
        Ok(())
    }
}

fn k_subsets(items: &[usize], k: usize) -> Vec<BTreeSet<usize>> {
    if k == 0 {
        return vec![BTreeSet::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let (first, rest) = items.split_first().expect("nonempty");
    let mut out: Vec<BTreeSet<usize>> = k_subsets(rest, k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(*first);
            s
        })
        .collect();
    out.extend(k_subsets(rest, k));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", content = "target", rename_all = "kebab-case")]
pub enum ContrastiveQuery {
    /// The given answer set (compared on non-candidate atoms) disappears.
    NotAnAnswerSet(Vec<Atom>),
    /// The atom becomes true in some answer set.
    FoilBecomesBrave(Atom),
    /// The atom is no longer true in any answer set.
    FactNoLongerBrave(Atom),
}

impl ContrastiveQuery {
    pub fn mode_name(&self) -> &'static str {
        match self {
            ContrastiveQuery::NotAnAnswerSet(_) => "not-an-answer-set",
            ContrastiveQuery::FoilBecomesBrave(_) => "foil-becomes-brave",
            ContrastiveQuery::FactNoLongerBrave(_) => "fact-no-longer-brave",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContrastiveExplanation {
    /// The perturbed candidate facts F', in space order.
    pub new_facts: Vec<Atom>,
    pub added: Vec<Atom>,
    pub removed: Vec<Atom>,
    pub distance: u64,
}

/// Additive cost of a perturbation: each added and each removed fact pays
/// its weight. The default charges 1 per fact, i.e. symmetric difference.
pub trait Distance {
    fn add_cost(&self, _fact: &Atom) -> u64 {
        1
    }
    fn remove_cost(&self, _fact: &Atom) -> u64 {
        1
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SymmetricDifference;

impl Distance for SymmetricDifference {}

/// Per-fact weights, falling back to 1.
#[derive(Clone, Debug, Default)]
pub struct WeightedDistance {
    pub add: HashMap<Atom, u64>,
    pub remove: HashMap<Atom, u64>,
}

impl Distance for WeightedDistance {
    fn add_cost(&self, fact: &Atom) -> u64 {
        self.add.get(fact).copied().unwrap_or(1)
    }
    fn remove_cost(&self, fact: &Atom) -> u64 {
        self.remove.get(fact).copied().unwrap_or(1)
    }
}

pub struct ContrastOptions<'a> {
    /// Permit removing current facts. With `false` only additions are tried.
    pub allow_removal: bool,
    pub distance: &'a dyn Distance,
    /// Maximum number of fact bases evaluated before [`ContrastError::Capacity`].
    pub evaluation_limit: usize,
    pub ground: GroundConfig,
    pub solver: SolverConfig,
}

impl Default for ContrastOptions<'_> {
    fn default() -> Self {
        ContrastOptions {
            allow_removal: true,
            distance: &SymmetricDifference,
            evaluation_limit: DEFAULT_EVALUATION_LIMIT,
            ground: GroundConfig::default(),
            solver: SolverConfig::default(),
        }
    }
}

/// Split `p` into the fixed part and the current fact base: facts that are
/// candidates of `space` form F (as candidate indices), everything else is P.
pub fn split_facts(p: &Program, space: &FactSpace) -> (Program, BTreeSet<usize>) {
    let mut current = BTreeSet::new();
    let fixed = p.filter_rules(|_, r| match r.as_fact().and_then(|a| space.index_of(a)) {
        Some(idx) => {
            current.insert(idx);
            false
        }
        None => true,
    });
    (fixed, current)
}

/// Ground and solve `fixed ∪ facts`, returning the visible part of every
/// answer set.
fn solve_with_facts(
    fixed: &Program,
    facts: impl IntoIterator<Item = Atom>,
    ground: GroundConfig,
    solver: SolverConfig,
) -> Result<Vec<BTreeSet<Atom>>, ContrastError> {
    let mut program = fixed.clone();
    for f in facts {
        program.push(crate::ast::Rule::fact(f));
    }
    let g: GroundProgram = ground_with(&program, ground)?;
    let sets = enumerate_with(&g, None, solver)?;
    Ok(sets
        .iter()
        .map(|i| g.visible_atoms(i).cloned().collect())
        .collect())
}

/// Evaluates the query property on fact bases of one space.
pub struct PropertyCheck<'a> {
    fixed: &'a Program,
    space: &'a FactSpace,
    query: &'a ContrastiveQuery,
    ground: GroundConfig,
    solver: SolverConfig,
}

impl<'a> PropertyCheck<'a> {
    pub fn new(fixed: &'a Program, space: &'a FactSpace, query: &'a ContrastiveQuery) -> Self {
        PropertyCheck {
            fixed,
            space,
            query,
            ground: GroundConfig::default(),
            solver: SolverConfig::default(),
        }
    }

    pub fn with_limits(mut self, ground: GroundConfig, solver: SolverConfig) -> Self {
        self.ground = ground;
        self.solver = solver;
        self
    }

    fn answer_sets(&self, facts: &BTreeSet<usize>) -> Result<Vec<BTreeSet<Atom>>, ContrastError> {
        solve_with_facts(
            self.fixed,
            facts.iter().map(|&i| self.space.candidates[i].clone()),
            self.ground,
            self.solver,
        )
    }

    fn strip_candidates(&self, s: &BTreeSet<Atom>) -> BTreeSet<Atom> {
        s.iter().filter(|a| self.space.index_of(a).is_none()).cloned().collect()
    }

    fn brave(&self, sets: &[BTreeSet<Atom>], a: &Atom) -> bool {
        sets.iter().any(|s| s.contains(a))
    }

    /// Whether the query property holds for the fact base `facts`.
    pub fn holds(&self, facts: &BTreeSet<usize>) -> Result<bool, ContrastError> {
        let sets = self.answer_sets(facts)?;
        Ok(match self.query {
            ContrastiveQuery::NotAnAnswerSet(target) => {
                let target = self.strip_candidates(&target.iter().cloned().collect());
                !sets.iter().any(|s| self.strip_candidates(s) == target)
            }
            ContrastiveQuery::FoilBecomesBrave(a) => self.brave(&sets, a),
            ContrastiveQuery::FactNoLongerBrave(a) => !self.brave(&sets, a),
        })
    }

    /// Check the precondition each mode places on the current fact base.
    pub fn check_baseline(&self, current: &BTreeSet<usize>) -> Result<(), ContrastError> {
        if !self.space.respects(current) {
            return Err(ContrastError::BaselineViolated(
                "current facts do not meet the family cardinalities".into(),
            ));
        }
        match self.query {
            ContrastiveQuery::NotAnAnswerSet(target) => {
                if self.holds(current)? {
                    let shown: Vec<String> = target.iter().map(Atom::to_string).collect();
                    return Err(ContrastError::BaselineViolated(format!(
                        "{{{}}} is not an answer set of the current program",
                        shown.join(", ")
                    )));
                }
            }
            ContrastiveQuery::FactNoLongerBrave(a) => {
                if self.holds(current)? {
                    return Err(ContrastError::BaselineViolated(format!(
                        "`{a}` is not currently a brave consequence"
                    )));
                }
            }
            ContrastiveQuery::FoilBecomesBrave(_) => {}
        }
        Ok(())
    }
}

/// One way to set a family (or a free candidate): the chosen members and
/// the cost relative to the current facts.
#[derive(Clone, Debug)]
struct GroupOption {
    chosen: BTreeSet<usize>,
    cost: u64,
}

fn group_options(
    space: &FactSpace,
    current: &BTreeSet<usize>,
    opts: &ContrastOptions<'_>,
) -> Vec<Vec<GroupOption>> {
    let cost_of = |chosen: &BTreeSet<usize>, members: &[usize]| -> Option<u64> {
        let mut cost = 0;
        for &m in members {
            match (current.contains(&m), chosen.contains(&m)) {
                (false, true) => cost += opts.distance.add_cost(&space.candidates[m]),
                (true, false) if !opts.allow_removal => return None,
                (true, false) => cost += opts.distance.remove_cost(&space.candidates[m]),
                _ => {}
            }
        }
        Some(cost)
    };
    let mut groups: Vec<(Vec<usize>, Vec<BTreeSet<usize>>)> = space
        .families
        .iter()
        .map(|f| (f.members.clone(), k_subsets(&f.members, f.exactly)))
        .collect();
    groups.extend(
        space
            .free_candidates()
            .into_iter()
            .map(|c| (vec![c], vec![BTreeSet::new(), BTreeSet::from([c])])),
    );
    groups
        .into_iter()
        .map(|(members, choices)| {
            let mut v: Vec<GroupOption> = choices
                .into_iter()
                .filter_map(|chosen| cost_of(&chosen, &members).map(|cost| GroupOption { chosen, cost }))
                .collect();
            v.sort_by_key(|o| o.cost);
            v
        })
        .collect()
}

/// Enumerate every combination of group options whose costs sum to
/// exactly `budget`.
fn combinations_at(
    groups: &[Vec<GroupOption>],
    min_rest: &[u64],
    max_rest: &[u64],
    budget: u64,
    acc: &mut BTreeSet<usize>,
    out: &mut Vec<BTreeSet<usize>>,
    limit: usize,
) -> bool {
    if out.len() > limit {
        return false;
    }
    let Some((first, rest)) = groups.split_first() else {
        if budget == 0 {
            out.push(acc.clone());
        }
        return true;
    };
    for o in first {
        if o.cost > budget {
            break;
        }
        let remaining = budget - o.cost;
        if remaining < min_rest[1] || remaining > max_rest[1] {
            continue;
        }
        let added: Vec<usize> = o.chosen.iter().copied().filter(|c| acc.insert(*c)).collect();
        let ok = combinations_at(rest, &min_rest[1..], &max_rest[1..], remaining, acc, out, limit);
        for c in added {
            acc.remove(&c);
        }
        if !ok {
            return false;
        }
    }
    true
}

fn explanation(
    space: &FactSpace,
    current: &BTreeSet<usize>,
    next: &BTreeSet<usize>,
    cost: u64,
) -> ContrastiveExplanation {
    let atoms = |s: &mut dyn Iterator<Item = &usize>| s.map(|&i| space.candidates[i].clone()).collect();
    ContrastiveExplanation {
        new_facts: atoms(&mut next.iter()),
        added: atoms(&mut next.difference(current)),
        removed: atoms(&mut current.difference(next)),
        distance: cost,
    }
}

fn tie_key(current: &BTreeSet<usize>, next: &BTreeSet<usize>) -> (Vec<usize>, Vec<usize>) {
    (
        next.difference(current).copied().collect(),
        current.difference(next).copied().collect(),
    )
}

/// Up to `k` minimum-distance explanations, ordered by the added then
/// removed candidate indices. Returns an empty list when no fact base in the
/// space has the property.
pub fn contrast_all_with(
    p: &Program,
    query: &ContrastiveQuery,
    space: &FactSpace,
    k: usize,
    opts: &ContrastOptions<'_>,
) -> Result<Vec<ContrastiveExplanation>, ContrastError> {
    space.validate()?;
    let (fixed, current) = split_facts(p, space);
    let check = PropertyCheck::new(&fixed, space, query).with_limits(opts.ground, opts.solver);
    check.check_baseline(&current)?;
    if k == 0 {
        return Ok(Vec::new());
    }

    let groups = group_options(space, &current, opts);
    if groups.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    // Suffix bounds on achievable cost, for pruning.
    let n = groups.len();
    let mut min_rest = vec![0u64; n + 1];
    let mut max_rest = vec![0u64; n + 1];
    for g in (0..n).rev() {
        min_rest[g] = min_rest[g + 1] + groups[g].first().map_or(0, |o| o.cost);
        max_rest[g] = max_rest[g + 1] + groups[g].last().map_or(0, |o| o.cost);
    }

    let mut evaluated = 0usize;
    for d in min_rest[0]..=max_rest[0] {
        let mut level = Vec::new();
        let remaining_budget = opts.evaluation_limit - evaluated;
        if !combinations_at(&groups, &min_rest, &max_rest, d, &mut BTreeSet::new(), &mut level, remaining_budget) {
            return Err(ContrastError::Capacity(opts.evaluation_limit));
        }
        level.sort_by_key(|f| tie_key(&current, f));
        level.dedup();
        let mut hits = Vec::new();
        for f in level {
            evaluated += 1;
            if evaluated > opts.evaluation_limit {
                return Err(ContrastError::Capacity(opts.evaluation_limit));
            }
            if check.holds(&f)? {
                hits.push(explanation(space, &current, &f, d));
                if hits.len() == k {
                    break;
                }
            }
        }
        if !hits.is_empty() {
            return Ok(hits);
        }
    }
    Ok(Vec::new())
}

pub fn contrast_all(
    p: &Program,
    query: &ContrastiveQuery,
    space: &FactSpace,
    k: usize,
) -> Result<Vec<ContrastiveExplanation>, ContrastError> {
    contrast_all_with(p, query, space, k, &ContrastOptions::default())
}

/// The minimum-distance explanation, or [`ContrastError::NoContrast`].
pub fn contrast_with(
    p: &Program,
    query: &ContrastiveQuery,
    space: &FactSpace,
    opts: &ContrastOptions<'_>,
) -> Result<ContrastiveExplanation, ContrastError> {
    contrast_all_with(p, query, space, 1, opts)?
        .into_iter()
        .next()
        .ok_or(ContrastError::NoContrast)
}

pub fn contrast(
    p: &Program,
    query: &ContrastiveQuery,
    space: &FactSpace,
) -> Result<ContrastiveExplanation, ContrastError> {
    contrast_with(p, query, space, &ContrastOptions::default())
}

/// All ⊆-minimal sets Δ of abducibles such that `p ∪ Δ` has an answer set
/// containing `observation`, ordered by size and then by abducible position.
pub fn abduce(p: &Program, observation: &Atom, abducibles: &[Atom]) -> Result<Vec<Vec<Atom>>, ContrastError> {
    abduce_with(p, observation, abducibles, GroundConfig::default(), SolverConfig::default())
}

pub fn abduce_with(
    p: &Program,
    observation: &Atom,
    abducibles: &[Atom],
    ground: GroundConfig,
    solver: SolverConfig,
) -> Result<Vec<Vec<Atom>>, ContrastError> {
    let mut pool: Vec<Atom> = Vec::new();
    for a in abducibles {
        if !pool.contains(a) {
            pool.push(a.clone());
        }
    }
    if pool.len() > MAX_ABDUCIBLES {
        return Err(ContrastError::Capacity(1 << MAX_ABDUCIBLES));
    }
    let indices: Vec<usize> = (0..pool.len()).collect();
    let mut found: Vec<BTreeSet<usize>> = Vec::new();
    for size in 0..=pool.len() {
        for delta in k_subsets(&indices, size) {
            if found.iter().any(|f| f.is_subset(&delta)) {
                continue;
            }
            let sets = solve_with_facts(p, delta.iter().map(|&i| pool[i].clone()), ground, solver)?;
            if sets.iter().any(|s| s.contains(observation)) {
                found.push(delta);
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|d| d.into_iter().map(|i| pool[i].clone()).collect())
        .collect())
}
