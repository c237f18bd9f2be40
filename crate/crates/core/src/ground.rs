//! Instantiation of non-ground programs over their Herbrand universe.
//!
//! Instances of non-ground rules are generated only for substitutions whose
//! positive body atoms are all possibly derivable (the positive-body
//! relevance filter); variable-free rules are always kept.
//! Substitutions are produced by matching positive body atoms against the
//! growing set of possibly-derivable atoms, which yields exactly the
//! filtered subset of the Cartesian instantiation.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::aggregate::ConstraintAtom;
use crate::ast::*;
use crate::desugar::desugar_program;
use crate::error::{GroundError, SafetyError};
use crate::interp::{AtomId, Interpretation};

pub const DEFAULT_ATOM_LIMIT: usize = 200_000;

/// Bijection between ground atoms and dense ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomTable {
    atoms: Vec<Atom>,
    index: HashMap<Atom, AtomId>,
}

impl AtomTable {
    pub fn intern(&mut self, atom: &Atom) -> AtomId {
        if let Some(&id) = self.index.get(atom) {
            return id;
        }
        let id = AtomId(self.atoms.len() as u32);
        self.atoms.push(atom.clone());
        self.index.insert(atom.clone(), id);
        id
    }

    pub fn get(&self, atom: &Atom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id.index()]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> {
        (0..self.atoms.len() as u32).map(AtomId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, &Atom)> {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (AtomId(i as u32), a))
    }

    pub fn is_hidden(&self, id: AtomId) -> bool {
        self.atom(id).is_hidden()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroundLiteral {
    Atom { atom: AtomId, negated: bool },
    Aggregate { constraint: ConstraintAtom, negated: bool },
}

impl GroundLiteral {
    pub fn holds_with(&self, truth: &impl Fn(AtomId) -> bool) -> bool {
        match self {
            GroundLiteral::Atom { atom, negated } => truth(*atom) != *negated,
            GroundLiteral::Aggregate {
                constraint,
                negated,
            } => constraint.eval_with(truth) != *negated,
        }
    }

    pub fn holds(&self, i: &Interpretation) -> bool {
        self.holds_with(&|a| i.contains(a))
    }

    /// Three-valued truth under a partial assignment.
    pub fn value_partial(&self, value: &impl Fn(AtomId) -> Option<bool>) -> Option<bool> {
        match self {
            GroundLiteral::Atom { atom, negated } => value(*atom).map(|v| v != *negated),
            GroundLiteral::Aggregate {
                constraint,
                negated,
            } => constraint.eval_partial(value).map(|v| v != *negated),
        }
    }

    pub fn atoms(&self) -> Box<dyn Iterator<Item = AtomId> + '_> {
        match self {
            GroundLiteral::Atom { atom, .. } => Box::new(std::iter::once(*atom)),
            GroundLiteral::Aggregate { constraint, .. } => Box::new(constraint.domain()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundRule {
    pub head: Vec<AtomId>,
    pub body: Vec<GroundLiteral>,
}

impl GroundRule {
    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_fact(&self) -> bool {
        self.head.len() == 1 && self.body.is_empty()
    }

    pub fn has_aggregates(&self) -> bool {
        self.body
            .iter()
            .any(|l| matches!(l, GroundLiteral::Aggregate { .. }))
    }

    pub fn has_negation(&self) -> bool {
        self.body
            .iter()
            .any(|l| matches!(l, GroundLiteral::Atom { negated: true, .. }))
    }

    pub fn positive_body(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.body.iter().filter_map(|l| match l {
            GroundLiteral::Atom {
                atom,
                negated: false,
            } => Some(*atom),
            _ => None,
        })
    }

    pub fn negative_body(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.body.iter().filter_map(|l| match l {
            GroundLiteral::Atom {
                atom,
                negated: true,
            } => Some(*atom),
            _ => None,
        })
    }

    pub fn body_holds_with(&self, truth: &impl Fn(AtomId) -> bool) -> bool {
        self.body.iter().all(|l| l.holds_with(truth))
    }

    pub fn body_holds(&self, i: &Interpretation) -> bool {
        self.body_holds_with(&|a| i.contains(a))
    }

    /// Classical satisfaction: body false or some head atom true.
    pub fn satisfied_with(&self, truth: &impl Fn(AtomId) -> bool) -> bool {
        !self.body_holds_with(truth) || self.head.iter().any(|&h| truth(h))
    }

    pub fn satisfied_by(&self, i: &Interpretation) -> bool {
        self.satisfied_with(&|a| i.contains(a))
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.head
            .iter()
            .copied()
            .chain(self.body.iter().flat_map(GroundLiteral::atoms))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
    pub atoms: AtomTable,
}

impl GroundProgram {
    /// Build a ground program from ground rules given over an atom table.
    pub fn new(rules: Vec<GroundRule>, atoms: AtomTable) -> Self {
        GroundProgram { rules, atoms }
    }

    pub fn herbrand_base_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn has_aggregates(&self) -> bool {
        self.rules.iter().any(GroundRule::has_aggregates)
    }

    pub fn atom_id(&self, atom: &Atom) -> Option<AtomId> {
        self.atoms.get(atom)
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        self.atoms.atom(id)
    }

    /// Resolve ground atoms to ids; unknown atoms are reported by value.
    pub fn interpretation<'a>(
        &self,
        atoms: impl IntoIterator<Item = &'a Atom>,
    ) -> Result<Interpretation, Atom> {
        atoms
            .into_iter()
            .map(|a| self.atom_id(a).ok_or_else(|| a.clone()))
            .collect()
    }

    /// Visible (non-hidden) atoms of `i`, in id order.
    pub fn visible_atoms<'a>(&'a self, i: &'a Interpretation) -> impl Iterator<Item = &'a Atom> + 'a {
        i.iter()
            .filter(|&a| !self.atoms.is_hidden(a))
            .map(|a| self.atoms.atom(a))
    }

    /// `{a, b, c}` rendering of the visible part of `i`.
    pub fn format_interpretation(&self, i: &Interpretation) -> String {
        let parts: Vec<String> = self.visible_atoms(i).map(|a| a.to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn rule_to_ast(&self, rule: &GroundRule) -> Rule {
        let atom = |id: AtomId| self.atoms.atom(id).clone();
        Rule {
            head: Head::Disjunction(rule.head.iter().map(|&h| atom(h)).collect()),
            body: rule
                .body
                .iter()
                .map(|l| match l {
                    GroundLiteral::Atom { atom: a, negated } => BodyItem::Literal(Literal {
                        atom: atom(*a),
                        negated: *negated,
                    }),
                    GroundLiteral::Aggregate {
                        constraint,
                        negated,
                    } => BodyItem::Aggregate(AggregateLiteral {
                        function: constraint.function,
                        elements: constraint
                            .elements
                            .iter()
                            .map(|&(a, weight)| AggregateElement {
                                weight,
                                atom: atom(a),
                            })
                            .collect(),
                        comparison: constraint.comparison,
                        bound: constraint.bound,
                        negated: *negated,
                    }),
                })
                .collect(),
        }
    }

    /// The ground program as a (variable-free) AST.
    pub fn to_program(&self) -> Program {
        Program::new(self.rules.iter().map(|r| self.rule_to_ast(r)).collect())
    }

    pub fn rule_text(&self, index: usize) -> String {
        self.rule_to_ast(&self.rules[index]).to_string()
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_program())
    }
}

/// All constant symbols and integers occurring as atom arguments in `p`.
pub fn herbrand_universe(p: &Program) -> BTreeSet<Term> {
    p.rules
        .iter()
        .flat_map(Rule::atoms)
        .flat_map(|a| a.args.iter())
        .filter(|t| !t.is_var())
        .cloned()
        .collect()
}

/// Every variable must occur in a positive, non-aggregate body literal.
pub fn check_safety(r: &Rule) -> Result<(), SafetyError> {
    let bound: HashSet<&str> = r
        .body
        .iter()
        .filter_map(|b| match b {
            BodyItem::Literal(l) if !l.negated => Some(l.atom.variables()),
            _ => None,
        })
        .flatten()
        .collect();
    match r.atoms().flat_map(Atom::variables).find(|v| !bound.contains(v)) {
        Some(v) => Err(SafetyError {
            variable: v.to_string(),
            rule: r.to_string(),
            span: None,
        }),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GroundConfig {
    pub atom_limit: usize,
}

impl Default for GroundConfig {
    fn default() -> Self {
        GroundConfig {
            atom_limit: DEFAULT_ATOM_LIMIT,
        }
    }
}

type Subst = HashMap<String, Term>;

fn substitute(atom: &Atom, s: &Subst) -> Atom {
    Atom {
        predicate: atom.predicate.clone(),
        args: atom
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| t.clone()),
                other => other.clone(),
            })
            .collect(),
    }
}

fn instantiate(rule: &Rule, s: &Subst) -> Rule {
    let head = match &rule.head {
        Head::Disjunction(atoms) => Head::Disjunction(atoms.iter().map(|a| substitute(a, s)).collect()),
        Head::Choice(c) => Head::Choice(ChoiceHead {
            lower: c.lower,
            atoms: c.atoms.iter().map(|a| substitute(a, s)).collect(),
            upper: c.upper,
        }),
    };
    let body = rule
        .body
        .iter()
        .map(|b| match b {
            BodyItem::Literal(l) => BodyItem::Literal(Literal {
                atom: substitute(&l.atom, s),
                negated: l.negated,
            }),
            BodyItem::Aggregate(a) => BodyItem::Aggregate(AggregateLiteral {
                elements: a
                    .elements
                    .iter()
                    .map(|e| AggregateElement {
                        weight: e.weight,
                        atom: substitute(&e.atom, s),
                    })
                    .collect(),
                ..a.clone()
            }),
        })
        .collect();
    Rule { head, body }
}

/// Extend `s` so that `pattern` matches the ground atom `target`.
fn unify(pattern: &Atom, target: &Atom, s: &mut Subst) -> bool {
    if pattern.predicate != target.predicate || pattern.args.len() != target.args.len() {
        return false;
    }
    for (p, t) in pattern.args.iter().zip(&target.args) {
        match p {
            Term::Var(v) => match s.get(v) {
                Some(bound) if bound != t => return false,
                Some(_) => {}
                None => {
                    s.insert(v.clone(), t.clone());
                }
            },
            constant if constant != t => return false,
            _ => {}
        }
    }
    true
}

#[derive(Default)]
struct Possible {
    by_pred: HashMap<(String, usize), Vec<Atom>>,
    set: HashSet<Atom>,
}

impl Possible {
    fn insert(&mut self, atom: &Atom) -> bool {
        if self.set.insert(atom.clone()) {
            self.by_pred
                .entry((atom.predicate.clone(), atom.arity()))
                .or_default()
                .push(atom.clone());
            true
        } else {
            false
        }
    }

    fn candidates(&self, pattern: &Atom) -> &[Atom] {
        self.by_pred
            .get(&(pattern.predicate.clone(), pattern.arity()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

fn join(positive: &[&Atom], possible: &Possible, s: &mut Subst, out: &mut Vec<Subst>) {
    let Some((first, rest)) = positive.split_first() else {
        out.push(s.clone());
        return;
    };
    for candidate in possible.candidates(first) {
        let mut extended = s.clone();
        if unify(first, candidate, &mut extended) {
            join(rest, possible, &mut extended, out);
        }
    }
}

fn lower_rule(rule: &Rule, table: &mut AtomTable) -> GroundRule {
    GroundRule {
        head: rule.head_atoms().iter().map(|a| table.intern(a)).collect(),
        body: rule
            .body
            .iter()
            .map(|b| match b {
                BodyItem::Literal(l) => GroundLiteral::Atom {
                    atom: table.intern(&l.atom),
                    negated: l.negated,
                },
                BodyItem::Aggregate(a) => {
                    let elements: Vec<(AtomId, i64)> = a
                        .elements
                        .iter()
                        .map(|e| (table.intern(&e.atom), e.weight))
                        .collect();
                    GroundLiteral::Aggregate {
                        constraint: ConstraintAtom::new(elements, a.function, a.comparison, a.bound),
                        negated: a.negated,
                    }
                }
            })
            .collect(),
    }
}

pub fn ground(p: &Program) -> Result<GroundProgram, GroundError> {
    ground_with(p, GroundConfig::default())
}

pub fn ground_with(p: &Program, config: GroundConfig) -> Result<GroundProgram, GroundError> {
    let program = desugar_program(p)?;
    for (i, rule) in program.rules.iter().enumerate() {
        check_safety(rule).map_err(|mut e| {
            e.span = program.span(i);
            e
        })?;
    }

    let positives: Vec<Vec<&Atom>> = program
        .rules
        .iter()
        .map(|r| {
            r.body
                .iter()
                .filter_map(|b| match b {
                    BodyItem::Literal(l) if !l.negated => Some(&l.atom),
                    _ => None,
                })
                .collect()
        })
        .collect();

    let mut possible = Possible::default();
    let mut emitted: HashSet<(usize, Rule)> = HashSet::new();
    let mut instances: Vec<(usize, Rule)> = Vec::new();
    let mut mentioned: HashSet<Atom> = HashSet::new();
    loop {
        let mut changed = false;
        for (idx, rule) in program.rules.iter().enumerate() {
            let mut substs = Vec::new();
            if rule.is_ground() {
                // Variable-free rules are kept verbatim, even with an
                // underivable body, so absence explanations can cite them.
                substs.push(Subst::new());
            } else {
                join(&positives[idx], &possible, &mut Subst::new(), &mut substs);
            }
            for s in substs {
                let inst = instantiate(rule, &s);
                if emitted.contains(&(idx, inst.clone())) {
                    continue;
                }
                for a in inst.atoms() {
                    if !mentioned.contains(a) {
                        mentioned.insert(a.clone());
                        if mentioned.len() > config.atom_limit {
                            return Err(GroundError::Capacity {
                                limit: config.atom_limit,
                            });
                        }
                    }
                }
                for h in inst.head_atoms() {
                    changed |= possible.insert(h);
                }
                emitted.insert((idx, inst.clone()));
                instances.push((idx, inst));
            }
        }
        if !changed {
            break;
        }
    }

    // Instances of earlier source rules first; discovery order within a rule.
    instances.sort_by_key(|(idx, _)| *idx);
    let mut table = AtomTable::default();
    let rules = instances
        .iter()
        .map(|(_, r)| lower_rule(r, &mut table))
        .collect();
    Ok(GroundProgram { rules, atoms: table })
}
