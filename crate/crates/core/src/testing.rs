//! Random program generators and brute-force reference implementations,
//! shared by the test suites and the acceptance harness.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::aggregate::ConstraintAtom;
use crate::ast::{
    AggregateElement, AggregateFunction, AggregateLiteral, Atom, BodyItem, ChoiceHead, Comparison, Head, Literal,
    Program, Rule, Term,
};
use crate::contrast::{ContrastiveQuery, FactSpace, Family, PropertyCheck};
use crate::error::ContrastError;
use crate::ground::{ground, GroundProgram};
use crate::interp::{AtomId, Interpretation};
use crate::stable::enumerate_answer_sets;

/// Shape of randomly generated propositional programs.
#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub atoms: usize,
    pub max_rules: usize,
    pub max_body: usize,
    pub disjunction: bool,
    pub negation: bool,
    pub aggregates: bool,
    pub constraints: bool,
    pub choice: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            atoms: 6,
            max_rules: 10,
            max_body: 3,
            disjunction: true,
            negation: true,
            aggregates: true,
            constraints: true,
            choice: false,
        }
    }
}

impl GenConfig {
    pub fn positive(atoms: usize, max_rules: usize) -> Self {
        GenConfig {
            atoms,
            max_rules,
            max_body: 3,
            disjunction: false,
            negation: false,
            aggregates: false,
            constraints: false,
            choice: false,
        }
    }
}

pub fn prop_atom(i: usize) -> Atom {
    Atom::prop(format!("x{i}"))
}

fn random_aggregate(rng: &mut impl Rng, atoms: usize) -> AggregateLiteral {
    let n = rng.gen_range(1..=atoms.min(4));
    let mut pool: Vec<usize> = (0..atoms).collect();
    pool.shuffle(rng);
    let function = if rng.gen_bool(0.5) {
        AggregateFunction::Sum
    } else {
        AggregateFunction::Count
    };
    let elements = pool[..n]
        .iter()
        .map(|&i| AggregateElement {
            weight: match function {
                AggregateFunction::Count => 1,
                AggregateFunction::Sum => rng.gen_range(-2..=3),
            },
            atom: prop_atom(i),
        })
        .collect();
    AggregateLiteral {
        function,
        elements,
        comparison: *Comparison::ALL.choose(rng).expect("nonempty"),
        bound: rng.gen_range(-1..=3),
        negated: rng.gen_bool(0.2),
    }
}

/// A random propositional program over atoms `x0 .. x{atoms-1}` with
/// between 1 and `max_rules` rules.
pub fn random_program(rng: &mut impl Rng, config: &GenConfig) -> Program {
    let n = config.atoms.max(1);
    let rules = rng.gen_range(1..=config.max_rules.max(1));
    let mut p = Program::default();
    for _ in 0..rules {
        let head = if config.constraints && rng.gen_bool(0.15) {
            Head::Disjunction(Vec::new())
        } else if config.choice && rng.gen_bool(0.1) {
            let k = rng.gen_range(1..=n.min(3));
            let mut pool: Vec<usize> = (0..n).collect();
            pool.shuffle(rng);
            let lower = rng.gen_bool(0.5).then(|| rng.gen_range(0..=1));
            let upper = rng.gen_bool(0.5).then(|| rng.gen_range(1..=2));
            Head::Choice(ChoiceHead {
                lower,
                atoms: pool[..k].iter().map(|&i| prop_atom(i)).collect(),
                upper,
            })
        } else {
            let k = if config.disjunction && rng.gen_bool(0.25) {
                rng.gen_range(2..=3.min(n).max(1))
            } else {
                1
            };
            let mut pool: Vec<usize> = (0..n).collect();
            pool.shuffle(rng);
            Head::Disjunction(pool[..k].iter().map(|&i| prop_atom(i)).collect())
        };
        let len = rng.gen_range(0..=config.max_body);
        let mut body = Vec::new();
        for _ in 0..len {
            if config.aggregates && rng.gen_bool(0.15) {
                body.push(BodyItem::Aggregate(random_aggregate(rng, n)));
            } else {
                let atom = prop_atom(rng.gen_range(0..n));
                let negated = config.negation && rng.gen_bool(0.35);
                body.push(BodyItem::Literal(Literal { atom, negated }));
            }
        }
        if matches!(&head, Head::Disjunction(h) if h.is_empty()) && body.is_empty() {
            continue;
        }
        p.push(Rule { head, body });
    }
    p
}

/// Random ground program, grounded and ready to solve.
pub fn random_ground_program(rng: &mut impl Rng, config: &GenConfig) -> GroundProgram {
    ground(&random_program(rng, config)).expect("propositional programs are safe")
}

/// A random safe program with variables over a small domain, exercising
/// joins in the grounder.
pub fn random_program_with_variables(rng: &mut impl Rng) -> Program {
    let preds = ["p", "q", "r"];
    let consts: Vec<Term> = (1..=3).map(Term::Int).chain([Term::Symbol("c".into())]).collect();
    let mut p = Program::default();
    for _ in 0..rng.gen_range(1..=4) {
        let args = vec![consts.choose(rng).expect("nonempty").clone()];
        p.push(Rule::fact(Atom::new(*preds.choose(rng).expect("nonempty"), args)));
    }
    let vars = ["X", "Y"];
    for _ in 0..rng.gen_range(1..=4) {
        let v = Term::Var(vars.choose(rng).expect("nonempty").to_string());
        let w = Term::Var(vars.choose(rng).expect("nonempty").to_string());
        let mut body = vec![BodyItem::Literal(Literal::pos(Atom::new(
            *preds.choose(rng).expect("nonempty"),
            vec![v.clone()],
        )))];
        let mut bound = vec![v.clone()];
        if rng.gen_bool(0.5) {
            body.push(BodyItem::Literal(Literal::pos(Atom::new(
                *preds.choose(rng).expect("nonempty"),
                vec![w.clone()],
            ))));
            bound.push(w);
        }
        if rng.gen_bool(0.4) {
            let t = bound.choose(rng).expect("nonempty").clone();
            body.push(BodyItem::Literal(Literal::neg(Atom::new(*preds.choose(rng).expect("nonempty"), vec![t]))));
        }
        let head_term = bound.choose(rng).expect("nonempty").clone();
        let head = if rng.gen_bool(0.15) {
            Vec::new()
        } else {
            vec![Atom::new(*preds.choose(rng).expect("nonempty"), vec![head_term])]
        };
        p.push(Rule {
            head: Head::Disjunction(head),
            body,
        });
    }
    p
}

/// Random constraint atom over atoms `0 .. domain` with a random comparison.
pub fn random_constraint_atom(rng: &mut impl Rng, max_domain: usize) -> ConstraintAtom {
    let d = rng.gen_range(1..=max_domain.max(1));
    let function = if rng.gen_bool(0.5) {
        AggregateFunction::Sum
    } else {
        AggregateFunction::Count
    };
    let elements: Vec<(AtomId, i64)> = (0..d)
        .map(|i| (AtomId(i as u32), rng.gen_range(-3..=4)))
        .collect();
    ConstraintAtom::new(
        elements,
        function,
        *Comparison::ALL.choose(rng).expect("nonempty"),
        rng.gen_range(-3..=6),
    )
}

pub fn random_interpretation(rng: &mut impl Rng, atoms: usize) -> Interpretation {
    (0..atoms)
        .filter(|_| rng.gen_bool(0.5))
        .map(|i| AtomId(i as u32))
        .collect()
}

/// Least model of a positive, aggregate-free program by naive iteration.
pub fn least_model(p: &GroundProgram) -> Interpretation {
    let mut model = Interpretation::new();
    loop {
        let mut changed = false;
        for r in &p.rules {
            if r.head.len() == 1 && r.positive_body().all(|a| model.contains(a)) {
                changed |= model.insert(r.head[0]);
            }
        }
        if !changed {
            return model;
        }
    }
}

/// A random contrast instance: rules over `x*` atoms that read candidate
/// facts `c0 .. c{m-1}`, a space over those candidates, and a current fact
/// base that respects the space.
pub struct ContrastInstance {
    pub program: Program,
    pub space: FactSpace,
}

pub fn cand_atom(i: usize) -> Atom {
    Atom::prop(format!("c{i}"))
}

pub fn random_contrast_instance(rng: &mut impl Rng, candidates: usize) -> ContrastInstance {
    let m = candidates.max(1);
    let n = 4;
    let mut space = FactSpace {
        candidates: (0..m).map(cand_atom).collect(),
        ..Default::default()
    };
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut rest = &order[..];
    let mut current = BTreeSet::new();
    while !rest.is_empty() && rng.gen_bool(0.5) {
        let size = rng.gen_range(1..=rest.len().min(3));
        let (members, tail) = rest.split_at(size);
        let exactly = rng.gen_range(0..=size.min(2));
        let mut members = members.to_vec();
        members.sort();
        let mut pick = members.clone();
        pick.shuffle(rng);
        current.extend(pick[..exactly].iter().copied());
        space.families.push(Family {
            name: format!("f{}", space.families.len()),
            exactly,
            members,
        });
        rest = tail;
    }
    for &c in rest {
        if rng.gen_bool(0.5) {
            current.insert(c);
        }
    }

    let mut program = Program::default();
    let rules = rng.gen_range(2..=7);
    for _ in 0..rules {
        let head = if rng.gen_bool(0.15) {
            Vec::new()
        } else if rng.gen_bool(0.15) {
            vec![prop_atom(rng.gen_range(0..n)), prop_atom(rng.gen_range(0..n))]
        } else {
            vec![prop_atom(rng.gen_range(0..n))]
        };
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let atom = if rng.gen_bool(0.6) {
                cand_atom(rng.gen_range(0..m))
            } else {
                prop_atom(rng.gen_range(0..n))
            };
            body.push(BodyItem::Literal(Literal {
                atom,
                negated: rng.gen_bool(0.3),
            }));
        }
        let mut head = head;
        head.dedup();
        program.push(Rule {
            head: Head::Disjunction(head),
            body,
        });
    }
    for &c in &current {
        program.push(Rule::fact(space.candidates[c].clone()));
    }
    ContrastInstance { program, space }
}

/// Minimal distance and the fact bases (as candidate indices) attaining it.
pub type MinimalBases = (u64, Vec<BTreeSet<usize>>);

/// Reference contrast: evaluate every family-respecting fact base and keep
/// those of minimum symmetric difference. Returns the distance and the
/// minimal fact bases, or `None` when no fact base has the property.
pub fn brute_force_contrast(
    p: &Program,
    query: &ContrastiveQuery,
    space: &FactSpace,
) -> Result<Option<MinimalBases>, ContrastError> {
    let (fixed, current) = crate::contrast::split_facts(p, space);
    let check = PropertyCheck::new(&fixed, space, query);
    let mut best: Option<(u64, Vec<BTreeSet<usize>>)> = None;
    for f in space.all_fact_bases() {
        if !check.holds(&f)? {
            continue;
        }
        let d = f.symmetric_difference(&current).count() as u64;
        match &mut best {
            Some((bd, v)) if *bd == d => v.push(f),
            Some((bd, _)) if *bd < d => {}
            _ => best = Some((d, vec![f])),
        }
    }
    Ok(best)
}

/// Reference abduction over all subsets of `abducibles`: keep subsets that
/// explain the observation and contain no other explaining subset.
pub fn brute_force_abduce(p: &Program, observation: &Atom, abducibles: &[Atom]) -> Vec<BTreeSet<Atom>> {
    let n = abducibles.len();
    let explains: Vec<BTreeSet<Atom>> = (0u32..(1 << n))
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| abducibles[i].clone())
                .collect::<BTreeSet<Atom>>()
        })
        .filter(|delta| {
            let g = ground(&p.with_facts(delta)).expect("safe");
            enumerate_answer_sets(&g, None)
                .expect("small")
                .iter()
                .any(|i| g.visible_atoms(i).any(|a| a == observation))
        })
        .collect();
    explains
        .iter()
        .filter(|d| !explains.iter().any(|e| e != *d && e.is_subset(d)))
        .cloned()
        .collect()
}

/// Instantiate every rule with every assignment of its variables over the
/// program's constants, without any relevance filtering.
pub fn naive_instantiate(p: &Program) -> Program {
    let universe: Vec<Term> = crate::ground::herbrand_universe(p).into_iter().collect();
    let mut out = Program::default();
    for r in &p.rules {
        let vars: Vec<String> = r
            .atoms()
            .flat_map(|a| a.variables())
            .map(str::to_string)
            .collect::<BTreeSet<String>>()
            .into_iter()
            .collect();
        if !vars.is_empty() && universe.is_empty() {
            continue;
        }
        let combos = universe.len().pow(vars.len() as u32);
        for mut code in 0..combos {
            let mut values = Vec::new();
            for _ in &vars {
                values.push(universe[code % universe.len().max(1)].clone());
                code /= universe.len().max(1);
            }
            let subst = |a: &Atom| Atom {
                predicate: a.predicate.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => values[vars.iter().position(|x| x == v).expect("collected")].clone(),
                        other => other.clone(),
                    })
                    .collect(),
            };
            let head = match &r.head {
                Head::Disjunction(h) => Head::Disjunction(h.iter().map(&subst).collect()),
                Head::Choice(c) => Head::Choice(ChoiceHead {
                    lower: c.lower,
                    atoms: c.atoms.iter().map(&subst).collect(),
                    upper: c.upper,
                }),
            };
            let body = r
                .body
                .iter()
                .map(|b| match b {
                    BodyItem::Literal(l) => BodyItem::Literal(Literal {
                        atom: subst(&l.atom),
                        negated: l.negated,
                    }),
                    BodyItem::Aggregate(a) => BodyItem::Aggregate(AggregateLiteral {
                        elements: a
                            .elements
                            .iter()
                            .map(|e| AggregateElement {
                                weight: e.weight,
                                atom: subst(&e.atom),
                            })
                            .collect(),
                        ..a.clone()
                    }),
                })
                .collect();
            out.push(Rule { head, body });
        }
    }
    out
}

fn aggregate_holds(a: &AggregateLiteral, x: &BTreeSet<Atom>) -> bool {
    let mut seen: BTreeSet<(i64, &Atom)> = BTreeSet::new();
    let mut value = 0i64;
    for e in &a.elements {
        let w = match a.function {
            AggregateFunction::Count => 1,
            AggregateFunction::Sum => e.weight,
        };
        if x.contains(&e.atom) && seen.insert((w, &e.atom)) {
            value += w;
        }
    }
    a.comparison.holds(value, a.bound) != a.negated
}

fn body_holds(r: &Rule, x: &BTreeSet<Atom>) -> bool {
    r.body.iter().all(|b| match b {
        BodyItem::Literal(l) => x.contains(&l.atom) != l.negated,
        BodyItem::Aggregate(a) => aggregate_holds(a, x),
    })
}

fn choice_bounds_hold(c: &ChoiceHead, x: &BTreeSet<Atom>) -> bool {
    let distinct: BTreeSet<&Atom> = c.atoms.iter().collect();
    let n = distinct.iter().filter(|a| x.contains(**a)).count() as i64;
    c.lower.is_none_or(|l| n >= l) && c.upper.is_none_or(|u| n <= u)
}

/// Reference semantics on variable-free source programs, including choice
/// rules, without desugaring or grounding. `x` is an answer set iff it
/// satisfies every rule and no proper subset satisfies the rules whose body
/// holds in `x`, where a choice rule only obliges its head atoms in `x`.
pub fn is_reference_answer_set(p: &Program, x: &BTreeSet<Atom>) -> bool {
    let satisfied = |y: &BTreeSet<Atom>, r: &Rule| -> bool {
        !body_holds(r, y)
            || match &r.head {
                Head::Disjunction(h) => h.iter().any(|a| y.contains(a)),
                Head::Choice(c) => choice_bounds_hold(c, y),
            }
    };
    if !p.rules.iter().all(|r| satisfied(x, r)) {
        return false;
    }
    let reduct: Vec<&Rule> = p.rules.iter().filter(|r| body_holds(r, x)).collect();
    let members: Vec<&Atom> = x.iter().collect();
    let full = (1u64 << members.len()) - 1;
    (0..full).all(|mask| {
        let y: BTreeSet<Atom> = members
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, a)| (*a).clone())
            .collect();
        !reduct.iter().all(|r| {
            !body_holds(r, &y)
                || match &r.head {
                    Head::Disjunction(h) => h.iter().any(|a| y.contains(a)),
                    Head::Choice(c) => c.atoms.iter().filter(|a| x.contains(*a)).all(|a| y.contains(a)),
                }
        })
    })
}

/// All answer sets of a variable-free program under
/// [`is_reference_answer_set`], as sorted atom sets.
pub fn reference_answer_sets(p: &Program) -> Vec<BTreeSet<Atom>> {
    let atoms: Vec<Atom> = p.rules.iter().flat_map(Rule::atoms).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    assert!(atoms.len() <= 16, "reference semantics limited to 16 atoms");
    let mut out: Vec<BTreeSet<Atom>> = (0u64..(1 << atoms.len()))
        .map(|mask| {
            (0..atoms.len())
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| atoms[k].clone())
                .collect()
        })
        .filter(|x| is_reference_answer_set(p, x))
        .collect();
    out.sort();
    out
}

/// Visible answer sets computed by the engine, as sorted atom sets.
pub fn engine_answer_sets(p: &Program) -> Vec<BTreeSet<Atom>> {
    let g = ground(p).expect("valid program");
    let mut out: Vec<BTreeSet<Atom>> = enumerate_answer_sets(&g, None)
        .expect("within budget")
        .iter()
        .map(|i| g.visible_atoms(i).cloned().collect())
        .collect();
    out.sort();
    out
}
