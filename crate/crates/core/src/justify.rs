//! Justification graphs explaining why an atom is, or is not, in an answer
//! set.
//!
//! Nodes are signed atoms `(a, in)` / `(a, out)` plus the terminals `fact`
//! and `no-rule`. Edge labels follow the sign of the target: `+` into `in`
//! nodes and `fact`, `-` into `out` nodes and `no-rule`.
//!
//! * An `in` node cites one supporting ground rule: the atom is in its head,
//!   its body holds, and every other head atom is out of the answer set.
//!   Edges go to the positive body atoms, the negated body atoms, and the
//!   atoms of one witness per aggregate literal. Rules with an empty body
//!   point at `fact`. When a disjunctive head cycle leaves no such rule, a
//!   rule whose other head atoms are also true is cited and the node is
//!   flagged `shared_head`.
//! * An `out` node blocks every rule with the atom in its head, either by
//!   one false body literal (aggregates through a witness) or by another
//!   head atom that is true. Atoms without rules point at `no-rule`.
//!
//! Positive support among `in` nodes is acyclic; cycles through `out` nodes
//! are allowed. Ties are broken by lowest rule index, then body position,
//! then the smallest witness.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::aggregate::{forces_by_enumeration, witnesses_within, Polarity, Witness};
use crate::error::JustifyError;
use crate::ground::{GroundLiteral, GroundProgram};
use crate::interp::{AtomId, Interpretation};
use crate::stable::is_answer_set;

const WITNESS_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedAtom {
    pub atom: AtomId,
    pub sign: Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Atom(SignedAtom),
    Fact,
    NoRule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Label {
    pub fn symbol(self) -> &'static str {
        match self {
            Label::Pos => "+",
            Label::Neg => "-",
        }
    }
}

/// Witness used for the aggregate literal at body position `literal`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiteralWitness {
    pub literal: usize,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Support {
    pub rule: usize,
    /// Another head atom of the rule is also true.
    pub shared_head: bool,
    pub witnesses: Vec<LiteralWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockReason {
    /// Positive body atom at `literal` is false.
    PositiveFalse { literal: usize, atom: AtomId },
    /// Negated body atom at `literal` is true.
    NegatedTrue { literal: usize, atom: AtomId },
    /// Aggregate literal at `literal` is false, shown by `witness`.
    Aggregate { literal: usize, witness: Witness },
    /// Another head atom is true.
    HeadTrue { atom: AtomId },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub rule: usize,
    pub reason: BlockReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub kind: NodeKind,
    pub support: Option<Support>,
    pub blocks: Vec<Block>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Label,
    /// Ground rule the edge stems from.
    pub rule: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JustificationGraph {
    pub root: usize,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl JustificationGraph {
    pub fn node_of(&self, atom: AtomId) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| matches!(n.kind, NodeKind::Atom(s) if s.atom == atom))
    }

    pub fn outgoing(&self, node: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == node)
    }

    /// Render as Graphviz DOT.
    pub fn to_dot(&self, p: &GroundProgram) -> String {
        let mut out = String::from("digraph justification {\n  rankdir=TB;\n");
        for (id, n) in self.nodes.iter().enumerate() {
            let (label, shape) = match n.kind {
                NodeKind::Atom(s) => (
                    format!(
                        "{} {}",
                        p.atom(s.atom),
                        if s.sign == Sign::In { "in" } else { "out" }
                    ),
                    if id == self.root { "doubleoctagon" } else { "ellipse" },
                ),
                NodeKind::Fact => ("fact".to_string(), "box"),
                NodeKind::NoRule => ("no-rule".to_string(), "box"),
            };
            let _ = writeln!(
                out,
                "  n{id} [label=\"{}\", shape={shape}];",
                label.replace('"', "\\\"")
            );
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  n{} -> n{} [label=\"{}\"];",
                e.from,
                e.to,
                e.label.symbol()
            );
        }
        out.push_str("}\n");
        out
    }
}

fn head_occurrences(p: &GroundProgram) -> Vec<Vec<usize>> {
    let mut occ = vec![Vec::new(); p.atoms.len()];
    for (idx, r) in p.rules.iter().enumerate() {
        for &h in &r.head {
            if !occ[h.index()].contains(&idx) {
                occ[h.index()].push(idx);
            }
        }
    }
    occ
}

fn literal_polarity(negated: bool) -> Polarity {
    if negated {
        Polarity::Violation
    } else {
        Polarity::Satisfaction
    }
}

/// All ways of using `rule` to support `x` given the atoms already
/// justified (`ready`). Returns one entry per combination of witnesses,
/// smallest witnesses first, capped at `max`.
fn support_options(
    p: &GroundProgram,
    i: &Interpretation,
    x: AtomId,
    rule: usize,
    allow_shared: bool,
    ready: &impl Fn(AtomId) -> bool,
    max: usize,
) -> Vec<Support> {
    let r = &p.rules[rule];
    if !r.head.contains(&x) || !r.body_holds(i) {
        return Vec::new();
    }
    let shared = r.head.iter().any(|&h| h != x && i.contains(h));
    if shared && !allow_shared {
        return Vec::new();
    }
    if !r.positive_body().all(ready) {
        return Vec::new();
    }
    let mut per_literal: Vec<(usize, Vec<Witness>)> = Vec::new();
    for (pos, l) in r.body.iter().enumerate() {
        if let GroundLiteral::Aggregate {
            constraint,
            negated,
        } = l
        {
            let ws = witnesses_within(
                constraint,
                i,
                literal_polarity(*negated),
                |a| !i.contains(a) || ready(a),
                WITNESS_CAP,
            );
            if ws.witnesses.is_empty() {
                return Vec::new();
            }
            per_literal.push((pos, ws.witnesses));
        }
    }
    let mut combos: Vec<Vec<LiteralWitness>> = vec![Vec::new()];
    for (pos, ws) in &per_literal {
        let mut next = Vec::new();
        'outer: for c in &combos {
            for w in ws {
                let mut c2 = c.clone();
                c2.push(LiteralWitness {
                    literal: *pos,
                    witness: w.clone(),
                });
                next.push(c2);
                if next.len() >= max {
                    break 'outer;
                }
            }
        }
        combos = next;
    }
    combos
        .into_iter()
        .take(max)
        .map(|witnesses| Support {
            rule,
            shared_head: shared,
            witnesses,
        })
        .collect()
}

/// Choose a support for every atom of `i` that has one with acyclic
/// positive dependencies, in rounds: an atom becomes ready once a rule
/// supports it from atoms ready in an earlier round. Rules whose other head
/// atoms are true are only used when no strict support makes progress.
fn level_supports(p: &GroundProgram, i: &Interpretation, occ: &[Vec<usize>]) -> HashMap<AtomId, Support> {
    let mut ready: HashSet<AtomId> = HashSet::new();
    let mut supports: HashMap<AtomId, Support> = HashMap::new();
    loop {
        let pending: Vec<AtomId> = i.iter().filter(|a| !ready.contains(a)).collect();
        if pending.is_empty() {
            break;
        }
        let mut progressed = false;
        for allow_shared in [false, true] {
            let mut round: Vec<(AtomId, Support)> = Vec::new();
            for &x in &pending {
                let is_ready = |a: AtomId| ready.contains(&a);
                let found = occ[x.index()].iter().find_map(|&ri| {
                    support_options(p, i, x, ri, allow_shared, &is_ready, 1)
                        .into_iter()
                        .next()
                });
                if let Some(s) = found {
                    round.push((x, s));
                }
            }
            if !round.is_empty() {
                for (x, s) in round {
                    ready.insert(x);
                    supports.insert(x, s);
                }
                progressed = true;
                break;
            }
        }
        if !progressed {
            break;
        }
    }
    supports
}

/// All ways to block `rule` for the absent atom `x`, in tie-break order.
fn block_options(p: &GroundProgram, i: &Interpretation, x: AtomId, rule: usize) -> Vec<Block> {
    let r = &p.rules[rule];
    let mut out = Vec::new();
    for (pos, l) in r.body.iter().enumerate() {
        match l {
            GroundLiteral::Atom {
                atom,
                negated: false,
            } if !i.contains(*atom) => out.push(BlockReason::PositiveFalse {
                literal: pos,
                atom: *atom,
            }),
            GroundLiteral::Atom {
                atom,
                negated: true,
            } if i.contains(*atom) => out.push(BlockReason::NegatedTrue {
                literal: pos,
                atom: *atom,
            }),
            GroundLiteral::Aggregate {
                constraint,
                negated,
            } if !l.holds(i) => {
                let ws = witnesses_within(
                    constraint,
                    i,
                    literal_polarity(*negated).flip(),
                    |_| true,
                    WITNESS_CAP,
                );
                out.extend(ws.witnesses.into_iter().map(|witness| BlockReason::Aggregate {
                    literal: pos,
                    witness,
                }));
            }
            _ => {}
        }
    }
    for &h in &r.head {
        if h != x && i.contains(h) {
            out.push(BlockReason::HeadTrue { atom: h });
        }
    }
    out.into_iter().map(|reason| Block { rule, reason }).collect()
}

/// Targets of the edges a support or a block contributes.
fn support_targets(p: &GroundProgram, s: &Support) -> Vec<(Option<AtomId>, Label)> {
    let r = &p.rules[s.rule];
    if r.body.is_empty() {
        return vec![(None, Label::Pos)];
    }
    let mut out = Vec::new();
    for (pos, l) in r.body.iter().enumerate() {
        match l {
            GroundLiteral::Atom { atom, negated } => {
                out.push((Some(*atom), if *negated { Label::Neg } else { Label::Pos }))
            }
            GroundLiteral::Aggregate { .. } => {
                if let Some(lw) = s.witnesses.iter().find(|w| w.literal == pos) {
                    out.extend(witness_targets(&lw.witness));
                }
            }
        }
    }
    out
}

fn witness_targets(w: &Witness) -> Vec<(Option<AtomId>, Label)> {
    w.must_true
        .iter()
        .map(|&a| (Some(a), Label::Pos))
        .chain(w.must_false.iter().map(|&a| (Some(a), Label::Neg)))
        .collect()
}

fn block_targets(b: &Block) -> Vec<(Option<AtomId>, Label)> {
    match &b.reason {
        BlockReason::PositiveFalse { atom, .. } => vec![(Some(*atom), Label::Neg)],
        BlockReason::NegatedTrue { atom, .. } | BlockReason::HeadTrue { atom } => {
            vec![(Some(*atom), Label::Pos)]
        }
        BlockReason::Aggregate { witness, .. } => witness_targets(witness),
    }
}

enum RootChoice {
    Support(Support),
    Blocks(Vec<Block>),
}

struct Builder<'a> {
    p: &'a GroundProgram,
    i: &'a Interpretation,
    occ: Vec<Vec<usize>>,
    supports: HashMap<AtomId, Support>,
}

impl<'a> Builder<'a> {
    fn new(p: &'a GroundProgram, i: &'a Interpretation) -> Self {
        let occ = head_occurrences(p);
        let supports = level_supports(p, i, &occ);
        Builder { p, i, occ, supports }
    }

    fn default_blocks(&self, x: AtomId) -> Vec<Block> {
        self.occ[x.index()]
            .iter()
            .map(|&ri| {
                block_options(self.p, self.i, x, ri)
                    .into_iter()
                    .next()
                    .expect("a model blocks every rule whose head atoms are all false")
            })
            .collect()
    }

    fn build(&self, root: AtomId, root_choice: Option<RootChoice>) -> Result<JustificationGraph, JustifyError> {
        let mut nodes: Vec<Node> = Vec::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut atom_node: HashMap<AtomId, usize> = HashMap::new();
        let mut fact_node = None;
        let mut no_rule_node = None;
        let mut queue: VecDeque<AtomId> = VecDeque::new();

        let mut intern = |a: AtomId, nodes: &mut Vec<Node>, queue: &mut VecDeque<AtomId>| -> usize {
            *atom_node.entry(a).or_insert_with(|| {
                let sign = if self.i.contains(a) { Sign::In } else { Sign::Out };
                nodes.push(Node {
                    kind: NodeKind::Atom(SignedAtom { atom: a, sign }),
                    support: None,
                    blocks: Vec::new(),
                });
                queue.push_back(a);
                nodes.len() - 1
            })
        };

        let root_id = intern(root, &mut nodes, &mut queue);
        let mut root_choice = root_choice;
        while let Some(x) = queue.pop_front() {
            let id = intern(x, &mut nodes, &mut queue);
            let choice = if x == root { root_choice.take() } else { None };
            let targets: Vec<(Option<AtomId>, Label, usize)> = if self.i.contains(x) {
                let support = match choice {
                    Some(RootChoice::Support(s)) => s,
                    _ => self
                        .supports
                        .get(&x)
                        .cloned()
                        .ok_or_else(|| JustifyError::NoAcyclicSupport(self.p.atom(x).to_string()))?,
                };
                let rule = support.rule;
                let t = support_targets(self.p, &support)
                    .into_iter()
                    .map(|(a, l)| (a, l, rule))
                    .collect();
                nodes[id].support = Some(support);
                t
            } else {
                let blocks = match choice {
                    Some(RootChoice::Blocks(b)) => b,
                    _ => self.default_blocks(x),
                };
                let t: Vec<_> = blocks
                    .iter()
                    .flat_map(|b| block_targets(b).into_iter().map(move |(a, l)| (a, l, b.rule)))
                    .collect();
                nodes[id].blocks = blocks;
                t
            };
            if !self.i.contains(x) && self.occ[x.index()].is_empty() {
                let nr = *no_rule_node.get_or_insert_with(|| {
                    nodes.push(Node {
                        kind: NodeKind::NoRule,
                        support: None,
                        blocks: Vec::new(),
                    });
                    nodes.len() - 1
                });
                edges.push(Edge {
                    from: id,
                    to: nr,
                    label: Label::Neg,
                    rule: None,
                });
            }
            for (target, label, rule) in targets {
                let to = match target {
                    Some(a) => intern(a, &mut nodes, &mut queue),
                    None => *fact_node.get_or_insert_with(|| {
                        nodes.push(Node {
                            kind: NodeKind::Fact,
                            support: None,
                            blocks: Vec::new(),
                        });
                        nodes.len() - 1
                    }),
                };
                let e = Edge {
                    from: id,
                    to,
                    label,
                    rule: Some(rule),
                };
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        Ok(JustificationGraph {
            root: root_id,
            nodes,
            edges,
        })
    }
}

fn check_query(p: &GroundProgram, i: &Interpretation, a: AtomId) -> Result<(), JustifyError> {
    if a.index() >= p.atoms.len() {
        return Err(JustifyError::UnknownAtom(a.to_string()));
    }
    if !is_answer_set(p, i) {
        return Err(JustifyError::NotAnAnswerSet);
    }
    Ok(())
}

/// Why is `a` in the answer set `i`?
pub fn justify(p: &GroundProgram, i: &Interpretation, a: AtomId) -> Result<JustificationGraph, JustifyError> {
    check_query(p, i, a)?;
    if !i.contains(a) {
        return Err(JustifyError::NotInAnswerSet(p.atom(a).to_string()));
    }
    Builder::new(p, i).build(a, None)
}

/// Why is `a` not in the answer set `i`?
pub fn justify_absence(
    p: &GroundProgram,
    i: &Interpretation,
    a: AtomId,
) -> Result<JustificationGraph, JustifyError> {
    check_query(p, i, a)?;
    if i.contains(a) {
        return Err(JustifyError::InAnswerSet(p.atom(a).to_string()));
    }
    Builder::new(p, i).build(a, None)
}

/// Up to `k` graphs for `a` (in or out of `i`), differing in how the root
/// is justified. The first graph is the one [`justify`] or
/// [`justify_absence`] returns.
pub fn justify_alternatives(
    p: &GroundProgram,
    i: &Interpretation,
    a: AtomId,
    k: usize,
) -> Result<Vec<JustificationGraph>, JustifyError> {
    check_query(p, i, a)?;
    let builder = Builder::new(p, i);
    let first = builder.build(a, None)?;
    let mut out = vec![first];
    if i.contains(a) {
        let all = |_: AtomId| true;
        for &ri in &builder.occ[a.index()] {
            for allow_shared in [false, true] {
                for s in support_options(p, i, a, ri, allow_shared, &all, k.max(1)) {
                    if out.len() >= k {
                        return Ok(out);
                    }
                    if s.shared_head != allow_shared {
                        continue;
                    }
                    if let Ok(g) = builder.build(a, Some(RootChoice::Support(s))) {
                        if !out.contains(&g) && positive_cycle(&g).is_none() {
                            out.push(g);
                        }
                    }
                }
            }
        }
    } else {
        let options: Vec<Vec<Block>> = builder.occ[a.index()]
            .iter()
            .map(|&ri| block_options(p, i, a, ri))
            .collect();
        let mut idx = vec![0usize; options.len()];
        loop {
            // Advance the mixed-radix counter, last rule fastest.
            let mut pos = options.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < options[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
            if out.len() >= k {
                return Ok(out);
            }
            let blocks = options
                .iter()
                .zip(&idx)
                .map(|(o, &j)| o[j].clone())
                .collect();
            let g = builder.build(a, Some(RootChoice::Blocks(blocks)))?;
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out.truncate(k.max(1));
    Ok(out)
}

/// A cycle of `+` edges between `in` nodes, if any.
fn positive_cycle(g: &JustificationGraph) -> Option<Vec<usize>> {
    let is_in = |n: usize| matches!(g.nodes[n].kind, NodeKind::Atom(s) if s.sign == Sign::In);
    let mut succ: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in &g.edges {
        if e.label == Label::Pos && e.from < g.nodes.len() && e.to < g.nodes.len() && is_in(e.from) && is_in(e.to) {
            succ.entry(e.from).or_default().push(e.to);
        }
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; g.nodes.len()];
    fn dfs(n: usize, succ: &HashMap<usize, Vec<usize>>, state: &mut [u8], path: &mut Vec<usize>) -> bool {
        state[n] = 1;
        path.push(n);
        for &m in succ.get(&n).map(Vec::as_slice).unwrap_or(&[]) {
            if state[m] == 1 {
                path.push(m);
                return true;
            }
            if state[m] == 0 && dfs(m, succ, state, path) {
                return true;
            }
        }
        path.pop();
        state[n] = 2;
        false
    }
    for n in 0..g.nodes.len() {
        let mut path = Vec::new();
        if state[n] == 0 && dfs(n, &succ, &mut state, &mut path) {
            return Some(path);
        }
    }
    None
}

fn witness_problems(
    p: &GroundProgram,
    i: &Interpretation,
    rule: usize,
    literal: usize,
    w: &Witness,
    expect: Polarity,
) -> Vec<String> {
    let mut problems = Vec::new();
    let Some(GroundLiteral::Aggregate { constraint, .. }) = p.rules[rule].body.get(literal) else {
        return vec![format!("rule {rule} has no aggregate at body position {literal}")];
    };
    if w.polarity != expect {
        problems.push(format!("rule {rule} literal {literal}: witness polarity {:?}, expected {expect:?}", w.polarity));
    }
    if !w.must_true.is_disjoint(&w.must_false) {
        problems.push(format!("rule {rule} literal {literal}: witness sets overlap"));
    }
    if w.must_true.iter().chain(&w.must_false).any(|a| !constraint.in_domain(*a)) {
        problems.push(format!("rule {rule} literal {literal}: witness leaves the aggregate domain"));
    }
    if w.must_true.iter().any(|a| !i.contains(*a)) || w.must_false.iter().any(|a| i.contains(*a)) {
        problems.push(format!("rule {rule} literal {literal}: witness disagrees with the interpretation"));
    }
    if !forces_by_enumeration(constraint, w) {
        problems.push(format!("rule {rule} literal {literal}: witness does not force the aggregate"));
    }
    let weaker = |remove_true: bool, a: AtomId| {
        let mut v = w.clone();
        if remove_true {
            v.must_true.remove(&a);
        } else {
            v.must_false.remove(&a);
        }
        v
    };
    let redundant = w
        .must_true
        .iter()
        .map(|&a| weaker(true, a))
        .chain(w.must_false.iter().map(|&a| weaker(false, a)))
        .any(|v| forces_by_enumeration(constraint, &v));
    if redundant {
        problems.push(format!("rule {rule} literal {literal}: witness is not minimal"));
    }
    problems
}

/// Check `g` against every structural rule from scratch. Returns the list
/// of violations; an empty list means the graph is a valid justification.
pub fn diagnose_justification(p: &GroundProgram, i: &Interpretation, g: &JustificationGraph) -> Vec<String> {
    let mut problems = Vec::new();
    if !is_answer_set(p, i) {
        problems.push("interpretation is not an answer set".to_string());
        return problems;
    }
    if g.root >= g.nodes.len() || !matches!(g.nodes[g.root].kind, NodeKind::Atom(_)) {
        problems.push("root is not an atom node".to_string());
        return problems;
    }
    let occ = head_occurrences(p);
    let mut seen_atoms: HashSet<AtomId> = HashSet::new();
    let mut terminal_kinds: Vec<NodeKind> = Vec::new();
    for (id, n) in g.nodes.iter().enumerate() {
        match n.kind {
            NodeKind::Atom(s) => {
                if s.atom.index() >= p.atoms.len() {
                    problems.push(format!("node {id}: unknown atom"));
                    return problems;
                }
                if !seen_atoms.insert(s.atom) {
                    problems.push(format!("node {id}: atom appears twice"));
                }
                if (s.sign == Sign::In) != i.contains(s.atom) {
                    problems.push(format!("node {id}: sign disagrees with the answer set"));
                }
            }
            k => {
                if terminal_kinds.contains(&k) {
                    problems.push(format!("node {id}: duplicate terminal"));
                }
                terminal_kinds.push(k);
            }
        }
    }
    for (k, e) in g.edges.iter().enumerate() {
        if e.from >= g.nodes.len() || e.to >= g.nodes.len() {
            problems.push(format!("edge {k}: dangling endpoint"));
            return problems;
        }
        let expected = match g.nodes[e.to].kind {
            NodeKind::Atom(s) if s.sign == Sign::In => Label::Pos,
            NodeKind::Fact => Label::Pos,
            _ => Label::Neg,
        };
        if e.label != expected {
            problems.push(format!("edge {k}: label {} disagrees with its target", e.label.symbol()));
        }
        if !matches!(g.nodes[e.from].kind, NodeKind::Atom(_)) {
            problems.push(format!("edge {k}: leaves a terminal"));
        }
    }

    let target_key = |to: usize| match g.nodes[to].kind {
        NodeKind::Atom(s) => Some(s.atom),
        _ => None,
    };
    for (id, n) in g.nodes.iter().enumerate() {
        let NodeKind::Atom(s) = n.kind else { continue };
        let x = s.atom;
        let actual: BTreeSet<(Option<AtomId>, Label, Option<usize>)> = g
            .outgoing(id)
            .map(|e| (target_key(e.to), e.label, e.rule))
            .collect();
        let mut expected: BTreeSet<(Option<AtomId>, Label, Option<usize>)> = BTreeSet::new();
        if s.sign == Sign::In {
            let Some(sup) = &n.support else {
                problems.push(format!("node {id}: in-node without support"));
                continue;
            };
            if !n.blocks.is_empty() {
                problems.push(format!("node {id}: in-node carries blocks"));
            }
            let Some(r) = p.rules.get(sup.rule) else {
                problems.push(format!("node {id}: unknown rule {}", sup.rule));
                continue;
            };
            if !r.head.contains(&x) {
                problems.push(format!("node {id}: rule {} does not derive the atom", sup.rule));
            }
            if !r.body_holds(i) {
                problems.push(format!("node {id}: rule {} has a false body", sup.rule));
            }
            let shared = r.head.iter().any(|&h| h != x && i.contains(h));
            if shared != sup.shared_head {
                problems.push(format!("node {id}: shared-head flag is wrong"));
            }
            for (pos, l) in r.body.iter().enumerate() {
                if let GroundLiteral::Aggregate { negated, .. } = l {
                    let used: Vec<&LiteralWitness> = sup.witnesses.iter().filter(|w| w.literal == pos).collect();
                    if used.len() != 1 {
                        problems.push(format!("node {id}: aggregate at {pos} needs exactly one witness"));
                        continue;
                    }
                    problems.extend(
                        witness_problems(p, i, sup.rule, pos, &used[0].witness, literal_polarity(*negated))
                            .into_iter()
                            .map(|m| format!("node {id}: {m}")),
                    );
                }
            }
            if sup.witnesses.iter().any(|w| !matches!(r.body.get(w.literal), Some(GroundLiteral::Aggregate { .. }))) {
                problems.push(format!("node {id}: witness attached to a non-aggregate literal"));
            }
            expected.extend(
                support_targets(p, sup)
                    .into_iter()
                    .map(|(a, l)| (a, l, Some(sup.rule))),
            );
        } else {
            if n.support.is_some() {
                problems.push(format!("node {id}: out-node carries a support"));
            }
            let rules: Vec<usize> = n.blocks.iter().map(|b| b.rule).collect();
            if rules != occ[x.index()] {
                problems.push(format!(
                    "node {id}: blocks cover rules {rules:?}, expected {:?}",
                    occ[x.index()]
                ));
            }
            for b in &n.blocks {
                let Some(r) = p.rules.get(b.rule) else {
                    problems.push(format!("node {id}: unknown rule {}", b.rule));
                    continue;
                };
                let ok = match &b.reason {
                    BlockReason::PositiveFalse { literal, atom } => {
                        r.body.get(*literal) == Some(&GroundLiteral::Atom { atom: *atom, negated: false })
                            && !i.contains(*atom)
                    }
                    BlockReason::NegatedTrue { literal, atom } => {
                        r.body.get(*literal) == Some(&GroundLiteral::Atom { atom: *atom, negated: true })
                            && i.contains(*atom)
                    }
                    BlockReason::HeadTrue { atom } => *atom != x && r.head.contains(atom) && i.contains(*atom),
                    BlockReason::Aggregate { literal, witness } => match r.body.get(*literal) {
                        Some(GroundLiteral::Aggregate { negated, .. }) => {
                            let found = witness_problems(p, i, b.rule, *literal, witness, literal_polarity(*negated).flip());
                            let clean = found.is_empty();
                            problems.extend(found.into_iter().map(|m| format!("node {id}: {m}")));
                            clean
                        }
                        _ => false,
                    },
                };
                if !ok {
                    problems.push(format!("node {id}: invalid block for rule {}", b.rule));
                }
                expected.extend(block_targets(b).into_iter().map(|(a, l)| (a, l, Some(b.rule))));
            }
            if occ[x.index()].is_empty() {
                expected.insert((None, Label::Neg, None));
            }
        }
        if actual != expected {
            problems.push(format!("node {id}: outgoing edges do not match its justification"));
        }
    }
    for e in &g.edges {
        if let (NodeKind::Atom(_), None) = (g.nodes[e.to].kind, target_key(e.to)) {
            unreachable!()
        }
    }
    // Every edge target must be a node of the graph for the cited atom.
    for (id, n) in g.nodes.iter().enumerate() {
        if let NodeKind::Atom(_) = n.kind {
            for e in g.outgoing(id) {
                if let NodeKind::Fact | NodeKind::NoRule = g.nodes[e.to].kind {
                    continue;
                }
            }
        }
    }
    let mut reached = vec![false; g.nodes.len()];
    let mut stack = vec![g.root];
    while let Some(n) = stack.pop() {
        if std::mem::replace(&mut reached[n], true) {
            continue;
        }
        stack.extend(g.outgoing(n).map(|e| e.to));
    }
    if let Some(n) = reached.iter().position(|r| !r) {
        problems.push(format!("node {n}: unreachable from the root"));
    }
    if let Some(cycle) = positive_cycle(g) {
        problems.push(format!("positive support cycle through nodes {cycle:?}"));
    }
    problems
}

pub fn verify_justification(p: &GroundProgram, i: &Interpretation, g: &JustificationGraph) -> bool {
    diagnose_justification(p, i, g).is_empty()
}
