//! Engine operations shared by the CLI, the REPL and the HTTP service.
//!
//! Every operation returns a serializable response struct. Front ends print
//! it with [`to_json`] or [`Render::render_text`]; they never compute domain
//! results themselves, so identical queries give identical bytes everywhere.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use xplain_core::aggregate::{Polarity, Witness};
use xplain_core::ast::{Atom, Program};
use xplain_core::contrast::{
    abduce_with, contrast_all_with, ContrastOptions, ContrastiveExplanation, ContrastiveQuery, FactSpace,
};
use xplain_core::error::{ContrastError, GroundError, InconsistencyError, JustifyError, SolveError};
use xplain_core::ground::{ground_with, GroundConfig, GroundProgram, DEFAULT_ATOM_LIMIT};
use xplain_core::inconsistency::{
    is_consistent, minimal_correction_sets_with, minimal_inconsistent_subsets_with, InconsistencyConfig,
    SoftPartition,
};
use xplain_core::interp::{AtomId, Interpretation};
use xplain_core::justify::{
    justify_alternatives, BlockReason, JustificationGraph, Label, NodeKind, Sign,
};
use xplain_core::parser::{parse_atom, parse_atom_list, parse_program};
use xplain_core::stable::{enumerate_with, SolverConfig};
use xplain_core::Error;

pub use crate::error::{ApiError, ErrorKind};

/// Environment variable overriding the ground-atom cap.
pub const CAPACITY_ENV: &str = "XPLAIN_CAPACITY";

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub ground: GroundConfig,
    pub solver: SolverConfig,
}

impl Limits {
    /// Defaults, with the atom cap taken from [`CAPACITY_ENV`] when set.
    pub fn from_env() -> Result<Limits, ApiError> {
        let mut limits = Limits::default();
        if let Ok(v) = std::env::var(CAPACITY_ENV) {
            limits.ground.atom_limit = v.trim().parse().map_err(|_| {
                ApiError::usage(format!("{CAPACITY_ENV} must be a positive integer, got `{v}`"))
            })?;
        }
        Ok(limits)
    }

    pub fn with_atom_limit(atom_limit: Option<usize>) -> Limits {
        let mut limits = Limits::default();
        limits.ground.atom_limit = atom_limit.unwrap_or(DEFAULT_ATOM_LIMIT);
        limits
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("response types serialize")
}

/// Human-readable rendering of a response.
pub trait Render {
    fn render_text(&self) -> String;
}

/// A ground program with its answer sets computed on demand.
#[derive(Clone, Debug)]
pub struct Solved {
    pub ground: GroundProgram,
    all: Option<Vec<Interpretation>>,
    limits: Limits,
}

impl Solved {
    pub fn new(p: &Program, limits: Limits) -> Result<Solved, ApiError> {
        let ground = ground_with(p, limits.ground).map_err(Error::from)?;
        Ok(Solved {
            ground,
            all: None,
            limits,
        })
    }

    pub fn answer_sets(&mut self) -> Result<&[Interpretation], ApiError> {
        if self.all.is_none() {
            let sets = enumerate_with(&self.ground, None, self.limits.solver).map_err(Error::from)?;
            self.all = Some(sets);
        }
        Ok(self.all.as_deref().expect("just computed"))
    }

    /// The first `limit` answer sets; a canonical prefix of the full list.
    pub fn first(&mut self, limit: Option<usize>) -> Result<Vec<Interpretation>, ApiError> {
        if let Some(all) = &self.all {
            return Ok(all.iter().take(limit.unwrap_or(usize::MAX)).cloned().collect());
        }
        match limit {
            None => Ok(self.answer_sets()?.to_vec()),
            Some(n) => Ok(enumerate_with(&self.ground, Some(n), self.limits.solver).map_err(Error::from)?),
        }
    }

    pub fn names(&self, i: &Interpretation) -> Vec<String> {
        self.ground.visible_atoms(i).map(Atom::to_string).collect()
    }

    /// The answer set whose visible atoms are exactly `model`.
    pub fn find_model(&mut self, model: &[Atom]) -> Result<Interpretation, ApiError> {
        let mut wanted: Vec<String> = model.iter().map(Atom::to_string).collect();
        wanted.sort();
        wanted.dedup();
        let ground = self.ground.clone();
        for i in self.answer_sets()? {
            let mut names: Vec<String> = ground.visible_atoms(i).map(Atom::to_string).collect();
            names.sort();
            if names == wanted {
                return Ok(i.clone());
            }
        }
        Err(ApiError::precondition(
            "not_an_answer_set",
            format!("{{{}}} is not an answer set", model_text(model)),
        ))
    }
}

fn model_text(model: &[Atom]) -> String {
    model.iter().map(Atom::to_string).collect::<Vec<_>>().join(", ")
}

pub fn load_program(text: &str) -> Result<Program, ApiError> {
    parse_program(text).map_err(|e| Error::from(e).into())
}

pub fn parse_atom_arg(text: &str) -> Result<Atom, ApiError> {
    let a = parse_atom(text.trim()).map_err(|e| ApiError::parse(format!("atom `{}`: {e}", text.trim())))?;
    if !a.is_ground() {
        return Err(ApiError::parse(format!("atom `{a}` is not ground")));
    }
    Ok(a)
}

pub fn parse_atoms_arg(text: &str) -> Result<Vec<Atom>, ApiError> {
    parse_atom_list(text.trim()).map_err(|e| ApiError::parse(format!("atom list `{}`: {e}", text.trim())))
}

// ---------------------------------------------------------------- models

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModelsResponse(pub Vec<Vec<String>>);

impl Render for ModelsResponse {
    fn render_text(&self) -> String {
        if self.0.is_empty() {
            return "no answer sets\n".into();
        }
        self.0.iter().map(|m| format!("{{{}}}\n", m.join(", "))).collect()
    }
}

pub fn models(solved: &mut Solved, limit: Option<usize>) -> Result<ModelsResponse, ApiError> {
    let sets = solved.first(limit)?;
    Ok(ModelsResponse(sets.iter().map(|i| solved.names(i)).collect()))
}

// ----------------------------------------------------------------- check

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResponse {
    pub model: Vec<String>,
    pub answer_set: bool,
}

impl Render for CheckResponse {
    fn render_text(&self) -> String {
        let verdict = if self.answer_set { "is an answer set" } else { "is not an answer set" };
        format!("{{{}}} {verdict}\n", self.model.join(", "))
    }
}

pub fn check(solved: &mut Solved, model: &[Atom]) -> Result<CheckResponse, ApiError> {
    let answer_set = match solved.find_model(model) {
        Ok(_) => true,
        Err(e) if e.kind == ErrorKind::Precondition => false,
        Err(e) => return Err(e),
    };
    Ok(CheckResponse {
        model: model.iter().map(Atom::to_string).collect(),
        answer_set,
    })
}

// --------------------------------------------------------------- explain

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    In,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleRef {
    pub index: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    /// Body position of the aggregate literal.
    pub literal: usize,
    pub polarity: Polarity,
    pub must_true: Vec<String>,
    pub must_false: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub rule: RuleRef,
    /// `positive-false`, `negated-true`, `aggregate` or `head-true`.
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub atom: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub atom: Option<String>,
    pub sign: Option<Sign>,
    /// `atom`, `fact` or `no-rule`.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule: Option<RuleRef>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shared_head: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witness: Vec<WitnessJson>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub blocks: Vec<BlockJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub to: usize,
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub root: usize,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplainResponse {
    pub atom: String,
    pub mode: Mode,
    pub model: Vec<String>,
    pub graphs: Vec<GraphJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dot: Option<String>,
}

fn witness_json(g: &GroundProgram, literal: usize, w: &Witness) -> WitnessJson {
    let names = |s: &std::collections::BTreeSet<AtomId>| s.iter().map(|&a| g.atom(a).to_string()).collect();
    WitnessJson {
        literal,
        polarity: w.polarity,
        must_true: names(&w.must_true),
        must_false: names(&w.must_false),
    }
}

pub fn graph_json(g: &GroundProgram, graph: &JustificationGraph) -> GraphJson {
    let rule_ref = |index: usize| RuleRef {
        index,
        text: g.rule_text(index),
    };
    let nodes = graph
        .nodes
        .iter()
        .enumerate()
        .map(|(id, n)| {
            let (atom, sign, kind) = match n.kind {
                NodeKind::Atom(s) => (Some(g.atom(s.atom).to_string()), Some(s.sign), "atom"),
                NodeKind::Fact => (None, None, "fact"),
                NodeKind::NoRule => (None, None, "no-rule"),
            };
            let blocks = n
                .blocks
                .iter()
                .map(|b| {
                    let (reason, atom, witness) = match &b.reason {
                        BlockReason::PositiveFalse { atom, .. } => ("positive-false", Some(*atom), None),
                        BlockReason::NegatedTrue { atom, .. } => ("negated-true", Some(*atom), None),
                        BlockReason::HeadTrue { atom } => ("head-true", Some(*atom), None),
                        BlockReason::Aggregate { literal, witness } => {
                            ("aggregate", None, Some(witness_json(g, *literal, witness)))
                        }
                    };
                    BlockJson {
                        rule: rule_ref(b.rule),
                        reason: reason.into(),
                        atom: atom.map(|a| g.atom(a).to_string()),
                        witness,
                    }
                })
                .collect();
            NodeJson {
                id,
                atom,
                sign,
                kind: kind.into(),
                rule: n.support.as_ref().map(|s| rule_ref(s.rule)),
                shared_head: n.support.as_ref().map(|s| s.shared_head),
                witness: n
                    .support
                    .iter()
                    .flat_map(|s| s.witnesses.iter().map(|w| witness_json(g, w.literal, &w.witness)))
                    .collect(),
                blocks,
            }
        })
        .collect();
    GraphJson {
        root: graph.root,
        nodes,
        edges: graph
            .edges
            .iter()
            .map(|e| EdgeJson {
                from: e.from,
                to: e.to,
                label: e.label,
            })
            .collect(),
    }
}

pub struct ExplainRequest {
    pub atom: Atom,
    pub mode: Mode,
    /// Visible atoms of the answer set to explain against; by default the
    /// first answer set that contains (mode `in`) or lacks (mode `out`) the
    /// atom.
    pub model: Option<Vec<Atom>>,
    pub alternatives: usize,
    pub dot: bool,
}

pub fn explain(solved: &mut Solved, req: &ExplainRequest) -> Result<ExplainResponse, ApiError> {
    let wanted_in = req.mode == Mode::In;
    let id = solved.ground.atom_id(&req.atom);
    let interp = match &req.model {
        Some(m) => solved.find_model(m)?,
        None => {
            let found = solved
                .answer_sets()?
                .iter()
                .find(|i| id.is_some_and(|a| i.contains(a)) == wanted_in)
                .cloned();
            found.ok_or_else(|| {
                let which = if wanted_in { "contains" } else { "lacks" };
                ApiError::precondition("no_matching_answer_set", format!("no answer set {which} `{}`", req.atom))
            })?
        }
    };
    // An atom outside the Herbrand base is explained as having no rules.
    let mut ground = solved.ground.clone();
    let atom_id = ground.atoms.intern(&req.atom);
    if interp.contains(atom_id) != wanted_in {
        let (code, verb) = if wanted_in { ("not_in_answer_set", "is not in") } else { ("in_answer_set", "is in") };
        return Err(ApiError::precondition(code, format!("`{}` {verb} the answer set", req.atom)));
    }
    let graphs = justify_alternatives(&ground, &interp, atom_id, req.alternatives.max(1)).map_err(Error::from)?;
    let dot = req.dot.then(|| graphs[0].to_dot(&ground));
    Ok(ExplainResponse {
        atom: req.atom.to_string(),
        mode: req.mode,
        model: ground.visible_atoms(&interp).map(Atom::to_string).collect(),
        graphs: graphs.iter().map(|g| graph_json(&ground, g)).collect(),
        dot,
    })
}

fn node_name(n: &NodeJson) -> String {
    match (&n.atom, n.sign) {
        (Some(a), Some(Sign::In)) => format!("{a} (in)"),
        (Some(a), _) => format!("{a} (out)"),
        _ => n.kind.clone(),
    }
}

impl Render for GraphJson {
    fn render_text(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            if n.atom.is_none() {
                continue;
            }
            let _ = write!(out, "{}", node_name(n));
            if let Some(r) = &n.rule {
                let _ = write!(out, " by rule {}: {}", r.index, r.text);
                if n.shared_head == Some(true) {
                    out.push_str(" [shared head]");
                }
            }
            out.push('\n');
            for w in &n.witness {
                let _ = writeln!(
                    out,
                    "    witness for literal {}: true {{{}}}, false {{{}}}",
                    w.literal,
                    w.must_true.join(", "),
                    w.must_false.join(", ")
                );
            }
            for b in &n.blocks {
                let why = match (b.reason.as_str(), &b.atom, &b.witness) {
                    ("positive-false", Some(a), _) => format!("{a} is false"),
                    ("negated-true", Some(a), _) => format!("{a} is true"),
                    ("head-true", Some(a), _) => format!("head atom {a} is true"),
                    (_, _, Some(w)) => format!(
                        "aggregate at literal {} fails: true {{{}}}, false {{{}}}",
                        w.literal,
                        w.must_true.join(", "),
                        w.must_false.join(", ")
                    ),
                    _ => b.reason.clone(),
                };
                let _ = writeln!(out, "    blocked rule {}: {}  ({why})", b.rule.index, b.rule.text);
            }
            for e in self.edges.iter().filter(|e| e.from == n.id) {
                let _ = writeln!(out, "    {} {}", e.label.symbol(), node_name(&self.nodes[e.to]));
            }
        }
        out
    }
}

impl Render for ExplainResponse {
    fn render_text(&self) -> String {
        let mut out = format!("answer set {{{}}}\n", self.model.join(", "));
        for (k, g) in self.graphs.iter().enumerate() {
            if self.graphs.len() > 1 {
                let _ = writeln!(out, "-- justification {}", k + 1);
            }
            out.push_str(&g.render_text());
        }
        if let Some(dot) = &self.dot {
            out.push_str(dot);
        }
        out
    }
}

// -------------------------------------------------------------- contrast

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplanationJson {
    pub new_facts: Vec<String>,
    pub added: Vec<String>,
    pub removed: Vec<String>,
    pub distance: u64,
}

impl From<&ContrastiveExplanation> for ExplanationJson {
    fn from(e: &ContrastiveExplanation) -> Self {
        let names = |v: &[Atom]| v.iter().map(Atom::to_string).collect();
        ExplanationJson {
            new_facts: names(&e.new_facts),
            added: names(&e.added),
            removed: names(&e.removed),
            distance: e.distance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContrastResponse {
    pub mode: String,
    pub target: Vec<String>,
    pub explanations: Vec<ExplanationJson>,
}

impl Render for ContrastResponse {
    fn render_text(&self) -> String {
        if self.explanations.is_empty() {
            return "no minimal change found\n".into();
        }
        let mut out = String::new();
        for e in &self.explanations {
            let _ = writeln!(out, "F' = {{{}}}", e.new_facts.join(", "));
            let _ = writeln!(out, "  removed {{{}}}", e.removed.join(", "));
            let _ = writeln!(out, "  added {{{}}}", e.added.join(", "));
            let _ = writeln!(out, "  distance {}", e.distance);
        }
        out
    }
}

/// Build a query from a mode name and target text.
pub fn contrast_query(mode: &str, target: &str) -> Result<ContrastiveQuery, ApiError> {
    Ok(match mode {
        "not-an-answer-set" => ContrastiveQuery::NotAnAnswerSet(parse_atoms_arg(target)?),
        "foil-becomes-brave" => ContrastiveQuery::FoilBecomesBrave(parse_atom_arg(target)?),
        "fact-no-longer-brave" => ContrastiveQuery::FactNoLongerBrave(parse_atom_arg(target)?),
        other => {
            return Err(ApiError::usage(format!(
                "unknown contrast mode `{other}`; expected not-an-answer-set, foil-becomes-brave or fact-no-longer-brave"
            )))
        }
    })
}

pub fn load_space(text: &str) -> Result<FactSpace, ApiError> {
    FactSpace::parse(text).map_err(|e| Error::from(e).into())
}

pub fn contrast(
    p: &Program,
    space: &FactSpace,
    query: &ContrastiveQuery,
    all: usize,
    limits: Limits,
) -> Result<ContrastResponse, ApiError> {
    let opts = ContrastOptions {
        ground: limits.ground,
        solver: limits.solver,
        ..Default::default()
    };
    let found = match contrast_all_with(p, query, space, all.max(1), &opts) {
        Ok(v) => v,
        Err(ContrastError::NoContrast) => Vec::new(),
        Err(e) => return Err(Error::from(e).into()),
    };
    let target = match query {
        ContrastiveQuery::NotAnAnswerSet(v) => v.iter().map(Atom::to_string).collect(),
        ContrastiveQuery::FoilBecomesBrave(a) | ContrastiveQuery::FactNoLongerBrave(a) => vec![a.to_string()],
    };
    Ok(ContrastResponse {
        mode: query.mode_name().into(),
        target,
        explanations: found.iter().map(ExplanationJson::from).collect(),
    })
}

// ---------------------------------------------------------------- abduce

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbduceResponse {
    pub observation: String,
    pub hypotheses: Vec<Vec<String>>,
}

impl Render for AbduceResponse {
    fn render_text(&self) -> String {
        if self.hypotheses.is_empty() {
            return format!("no hypothesis explains {}\n", self.observation);
        }
        self.hypotheses.iter().map(|h| format!("{{{}}}\n", h.join(", "))).collect()
    }
}

pub fn abduce(p: &Program, observation: &Atom, abducibles: &[Atom], limits: Limits) -> Result<AbduceResponse, ApiError> {
    let found = abduce_with(p, observation, abducibles, limits.ground, limits.solver).map_err(Error::from)?;
    Ok(AbduceResponse {
        observation: observation.to_string(),
        hypotheses: found
            .iter()
            .map(|h| h.iter().map(Atom::to_string).collect())
            .collect(),
    })
}

// ------------------------------------------------------------ mus / mcs

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InconsistencyResponse {
    pub consistent: bool,
    pub soft: Vec<String>,
    pub mus: Vec<Vec<String>>,
    pub mcs: Vec<Vec<String>>,
}

impl Render for InconsistencyResponse {
    fn render_text(&self) -> String {
        if self.consistent {
            return "consistent\n".into();
        }
        let mut out = format!("inconsistent; soft facts {{{}}}\n", self.soft.join(", "));
        for m in &self.mus {
            let _ = writeln!(out, "minimal inconsistent subset {{{}}}", m.join(", "));
        }
        for m in &self.mcs {
            let _ = writeln!(out, "minimal correction set {{{}}}", m.join(", "));
        }
        out
    }
}

/// MUS/MCS over soft facts: those marked `%soft`, or all facts of the
/// listed predicates.
pub fn inconsistency(
    p: &Program,
    soft_predicates: Option<&[String]>,
    k: usize,
    limits: Limits,
) -> Result<InconsistencyResponse, ApiError> {
    let sp = match soft_predicates {
        Some(preds) => {
            let preds: Vec<&str> = preds.iter().map(String::as_str).collect();
            SoftPartition::from_predicates(p, &preds)
        }
        None => SoftPartition::from_markers(p).map_err(Error::from)?,
    };
    let config = InconsistencyConfig {
        ground: limits.ground,
        solver: limits.solver,
        ..Default::default()
    };
    let names = |sets: Vec<Vec<Atom>>| -> Vec<Vec<String>> {
        sets.iter().map(|s| s.iter().map(Atom::to_string).collect()).collect()
    };
    let soft = sp.soft.iter().map(Atom::to_string).collect();
    let g = ground_with(p, limits.ground).map_err(Error::from)?;
    let consistent = !enumerate_with(&g, Some(1), limits.solver).map_err(Error::from)?.is_empty();
    if consistent {
        return Ok(InconsistencyResponse {
            consistent,
            soft,
            mus: Vec::new(),
            mcs: Vec::new(),
        });
    }
    Ok(InconsistencyResponse {
        consistent,
        soft,
        mus: names(minimal_inconsistent_subsets_with(&sp, k, &config).map_err(Error::from)?),
        mcs: names(minimal_correction_sets_with(&sp, k, &config).map_err(Error::from)?),
    })
}

/// Whether `p` has an answer set, for callers that only need the verdict.
pub fn consistent(p: &Program) -> Result<bool, ApiError> {
    is_consistent(p).map_err(|e| Error::from(e).into())
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        if e.is_capacity() {
            return ApiError::new(ErrorKind::Capacity, "capacity", message);
        }
        let (kind, code) = match &e {
            Error::Frontend(_) | Error::Space(_) => (ErrorKind::Parse, "parse_error"),
            Error::Ground(GroundError::Safety(_)) => (ErrorKind::Parse, "unsafe_rule"),
            Error::Ground(_) => (ErrorKind::Parse, "parse_error"),
            Error::Contrast(ContrastError::Space(_) | ContrastError::Ground(_)) => (ErrorKind::Parse, "parse_error"),
            Error::Contrast(ContrastError::BaselineViolated(_)) => (ErrorKind::Precondition, "baseline_violated"),
            Error::Contrast(_) => (ErrorKind::Precondition, "no_contrast"),
            Error::Inconsistency(InconsistencyError::SoftNotFact(_)) => (ErrorKind::Parse, "soft_not_fact"),
            Error::Inconsistency(InconsistencyError::HardCoreInconsistent) => {
                (ErrorKind::Precondition, "hard_core_inconsistent")
            }
            Error::Inconsistency(InconsistencyError::Ground(_)) => (ErrorKind::Parse, "parse_error"),
            Error::Inconsistency(_) => (ErrorKind::Precondition, "inconsistency"),
            Error::Justify(JustifyError::NoAcyclicSupport(_)) => (ErrorKind::Precondition, "no_acyclic_support"),
            Error::Justify(_) => (ErrorKind::Precondition, "justification"),
            Error::Solve(SolveError::NoAnswerSets) => (ErrorKind::Precondition, "no_answer_sets"),
            Error::Solve(_) | Error::Witness(_) => (ErrorKind::Precondition, "solve"),
        };
        ApiError::new(kind, code, message)
    }
}
