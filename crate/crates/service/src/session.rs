//! A program with a fact overlay, an undo stack and a command history.

use serde::{Deserialize, Serialize};
use xplain_core::ast::{Atom, Program, Rule};
use xplain_core::contrast::FactSpace;

use crate::api::{
    self, AbduceResponse, ApiError, ContrastResponse, ExplainRequest, ExplainResponse, InconsistencyResponse, Limits,
    Mode, ModelsResponse, Render, Solved,
};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Overlay {
    assumed: Vec<Atom>,
    retracted: Vec<Atom>,
    space: Option<FactSpace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateResponse {
    pub assumed: Vec<String>,
    pub retracted: Vec<String>,
    pub space: Option<String>,
    pub undo_depth: usize,
    pub history: Vec<String>,
}

impl Render for StateResponse {
    fn render_text(&self) -> String {
        let mut out = format!(
            "assumed {{{}}}\nretracted {{{}}}\nundo depth {}\n",
            self.assumed.join(", "),
            self.retracted.join(", "),
            self.undo_depth
        );
        if let Some(s) = &self.space {
            out.push_str(s);
        }
        out
    }
}

/// Overlay edit applied as one undo step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactOp {
    Assume,
    Retract,
}

#[derive(Debug)]
pub struct Session {
    base: Program,
    overlay: Overlay,
    undo: Vec<Overlay>,
    history: Vec<String>,
    solved: Option<Solved>,
    pub limits: Limits,
}

impl Session {
    pub fn new(base: Program, limits: Limits) -> Session {
        Session {
            base,
            overlay: Overlay::default(),
            undo: Vec::new(),
            history: Vec::new(),
            solved: None,
            limits,
        }
    }

    /// A session whose program is grounded up front, so unsafe rules and
    /// capacity problems are reported at creation.
    pub fn open(base: Program, limits: Limits) -> Result<Session, ApiError> {
        let mut s = Session::new(base, limits);
        s.solved()?;
        Ok(s)
    }

    pub fn from_text(text: &str, limits: Limits) -> Result<Session, ApiError> {
        Session::open(api::load_program(text)?, limits)
    }

    /// Base program with retracted facts dropped and assumed facts added.
    pub fn program(&self) -> Program {
        let kept = self
            .base
            .filter_rules(|_, r| r.as_fact().is_none_or(|a| !self.overlay.retracted.contains(a)));
        kept.with_facts(&self.overlay.assumed)
    }

    pub fn space(&self) -> Option<&FactSpace> {
        self.overlay.space.as_ref()
    }

    pub fn history(&self) -> &[String] {
        &self.history
    }

    /// Commands recorded so far, one per line.
    pub fn transcript(&self) -> String {
        self.history.iter().map(|l| format!("{l}\n")).collect()
    }

    pub fn state(&self) -> StateResponse {
        let names = |v: &[Atom]| v.iter().map(Atom::to_string).collect();
        StateResponse {
            assumed: names(&self.overlay.assumed),
            retracted: names(&self.overlay.retracted),
            space: self.overlay.space.as_ref().map(ToString::to_string),
            undo_depth: self.undo.len(),
            history: self.history.clone(),
        }
    }

    fn solved(&mut self) -> Result<&mut Solved, ApiError> {
        if self.solved.is_none() {
            self.solved = Some(Solved::new(&self.program(), self.limits)?);
        }
        Ok(self.solved.as_mut().expect("just set"))
    }

    /// Record `command` and save the current overlay for `undo`.
    pub fn record(&mut self, command: impl Into<String>) {
        self.undo.push(self.overlay.clone());
        self.history.push(command.into());
    }

    fn set_overlay(&mut self, overlay: Overlay) {
        if overlay.assumed != self.overlay.assumed || overlay.retracted != self.overlay.retracted {
            self.solved = None;
        }
        self.overlay = overlay;
    }

    pub fn undo(&mut self) -> Result<(), ApiError> {
        let previous = self
            .undo
            .pop()
            .ok_or_else(|| ApiError::precondition("nothing_to_undo", "nothing to undo"))?;
        self.set_overlay(previous);
        self.history.push("undo".into());
        Ok(())
    }

    /// Apply assume/retract edits to the overlay as a single step.
    pub fn edit(&mut self, edits: &[(FactOp, Atom)]) -> Result<(), ApiError> {
        let mut next = self.overlay.clone();
        for (op, fact) in edits {
            if !fact.is_ground() || fact.is_hidden() {
                return Err(ApiError::parse(format!("`{fact}` is not a ground fact")));
            }
            match op {
                FactOp::Assume => {
                    if let Some(k) = next.retracted.iter().position(|a| a == fact) {
                        next.retracted.remove(k);
                    } else if !next.assumed.contains(fact) {
                        next.assumed.push(fact.clone());
                    }
                }
                FactOp::Retract => {
                    if let Some(k) = next.assumed.iter().position(|a| a == fact) {
                        next.assumed.remove(k);
                    } else if self.base.facts().any(|a| a == fact) {
                        if !next.retracted.contains(fact) {
                            next.retracted.push(fact.clone());
                        }
                    } else {
                        return Err(ApiError::precondition("not_a_fact", format!("`{fact}` is not a fact")));
                    }
                }
            }
        }
        self.record(edit_line(edits));
        self.set_overlay(next);
        Ok(())
    }

    pub fn set_space(&mut self, space: FactSpace) {
        let mut next = self.overlay.clone();
        next.space = Some(space);
        self.set_overlay(next);
    }

    pub fn models(&mut self, limit: Option<usize>) -> Result<ModelsResponse, ApiError> {
        api::models(self.solved()?, limit)
    }

    pub fn explain(&mut self, req: &ExplainRequest) -> Result<ExplainResponse, ApiError> {
        api::explain(self.solved()?, req)
    }

    pub fn contrast(
        &mut self,
        mode: &str,
        target: &str,
        space: Option<&FactSpace>,
        all: usize,
    ) -> Result<ContrastResponse, ApiError> {
        let query = api::contrast_query(mode, target)?;
        let space = match space.or(self.overlay.space.as_ref()) {
            Some(s) => s.clone(),
            None => return Err(ApiError::precondition("no_space", "no fact space loaded")),
        };
        api::contrast(&self.program(), &space, &query, all, self.limits)
    }

    pub fn abduce(&mut self, observation: &Atom, abducibles: &[Atom]) -> Result<AbduceResponse, ApiError> {
        api::abduce(&self.program(), observation, abducibles, self.limits)
    }

    pub fn inconsistency(&mut self, soft: Option<&[String]>, k: usize) -> Result<InconsistencyResponse, ApiError> {
        api::inconsistency(&self.program(), soft, k, self.limits)
    }

    /// Run `lines` on a fresh session over the same base program.
    pub fn replay(base: Program, limits: Limits, lines: &[String]) -> Result<Session, ApiError> {
        let mut s = Session::new(base, limits);
        for line in lines {
            s.execute(line).map_err(|e| ApiError::new(e.kind, e.code.clone(), format!("replaying `{line}`: {e}")))?;
        }
        Ok(s)
    }

    pub fn base(&self) -> &Program {
        &self.base
    }

    /// Run one REPL command. Every command except `undo` and the display
    /// toggles pushes an undo snapshot, so `undo` after any command restores
    /// the state before it.
    pub fn execute(&mut self, line: &str) -> Result<Reply, ApiError> {
        let line = line.trim();
        let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match cmd {
            "" => Ok(Reply::Nothing),
            "help" => Ok(Reply::Message(HELP.into())),
            "undo" => {
                self.undo()?;
                Ok(Reply::State(self.state()))
            }
            "state" => Ok(Reply::State(self.state())),
            "assume" | "retract" => {
                let op = if cmd == "assume" { FactOp::Assume } else { FactOp::Retract };
                let facts = parse_facts(rest)?;
                let edits: Vec<(FactOp, Atom)> = facts.into_iter().map(|a| (op, a)).collect();
                self.edit(&edits)?;
                Ok(Reply::State(self.state()))
            }
            "apply" => {
                let mut edits = Vec::new();
                let mut op = None;
                let mut pending = String::new();
                for tok in rest.split_whitespace().chain(["assume"]) {
                    if tok == "assume" || tok == "retract" {
                        if let Some(op) = op {
                            edits.extend(parse_facts(&pending)?.into_iter().map(|a| (op, a)));
                        } else if !pending.trim().is_empty() {
                            return Err(ApiError::usage("usage: apply assume F. ... retract G. ..."));
                        }
                        pending.clear();
                        op = Some(if tok == "assume" { FactOp::Assume } else { FactOp::Retract });
                    } else {
                        pending.push_str(tok);
                        pending.push(' ');
                    }
                }
                self.edit(&edits)?;
                Ok(Reply::State(self.state()))
            }
            "space" => {
                let text = std::fs::read_to_string(rest)
                    .map_err(|e| ApiError::usage(format!("cannot read `{rest}`: {e}")))?;
                let space = api::load_space(&text)?;
                self.record(line);
                self.set_space(space);
                Ok(Reply::State(self.state()))
            }
            "models" => {
                let limit = match rest {
                    "" => None,
                    n => Some(n.parse().map_err(|_| ApiError::usage(format!("bad limit `{n}`")))?),
                };
                let r = self.models(limit)?;
                self.record(line);
                Ok(Reply::Models(r))
            }
            "why" | "whynot" => {
                let (atom, alternatives) = match rest.rsplit_once(char::is_whitespace) {
                    Some((a, k)) if k.parse::<usize>().is_ok() => (a, k.parse().expect("checked")),
                    _ => (rest, 1),
                };
                let req = ExplainRequest {
                    atom: api::parse_atom_arg(atom)?,
                    mode: if cmd == "why" { Mode::In } else { Mode::Out },
                    model: None,
                    alternatives,
                    dot: false,
                };
                let r = self.explain(&req)?;
                self.record(line);
                Ok(Reply::Explain(r))
            }
            "contrast" => {
                let (mode, target) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| ApiError::usage("usage: contrast MODE TARGET [--all K]"))?;
                let (target, all) = match target.split_once("--all") {
                    Some((t, k)) => (
                        t,
                        k.trim().parse().map_err(|_| ApiError::usage(format!("bad count `{}`", k.trim())))?,
                    ),
                    None => (target, 1),
                };
                let r = self.contrast(mode, target, None, all)?;
                self.record(line);
                Ok(Reply::Contrast(r))
            }
            "abduce" => {
                let mut parts = rest.split_whitespace();
                let obs = parts.next().ok_or_else(|| ApiError::usage("usage: abduce OBS ABDUCIBLE..."))?;
                let obs = api::parse_atom_arg(obs)?;
                let abducibles = parts.map(api::parse_atom_arg).collect::<Result<Vec<_>, _>>()?;
                let r = self.abduce(&obs, &abducibles)?;
                self.record(line);
                Ok(Reply::Abduce(r))
            }
            "mus" => {
                let preds: Vec<String> = rest.split_whitespace().map(String::from).collect();
                let r = self.inconsistency((!preds.is_empty()).then_some(&preds[..]), usize::MAX)?;
                self.record(line);
                Ok(Reply::Inconsistency(r))
            }
            other => Err(ApiError::usage(format!("unknown command `{other}`; try `help`"))),
        }
    }
}

fn edit_line(edits: &[(FactOp, Atom)]) -> String {
    let word = |op: FactOp| if op == FactOp::Assume { "assume" } else { "retract" };
    let uniform = edits.windows(2).all(|w| w[0].0 == w[1].0);
    let mut line = String::new();
    if !uniform {
        line.push_str("apply");
    }
    let mut last = None;
    for (op, a) in edits {
        if last != Some(*op) {
            if !line.is_empty() {
                line.push(' ');
            }
            line.push_str(word(*op));
            last = Some(*op);
        }
        line.push_str(&format!(" {a}."));
    }
    line
}

fn parse_facts(text: &str) -> Result<Vec<Atom>, ApiError> {
    let p = api::load_program(text)?;
    if p.is_empty() {
        return Err(ApiError::usage("expected at least one fact"));
    }
    p.rules
        .iter()
        .map(|r| {
            r.as_fact()
                .filter(|a| a.is_ground())
                .cloned()
                .ok_or_else(|| ApiError::parse(format!("`{}` is not a ground fact", Rule::to_string(r))))
        })
        .collect()
}

pub const HELP: &str = "\
models [N]                     list answer sets
why ATOM [K]                   justify ATOM in the first answer set containing it
whynot ATOM [K]                justify the absence of ATOM
contrast MODE TARGET [--all K] minimal fact change (needs `space FILE`)
abduce OBS ABDUCIBLE...        minimal abductive explanations
mus [PRED...]                  minimal inconsistent subsets and correction sets
space FILE                     load a fact space
assume FACT. ...               add facts
retract FACT. ...              remove facts
apply assume F. retract G.     several edits as one undo step
undo                           restore the state before the last command
state                          show the overlay
save transcript FILE           write the command history
json on|off                    toggle JSON output
quit                           leave
";

/// Result of one REPL command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reply {
    Nothing,
    Message(String),
    State(StateResponse),
    Models(ModelsResponse),
    Explain(ExplainResponse),
    Contrast(ContrastResponse),
    Abduce(AbduceResponse),
    Inconsistency(InconsistencyResponse),
}

impl Reply {
    pub fn render(&self, json: bool) -> String {
        macro_rules! out {
            ($r:expr) => {
                if json {
                    format!("{}\n", api::to_json($r))
                } else {
                    $r.render_text()
                }
            };
        }
        match self {
            Reply::Nothing => String::new(),
            Reply::Message(m) => m.clone(),
            Reply::State(r) => out!(r),
            Reply::Models(r) => out!(r),
            Reply::Explain(r) => out!(r),
            Reply::Contrast(r) => out!(r),
            Reply::Abduce(r) => out!(r),
            Reply::Inconsistency(r) => out!(r),
        }
    }
}
