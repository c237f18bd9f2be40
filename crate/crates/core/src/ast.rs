//! Abstract syntax of the input language.
//!
//! Programs are finite lists of disjunctive rules over function-free atoms,
//! optionally carrying `#sum`/`#count` aggregate literals in rule bodies and
//! choice heads. `Display` implementations produce the concrete surface
//! syntax accepted by [`crate::parser`], so printing and re-parsing a program
//! yields a structurally equal AST.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Predicates and constants starting with this prefix are generated
/// internally (choice complements) and rejected by the parser.
pub const HIDDEN_PREFIX: &str = "_x_";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Symbol(String),
    Int(i64),
    Var(String),
}

impl Term {
    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Symbol(s) | Term::Var(s) => f.write_str(s),
            Term::Int(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    /// A zero-arity atom.
    pub fn prop(predicate: impl Into<String>) -> Self {
        Atom::new(predicate, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        !self.args.iter().any(Term::is_var)
    }

    pub fn is_hidden(&self) -> bool {
        self.predicate.starts_with(HIDDEN_PREFIX)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            _ => None,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            negated: true,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregateFunction {
    Sum,
    Count,
}

impl fmt::Display for AggregateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggregateFunction::Sum => "#sum",
            AggregateFunction::Count => "#count",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
}

impl Comparison {
    pub const ALL: [Comparison; 6] = [
        Comparison::Gt,
        Comparison::Ge,
        Comparison::Lt,
        Comparison::Le,
        Comparison::Eq,
        Comparison::Ne,
    ];

    pub fn holds(self, value: i64, bound: i64) -> bool {
        match self {
            Comparison::Gt => value > bound,
            Comparison::Ge => value >= bound,
            Comparison::Lt => value < bound,
            Comparison::Le => value <= bound,
            Comparison::Eq => value == bound,
            Comparison::Ne => value != bound,
        }
    }

    /// The comparison that holds exactly when `self` does not.
    pub fn complement(self) -> Comparison {
        match self {
            Comparison::Gt => Comparison::Le,
            Comparison::Ge => Comparison::Lt,
            Comparison::Lt => Comparison::Ge,
            Comparison::Le => Comparison::Gt,
            Comparison::Eq => Comparison::Ne,
            Comparison::Ne => Comparison::Eq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Gt => ">",
            Comparison::Ge => ">=",
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Eq => "=",
            Comparison::Ne => "!=",
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AggregateElement {
    pub weight: i64,
    pub atom: Atom,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AggregateLiteral {
    pub function: AggregateFunction,
    pub elements: Vec<AggregateElement>,
    pub comparison: Comparison,
    pub bound: i64,
    pub negated: bool,
}

impl fmt::Display for AggregateLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{}{{", self.function)?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            match self.function {
                AggregateFunction::Count => write!(f, "{}", e.atom)?,
                AggregateFunction::Sum => write!(f, "{}:{}", e.weight, e.atom)?,
            }
        }
        write!(f, "}} {} {}", self.comparison, self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BodyItem {
    Literal(Literal),
    Aggregate(AggregateLiteral),
}

impl fmt::Display for BodyItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyItem::Literal(l) => write!(f, "{l}"),
            BodyItem::Aggregate(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChoiceHead {
    pub lower: Option<i64>,
    pub atoms: Vec<Atom>,
    pub upper: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Head {
    /// Disjunction of atoms; empty for constraints.
    Disjunction(Vec<Atom>),
    Choice(ChoiceHead),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyItem>,
}

impl Rule {
    pub fn fact(atom: Atom) -> Self {
        Rule {
            head: Head::Disjunction(vec![atom]),
            body: Vec::new(),
        }
    }

    pub fn head_atoms(&self) -> &[Atom] {
        match &self.head {
            Head::Disjunction(atoms) => atoms,
            Head::Choice(c) => &c.atoms,
        }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty() && matches!(&self.head, Head::Disjunction(h) if h.len() == 1)
    }

    /// The fact atom, if this rule is a fact.
    pub fn as_fact(&self) -> Option<&Atom> {
        match &self.head {
            Head::Disjunction(h) if h.len() == 1 && self.body.is_empty() => h.first(),
            _ => None,
        }
    }

    pub fn is_constraint(&self) -> bool {
        matches!(&self.head, Head::Disjunction(h) if h.is_empty())
    }

    pub fn is_normal(&self) -> bool {
        matches!(&self.head, Head::Disjunction(h) if h.len() == 1)
    }

    pub fn is_choice(&self) -> bool {
        matches!(self.head, Head::Choice(_))
    }

    pub fn is_ground(&self) -> bool {
        self.atoms().all(Atom::is_ground)
    }

    /// Every atom occurring in the rule, head first, then body in order.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.head_atoms()
            .iter()
            .chain(self.body.iter().flat_map(|b| -> Box<dyn Iterator<Item = &Atom>> {
                match b {
                    BodyItem::Literal(l) => Box::new(std::iter::once(&l.atom)),
                    BodyItem::Aggregate(a) => Box::new(a.elements.iter().map(|e| &e.atom)),
                }
            }))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Disjunction(atoms) => {
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write!(f, "{a}")?;
                }
            }
            Head::Choice(c) => {
                if let Some(l) = c.lower {
                    write!(f, "{l} ")?;
                }
                f.write_str("{")?;
                for (i, a) in c.atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("}")?;
                if let Some(u) = c.upper {
                    write!(f, " {u}")?;
                }
            }
        }
        if !self.body.is_empty() {
            if self.is_constraint() {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{b}")?;
            }
        }
        f.write_str(".")
    }
}

/// Source location of a rule (1-based).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Per-rule metadata collected by the parser.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleMeta {
    pub span: Span,
    /// The rule's line carries a `%soft` comment marker.
    pub soft: bool,
}

/// A parsed program. Equality compares rules only, never metadata.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub meta: Vec<RuleMeta>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl Eq for Program {}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        let meta = vec![RuleMeta::default(); rules.len()];
        Program { rules, meta }
    }

    pub fn push(&mut self, rule: Rule) {
        self.rules.push(rule);
        self.meta.push(RuleMeta::default());
    }

    pub fn span(&self, index: usize) -> Option<Span> {
        self.meta.get(index).map(|m| m.span)
    }

    pub fn is_soft(&self, index: usize) -> bool {
        self.meta.get(index).is_some_and(|m| m.soft)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Atoms of all facts, in program order.
    pub fn facts(&self) -> impl Iterator<Item = &Atom> {
        self.rules.iter().filter_map(Rule::as_fact)
    }

    /// A copy of the program with `extra` facts appended.
    pub fn with_facts<'a>(&self, extra: impl IntoIterator<Item = &'a Atom>) -> Program {
        let mut p = self.clone();
        for a in extra {
            p.push(Rule::fact(a.clone()));
        }
        p
    }

    /// Keep only rules for which `keep` returns true.
    pub fn filter_rules(&self, mut keep: impl FnMut(usize, &Rule) -> bool) -> Program {
        let mut out = Program::default();
        for (i, r) in self.rules.iter().enumerate() {
            if keep(i, r) {
                out.rules.push(r.clone());
                out.meta.push(self.meta.get(i).copied().unwrap_or_default());
            }
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Render a program in the surface syntax, one rule per line.
pub fn pretty_print(p: &Program) -> String {
    p.to_string()
}
