//! Lexer and recursive-descent parser for the clingo-like surface syntax.
//!
//! ```text
//! program   ::= rule*
//! rule      ::= head "."  |  head ":-" body "."  |  ":-" body "."
//! head      ::= atom ("|" atom)*  |  [int] "{" atom (";" atom)* "}" [int]
//! body      ::= item ("," item)*
//! item      ::= ["not"] atom  |  ["not"] aggregate
//! aggregate ::= ("#sum" | "#count") "{" elem (";" elem)* "}" cmp int
//! elem      ::= [int ":"] atom
//! ```
//!
//! `%` starts a line comment; a comment beginning with `%soft` marks the
//! rule ending on that line as a soft fact.

use std::collections::{HashMap, HashSet};

use crate::ast::*;
use crate::error::FrontendError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Dot,
    If,
    Pipe,
    Sum,
    Count,
    Cmp(Comparison),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::If => "`:-`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Sum => "`#sum`".into(),
            Tok::Count => "`#count`".into(),
            Tok::Cmp(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>, expected: Option<&str>) -> FrontendError {
    FrontendError::Parse {
        line,
        column,
        message: message.into(),
        expected: expected.map(str::to_string),
    }
}

struct Lexed {
    tokens: Vec<Token>,
    soft_lines: HashSet<usize>,
}

fn lex(text: &str) -> Result<Lexed, FrontendError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut soft_lines = HashSet::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            let len = $len;
            tokens.push(Token {
                tok: $tok,
                line,
                column: col,
            });
            i += len;
            col += len;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '%' => {
                let start = i;
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                let comment: String = chars[start..i].iter().collect();
                if comment.starts_with("%soft") {
                    soft_lines.insert(line);
                }
                col += i - start;
            }
            '(' => push!(Tok::LParen, 1),
            ')' => push!(Tok::RParen, 1),
            '{' => push!(Tok::LBrace, 1),
            '}' => push!(Tok::RBrace, 1),
            ',' => push!(Tok::Comma, 1),
            ';' => push!(Tok::Semi, 1),
            '.' => push!(Tok::Dot, 1),
            '|' => push!(Tok::Pipe, 1),
            ':' if chars.get(i + 1) == Some(&'-') => push!(Tok::If, 2),
            ':' => push!(Tok::Colon, 1),
            '>' if chars.get(i + 1) == Some(&'=') => push!(Tok::Cmp(Comparison::Ge), 2),
            '>' => push!(Tok::Cmp(Comparison::Gt), 1),
            '<' if chars.get(i + 1) == Some(&'=') => push!(Tok::Cmp(Comparison::Le), 2),
            '<' => push!(Tok::Cmp(Comparison::Lt), 1),
            '!' if chars.get(i + 1) == Some(&'=') => push!(Tok::Cmp(Comparison::Ne), 2),
            '=' => push!(Tok::Cmp(Comparison::Eq), 1),
            '#' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_alphabetic() {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = match word.as_str() {
                    "sum" => Tok::Sum,
                    "count" => Tok::Count,
                    _ => {
                        return Err(err(
                            line,
                            col,
                            format!("unsupported directive `#{word}`"),
                            Some("`#sum` or `#count`"),
                        ))
                    }
                };
                push!(tok, j - i);
            }
            c if c.is_ascii_digit()
                || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) =>
            {
                let start = i;
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[start..j].iter().collect();
                let n: i64 = s
                    .parse()
                    .map_err(|_| err(line, col, format!("integer `{s}` out of range"), None))?;
                push!(Tok::Int(n), j - i);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let s: String = chars[start..j].iter().collect();
                if c == '_' {
                    return Err(err(
                        line,
                        col,
                        format!("identifier `{s}` uses the reserved `_` prefix"),
                        None,
                    ));
                }
                let tok = if c.is_ascii_uppercase() {
                    Tok::Var(s)
                } else {
                    Tok::Ident(s)
                };
                push!(tok, j - i);
            }
            other => {
                return Err(err(line, col, format!("unexpected character `{other}`"), None));
            }
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(Lexed { tokens, soft_lines })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> FrontendError {
        let t = self.peek();
        err(
            t.line,
            t.column,
            format!("unexpected {}", t.tok.describe()),
            Some(expected),
        )
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token, FrontendError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    fn is_not_keyword(&self) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == "not")
    }

    fn int(&mut self, expected: &str) -> Result<i64, FrontendError> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn term(&mut self) -> Result<Term, FrontendError> {
        let t = self.peek().clone();
        let term = match t.tok {
            Tok::Ident(s) => Term::Symbol(s),
            Tok::Var(s) => Term::Var(s),
            Tok::Int(n) => Term::Int(n),
            _ => return Err(self.unexpected("a constant, integer or variable")),
        };
        self.bump();
        if self.peek().tok == Tok::LParen {
            return Err(err(
                t.line,
                t.column,
                format!("function symbol `{term}(...)` not supported; terms must be function-free"),
                Some("`,` or `)`"),
            ));
        }
        Ok(term)
    }

    fn atom(&mut self) -> Result<Atom, FrontendError> {
        let predicate = match &self.peek().tok {
            Tok::Ident(s) if s != "not" => s.clone(),
            _ => return Err(self.unexpected("an atom")),
        };
        self.bump();
        let mut args = Vec::new();
        if self.peek().tok == Tok::LParen {
            self.bump();
            loop {
                args.push(self.term()?);
                match self.peek().tok {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::RParen => {
                        self.bump();
                        break;
                    }
                    _ => return Err(self.unexpected("`,` or `)`")),
                }
            }
        }
        Ok(Atom { predicate, args })
    }

    fn aggregate(&mut self, negated: bool) -> Result<AggregateLiteral, FrontendError> {
        let start = self.bump();
        let function = match start.tok {
            Tok::Sum => AggregateFunction::Sum,
            Tok::Count => AggregateFunction::Count,
            _ => unreachable!("caller checked for an aggregate keyword"),
        };
        self.expect(Tok::LBrace, "`{`")?;
        let mut elements: Vec<AggregateElement> = Vec::new();
        if self.peek().tok == Tok::RBrace {
            return Err(self.unexpected("at least one aggregate element"));
        }
        loop {
            let el_tok = self.peek().clone();
            let weight = if let Tok::Int(n) = el_tok.tok {
                self.bump();
                self.expect(Tok::Colon, "`:` after element weight")?;
                n
            } else {
                1
            };
            if function == AggregateFunction::Count && weight != 1 {
                return Err(err(
                    el_tok.line,
                    el_tok.column,
                    "#count elements must have weight 1",
                    None,
                ));
            }
            let atom = self.atom()?;
            if elements.iter().any(|e| e.atom == atom) {
                return Err(err(
                    el_tok.line,
                    el_tok.column,
                    format!("duplicate aggregate element atom `{atom}`"),
                    None,
                ));
            }
            elements.push(AggregateElement { weight, atom });
            match self.peek().tok {
                Tok::Semi => {
                    self.bump();
                }
                Tok::RBrace => {
                    self.bump();
                    break;
                }
                _ => return Err(self.unexpected("`;` or `}`")),
            }
        }
        let comparison = match self.peek().tok {
            Tok::Cmp(c) => {
                self.bump();
                c
            }
            _ => return Err(self.unexpected("a comparison operator")),
        };
        let bound = self.int("an integer bound")?;
        Ok(AggregateLiteral {
            function,
            elements,
            comparison,
            bound,
            negated,
        })
    }

    fn body_item(&mut self) -> Result<BodyItem, FrontendError> {
        let negated = if self.is_not_keyword() {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().tok {
            Tok::Sum | Tok::Count => Ok(BodyItem::Aggregate(self.aggregate(negated)?)),
            _ => Ok(BodyItem::Literal(Literal {
                atom: self.atom()?,
                negated,
            })),
        }
    }

    fn body(&mut self) -> Result<Vec<BodyItem>, FrontendError> {
        let mut items = vec![self.body_item()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            items.push(self.body_item()?);
        }
        Ok(items)
    }

    fn choice_head(&mut self) -> Result<ChoiceHead, FrontendError> {
        let lower = match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                Some(n)
            }
            _ => None,
        };
        self.expect(Tok::LBrace, "`{`")?;
        let mut atoms = vec![self.atom()?];
        loop {
            match self.peek().tok {
                Tok::Semi => {
                    self.bump();
                    atoms.push(self.atom()?);
                }
                Tok::RBrace => {
                    self.bump();
                    break;
                }
                _ => return Err(self.unexpected("`;` or `}`")),
            }
        }
        let upper = match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                Some(n)
            }
            _ => None,
        };
        Ok(ChoiceHead {
            lower,
            atoms,
            upper,
        })
    }

    /// Returns the rule and the line of its terminating `.`.
    fn rule(&mut self) -> Result<(Rule, Span, usize), FrontendError> {
        let first = self.peek().clone();
        let span = Span {
            line: first.line,
            column: first.column,
        };
        let head = match first.tok {
            Tok::If => Head::Disjunction(Vec::new()),
            Tok::LBrace => Head::Choice(self.choice_head()?),
            Tok::Int(_) if self.peek_at(1) == &Tok::LBrace => Head::Choice(self.choice_head()?),
            _ => {
                let mut atoms = vec![self.atom()?];
                while matches!(self.peek().tok, Tok::Pipe | Tok::Semi) {
                    self.bump();
                    atoms.push(self.atom()?);
                }
                Head::Disjunction(atoms)
            }
        };
        let body = match self.peek().tok {
            Tok::If => {
                self.bump();
                self.body()?
            }
            Tok::Dot if !matches!(&head, Head::Disjunction(h) if h.is_empty()) => Vec::new(),
            _ => return Err(self.unexpected("`:-` or `.`")),
        };
        let dot = self.expect(Tok::Dot, "`.`")?;
        Ok((Rule { head, body }, span, dot.line))
    }
}

fn check_arities(program: &Program) -> Result<(), FrontendError> {
    let mut seen: HashMap<&str, (usize, Span)> = HashMap::new();
    for (i, rule) in program.rules.iter().enumerate() {
        let span = program.span(i).unwrap_or_default();
        for atom in rule.atoms() {
            match seen.get(atom.predicate.as_str()) {
                Some(&(arity, _)) if arity != atom.arity() => {
                    return Err(FrontendError::ArityMismatch {
                        predicate: atom.predicate.clone(),
                        expected: arity,
                        found: atom.arity(),
                        line: span.line,
                        column: span.column,
                    });
                }
                Some(_) => {}
                None => {
                    seen.insert(&atom.predicate, (atom.arity(), span));
                }
            }
        }
    }
    Ok(())
}

/// Parse program text into a validated AST.
pub fn parse_program(text: &str) -> Result<Program, FrontendError> {
    let Lexed { tokens, soft_lines } = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let mut program = Program::default();
    while !parser.at_eof() {
        let (rule, span, end_line) = parser.rule()?;
        program.rules.push(rule);
        program.meta.push(RuleMeta {
            span,
            soft: soft_lines.contains(&end_line),
        });
    }
    check_arities(&program)?;
    Ok(program)
}

/// Parse a single atom such as `eyes(2)`; a trailing `.` is permitted.
pub fn parse_atom(text: &str) -> Result<Atom, FrontendError> {
    let Lexed { tokens, .. } = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let atom = parser.atom()?;
    if parser.peek().tok == Tok::Dot {
        parser.bump();
    }
    if !parser.at_eof() {
        return Err(parser.unexpected("end of input"));
    }
    Ok(atom)
}

/// Parse a comma- or semicolon-separated list of ground atoms, optionally
/// wrapped in braces: `{a, p(1,2)}` or `a,b,c`.
pub fn parse_atom_list(text: &str) -> Result<Vec<Atom>, FrontendError> {
    let Lexed { tokens, .. } = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let braced = parser.peek().tok == Tok::LBrace;
    if braced {
        parser.bump();
    }
    let mut atoms = Vec::new();
    let closing = if braced { Tok::RBrace } else { Tok::Eof };
    if parser.peek().tok != closing {
        loop {
            let t = parser.peek().clone();
            let atom = parser.atom()?;
            if !atom.is_ground() {
                return Err(err(t.line, t.column, format!("atom `{atom}` is not ground"), None));
            }
            atoms.push(atom);
            if matches!(parser.peek().tok, Tok::Comma | Tok::Semi) {
                parser.bump();
            } else {
                break;
            }
        }
    }
    if braced {
        parser.expect(Tok::RBrace, "`}`")?;
    }
    if !parser.at_eof() {
        return Err(parser.unexpected("end of input"));
    }
    Ok(atoms)
}
