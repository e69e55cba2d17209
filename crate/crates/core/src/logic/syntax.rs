//! Prefix concrete syntax.
//!
//! ```text
//! formula := (= s s) | (<= s s) | (< s s) | (veq v v)
//!          | (not f) | (and f*) | (or f*) | (=> f f)
//!          | (forall (binder+) f) | (exists (binder+) f)
//! binder  := (name vec) | (name real)
//! v       := name | zero | (vadd v v) | (vneg v) | (vscale rat v)
//! s       := name | rat | (norm v) | (+ s s) | (- s)
//! rat     := integer | integer/integer
//! ```
//!
//! Names start with a letter and may contain letters, digits, `_`, `.` and
//! `'`. `;` starts a comment running to the end of the line. Macro nodes
//! are printed as their expansion.

use std::fmt::Write as _;

use thiserror::Error;

use super::ast::{Binder, Formula, ScalarTerm, Sort, VectorTerm};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}

const WIDTH: usize = 96;

pub fn print_sentence(f: &Formula) -> String {
    let mut out = String::new();
    print_formula(f, 0, &mut out);
    out.push('\n');
    out
}

fn print_formula(f: &Formula, indent: usize, out: &mut String) {
    let flat = flat_formula(f);
    if indent + flat.len() <= WIDTH {
        out.push_str(&flat);
        return;
    }
    let (head, children): (String, Vec<&Formula>) = match f {
        Formula::Macro(m) => return print_formula(&m.body, indent, out),
        Formula::Not(g) => ("not".into(), vec![g]),
        Formula::And(gs) => ("and".into(), gs.iter().collect()),
        Formula::Or(gs) => ("or".into(), gs.iter().collect()),
        Formula::Implies(a, b) => ("=>".into(), vec![a, b]),
        Formula::Forall(bs, g) => (format!("forall {}", binders(bs)), vec![g]),
        Formula::Exists(bs, g) => (format!("exists {}", binders(bs)), vec![g]),
        _ => {
            out.push_str(&flat);
            return;
        }
    };
    out.push('(');
    out.push_str(&head);
    for c in children {
        out.push('\n');
        out.extend(std::iter::repeat(' ').take(indent + 2));
        print_formula(c, indent + 2, out);
    }
    out.push(')');
}

fn binders(bs: &[Binder]) -> String {
    let parts: Vec<String> = bs.iter().map(|b| format!("({} {})", b.name, b.sort)).collect();
    format!("({})", parts.join(" "))
}

fn flat_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(f, &mut s);
    s
}

fn write_formula(f: &Formula, out: &mut String) {
    let list = |out: &mut String, head: &str, gs: &[&Formula]| {
        out.push('(');
        out.push_str(head);
        for g in gs {
            out.push(' ');
            write_formula(g, out);
        }
        out.push(')');
    };
    match f {
        Formula::Eq(a, b) => write_atom(out, "=", a, b),
        Formula::Le(a, b) => write_atom(out, "<=", a, b),
        Formula::Lt(a, b) => write_atom(out, "<", a, b),
        Formula::VecEq(a, b) => {
            out.push_str("(veq ");
            write_vector(a, out);
            out.push(' ');
            write_vector(b, out);
            out.push(')');
        }
        Formula::Not(g) => list(out, "not", &[g]),
        Formula::And(gs) => list(out, "and", &gs.iter().collect::<Vec<_>>()),
        Formula::Or(gs) => list(out, "or", &gs.iter().collect::<Vec<_>>()),
        Formula::Implies(a, b) => list(out, "=>", &[a, b]),
        Formula::Forall(bs, g) => list(out, &format!("forall {}", binders(bs)), &[g]),
        Formula::Exists(bs, g) => list(out, &format!("exists {}", binders(bs)), &[g]),
        Formula::Macro(m) => write_formula(&m.body, out),
    }
}

fn write_atom(out: &mut String, op: &str, a: &ScalarTerm, b: &ScalarTerm) {
    let _ = write!(out, "({op} ");
    write_scalar(a, out);
    out.push(' ');
    write_scalar(b, out);
    out.push(')');
}

fn write_vector(t: &VectorTerm, out: &mut String) {
    match t {
        VectorTerm::Var(n) => out.push_str(n),
        VectorTerm::Zero => out.push_str("zero"),
        VectorTerm::Add(a, b) => {
            out.push_str("(vadd ");
            write_vector(a, out);
            out.push(' ');
            write_vector(b, out);
            out.push(')');
        }
        VectorTerm::Neg(a) => {
            out.push_str("(vneg ");
            write_vector(a, out);
            out.push(')');
        }
        VectorTerm::RatScale(r, a) => {
            let _ = write!(out, "(vscale {r} ");
            write_vector(a, out);
            out.push(')');
        }
    }
}

fn write_scalar(t: &ScalarTerm, out: &mut String) {
    match t {
        ScalarTerm::Var(n) => out.push_str(n),
        ScalarTerm::RatConst(r) => {
            let _ = write!(out, "{r}");
        }
        ScalarTerm::Norm(v) => {
            out.push_str("(norm ");
            write_vector(v, out);
            out.push(')');
        }
        ScalarTerm::Add(a, b) => {
            out.push_str("(+ ");
            write_scalar(a, out);
            out.push(' ');
            write_scalar(b, out);
            out.push(')');
        }
        ScalarTerm::Neg(a) => {
            out.push_str("(- ");
            write_scalar(a, out);
            out.push(')');
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Parser<'a> {
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
    end: usize,
}

fn tokenize(text: &str) -> Vec<(Tok<'_>, usize)> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                toks.push((Tok::Open, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::Close, i));
                i += 1;
            }
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !matches!(bytes[i], b'(' | b')' | b';') && !bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                toks.push((Tok::Atom(&text[start..i]), start));
            }
        }
    }
    toks
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\''))
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok<'a>, usize)> {
        self.toks.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.1)
    }

    fn next(&mut self, what: &str) -> Result<(Tok<'a>, usize), ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| ParseError::new(self.end, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn open(&mut self, what: &str) -> Result<(), ParseError> {
        match self.next(what)? {
            (Tok::Open, _) => Ok(()),
            (_, at) => Err(ParseError::new(at, format!("expected '(' starting {what}"))),
        }
    }

    fn close(&mut self) -> Result<(), ParseError> {
        match self.next("')'")? {
            (Tok::Close, _) => Ok(()),
            (_, at) => Err(ParseError::new(at, "expected ')'")),
        }
    }

    fn head(&mut self, what: &str) -> Result<(&'a str, usize), ParseError> {
        match self.next(what)? {
            (Tok::Atom(a), at) => Ok((a, at)),
            (_, at) => Err(ParseError::new(at, format!("expected an operator for {what}"))),
        }
    }

    fn at_close(&self) -> bool {
        matches!(self.peek(), Some((Tok::Close, _)))
    }

    fn rational(&self, s: &str, at: usize) -> Result<Rational, ParseError> {
        crate::rational::parse(s).ok_or_else(|| ParseError::new(at, format!("invalid rational {s:?}")))
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.open("a formula")?;
        let (op, at) = self.head("a formula")?;
        let f = match op {
            "=" | "<=" | "<" => {
                let a = self.scalar()?;
                let b = self.scalar()?;
                match op {
                    "=" => Formula::Eq(a, b),
                    "<=" => Formula::Le(a, b),
                    _ => Formula::Lt(a, b),
                }
            }
            "veq" => Formula::VecEq(self.vector()?, self.vector()?),
            "not" => Formula::not(self.formula()?),
            "and" | "or" => {
                let mut gs = Vec::new();
                while !self.at_close() {
                    gs.push(self.formula()?);
                }
                if op == "and" {
                    Formula::And(gs)
                } else {
                    Formula::Or(gs)
                }
            }
            "=>" => Formula::implies(self.formula()?, self.formula()?),
            "forall" | "exists" => {
                let bs = self.binders()?;
                let body = self.formula()?;
                if op == "forall" {
                    Formula::forall(bs, body)
                } else {
                    Formula::exists(bs, body)
                }
            }
            _ => return Err(ParseError::new(at, format!("unknown formula operator {op:?}"))),
        };
        self.close()?;
        Ok(f)
    }

    fn binders(&mut self) -> Result<Vec<Binder>, ParseError> {
        self.open("a binder list")?;
        let mut bs = Vec::new();
        while !self.at_close() {
            self.open("a binder")?;
            let (name, at) = self.head("a variable name")?;
            if !is_name(name) || name == "zero" {
                return Err(ParseError::new(at, format!("invalid variable name {name:?}")));
            }
            let (sort, at) = self.head("a sort")?;
            let sort = match sort {
                "vec" => Sort::Vector,
                "real" => Sort::Scalar,
                _ => return Err(ParseError::new(at, format!("unknown sort {sort:?}, expected vec or real"))),
            };
            self.close()?;
            bs.push(Binder { name: name.to_string(), sort });
        }
        if bs.is_empty() {
            return Err(ParseError::new(self.offset(), "empty binder list"));
        }
        self.close()?;
        Ok(bs)
    }

    fn vector(&mut self) -> Result<VectorTerm, ParseError> {
        match self.next("a vector term")? {
            (Tok::Atom("zero"), _) => Ok(VectorTerm::Zero),
            (Tok::Atom(n), _) if is_name(n) => Ok(VectorTerm::var(n)),
            (Tok::Atom(n), at) => Err(ParseError::new(at, format!("expected a vector term, found {n:?}"))),
            (Tok::Close, at) => Err(ParseError::new(at, "expected a vector term, found ')'")),
            (Tok::Open, _) => {
                let (op, at) = self.head("a vector term")?;
                let t = match op {
                    "vadd" => self.vector()? + self.vector()?,
                    "vneg" => -self.vector()?,
                    "vscale" => {
                        let (r, rat) = self.head("a rational")?;
                        let r = self.rational(r, rat)?;
                        self.vector()?.scale(r)
                    }
                    _ => return Err(ParseError::new(at, format!("unknown vector operator {op:?}"))),
                };
                self.close()?;
                Ok(t)
            }
        }
    }

    fn scalar(&mut self) -> Result<ScalarTerm, ParseError> {
        match self.next("a scalar term")? {
            (Tok::Atom(n), at) if n == "zero" => {
                Err(ParseError::new(at, "expected a scalar term, found the vector zero"))
            }
            (Tok::Atom(n), _) if is_name(n) => Ok(ScalarTerm::var(n)),
            (Tok::Atom(n), at) => Ok(ScalarTerm::constant(self.rational(n, at)?)),
            (Tok::Close, at) => Err(ParseError::new(at, "expected a scalar term, found ')'")),
            (Tok::Open, _) => {
                let (op, at) = self.head("a scalar term")?;
                let t = match op {
                    "norm" => self.vector()?.norm(),
                    "+" => self.scalar()? + self.scalar()?,
                    "-" => -self.scalar()?,
                    _ => return Err(ParseError::new(at, format!("unknown scalar operator {op:?}"))),
                };
                self.close()?;
                Ok(t)
            }
        }
    }
}

pub fn parse_sentence(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: tokenize(text), pos: 0, end: text.len() };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::new(p.offset(), "trailing input after formula"));
    }
    Ok(f)
}
