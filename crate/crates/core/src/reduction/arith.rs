//! Quantifier-free arithmetic over the naturals.
//!
//! ```text
//! formula := conj ("or" conj)*
//! conj    := neg ("and" neg)*
//! neg     := "not" neg | "(" formula ")" | term rel term
//! rel     := "=" | "<=" | "<"
//! term    := prod ("+" prod)*
//! prod    := factor ("*" factor)*
//! factor  := var | natural | "(" term ")"
//! var     := x<i> | s<i> | t<i> | z<i>     (i ≥ 1)
//! ```
//!
//! `x`-variables are the inputs; `s`, `t`, `z` are reserved for the
//! products introduced by flattening.

use std::fmt;

use crate::logic::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithVar {
    X(usize),
    S(usize),
    T(usize),
    Z(usize),
}

impl fmt::Display for ArithVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithVar::X(i) => write!(f, "x{i}"),
            ArithVar::S(i) => write!(f, "s{i}"),
            ArithVar::T(i) => write!(f, "t{i}"),
            ArithVar::Z(i) => write!(f, "z{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArithTerm {
    Var(ArithVar),
    Nat(u64),
    Add(Box<ArithTerm>, Box<ArithTerm>),
    Mul(Box<ArithTerm>, Box<ArithTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArithFormula {
    Eq(ArithTerm, ArithTerm),
    Le(ArithTerm, ArithTerm),
    /// `a < b`, read as `a ≤ b ∧ ¬(a = b)`.
    Lt(ArithTerm, ArithTerm),
    Not(Box<ArithFormula>),
    And(Box<ArithFormula>, Box<ArithFormula>),
    Or(Box<ArithFormula>, Box<ArithFormula>),
}

impl ArithTerm {
    pub fn x(i: usize) -> Self {
        ArithTerm::Var(ArithVar::X(i))
    }

    pub fn has_mul(&self) -> bool {
        match self {
            ArithTerm::Var(_) | ArithTerm::Nat(_) => false,
            ArithTerm::Add(a, b) => a.has_mul() || b.has_mul(),
            ArithTerm::Mul(..) => true,
        }
    }

    fn vars(&self, out: &mut Vec<ArithVar>) {
        match self {
            ArithTerm::Var(v) => out.push(*v),
            ArithTerm::Nat(_) => {}
            ArithTerm::Add(a, b) | ArithTerm::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    /// Value with saturating arithmetic; `None` if a variable is missing.
    pub fn eval(&self, env: &dyn Fn(ArithVar) -> Option<u128>) -> Option<u128> {
        Some(match self {
            ArithTerm::Var(v) => env(*v)?,
            ArithTerm::Nat(n) => u128::from(*n),
            ArithTerm::Add(a, b) => a.eval(env)?.saturating_add(b.eval(env)?),
            ArithTerm::Mul(a, b) => a.eval(env)?.saturating_mul(b.eval(env)?),
        })
    }
}

impl ArithFormula {
    pub fn and(a: ArithFormula, b: ArithFormula) -> Self {
        ArithFormula::And(Box::new(a), Box::new(b))
    }

    pub fn has_mul(&self) -> bool {
        match self {
            ArithFormula::Eq(a, b) | ArithFormula::Le(a, b) | ArithFormula::Lt(a, b) => a.has_mul() || b.has_mul(),
            ArithFormula::Not(f) => f.has_mul(),
            ArithFormula::And(a, b) | ArithFormula::Or(a, b) => a.has_mul() || b.has_mul(),
        }
    }

    /// Variables in order of first occurrence, without repetition.
    pub fn vars(&self) -> Vec<ArithVar> {
        let mut all = Vec::new();
        self.collect_vars(&mut all);
        let mut seen = std::collections::BTreeSet::new();
        all.retain(|v| seen.insert(*v));
        all
    }

    fn collect_vars(&self, out: &mut Vec<ArithVar>) {
        match self {
            ArithFormula::Eq(a, b) | ArithFormula::Le(a, b) | ArithFormula::Lt(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            ArithFormula::Not(f) => f.collect_vars(out),
            ArithFormula::And(a, b) | ArithFormula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Largest index of an `x`-variable (0 if there is none).
    pub fn num_inputs(&self) -> usize {
        self.vars().iter().filter_map(|v| if let ArithVar::X(i) = v { Some(*i) } else { None }).max().unwrap_or(0)
    }

    pub fn eval(&self, env: &dyn Fn(ArithVar) -> Option<u128>) -> Option<bool> {
        Some(match self {
            ArithFormula::Eq(a, b) => a.eval(env)? == b.eval(env)?,
            ArithFormula::Le(a, b) => a.eval(env)? <= b.eval(env)?,
            ArithFormula::Lt(a, b) => a.eval(env)? < b.eval(env)?,
            ArithFormula::Not(f) => !f.eval(env)?,
            ArithFormula::And(a, b) => a.eval(env)? && b.eval(env)?,
            ArithFormula::Or(a, b) => a.eval(env)? || b.eval(env)?,
        })
    }

    /// Truth at `x_i = xs[i-1]`; `None` if other variables occur or `xs`
    /// is too short.
    pub fn eval_inputs(&self, xs: &[u64]) -> Option<bool> {
        self.eval(&|v| match v {
            ArithVar::X(i) => xs.get(i - 1).map(|x| u128::from(*x)),
            _ => None,
        })
    }
}

// Printing, with just enough parentheses to reparse to the same tree.

fn write_term(t: &ArithTerm, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // level 0: any term, 1: operand of `*` or right operand of `+`, 2: right operand of `*`.
    match t {
        ArithTerm::Var(v) => write!(f, "{v}"),
        ArithTerm::Nat(n) => write!(f, "{n}"),
        ArithTerm::Add(a, b) => {
            if level >= 1 {
                f.write_str("(")?;
            }
            write_term(a, 0, f)?;
            f.write_str(" + ")?;
            write_term(b, 1, f)?;
            if level >= 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
        ArithTerm::Mul(a, b) => {
            if level >= 2 {
                f.write_str("(")?;
            }
            write_term(a, 1, f)?;
            f.write_str("*")?;
            write_term(b, 2, f)?;
            if level >= 2 {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for ArithTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, f)
    }
}

fn write_formula(g: &ArithFormula, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // level 0: any, 1: operand of `and` (or right operand of `or`), 2: right operand of `and` / under `not`.
    let paren = |f: &mut fmt::Formatter<'_>, open: bool, s: &str| if open { f.write_str(s) } else { Ok(()) };
    match g {
        ArithFormula::Eq(a, b) => write!(f, "{a} = {b}"),
        ArithFormula::Le(a, b) => write!(f, "{a} <= {b}"),
        ArithFormula::Lt(a, b) => write!(f, "{a} < {b}"),
        ArithFormula::Not(h) => {
            f.write_str("not ")?;
            write_formula(h, 2, f)
        }
        ArithFormula::And(a, b) => {
            paren(f, level >= 2, "(")?;
            write_formula(a, 1, f)?;
            f.write_str(" and ")?;
            write_formula(b, 2, f)?;
            paren(f, level >= 2, ")")
        }
        ArithFormula::Or(a, b) => {
            paren(f, level >= 1, "(")?;
            write_formula(a, 0, f)?;
            f.write_str(" or ")?;
            write_formula(b, 1, f)?;
            paren(f, level >= 1, ")")
        }
    }
}

impl fmt::Display for ArithFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, 0, f)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Var(ArithVar),
    Nat(u64),
    Plus,
    Star,
    Eq,
    Le,
    Lt,
    Open,
    Close,
    And,
    Or,
    Not,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let tok = match c {
            _ if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'*' => Tok::Star,
            b'=' => Tok::Eq,
            b'(' => Tok::Open,
            b')' => Tok::Close,
            b'<' if b.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Le
            }
            b'<' => Tok::Lt,
            b'0'..=b'9' => {
                while i + 1 < b.len() && b[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..=i]
                    .parse()
                    .map_err(|_| ParseError::new(start, "natural number literal out of range"))?;
                Tok::Nat(n)
            }
            _ if c.is_ascii_alphabetic() => {
                while i + 1 < b.len() && b[i + 1].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &text[start..=i];
                match word {
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "not" => Tok::Not,
                    _ => Tok::Var(parse_var(word).ok_or_else(|| {
                        ParseError::new(start, format!("unknown identifier {word:?}; variables are x1, x2, ..."))
                    })?),
                }
            }
            _ => return Err(ParseError::new(start, format!("unexpected character {:?}", c as char))),
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

fn parse_var(word: &str) -> Option<ArithVar> {
    let (head, idx) = word.split_at(1);
    if idx.is_empty() || idx.starts_with('0') || !idx.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let i: usize = idx.parse().ok()?;
    Some(match head {
        "x" => ArithVar::X(i),
        "s" => ArithVar::S(i),
        "t" => ArithVar::T(i),
        "z" => ArithVar::Z(i),
        _ => return None,
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(ParseError::new(self.offset(), format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> Result<ArithFormula, ParseError> {
        let mut f = self.conj()?;
        while self.eat(&Tok::Or) {
            f = ArithFormula::Or(Box::new(f), Box::new(self.conj()?));
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<ArithFormula, ParseError> {
        let mut f = self.neg()?;
        while self.eat(&Tok::And) {
            f = ArithFormula::And(Box::new(f), Box::new(self.neg()?));
        }
        Ok(f)
    }

    fn neg(&mut self) -> Result<ArithFormula, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(ArithFormula::Not(Box::new(self.neg()?)));
        }
        if self.peek() == Some(&Tok::Open) {
            // Either a parenthesized formula or an atom whose left term starts with '('.
            let save = self.pos;
            if let Ok(atom) = self.atom() {
                return Ok(atom);
            }
            self.pos = save;
            self.pos += 1;
            let f = self.formula()?;
            self.expect(&Tok::Close, "')'")?;
            return Ok(f);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<ArithFormula, ParseError> {
        let lhs = self.term()?;
        let at = self.offset();
        let rel = match self.peek() {
            Some(Tok::Eq) => Tok::Eq,
            Some(Tok::Le) => Tok::Le,
            Some(Tok::Lt) => Tok::Lt,
            _ => return Err(ParseError::new(at, "expected '=', '<=' or '<'")),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(match rel {
            Tok::Eq => ArithFormula::Eq(lhs, rhs),
            Tok::Le => ArithFormula::Le(lhs, rhs),
            _ => ArithFormula::Lt(lhs, rhs),
        })
    }

    fn term(&mut self) -> Result<ArithTerm, ParseError> {
        let mut t = self.prod()?;
        while self.eat(&Tok::Plus) {
            t = ArithTerm::Add(Box::new(t), Box::new(self.prod()?));
        }
        Ok(t)
    }

    fn prod(&mut self) -> Result<ArithTerm, ParseError> {
        let mut t = self.factor()?;
        while self.eat(&Tok::Star) {
            t = ArithTerm::Mul(Box::new(t), Box::new(self.factor()?));
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<ArithTerm, ParseError> {
        let at = self.offset();
        match self.toks.get(self.pos).map(|t| t.0.clone()) {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(ArithTerm::Var(v))
            }
            Some(Tok::Nat(n)) => {
                self.pos += 1;
                Ok(ArithTerm::Nat(n))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(&Tok::Close, "')'")?;
                Ok(t)
            }
            Some(_) => Err(ParseError::new(at, "expected a variable, a natural number or '('")),
            None => Err(ParseError::new(at, "unexpected end of input, expected a term")),
        }
    }
}

pub fn parse_arith(text: &str) -> Result<ArithFormula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len() };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::new(p.offset(), "trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_cases() {
        let f = parse_arith("x1*x1 = 2").unwrap();
        assert_eq!(
            f,
            ArithFormula::Eq(ArithTerm::Mul(Box::new(ArithTerm::x(1)), Box::new(ArithTerm::x(1))), ArithTerm::Nat(2))
        );
        let g = parse_arith("x1 + 1 = x1").unwrap();
        assert!(!g.has_mul());
        let err = parse_arith("x1 = = 2").unwrap_err();
        assert_eq!(err.offset, 5);
        assert!(parse_arith("y1 = 2").is_err());
        assert!(parse_arith("x0 = 2").is_err());
        assert!(parse_arith("x1 = 2)").is_err());
    }

    #[test]
    fn precedence_and_parentheses() {
        let f = parse_arith("(x1 + 1)*x2 = 3 or not x1 <= 2 and x2 < 1").unwrap();
        let ArithFormula::Or(a, b) = &f else { panic!("{f:?}") };
        assert!(matches!(**a, ArithFormula::Eq(ArithTerm::Mul(..), _)));
        assert!(matches!(**b, ArithFormula::And(..)));
        let g = parse_arith("(x1 = 1 or x1 = 2) and x2 = 0").unwrap();
        assert!(matches!(g, ArithFormula::And(..)));
    }

    #[test]
    fn print_round_trip() {
        for text in [
            "x1*x1 = 2",
            "(x1*x2)*x3 = 6",
            "x1*(x2*x3) = 6",
            "x1 + (x2 + x3) = x3*(x1 + 1)",
            "not (x1 = 1 and x2 = 2) or x1 < 3",
            "x1 = 1 or (x2 = 1 or x3 = 1)",
            "x1 = 1 and (x2 = 1 and x3 = 1)",
            "not not x1 = 0",
        ] {
            let f = parse_arith(text).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_arith(&printed).unwrap(), f, "{text} -> {printed}");
        }
    }

    #[test]
    fn semantics() {
        let f = parse_arith("x1*x1 = 4 and x2 < x1").unwrap();
        assert_eq!(f.num_inputs(), 2);
        assert_eq!(f.eval_inputs(&[2, 1]), Some(true));
        assert_eq!(f.eval_inputs(&[2, 2]), Some(false));
        assert_eq!(f.eval_inputs(&[2]), None);
    }
}
