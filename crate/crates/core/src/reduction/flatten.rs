use serde::Serialize;

use super::arith::{ArithFormula, ArithTerm, ArithVar};
use super::ReductionError;

/// An additive formula `q1` and the products `zᵢ = sᵢ·tᵢ` it presupposes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlattenResult {
    pub q1: ArithFormula,
    pub triples: Vec<Triple>,
    pub m: usize,
    /// Number of input variables `x₁ … x_k`.
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triple {
    pub s: String,
    pub t: String,
    pub z: String,
    /// Operands of the product, as additive terms over earlier variables.
    #[serde(skip)]
    pub left: ArithTerm,
    #[serde(skip)]
    pub right: ArithTerm,
}

struct Flattener {
    sides: Vec<ArithFormula>,
    triples: Vec<Triple>,
}

impl Flattener {
    fn term(&mut self, t: &ArithTerm) -> ArithTerm {
        match t {
            ArithTerm::Var(_) | ArithTerm::Nat(_) => t.clone(),
            ArithTerm::Add(a, b) => {
                let a = self.term(a);
                let b = self.term(b);
                ArithTerm::Add(Box::new(a), Box::new(b))
            }
            ArithTerm::Mul(a, b) => {
                let a = self.term(a);
                let b = self.term(b);
                let i = self.triples.len() + 1;
                let (s, tt, z) = (ArithVar::S(i), ArithVar::T(i), ArithVar::Z(i));
                self.sides.push(ArithFormula::Eq(ArithTerm::Var(s), a.clone()));
                self.sides.push(ArithFormula::Eq(ArithTerm::Var(tt), b.clone()));
                self.triples.push(Triple { s: s.to_string(), t: tt.to_string(), z: z.to_string(), left: a, right: b });
                ArithTerm::Var(z)
            }
        }
    }

    fn formula(&mut self, f: &ArithFormula) -> ArithFormula {
        let bin = |me: &mut Self, a: &ArithTerm, b: &ArithTerm| (me.term(a), me.term(b));
        match f {
            ArithFormula::Eq(a, b) => {
                let (a, b) = bin(self, a, b);
                ArithFormula::Eq(a, b)
            }
            ArithFormula::Le(a, b) => {
                let (a, b) = bin(self, a, b);
                ArithFormula::Le(a, b)
            }
            ArithFormula::Lt(a, b) => {
                let (a, b) = bin(self, a, b);
                ArithFormula::Lt(a, b)
            }
            ArithFormula::Not(g) => ArithFormula::Not(Box::new(self.formula(g))),
            ArithFormula::And(a, b) => {
                let a = self.formula(a);
                ArithFormula::And(Box::new(a), Box::new(self.formula(b)))
            }
            ArithFormula::Or(a, b) => {
                let a = self.formula(a);
                ArithFormula::Or(Box::new(a), Box::new(self.formula(b)))
            }
        }
    }
}

/// Replaces each product, innermost and leftmost first, by a fresh `zᵢ`
/// and conjoins `sᵢ = left ∧ tᵢ = right` in front of the rewritten formula.
pub fn flatten_multiplications(q: &ArithFormula) -> Result<FlattenResult, ReductionError> {
    if let Some(v) = q.vars().into_iter().find(|v| !matches!(v, ArithVar::X(_))) {
        return Err(ReductionError::ReservedVariable(v.to_string()));
    }
    let mut fl = Flattener { sides: Vec::new(), triples: Vec::new() };
    let body = fl.formula(q);
    let q1 = fl.sides.into_iter().rev().fold(body, |acc, side| ArithFormula::and(side, acc));
    let m = fl.triples.len();
    Ok(FlattenResult { q1, triples: fl.triples, m, k: q.num_inputs() })
}

impl FlattenResult {
    /// Values `(sᵢ, tᵢ, zᵢ)` forced by the inputs `xs`.
    pub fn triple_values(&self, xs: &[u64]) -> Vec<(u128, u128, u128)> {
        let mut vals: Vec<(u128, u128, u128)> = Vec::with_capacity(self.m);
        for tr in &self.triples {
            let env = |v: ArithVar| match v {
                ArithVar::X(i) => xs.get(i - 1).map(|x| u128::from(*x)),
                ArithVar::Z(i) => vals.get(i - 1).map(|t| t.2),
                _ => None,
            };
            let s = tr.left.eval(&env).expect("operands use inputs and earlier products");
            let t = tr.right.eval(&env).expect("operands use inputs and earlier products");
            vals.push((s, t, s.saturating_mul(t)));
        }
        vals
    }

    /// Truth of `q1` at inputs `xs` and the given triple values.
    pub fn eval_q1(&self, xs: &[u64], triples: &[(u128, u128, u128)]) -> Option<bool> {
        self.q1.eval(&|v| match v {
            ArithVar::X(i) => xs.get(i - 1).map(|x| u128::from(*x)),
            ArithVar::S(i) => triples.get(i - 1).map(|t| t.0),
            ArithVar::T(i) => triples.get(i - 1).map(|t| t.1),
            ArithVar::Z(i) => triples.get(i - 1).map(|t| t.2),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::arith::parse_arith;
    use super::*;

    #[test]
    fn single_square() {
        let r = flatten_multiplications(&parse_arith("x1*x1 = 2").unwrap()).unwrap();
        assert_eq!(r.m, 1);
        assert_eq!(r.q1, parse_arith("s1 = x1 and (t1 = x1 and z1 = 2)").unwrap());
        assert!(!r.q1.has_mul());
    }

    #[test]
    fn nested_products_feed_forward() {
        let r = flatten_multiplications(&parse_arith("(x1*x2)*x3 = 6").unwrap()).unwrap();
        assert_eq!(r.m, 2);
        assert_eq!(r.triples[1].left, ArithTerm::Var(ArithVar::Z(1)));
        assert_eq!(r.triple_values(&[1, 2, 3]), vec![(1, 2, 2), (2, 3, 6)]);
    }

    #[test]
    fn additive_input_is_unchanged() {
        let q = parse_arith("x1 + 1 = x1").unwrap();
        let r = flatten_multiplications(&q).unwrap();
        assert_eq!((r.m, &r.q1), (0, &q));
    }

    #[test]
    fn reserved_names_are_rejected() {
        assert!(flatten_multiplications(&parse_arith("z1 = 2").unwrap()).is_err());
    }
}
