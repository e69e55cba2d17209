use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ast::{Formula, ScalarTerm, VectorTerm};
use super::LogicError;
use crate::geometry::{NormedSpace, VecN};
use crate::rational::to_f64;

/// Values for the free variables of a formula.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    #[serde(default)]
    pub vectors: BTreeMap<String, VecN>,
    #[serde(default)]
    pub scalars: BTreeMap<String, f64>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_vector(&mut self, name: impl Into<String>, value: VecN) -> &mut Self {
        self.vectors.insert(name.into(), value);
        self
    }

    pub fn set_scalar(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.scalars.insert(name.into(), value);
        self
    }

    /// Binds the pair variable `name` to `(first, second)`.
    pub fn set_pair(&mut self, name: &str, first: VecN, second: VecN) -> &mut Self {
        self.set_vector(format!("{name}.1"), first);
        self.set_vector(format!("{name}.2"), second)
    }

    /// Binds `name` to the representation `(−s·e₁, s·e₂)` of the real `s`.
    pub fn set_real_pair(&mut self, name: &str, s: f64, e1: &VecN, e2: &VecN) -> &mut Self {
        self.set_pair(name, e1.scale(-s), e2.scale(s))
    }

    /// Overwrites entries of `self` by those of `other`.
    pub fn extend(&mut self, other: &Assignment) {
        self.vectors.extend(other.vectors.iter().map(|(k, v)| (k.clone(), v.clone())));
        self.scalars.extend(other.scalars.iter().map(|(k, v)| (k.clone(), *v)));
    }
}

/// Truth value of a quantifier-free formula, comparing reals up to `tol`:
/// `=` within `tol`, `≤` up to `+tol`, `<` by a margin of more than `tol`,
/// vector equality by max-coordinate distance.
pub fn eval_qf(space: &NormedSpace, f: &Formula, a: &Assignment, tol: f64) -> Result<bool, LogicError> {
    Evaluator { space, assignment: a, tol }.formula(f)
}

/// Value of a scalar term.
pub fn eval_scalar(space: &NormedSpace, t: &ScalarTerm, a: &Assignment) -> Result<f64, LogicError> {
    Evaluator { space, assignment: a, tol: 0.0 }.scalar(t)
}

/// Value of a vector term.
pub fn eval_vector(space: &NormedSpace, t: &VectorTerm, a: &Assignment) -> Result<VecN, LogicError> {
    Evaluator { space, assignment: a, tol: 0.0 }.vector(t)
}

/// `None` if `f` holds at `a`; otherwise the path of abbreviation names
/// down to a false atom, with the measured values of its sides.
pub fn explain_false(
    space: &NormedSpace,
    f: &Formula,
    a: &Assignment,
    tol: f64,
) -> Result<Option<String>, LogicError> {
    let ev = Evaluator { space, assignment: a, tol };
    if ev.formula(f)? {
        return Ok(None);
    }
    let mut path = Vec::new();
    ev.explain(f, &mut path)?;
    Ok(Some(path.join(" > ")))
}

struct Evaluator<'a> {
    space: &'a NormedSpace,
    assignment: &'a Assignment,
    tol: f64,
}

impl Evaluator<'_> {
    fn vector(&self, t: &VectorTerm) -> Result<VecN, LogicError> {
        Ok(match t {
            VectorTerm::Var(n) => match self.assignment.vectors.get(n) {
                Some(v) if v.dim() == self.space.dimension() => v.clone(),
                Some(v) => {
                    return Err(LogicError::Dimension { name: n.clone(), expected: self.space.dimension(), got: v.dim() })
                }
                None if self.assignment.scalars.contains_key(n) => {
                    return Err(LogicError::SortError(format!("{n} is a scalar but used as a vector")))
                }
                None => return Err(LogicError::UnboundVariable(n.clone())),
            },
            VectorTerm::Zero => VecN::zeros(self.space.dimension()),
            VectorTerm::Add(a, b) => self.vector(a)?.add(&self.vector(b)?),
            VectorTerm::Neg(a) => self.vector(a)?.neg(),
            VectorTerm::RatScale(r, a) => self.vector(a)?.scale(to_f64(*r)),
        })
    }

    fn scalar(&self, t: &ScalarTerm) -> Result<f64, LogicError> {
        Ok(match t {
            ScalarTerm::Var(n) => match self.assignment.scalars.get(n) {
                Some(x) => *x,
                None if self.assignment.vectors.contains_key(n) => {
                    return Err(LogicError::SortError(format!("{n} is a vector but used as a scalar")))
                }
                None => return Err(LogicError::UnboundVariable(n.clone())),
            },
            ScalarTerm::RatConst(r) => to_f64(*r),
            ScalarTerm::Norm(v) => self.space.norm(self.vector(v)?.as_slice()),
            ScalarTerm::Add(a, b) => self.scalar(a)? + self.scalar(b)?,
            ScalarTerm::Neg(a) => -self.scalar(a)?,
        })
    }

    /// Descends into a false formula towards a false atom.
    fn explain(&self, f: &Formula, path: &mut Vec<String>) -> Result<(), LogicError> {
        let sides = |a: &ScalarTerm, b: &ScalarTerm| -> Result<String, LogicError> {
            Ok(format!("lhs {:e}, rhs {:e}", self.scalar(a)?, self.scalar(b)?))
        };
        match f {
            Formula::Macro(m) => {
                path.push(m.name.clone());
                self.explain(&m.body, path)
            }
            Formula::And(gs) => match gs.iter().find(|g| !matches!(self.formula(g), Ok(true))) {
                Some(g) => self.explain(g, path),
                None => Ok(()),
            },
            Formula::Or(gs) if !gs.is_empty() => self.explain(&gs[0], path),
            Formula::Implies(_, b) => self.explain(b, path),
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) => {
                path.push(format!("{} ({})", super::print_sentence(f).trim_end(), sides(a, b)?));
                Ok(())
            }
            _ => {
                path.push(super::print_sentence(f).trim_end().to_string());
                Ok(())
            }
        }
    }

    fn formula(&self, f: &Formula) -> Result<bool, LogicError> {
        let tol = self.tol;
        Ok(match f {
            Formula::Eq(a, b) => (self.scalar(a)? - self.scalar(b)?).abs() <= tol,
            Formula::Le(a, b) => self.scalar(a)? <= self.scalar(b)? + tol,
            Formula::Lt(a, b) => self.scalar(a)? < self.scalar(b)? - tol,
            Formula::VecEq(a, b) => self.vector(a)?.max_dist(&self.vector(b)?) <= tol,
            Formula::Not(g) => !self.formula(g)?,
            Formula::And(gs) => {
                for g in gs {
                    if !self.formula(g)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(gs) => {
                for g in gs {
                    if self.formula(g)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.formula(a)? || self.formula(b)?,
            Formula::Macro(m) => self.formula(&m.body)?,
            Formula::Forall(..) | Formula::Exists(..) => return Err(LogicError::NotQuantifierFree),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::ast::Binder;

    fn plane() -> NormedSpace {
        NormedSpace::euclidean(2)
    }

    #[test]
    fn atoms_respect_tolerance() {
        let a = Assignment::new();
        let s = |x: i64, d: i64| ScalarTerm::constant(crate::rational::Rational::new(x, d));
        let space = plane();
        assert!(eval_qf(&space, &Formula::Eq(VectorTerm::Zero.norm(), s(0, 1)), &a, 1e-6).unwrap());
        // |lhs − rhs| = 10⁻⁷ < tol: equal, not strictly less.
        let lhs = s(1, 1);
        let rhs = s(10_000_001, 10_000_000);
        assert!(eval_qf(&space, &Formula::Eq(lhs.clone(), rhs.clone()), &a, 1e-6).unwrap());
        assert!(!eval_qf(&space, &Formula::Lt(lhs.clone(), rhs.clone()), &a, 1e-6).unwrap());
        assert!(eval_qf(&space, &Formula::Le(rhs, lhs), &a, 1e-6).unwrap());
    }

    #[test]
    fn errors() {
        let space = plane();
        let f = Formula::Eq(VectorTerm::var("v").norm(), ScalarTerm::int(1));
        let mut a = Assignment::new();
        assert_eq!(eval_qf(&space, &f, &a, 1e-6), Err(LogicError::UnboundVariable("v".into())));
        a.set_scalar("v", 1.0);
        assert!(matches!(eval_qf(&space, &f, &a, 1e-6), Err(LogicError::SortError(_))));
        let mut b = Assignment::new();
        b.set_vector("v", VecN::from_slice(&[1.0, 0.0, 0.0]));
        assert!(matches!(eval_qf(&space, &f, &b, 1e-6), Err(LogicError::Dimension { .. })));
        let q = Formula::forall(vec![Binder::vector("v")], f);
        assert_eq!(eval_qf(&space, &q, &b, 1e-6), Err(LogicError::NotQuantifierFree));
    }

    #[test]
    fn explanations_name_the_false_atom() {
        let space = plane();
        let mut a = Assignment::new();
        a.set_vector("v", VecN::from_slice(&[3.0, 4.0]));
        let atom = Formula::Eq(VectorTerm::var("v").norm(), ScalarTerm::int(1));
        let f = Formula::named("unit", Formula::And(vec![Formula::Le(ScalarTerm::int(0), ScalarTerm::int(1)), atom]));
        let why = explain_false(&space, &f, &a, 1e-6).unwrap().unwrap();
        assert!(why.starts_with("unit > (= (norm v) 1)"), "{why}");
        assert!(why.contains("lhs 5e0"), "{why}");
        assert_eq!(explain_false(&space, &Formula::And(vec![]), &a, 1e-6).unwrap(), None);
    }

    #[test]
    fn assignment_json_round_trip() {
        let mut a = Assignment::new();
        a.set_real_pair("S", 2.0, &VecN::from_slice(&[1.0, 0.0]), &VecN::from_slice(&[0.0, 1.0]));
        a.set_scalar("s1", 0.5);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<Assignment>(&text).unwrap(), a);
        assert_eq!(a.vectors["S.1"].as_slice(), &[-2.0, 0.0]);
    }
}
