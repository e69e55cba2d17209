use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LogicError;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sort {
    Vector,
    Scalar,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Vector => "vec",
            Sort::Scalar => "real",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binder {
    pub name: String,
    pub sort: Sort,
}

impl Binder {
    pub fn vector(name: impl Into<String>) -> Self {
        Binder { name: name.into(), sort: Sort::Vector }
    }

    pub fn scalar(name: impl Into<String>) -> Self {
        Binder { name: name.into(), sort: Sort::Scalar }
    }
}

/// Vector-sort terms. Scaling is by rational constants only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VectorTerm {
    Var(String),
    Zero,
    Add(Box<VectorTerm>, Box<VectorTerm>),
    Neg(Box<VectorTerm>),
    RatScale(Rational, Box<VectorTerm>),
}

/// Scalar-sort terms. There is no product of two scalar terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScalarTerm {
    Var(String),
    RatConst(Rational),
    Norm(Box<VectorTerm>),
    Add(Box<ScalarTerm>, Box<ScalarTerm>),
    Neg(Box<ScalarTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(ScalarTerm, ScalarTerm),
    Le(ScalarTerm, ScalarTerm),
    Lt(ScalarTerm, ScalarTerm),
    VecEq(VectorTerm, VectorTerm),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<Binder>, Box<Formula>),
    Exists(Vec<Binder>, Box<Formula>),
    /// A named abbreviation together with its expansion.
    Macro(Box<MacroUse>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MacroUse {
    pub name: String,
    pub body: Formula,
}

impl VectorTerm {
    pub fn var(name: impl Into<String>) -> Self {
        VectorTerm::Var(name.into())
    }

    pub fn scale(self, r: Rational) -> Self {
        VectorTerm::RatScale(r, Box::new(self))
    }

    /// `(self + other)/2`.
    pub fn midpoint(self, other: VectorTerm) -> Self {
        (self + other).scale(Rational::new(1, 2))
    }

    pub fn norm(self) -> ScalarTerm {
        ScalarTerm::Norm(Box::new(self))
    }

    fn visit_vars<'a>(&'a self, out: &mut dyn FnMut(&'a str, Sort)) {
        match self {
            VectorTerm::Var(n) => out(n, Sort::Vector),
            VectorTerm::Zero => {}
            VectorTerm::Add(a, b) => {
                a.visit_vars(out);
                b.visit_vars(out);
            }
            VectorTerm::Neg(a) | VectorTerm::RatScale(_, a) => a.visit_vars(out),
        }
    }

    fn rename(&self, map: &dyn Fn(&str) -> Option<String>) -> VectorTerm {
        match self {
            VectorTerm::Var(n) => VectorTerm::Var(map(n).unwrap_or_else(|| n.clone())),
            VectorTerm::Zero => VectorTerm::Zero,
            VectorTerm::Add(a, b) => VectorTerm::Add(Box::new(a.rename(map)), Box::new(b.rename(map))),
            VectorTerm::Neg(a) => VectorTerm::Neg(Box::new(a.rename(map))),
            VectorTerm::RatScale(r, a) => VectorTerm::RatScale(*r, Box::new(a.rename(map))),
        }
    }

    fn size(&self) -> usize {
        match self {
            VectorTerm::Var(_) | VectorTerm::Zero => 1,
            VectorTerm::Add(a, b) => 1 + a.size() + b.size(),
            VectorTerm::Neg(a) | VectorTerm::RatScale(_, a) => 1 + a.size(),
        }
    }
}

impl std::ops::Add for VectorTerm {
    type Output = VectorTerm;
    fn add(self, rhs: VectorTerm) -> VectorTerm {
        VectorTerm::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for VectorTerm {
    type Output = VectorTerm;
    fn sub(self, rhs: VectorTerm) -> VectorTerm {
        self + (-rhs)
    }
}

impl std::ops::Neg for VectorTerm {
    type Output = VectorTerm;
    fn neg(self) -> VectorTerm {
        VectorTerm::Neg(Box::new(self))
    }
}

impl ScalarTerm {
    pub fn var(name: impl Into<String>) -> Self {
        ScalarTerm::Var(name.into())
    }

    pub fn constant(r: Rational) -> Self {
        ScalarTerm::RatConst(r)
    }

    pub fn int(i: i64) -> Self {
        ScalarTerm::RatConst(Rational::from_integer(i))
    }

    fn visit_vars<'a>(&'a self, out: &mut dyn FnMut(&'a str, Sort)) {
        match self {
            ScalarTerm::Var(n) => out(n, Sort::Scalar),
            ScalarTerm::RatConst(_) => {}
            ScalarTerm::Norm(v) => v.visit_vars(out),
            ScalarTerm::Add(a, b) => {
                a.visit_vars(out);
                b.visit_vars(out);
            }
            ScalarTerm::Neg(a) => a.visit_vars(out),
        }
    }

    fn rename(&self, map: &dyn Fn(&str) -> Option<String>) -> ScalarTerm {
        match self {
            ScalarTerm::Var(n) => ScalarTerm::Var(map(n).unwrap_or_else(|| n.clone())),
            ScalarTerm::RatConst(r) => ScalarTerm::RatConst(*r),
            ScalarTerm::Norm(v) => ScalarTerm::Norm(Box::new(v.rename(map))),
            ScalarTerm::Add(a, b) => ScalarTerm::Add(Box::new(a.rename(map)), Box::new(b.rename(map))),
            ScalarTerm::Neg(a) => ScalarTerm::Neg(Box::new(a.rename(map))),
        }
    }

    fn size(&self) -> usize {
        match self {
            ScalarTerm::Var(_) | ScalarTerm::RatConst(_) => 1,
            ScalarTerm::Norm(v) => 1 + v.size(),
            ScalarTerm::Add(a, b) => 1 + a.size() + b.size(),
            ScalarTerm::Neg(a) => 1 + a.size(),
        }
    }
}

impl std::ops::Add for ScalarTerm {
    type Output = ScalarTerm;
    fn add(self, rhs: ScalarTerm) -> ScalarTerm {
        ScalarTerm::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for ScalarTerm {
    type Output = ScalarTerm;
    fn neg(self) -> ScalarTerm {
        ScalarTerm::Neg(Box::new(self))
    }
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `a ⇔ b`, written as the conjunction of both implications.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![Formula::implies(a.clone(), b.clone()), Formula::implies(b, a)])
    }

    pub fn forall(binders: Vec<Binder>, body: Formula) -> Formula {
        Formula::Forall(binders, Box::new(body))
    }

    pub fn exists(binders: Vec<Binder>, body: Formula) -> Formula {
        Formula::Exists(binders, Box::new(body))
    }

    pub fn named(name: impl Into<String>, body: Formula) -> Formula {
        Formula::Macro(Box::new(MacroUse { name: name.into(), body }))
    }

    /// Replaces every macro node by its expansion.
    pub fn expand(&self) -> Formula {
        match self {
            Formula::Macro(m) => m.body.expand(),
            Formula::Eq(..) | Formula::Le(..) | Formula::Lt(..) | Formula::VecEq(..) => self.clone(),
            Formula::Not(f) => Formula::not(f.expand()),
            Formula::And(fs) => Formula::And(fs.iter().map(Formula::expand).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(Formula::expand).collect()),
            Formula::Implies(a, b) => Formula::implies(a.expand(), b.expand()),
            Formula::Forall(bs, f) => Formula::forall(bs.clone(), f.expand()),
            Formula::Exists(bs, f) => Formula::exists(bs.clone(), f.expand()),
        }
    }

    pub fn has_macros(&self) -> bool {
        match self {
            Formula::Macro(_) => true,
            Formula::Eq(..) | Formula::Le(..) | Formula::Lt(..) | Formula::VecEq(..) => false,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.has_macros(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(Formula::has_macros),
            Formula::Implies(a, b) => a.has_macros() || b.has_macros(),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => false,
            Formula::Macro(m) => m.body.is_quantifier_free(),
            Formula::Eq(..) | Formula::Le(..) | Formula::Lt(..) | Formula::VecEq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Implies(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
        }
    }

    /// Number of nodes, counting terms, with macros expanded.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::Macro(m) => m.body.node_count(),
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) => 1 + a.size() + b.size(),
            Formula::VecEq(a, b) => 1 + a.size() + b.size(),
            Formula::Not(f) => 1 + f.node_count(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::node_count).sum::<usize>(),
            Formula::Implies(a, b) => 1 + a.node_count() + b.node_count(),
            Formula::Forall(bs, f) | Formula::Exists(bs, f) => 1 + bs.len() + f.node_count(),
        }
    }

    /// Checks that every variable is used at a single sort within its scope
    /// and returns the sorts of the free variables.
    pub fn sort_check(&self) -> Result<BTreeMap<String, Sort>, LogicError> {
        let mut free = BTreeMap::new();
        let mut scope: Vec<(String, Sort)> = Vec::new();
        self.sort_walk(&mut scope, &mut free)?;
        Ok(free)
    }

    /// Free variables with their sorts.
    ///
    /// # Panics
    /// If the formula is ill-sorted; use [`Formula::sort_check`] to get an error.
    pub fn free_vars(&self) -> BTreeMap<String, Sort> {
        self.sort_check().expect("ill-sorted formula")
    }

    pub fn is_closed(&self) -> bool {
        self.sort_check().map(|fv| fv.is_empty()).unwrap_or(false)
    }

    fn sort_walk(
        &self,
        scope: &mut Vec<(String, Sort)>,
        free: &mut BTreeMap<String, Sort>,
    ) -> Result<(), LogicError> {
        let mut err = None;
        let mut record = |name: &str, sort: Sort| {
            if err.is_some() {
                return;
            }
            let bound = scope.iter().rev().find(|(n, _)| n == name).map(|(_, s)| *s);
            let known = bound.or_else(|| free.get(name).copied());
            match known {
                Some(s) if s != sort => {
                    err = Some(LogicError::SortError(format!(
                        "variable {name} used as {sort} but declared as {s}"
                    )))
                }
                Some(_) => {}
                None => {
                    free.insert(name.to_string(), sort);
                }
            }
        };
        match self {
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) => {
                a.visit_vars(&mut record);
                b.visit_vars(&mut record);
            }
            Formula::VecEq(a, b) => {
                a.visit_vars(&mut record);
                b.visit_vars(&mut record);
            }
            Formula::Macro(m) => return m.body.sort_walk(scope, free),
            Formula::Not(f) => return f.sort_walk(scope, free),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.sort_walk(scope, free)?;
                }
            }
            Formula::Implies(a, b) => {
                a.sort_walk(scope, free)?;
                b.sort_walk(scope, free)?;
            }
            Formula::Forall(bs, f) | Formula::Exists(bs, f) => {
                let depth = scope.len();
                scope.extend(bs.iter().map(|b| (b.name.clone(), b.sort)));
                let r = f.sort_walk(scope, free);
                scope.truncate(depth);
                return r;
            }
        }
        err.map_or(Ok(()), Err)
    }

    /// Renames free occurrences of variables in a quantifier-free formula.
    pub(crate) fn rename_free(&self, map: &dyn Fn(&str) -> Option<String>) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.rename(map), b.rename(map)),
            Formula::Le(a, b) => Formula::Le(a.rename(map), b.rename(map)),
            Formula::Lt(a, b) => Formula::Lt(a.rename(map), b.rename(map)),
            Formula::VecEq(a, b) => Formula::VecEq(a.rename(map), b.rename(map)),
            Formula::Macro(m) => Formula::named(m.name.clone(), m.body.rename_free(map)),
            Formula::Not(f) => Formula::not(f.rename_free(map)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.rename_free(map)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.rename_free(map)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.rename_free(map), b.rename_free(map)),
            Formula::Forall(bs, f) | Formula::Exists(bs, f) => {
                let inner = |n: &str| if bs.iter().any(|b| b.name == n) { None } else { map(n) };
                let body = f.rename_free(&inner);
                if matches!(self, Formula::Forall(..)) {
                    Formula::forall(bs.clone(), body)
                } else {
                    Formula::exists(bs.clone(), body)
                }
            }
        }
    }

    /// Every variable name occurring in the formula, bound or free.
    pub(crate) fn all_names(&self, out: &mut std::collections::BTreeSet<String>) {
        let mut add = |n: &str, _| {
            out.insert(n.to_string());
        };
        match self {
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) => {
                a.visit_vars(&mut add);
                b.visit_vars(&mut add);
            }
            Formula::VecEq(a, b) => {
                a.visit_vars(&mut add);
                b.visit_vars(&mut add);
            }
            Formula::Macro(m) => m.body.all_names(out),
            Formula::Not(f) => f.all_names(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.all_names(out)),
            Formula::Implies(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Formula::Forall(bs, f) | Formula::Exists(bs, f) => {
                out.extend(bs.iter().map(|b| b.name.clone()));
                f.all_names(out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> VectorTerm {
        VectorTerm::var(n)
    }

    #[test]
    fn free_and_bound_variables() {
        let f = Formula::forall(
            vec![Binder::vector("u")],
            Formula::Eq(v("u").norm(), (v("w").norm()) + ScalarTerm::var("s")),
        );
        let fv = f.free_vars();
        assert_eq!(fv.len(), 2);
        assert_eq!(fv["w"], Sort::Vector);
        assert_eq!(fv["s"], Sort::Scalar);
        assert!(!f.is_closed());
    }

    #[test]
    fn sort_clash_is_reported() {
        let f = Formula::And(vec![
            Formula::Eq(ScalarTerm::var("x"), ScalarTerm::int(0)),
            Formula::VecEq(v("x"), VectorTerm::Zero),
        ]);
        assert!(matches!(f.sort_check(), Err(LogicError::SortError(_))));
        let shadowed = Formula::And(vec![
            Formula::Eq(ScalarTerm::var("x"), ScalarTerm::int(0)),
            Formula::forall(vec![Binder::vector("x")], Formula::VecEq(v("x"), VectorTerm::Zero)),
        ]);
        assert!(shadowed.sort_check().is_ok());
    }

    #[test]
    fn expand_strips_macros() {
        let inner = Formula::named("inner", Formula::VecEq(v("a"), v("b")));
        let f = Formula::named("outer", Formula::not(inner));
        assert!(f.has_macros());
        let e = f.expand();
        assert!(!e.has_macros());
        assert_eq!(e, Formula::not(Formula::VecEq(v("a"), v("b"))));
        assert_eq!(e.expand(), e);
        assert_eq!(f.node_count(), e.node_count());
    }

    #[test]
    fn rename_respects_binders() {
        let f = Formula::And(vec![
            Formula::VecEq(v("a"), v("b")),
            Formula::forall(vec![Binder::vector("a")], Formula::VecEq(v("a"), v("b"))),
        ]);
        let g = f.rename_free(&|n| (n == "a").then(|| "a'".to_string()));
        let want = Formula::And(vec![
            Formula::VecEq(v("a'"), v("b")),
            Formula::forall(vec![Binder::vector("a")], Formula::VecEq(v("a"), v("b"))),
        ]);
        assert_eq!(g, want);
    }
}
