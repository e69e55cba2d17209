use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ast::{Binder, Formula, ScalarTerm, Sort, VectorTerm};
use super::LogicError;
use crate::geometry::L1Params;
use crate::rational::Rational;

/// A real number `s` written as the vector pair `(−s·e₁, s·e₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairExpr {
    pub first: VectorTerm,
    pub second: VectorTerm,
}

impl PairExpr {
    pub fn new(first: VectorTerm, second: VectorTerm) -> Self {
        PairExpr { first, second }
    }

    /// The pair variable `name`, with components `name.1` and `name.2`.
    pub fn var(name: &str) -> Self {
        PairExpr::new(VectorTerm::var(format!("{name}.1")), VectorTerm::var(format!("{name}.2")))
    }

    pub fn binders(name: &str) -> [Binder; 2] {
        [Binder::vector(format!("{name}.1")), Binder::vector(format!("{name}.2"))]
    }

    /// The numeral `(−i·e₁, i·e₂)`.
    pub fn numeral(i: i64) -> Self {
        let e1 = VectorTerm::var("e1");
        let e2 = VectorTerm::var("e2");
        match i {
            0 => PairExpr::new(VectorTerm::Zero, VectorTerm::Zero),
            1 => PairExpr::new(-e1, e2),
            _ => PairExpr::new(
                e1.scale(Rational::from_integer(-i)),
                e2.scale(Rational::from_integer(i)),
            ),
        }
    }

    pub fn scale(self, r: Rational) -> Self {
        PairExpr::new(self.first.scale(r), self.second.scale(r))
    }
}

impl std::ops::Add for PairExpr {
    type Output = PairExpr;
    fn add(self, rhs: PairExpr) -> PairExpr {
        PairExpr::new(self.first + rhs.first, self.second + rhs.second)
    }
}

impl std::ops::Sub for PairExpr {
    type Output = PairExpr;
    fn sub(self, rhs: PairExpr) -> PairExpr {
        PairExpr::new(self.first - rhs.first, self.second - rhs.second)
    }
}

impl std::ops::Neg for PairExpr {
    type Output = PairExpr;
    fn neg(self) -> PairExpr {
        PairExpr::new(-self.first, -self.second)
    }
}

/// How `v = w` between vector terms is written.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum VecEqEncoding {
    /// The primitive atom `VecEq`.
    #[default]
    Primitive,
    /// `‖v − w‖ = 0`.
    NormZero,
}

/// Builds the abbreviations and sentences over the constants `q`, `r`, `M`
/// of a constructed plane. Vector variables `e1`, `e2` name the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadgets {
    pub q: Rational,
    pub r: Rational,
    pub m: u32,
    pub vec_eq: VecEqEncoding,
}

fn v(name: &str) -> VectorTerm {
    VectorTerm::var(name)
}

fn eq(a: ScalarTerm, b: ScalarTerm) -> Formula {
    Formula::Eq(a, b)
}

fn one() -> ScalarTerm {
    ScalarTerm::int(1)
}

fn vector_names(t: &VectorTerm, out: &mut BTreeSet<String>) {
    Formula::VecEq(t.clone(), VectorTerm::Zero).all_names(out);
}

impl Gadgets {
    pub fn new(q: Rational, r: Rational, m: u32) -> Self {
        Gadgets { q, r, m, vec_eq: VecEqEncoding::Primitive }
    }

    pub fn from_params(params: &L1Params) -> Self {
        Gadgets::new(params.q, params.r, params.m)
    }

    pub fn with_vec_eq(mut self, enc: VecEqEncoding) -> Self {
        self.vec_eq = enc;
        self
    }

    fn e1(&self) -> VectorTerm {
        v("e1")
    }

    fn e2(&self) -> VectorTerm {
        v("e2")
    }

    pub fn vec_eq(&self, a: VectorTerm, b: VectorTerm) -> Formula {
        match self.vec_eq {
            VecEqEncoding::Primitive => Formula::VecEq(a, b),
            VecEqEncoding::NormZero => eq((a - b).norm(), ScalarTerm::int(0)),
        }
    }

    pub fn vec_ne(&self, a: VectorTerm, b: VectorTerm) -> Formula {
        Formula::not(self.vec_eq(a, b))
    }

    // Pair comparisons.

    pub fn pair_eq(&self, s: &PairExpr, t: &PairExpr) -> Formula {
        self.vec_eq(s.second.clone(), t.second.clone())
    }

    pub fn pair_ge(&self, s: &PairExpr, t: &PairExpr) -> Formula {
        self.psd((s.clone() - t.clone()).second, self.e2())
    }

    pub fn pair_gt(&self, s: &PairExpr, t: &PairExpr) -> Formula {
        Formula::And(vec![self.pair_ge(s, t), Formula::not(self.pair_eq(s, t))])
    }

    pub fn pair_lt(&self, s: &PairExpr, t: &PairExpr) -> Formula {
        self.pair_gt(t, s)
    }

    // Vector predicates.

    /// `‖v + w‖ = ‖v‖ + ‖w‖`.
    pub fn psd(&self, a: VectorTerm, b: VectorTerm) -> Formula {
        let body = eq((a.clone() + b.clone()).norm(), a.norm() + b.norm());
        Formula::named("pSD", body)
    }

    /// `∀u. ‖u‖ = ‖v‖ ∧ ‖v‖ = ‖(u+v)/2‖ ⇒ u = v`, with `u` fresh for `v`.
    pub fn protund(&self, a: VectorTerm) -> Formula {
        let mut used = BTreeSet::new();
        vector_names(&a, &mut used);
        let u = std::iter::once("u".to_string())
            .chain((1..).map(|i| format!("u{i}")))
            .find(|n| !used.contains(n))
            .expect("unbounded name supply");
        let body = Formula::forall(
            vec![Binder::vector(u.clone())],
            Formula::implies(
                Formula::And(vec![
                    eq(v(&u).norm(), a.clone().norm()),
                    eq(a.clone().norm(), v(&u).midpoint(a.clone()).norm()),
                ]),
                self.vec_eq(v(&u), a),
            ),
        );
        Formula::named("pRotund", body)
    }

    /// `v ≠ 0 ∧ w ≠ 0 ∧ (pSD(v, w) ∨ pSD(v, −w))`.
    pub fn ppar(&self, a: VectorTerm, b: VectorTerm) -> Formula {
        let body = Formula::And(vec![
            self.vec_ne(a.clone(), VectorTerm::Zero),
            self.vec_ne(b.clone(), VectorTerm::Zero),
            Formula::Or(vec![self.psd(a.clone(), b.clone()), self.psd(a, -b)]),
        ]);
        Formula::named("pPar", body)
    }

    /// The configuration `±(e₁, e₂, w₁, w₂, w₃)` of five unit vectors.
    pub fn pw(
        &self,
        p1: VectorTerm,
        p2: VectorTerm,
        u1: VectorTerm,
        u2: VectorTerm,
        u3: VectorTerm,
    ) -> Formula {
        let q = ScalarTerm::constant(self.q);
        let r = ScalarTerm::constant(self.r);
        let r2 = ScalarTerm::constant(self.r * 2);
        let body = Formula::And(vec![
            eq(p1.clone().norm(), p2.clone().norm()),
            eq(p2.clone().norm(), u1.clone().norm()),
            eq(u1.clone().norm(), u2.clone().norm()),
            eq(u2.clone().norm(), u3.clone().norm()),
            eq(u3.clone().norm(), one()),
            eq(u1.clone().midpoint(u3.clone()).norm(), u2.clone().midpoint(u3.clone()).norm()),
            eq(u2.clone().midpoint(u3.clone()).norm(), one()),
            Formula::Lt(u1.clone().midpoint(u2.clone()).norm(), one()),
            eq((u1.clone() - u3.clone()).norm(), r),
            eq((u3 - u2.clone()).norm(), r2),
            eq((p1.clone() - u1.clone()).norm(), (p2.clone() - u2.clone()).norm()),
            eq((p2.clone() - u2.clone()).norm(), q),
            Formula::Lt(p1.midpoint(u1).norm(), one()),
            Formula::Lt(p2.midpoint(u2).norm(), one()),
        ]);
        Formula::named("pW", body)
    }

    pub fn def(&self, e1: VectorTerm, e2: VectorTerm, x: VectorTerm, y: VectorTerm, z: VectorTerm) -> Formula {
        let xy = x.clone() + y.clone();
        let body = Formula::And(vec![
            Formula::And(vec![
                eq(e1.clone().norm(), e2.clone().norm()),
                eq(e2.clone().norm(), one()),
                Formula::not(self.ppar(e1.clone(), e2.clone())),
            ]),
            Formula::implies(
                Formula::And(vec![
                    self.ppar(x.clone(), e1.clone()),
                    self.ppar(y.clone(), e2.clone()),
                    eq(xy.clone().norm(), one()),
                ]),
                Formula::And(vec![Formula::Lt(x.clone().norm(), one()), Formula::Lt(y.clone().norm(), one())]),
            ),
            Formula::implies(
                Formula::And(vec![
                    self.psd(x, -e1),
                    self.psd(y, e2),
                    eq(z.clone().norm(), xy.clone().norm()),
                    eq(xy.clone().norm(), (xy.clone() + z.clone()).scale(Rational::new(1, 2)).norm()),
                ]),
                self.vec_eq(z, xy),
            ),
        ]);
        Formula::named("Def", body)
    }

    // Pair predicates.

    pub fn pok(&self, s: &PairExpr) -> Formula {
        let body = Formula::And(vec![
            eq(s.first.clone().norm(), s.second.clone().norm()),
            Formula::Or(vec![
                Formula::And(vec![self.psd(s.first.clone(), -self.e1()), self.psd(s.second.clone(), self.e2())]),
                Formula::And(vec![self.psd(s.first.clone(), self.e1()), self.psd(s.second.clone(), -self.e2())]),
            ]),
        ]);
        Formula::named("pOK", body)
    }

    pub fn pnnmult(&self, s: &PairExpr, t: &PairExpr, u: &PairExpr) -> Formula {
        let zero = PairExpr::numeral(0);
        let body = Formula::And(vec![
            self.pok(s),
            self.pok(t),
            self.pok(u),
            self.pair_ge(s, &zero),
            self.pair_ge(t, &zero),
            self.psd(-self.e1() + s.second.clone(), t.first.clone() + u.second.clone()),
        ]);
        Formula::named("pNNMult", body)
    }

    pub fn pmult(&self, s: &PairExpr, t: &PairExpr, u: &PairExpr) -> Formula {
        let zero = PairExpr::numeral(0);
        let (ns, nt, nu) = (-s.clone(), -t.clone(), -u.clone());
        let body = Formula::Or(vec![
            Formula::And(vec![self.pair_ge(s, &zero), self.pair_ge(t, &zero), self.pnnmult(s, t, u)]),
            Formula::And(vec![self.pair_lt(s, &zero), self.pair_ge(t, &zero), self.pnnmult(&ns, t, &nu)]),
            Formula::And(vec![self.pair_ge(s, &zero), self.pair_lt(t, &zero), self.pnnmult(s, &nt, &nu)]),
            Formula::And(vec![self.pair_lt(s, &zero), self.pair_lt(t, &zero), self.pnnmult(&ns, &nt, u)]),
        ]);
        Formula::named("pMult", body)
    }

    /// Holds iff `t = 2s + s² + sin(s)/M` for `s, t > 0`, with `U₁` the
    /// product `(1+s)·t`.
    pub fn pg(&self, s: &PairExpr, t: &PairExpr, u1: &PairExpr) -> Formula {
        let zero = PairExpr::numeral(0);
        let one_p = PairExpr::numeral(1);
        let body = Formula::And(vec![
            self.pair_gt(s, &zero),
            self.pair_gt(t, &zero),
            self.pmult(&(one_p.clone() + s.clone()), t, u1),
            eq(
                ((one_p + t.clone()).first + u1.second.clone()).norm(),
                one() + s.second.clone().norm() + u1.second.clone().norm(),
            ),
        ]);
        Formula::named("pG", body)
    }

    pub fn psin(&self, s: &PairExpr, t: &PairExpr, u1: &PairExpr, u2: &PairExpr) -> Formula {
        let arg = s.clone().scale(Rational::from_integer(2))
            + u2.clone()
            + t.clone().scale(Rational::new(1, i64::from(self.m)));
        let body = Formula::And(vec![self.pg(s, &arg, u1), self.pmult(s, s, u2)]);
        Formula::named("pSIN", body)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn periodic(
        &self,
        a: &PairExpr,
        s: &PairExpr,
        t: &PairExpr,
        v1: &PairExpr,
        v2: &PairExpr,
        v3: &PairExpr,
        v4: &PairExpr,
        v5: &PairExpr,
    ) -> Formula {
        let zero = PairExpr::numeral(0);
        let two_a = a.clone().scale(Rational::from_integer(2));
        let body = Formula::And(vec![
            self.pok(a),
            self.pair_gt(a, &zero),
            Formula::implies(
                Formula::And(vec![
                    self.pair_lt(&zero, s),
                    self.pair_lt(s, &two_a),
                    self.psin(s, t, v1, v2),
                ]),
                Formula::iff(self.pair_eq(t, &zero), self.pair_eq(s, a)),
            ),
            Formula::implies(
                Formula::And(vec![self.psin(s, t, v1, v2), self.psin(&(s.clone() + a.clone()), v3, v4, v5)]),
                self.pair_eq(v3, &-t.clone()),
            ),
        ]);
        Formula::named("Periodic", body)
    }

    /// Natural-number pairs: `(X+1)·π` is a zero of sine. Uses the pair `A`.
    pub fn pn(&self, x: &PairExpr, u1: &PairExpr, u2: &PairExpr, u3: &PairExpr) -> Formula {
        let body = Formula::And(vec![
            self.psin(u1, &PairExpr::numeral(0), u2, u3),
            self.pmult(&(x.clone() + PairExpr::numeral(1)), &PairExpr::var("A"), u1),
        ]);
        Formula::named("pN", body)
    }

    pub fn ppi(&self, x: &PairExpr, u1: &PairExpr, u2: &PairExpr) -> Formula {
        let body = Formula::And(vec![
            self.pair_lt(x, &PairExpr::numeral(4)),
            self.psin(x, &PairExpr::numeral(0), u1, u2),
        ]);
        Formula::named("pPi", body)
    }

    /// `eᵢ = aᵢ + bᵢ ∧ pPar(aᵢ, w₁) ∧ pPar(bᵢ, w₂)` for `i = 1, 2`.
    pub fn star(&self) -> Formula {
        let mut parts = Vec::new();
        for i in 1..=2 {
            let (e, a, b) = (v(&format!("e{i}")), v(&format!("a{i}")), v(&format!("b{i}")));
            parts.push(self.vec_eq(e, a.clone() + b.clone()));
            parts.push(self.ppar(a, v("w1")));
            parts.push(self.ppar(b, v("w2")));
        }
        Formula::named("Star", Formula::And(parts))
    }

    fn pw_canonical(&self) -> Formula {
        self.pw(v("e1"), v("e2"), v("w1"), v("w2"), v("w3"))
    }

    fn head_binders(&self, with_star: bool) -> Vec<Binder> {
        let mut bs: Vec<Binder> = ["e1", "e2", "w1", "w2", "w3"].into_iter().map(Binder::vector).collect();
        if with_star {
            bs.extend(["a1", "a2", "b1", "b2"].into_iter().map(Binder::vector));
        }
        for p in ["A", "U1", "U2"] {
            bs.extend(PairExpr::binders(p));
        }
        bs
    }

    fn head_antecedent(&self, with_star: bool) -> Vec<Formula> {
        let mut parts = vec![self.pw_canonical()];
        if with_star {
            parts.push(self.star());
        }
        parts.push(self.ppi(&PairExpr::var("A"), &PairExpr::var("U1"), &PairExpr::var("U2")));
        parts
    }

    fn build_a(&self, with_star: bool) -> Formula {
        let mut bs = self.head_binders(with_star);
        bs.extend(["x", "y", "z"].into_iter().map(Binder::vector));
        for p in ["S", "T", "V1", "V2", "V3", "V4", "V5"] {
            bs.extend(PairExpr::binders(p));
        }
        let p = PairExpr::var;
        let consequent = Formula::And(vec![
            self.def(v("e1"), v("e2"), v("x"), v("y"), v("z")),
            self.periodic(&p("A"), &p("S"), &p("T"), &p("V1"), &p("V2"), &p("V3"), &p("V4"), &p("V5")),
        ]);
        Formula::forall(bs, Formula::implies(Formula::And(self.head_antecedent(with_star)), consequent))
    }

    fn build_b(&self, q1: &Formula, m: usize, k: usize, with_star: bool) -> Result<Formula, LogicError> {
        check_q1(q1, m, k)?;
        let mut bs = self.head_binders(with_star);
        for (letter, count) in [("S", 4 * m), ("T", 4 * m), ("Z", m)] {
            for i in 1..=count {
                bs.extend(PairExpr::binders(&format!("{letter}{i}")));
            }
        }
        for letter in ["s", "t", "z"] {
            bs.extend((1..=m).map(|i| Binder::scalar(format!("{letter}{i}"))));
        }
        for i in 1..=4 * k {
            bs.extend(PairExpr::binders(&format!("X{i}")));
        }
        bs.extend((1..=k).map(|i| Binder::scalar(format!("x{i}"))));

        let p = |l: &str, i: usize| PairExpr::var(&format!("{l}{i}"));
        let bind = |s: String, pair: PairExpr| eq(ScalarTerm::var(s), pair.second.norm());
        let mut ante = self.head_antecedent(with_star);
        for i in 1..=m {
            for l in ["S", "T"] {
                ante.push(self.pn(&p(l, i), &p(l, m + i), &p(l, 2 * m + i), &p(l, 3 * m + i)));
            }
            ante.push(self.pmult(&p("S", i), &p("T", i), &p("Z", i)));
            ante.push(bind(format!("s{i}"), p("S", i)));
            ante.push(bind(format!("t{i}"), p("T", i)));
            ante.push(bind(format!("z{i}"), p("Z", i)));
        }
        for i in 1..=k {
            ante.push(self.pn(&p("X", i), &p("X", k + i), &p("X", 2 * k + i), &p("X", 3 * k + i)));
            ante.push(bind(format!("x{i}"), p("X", i)));
        }
        Ok(Formula::forall(bs, Formula::implies(Formula::And(ante), Formula::not(q1.clone()))))
    }

    /// `∀… pW ∧ pPi ⇒ Def ∧ Periodic`.
    pub fn sentence_a(&self) -> Formula {
        self.build_a(false)
    }

    /// `∀… pW ∧ pPi ∧ ⋀(pN, pMult, bindings) ⇒ ¬Q₁`, where `Q₁` is an
    /// additive quantifier-free formula over the scalars `sᵢ, tᵢ, zᵢ`
    /// (`i ≤ m`) and `xᵢ` (`i ≤ k`).
    pub fn sentence_b(&self, q1: &Formula, m: usize, k: usize) -> Result<Formula, LogicError> {
        self.build_b(q1, m, k, false)
    }

    /// [`Gadgets::sentence_a`] with `a₁, a₂, b₁, b₂` quantified and
    /// [`Gadgets::star`] conjoined to `pW`.
    pub fn sentence_a_prime(&self) -> Formula {
        self.build_a(true)
    }

    pub fn sentence_b_prime(&self, q1: &Formula, m: usize, k: usize) -> Result<Formula, LogicError> {
        self.build_b(q1, m, k, true)
    }
}

fn check_q1(q1: &Formula, m: usize, k: usize) -> Result<(), LogicError> {
    if !q1.is_quantifier_free() {
        return Err(LogicError::SortError("Q1 must be quantifier-free".into()));
    }
    for (name, sort) in q1.sort_check()? {
        let allowed = sort == Sort::Scalar
            && ["s", "t", "z", "x"].iter().any(|l| {
                let bound = if *l == "x" { k } else { m };
                name.strip_prefix(l)
                    .and_then(|i| i.parse::<usize>().ok())
                    .is_some_and(|i| (1..=bound).contains(&i))
            });
        if !allowed {
            return Err(LogicError::SortError(format!("Q1 uses unexpected variable {name} ({sort})")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gadgets() -> Gadgets {
        Gadgets::new(Rational::new(1, 8), Rational::new(19, 64), 1)
    }

    #[test]
    fn psd_is_the_literal_template() {
        let f = gadgets().psd(v("x"), v("x")).expand();
        let want = Formula::Eq((v("x") + v("x")).norm(), v("x").norm() + v("x").norm());
        assert_eq!(f, want);
    }

    #[test]
    fn pmult_has_four_cases() {
        let p = PairExpr::var;
        match gadgets().pmult(&p("S"), &p("T"), &p("U")).expand() {
            Formula::Or(cases) => assert_eq!(cases.len(), 4),
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn sentences_are_closed_and_well_sorted() {
        let g = gadgets();
        let a = g.sentence_a();
        assert!(a.is_closed());
        let q1 = Formula::Eq(ScalarTerm::var("z1"), ScalarTerm::int(2));
        let b = g.sentence_b(&q1, 1, 1).unwrap();
        assert!(b.is_closed());
        assert!(b.expand().node_count() > a.expand().node_count());
        let Formula::Forall(bs, _) = &b else { panic!() };
        let vectors = bs.iter().filter(|b| b.sort == Sort::Vector).count();
        let scalars = bs.iter().filter(|b| b.sort == Sort::Scalar).count();
        assert_eq!((vectors, scalars), (11 + 18 + 8, 3 + 1));
        let Formula::Forall(bs2, _) = g.sentence_a_prime() else { panic!() };
        let Formula::Forall(bs1, _) = &a else { panic!() };
        assert_eq!(bs2.len(), bs1.len() + 4);
    }

    #[test]
    fn q1_is_checked() {
        let g = gadgets();
        let bad = Formula::Eq(ScalarTerm::var("y1"), ScalarTerm::int(2));
        assert!(g.sentence_b(&bad, 1, 1).is_err());
        let out_of_range = Formula::Eq(ScalarTerm::var("z2"), ScalarTerm::int(2));
        assert!(g.sentence_b(&out_of_range, 1, 1).is_err());
        let vector = Formula::VecEq(v("z1"), VectorTerm::Zero);
        assert!(g.sentence_b(&vector, 1, 1).is_err());
    }

    #[test]
    fn protund_picks_a_fresh_bound_name() {
        let f = gadgets().protund(v("u") + v("u1"));
        let Formula::Macro(m) = f else { panic!() };
        let Formula::Forall(bs, _) = &m.body else { panic!() };
        assert_eq!(bs[0].name, "u2");
    }

    #[test]
    fn norm_zero_encoding_has_no_vec_eq_atoms() {
        let g = gadgets().with_vec_eq(VecEqEncoding::NormZero);
        let text = format!("{:?}", g.sentence_a().expand());
        assert!(!text.contains("VecEq"));
    }
}
