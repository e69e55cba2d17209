mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::OnceLock;

use common::{dist, rotund_angle, Plane};
use normlogic::geometry::{
    construct_l1, intersect_circles, two_sum, Component, ConstructionOptions, NormedSpace, Vec2, VecN, L1,
};
use normlogic::harness::suites::{flatten_disagreements, FLATTEN_CORPUS};
use normlogic::logic::{
    eval_qf, eval_vector, parse_sentence, print_sentence, Assignment, Binder, Formula, Gadgets, PairExpr, ScalarTerm,
    VectorTerm,
};
use normlogic::rational::Rational;
use normlogic::reduction::{compile, flatten_multiplications, parse_arith, ArithFormula, ArithTerm, ArithVar};
use proptest::prelude::*;

fn l1() -> &'static L1 {
    static L1: OnceLock<L1> = OnceLock::new();
    L1.get_or_init(|| construct_l1(1, &ConstructionOptions::default()).unwrap())
}

fn oracle() -> Plane {
    Plane::l1(&l1().params)
}

fn v2() -> impl Strategy<Value = Vec2> {
    (-4.0..4.0f64, -4.0..4.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

fn pairs(a: &mut Assignment, xs: &[(&str, f64)]) {
    a.set_vector("e1", VecN::from_slice(&[1.0, 0.0])).set_vector("e2", VecN::from_slice(&[0.0, 1.0]));
    for (name, x) in xs {
        a.set_vector(format!("{name}.1"), VecN::from_slice(&[-x, 0.0]));
        a.set_vector(format!("{name}.2"), VecN::from_slice(&[0.0, *x]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norm_matches_boundary_oracle(v in v2()) {
        let got = l1().norm(v);
        let want = oracle().norm(v);
        prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want), "{v:?}: {got} vs {want}");
    }

    #[test]
    fn norm_axioms(v in v2(), w in v2(), lambda in -5.0..5.0f64) {
        let n = |x: Vec2| l1().norm(x);
        prop_assert!(n(v) >= 0.0);
        prop_assert!((n(v * lambda) - lambda.abs() * n(v)).abs() <= 1e-12 * (1.0 + n(v)));
        prop_assert!(n(v + w) <= n(v) + n(w) + 1e-12);
        prop_assert!((n(-v) - n(v)).abs() <= 1e-12 * (1.0 + n(v)));
    }

    #[test]
    fn two_sum_norm_is_euclidean_combination(v in v2(), c in prop::collection::vec(-3.0..3.0f64, 1..=2)) {
        let space = two_sum(l1().space(), NormedSpace::euclidean(c.len()));
        let mut xs = vec![v.x, v.y];
        xs.extend_from_slice(&c);
        let right: f64 = c.iter().map(|z| z * z).sum();
        let want = (oracle().norm(v).powi(2) + right).sqrt();
        prop_assert!((space.norm(&xs) - want).abs() <= 1e-12 * (1.0 + want));
    }

    #[test]
    fn radial_function_is_continuous(theta in 0.0..TAU, delta in 1e-9..1e-4f64) {
        let b = &l1().boundary;
        let (r0, r1) = (b.radial(theta), b.radial(theta + delta));
        // |ρ'| is bounded by ρmax·√((ρmax/ρmin)² − 1) ≤ 3 for this plane
        prop_assert!((r1 - r0).abs() <= 3.0 * delta + 1e-14, "{theta}: {r0} {r1}");
        prop_assert!((r0 - 1.0 / oracle().norm(Vec2::polar(theta))).abs() <= 1e-12);
    }

    #[test]
    fn psd_holds_on_the_ray_of_rotund_points(u in 0.0..1.0f64, upper: bool, a in 0.05..3.0f64, b in 0.0..3.0f64) {
        let w = oracle().boundary_point(rotund_angle(u, upper, 0.0)) * a;
        let f = Gadgets::from_params(&l1().params).psd(VectorTerm::var("v"), VectorTerm::var("w"));
        let mut asg = Assignment::new();
        asg.set_vector("v", VecN::embed(w * b, 2)).set_vector("w", VecN::embed(w, 2));
        prop_assert!(eval_qf(&l1().space(), &f, &asg, 1e-6).unwrap());
        let off = Vec2::polar(w.angle() + 0.3) * b.max(0.1);
        asg.set_vector("v", VecN::embed(off, 2));
        prop_assert!(!eval_qf(&l1().space(), &f, &asg, 1e-6).unwrap());
    }

    #[test]
    fn pmult_accepts_products(s in 0.0..3.0f64, t in 0.0..3.0f64, sign in prop::bool::ANY) {
        let p = PairExpr::var;
        let f = Gadgets::from_params(&l1().params).pmult(&p("S"), &p("T"), &p("U"));
        let (s, t) = if sign { (-s, t) } else { (s, -t) };
        let mut a = Assignment::new();
        pairs(&mut a, &[("S", s), ("T", t), ("U", s * t)]);
        prop_assert!(eval_qf(&l1().space(), &f, &a, 1e-11).unwrap());
        pairs(&mut a, &[("U", s * t + 0.01)]);
        prop_assert!(!eval_qf(&l1().space(), &f, &a, 1e-11).unwrap());
    }

    #[test]
    fn psin_accepts_the_sine(s in 0.01..20.0f64) {
        let p = PairExpr::var;
        let f = Gadgets::from_params(&l1().params).psin(&p("S"), &p("T"), &p("U1"), &p("U2"));
        let t = s.sin();
        let mut a = Assignment::new();
        pairs(&mut a, &[("S", s), ("T", t), ("U1", (1.0 + s) * (2.0 * s + s * s + t)), ("U2", s * s)]);
        prop_assert!(eval_qf(&l1().space(), &f, &a, 1e-6).unwrap());
        pairs(&mut a, &[("T", t + 0.01), ("U1", (1.0 + s) * (2.0 * s + s * s + t + 0.01))]);
        prop_assert!(!eval_qf(&l1().space(), &f, &a, 1e-6).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Two rotund points `a ≠ b` on `S(0, 1)` and a centre `q` with
    /// `‖a − q‖ = ‖b − q‖ = s`: the circles meet in exactly `{a, b}`.
    #[test]
    fn circles_through_two_rotund_points_meet_only_there(ua in 0.0..1.0f64, ub in 0.0..1.0f64, upper_b: bool, scale in 0.55..1.5f64) {
        let o = oracle();
        let a = o.boundary_point(rotund_angle(ua, true, 0.05));
        let b = o.boundary_point(rotund_angle(ub, upper_b, 0.05));
        prop_assume!(dist(a, b) > 1e-2);
        let ba = b - a;
        let s = o.norm(ba) * scale;
        let phi = |th: f64| o.norm(ba - o.boundary_point(th) * s) - s;
        let (mut lo, mut hi) = (ba.angle(), ba.angle() + PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if phi(mid) < 0.0 { lo = mid } else { hi = mid }
        }
        let q = a + o.boundary_point(lo) * s;
        let rep = intersect_circles(&l1().space(), Vec2::ZERO, 1.0, q, s, 1 << 13, 1e-9).unwrap();
        let pts: Vec<Vec2> = rep.components.iter().filter_map(|c| match c {
            Component::IsolatedPoint(x) => Some(*x),
            _ => None,
        }).collect();
        prop_assert_eq!(rep.components.len(), 2);
        prop_assert_eq!(pts.len(), 2);
        prop_assert!(pts.iter().any(|x| dist(*x, a) < 1e-6) && pts.iter().any(|x| dist(*x, b) < 1e-6));
    }
}

#[test]
fn two_sum_premise_tolerance_band() {
    // On a common segment, moving the right component by δ lowers the
    // midpoint norm by about δ²/(8ρ²) with ρ the left norm, so a premise
    // tolerance of 1e-9 admits right components up to about ρ·9e-5 apart.
    let space = two_sum(l1().space(), NormedSpace::euclidean(1));
    let p = &l1().params;
    let (x, y) = (p.w1.lerp(p.w3, 0.2), p.w1.lerp(p.w3, 0.7));
    let rho: f64 = 0.6;
    let c = (1.0 - rho * rho).sqrt();
    for delta in [1e-5, 3e-5, 1e-4, 1e-3] {
        let c2 = c + delta;
        let rho2 = (1.0 - c2 * c2).sqrt();
        let v1 = [x.x * rho, x.y * rho, c];
        let v2 = [y.x * rho2, y.y * rho2, c2];
        let mid: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| 0.5 * (a + b)).collect();
        let defect = 1.0 - space.norm(&mid);
        let predicted = delta * delta / (8.0 * rho * rho);
        assert!(defect > 0.0 && (defect / predicted - 1.0).abs() < 0.5, "δ={delta}: {defect} vs {predicted}");
        assert_eq!(defect <= 1e-9, delta < 8.9e-5 * rho, "δ={delta}");
    }
}

#[test]
fn numerals_are_pair_representations() {
    let space = l1().space();
    let mut a = Assignment::new();
    pairs(&mut a, &[]);
    for i in -5i64..=12 {
        let n = PairExpr::numeral(i);
        let x = i as f64;
        assert_eq!(eval_vector(&space, &n.first, &a).unwrap(), VecN::from_slice(&[-x, 0.0]));
        assert_eq!(eval_vector(&space, &n.second, &a).unwrap(), VecN::from_slice(&[0.0, x]));
    }
}

#[test]
fn pn_holds_exactly_at_naturals() {
    let g = Gadgets::from_params(&l1().params);
    let p = PairExpr::var;
    let f = g.pn(&p("X"), &p("U1"), &p("U2"), &p("U3"));
    for (x, want) in [(0.0, true), (1.0, true), (4.0, true), (9.0, true), (0.5, false), (3.3, false), (7.01, false)] {
        let u1: f64 = (x + 1.0) * PI;
        let mut a = Assignment::new();
        pairs(&mut a, &[("A", PI), ("X", x), ("U1", u1), ("U2", (1.0 + u1) * (2.0 * u1 + u1 * u1)), ("U3", u1 * u1)]);
        assert_eq!(eval_qf(&l1().space(), &f, &a, 1e-6).unwrap(), want, "x = {x}");
    }
}

#[test]
fn pw_rejects_a_rotated_tuple() {
    let v = VectorTerm::var;
    let f = Gadgets::from_params(&l1().params).pw(v("p1"), v("p2"), v("u1"), v("u2"), v("u3"));
    let p = &l1().params;
    let rot = |w: Vec2| Vec2::polar(w.angle() + FRAC_PI_2) * w.euclid();
    let mut a = Assignment::new();
    for (name, w) in [("p1", Vec2::E1), ("p2", Vec2::E2), ("u1", p.w1), ("u2", p.w2), ("u3", p.w3)] {
        a.set_vector(name, VecN::embed(rot(w), 2));
    }
    assert!(!eval_qf(&l1().space(), &f, &a, 1e-6).unwrap());
}

#[test]
fn flattening_is_sound_on_the_corpus() {
    for text in FLATTEN_CORPUS {
        let (bad, total) = flatten_disagreements(text, 5, 25).unwrap();
        assert_eq!(bad, 0, "{text}: {bad}/{total}");
    }
}

#[test]
fn flattening_nested_products() {
    let flat = flatten_multiplications(&parse_arith("(x1*x2)*x3 = 6").unwrap()).unwrap();
    assert_eq!(flat.m, 2);
    // the first product's result feeds the second product's left factor
    assert_eq!(flat.triples[1].left, ArithTerm::Var(ArithVar::Z(1)));
    let (bad, total) = flatten_disagreements("(x1*x2)*x3 = 6", 3, 9).unwrap();
    assert_eq!((bad, total), (0, 64));
}

fn arith_term() -> impl Strategy<Value = ArithTerm> {
    let leaf = prop_oneof![(1usize..=2).prop_map(ArithTerm::x), (0u64..4).prop_map(ArithTerm::Nat)];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ArithTerm::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| ArithTerm::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

fn arith_formula() -> impl Strategy<Value = ArithFormula> {
    let atom = prop_oneof![
        (arith_term(), arith_term()).prop_map(|(a, b)| ArithFormula::Eq(a, b)),
        (arith_term(), arith_term()).prop_map(|(a, b)| ArithFormula::Le(a, b)),
        (arith_term(), arith_term()).prop_map(|(a, b)| ArithFormula::Lt(a, b)),
    ];
    atom.prop_recursive(2, 4, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| ArithFormula::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ArithFormula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| ArithFormula::Or(Box::new(a), Box::new(b))),
        ]
    })
}

fn vector_term() -> impl Strategy<Value = VectorTerm> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["v", "w", "u.1"]).prop_map(VectorTerm::var),
        Just(VectorTerm::Zero),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| VectorTerm::Add(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| VectorTerm::Neg(Box::new(a))),
            ((-7i64..7), (1i64..5), inner)
                .prop_filter("nonzero", |(n, _, _)| *n != 0)
                .prop_map(|(n, d, a)| VectorTerm::RatScale(Rational::new(n, d), Box::new(a))),
        ]
    })
}

fn scalar_term() -> impl Strategy<Value = ScalarTerm> {
    let leaf = prop_oneof![
        vector_term().prop_map(|v| ScalarTerm::Norm(Box::new(v))),
        ((-9i64..9), (1i64..4)).prop_map(|(n, d)| ScalarTerm::RatConst(Rational::new(n, d))),
        Just(ScalarTerm::var("s")),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ScalarTerm::Add(Box::new(a), Box::new(b))),
            inner.prop_map(|a| ScalarTerm::Neg(Box::new(a))),
        ]
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (scalar_term(), scalar_term()).prop_map(|(a, b)| Formula::Eq(a, b)),
        (scalar_term(), scalar_term()).prop_map(|(a, b)| Formula::Le(a, b)),
        (scalar_term(), scalar_term()).prop_map(|(a, b)| Formula::Lt(a, b)),
        (vector_term(), vector_term()).prop_map(|(a, b)| Formula::VecEq(a, b)),
    ];
    atom.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Formula::Not(Box::new(a))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Formula::forall(vec![Binder::vector("v"), Binder::scalar("s")], a)),
            inner.prop_map(|a| Formula::exists(vec![Binder::vector("w")], a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sentence_print_parse_round_trip(f in formula()) {
        let text = print_sentence(&f);
        let back = parse_sentence(&text).unwrap();
        prop_assert_eq!(&back, &f, "{}", text);
        prop_assert_eq!(print_sentence(&back), text);
    }

    #[test]
    fn arith_print_parse_round_trip(q in arith_formula()) {
        prop_assert_eq!(parse_arith(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn flattening_is_sound_on_random_formulas(q in arith_formula()) {
        let flat = flatten_multiplications(&q).unwrap();
        prop_assert!(!flat.q1.has_mul());
        prop_assume!(flat.m <= 2);
        let bound = if flat.m == 2 { 9 } else { 25 };
        let (bad, total) = flatten_disagreements(&q.to_string(), 3, bound).unwrap();
        prop_assert_eq!(bad, 0, "{}: {}/{}", q, bad, total);
    }

    #[test]
    fn compile_is_deterministic_and_aia(q in arith_formula()) {
        prop_assume!(q.num_inputs() >= 1);
        let a = compile(&q, 2, &l1().params).unwrap();
        let b = compile(&q, 2, &l1().params).unwrap();
        prop_assert!(a.aia_shape);
        prop_assert_eq!(print_sentence(&a.a), print_sentence(&b.a));
        prop_assert_eq!(print_sentence(&a.b), print_sentence(&b.b));
        let flat = flatten_multiplications(&q).unwrap();
        prop_assert_eq!(a.manifest.vectors.len(), 11 + 18 * flat.m + 8 * flat.k);
        prop_assert_eq!(a.manifest.scalars.len(), 3 * flat.m + flat.k);
    }
}

#[test]
fn compile_in_three_dimensions_adds_the_star_clause() {
    let q = parse_arith("x1*x1 = 2").unwrap();
    let out = compile(&q, 3, &l1().params).unwrap();
    assert!(out.aia_shape);
    assert_eq!(out.sentence_names(), ("A'", "B'"));
    for f in [&out.a, &out.b] {
        let text = print_sentence(f);
        for v in ["a1", "a2", "b1", "b2"] {
            assert!(text.contains(&format!("({v} vec)")), "{v} is quantified");
        }
        assert!(has_macro(f, "Star") && has_macro(f, "pPar"));
    }
}

fn has_macro(f: &Formula, name: &str) -> bool {
    match f {
        Formula::Macro(m) => m.name == name || has_macro(&m.body, name),
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => has_macro(g, name),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().any(|g| has_macro(g, name)),
        Formula::Implies(a, b) => has_macro(a, name) || has_macro(b, name),
        _ => false,
    }
}
