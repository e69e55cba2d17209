//! Verification suites. Each suite maps a [`SuiteContext`] to a list of
//! cases; every case owns a generator derived from `(seed, suite, index)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::Config;
use super::report::{Case, SuiteReport};
use crate::geometry::{
    construct_l1, gamma_d1, gamma_dd, intersect_circles, is_rotund, is_rotund_sampled, two_sum, Classification,
    NormedSpace, Vec2, VecN, L1,
};
use crate::logic::{
    check_aia_shape, eval_bounded, eval_qf, universal_matrix, Assignment, BoundedOutcome, Formula, Gadgets, PairExpr,
    Sampler, VectorTerm,
};
use crate::reduction::{
    antecedent_assignment, bounded_nat_sat, compile, flatten_multiplications, lift_witness, parse_arith,
    sentence_a_seed, sine_aux, ArithVar,
};

/// Everything a suite needs: the configuration and the constructed plane.
pub struct SuiteContext {
    pub config: Config,
    pub l1: L1,
    pub params_hash: String,
}

impl SuiteContext {
    pub fn space(&self) -> NormedSpace {
        self.l1.space()
    }

    pub fn gadgets(&self) -> Gadgets {
        Gadgets::from_params(&self.l1.params).with_vec_eq(self.config.vec_eq)
    }

    /// The generator owned by case `index` of `suite`.
    pub fn rng(&self, suite: &str, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed ^ fnv1a(suite));
        rng.set_stream(index as u64);
        rng
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
}

type SuiteFn = fn(&SuiteContext) -> Vec<Case>;

/// Registered suites, in the order `--all` runs them.
pub const SUITES: &[(&str, SuiteFn)] = &[
    ("concavity", concavity),
    ("construction", construction),
    ("radial", radial),
    ("norm-axioms", norm_axioms),
    ("rotundity", rotundity),
    ("psd", psd),
    ("mult", mult),
    ("sine", sine),
    ("numerals", numerals),
    ("pw", pw),
    ("intersection", intersection),
    ("two-sum", two_sum_suite),
    ("flatten", flatten),
    ("sentence-a", sentence_a),
    ("reduction-e2e", reduction_e2e),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs one suite; `None` for an unknown name.
pub fn run_suite(ctx: &SuiteContext, name: &str) -> Option<SuiteReport> {
    let (_, f) = SUITES.iter().find(|(n, _)| *n == name)?;
    Some(SuiteReport::new(name, ctx.config.seed, &ctx.params_hash, f(ctx)))
}

fn id(prefix: &str, i: usize) -> String {
    format!("{prefix}-{i:05}")
}

fn e(d: usize) -> (VecN, VecN) {
    (VecN::embed(Vec2::E1, d), VecN::embed(Vec2::E2, d))
}

fn real_pairs(a: &mut Assignment, pairs: &[(&str, f64)]) {
    let (e1, e2) = e(2);
    a.set_vector("e1", e1.clone()).set_vector("e2", e2.clone());
    for (name, x) in pairs {
        a.set_real_pair(name, *x, &e1, &e2);
    }
}

fn holds(ctx: &SuiteContext, f: &Formula, a: &Assignment, tol: f64) -> bool {
    eval_qf(&ctx.space(), f, a, tol).unwrap_or(false)
}

/// `γ'' < 0` on a 10⁴-point grid, cross-checked against a five-point
/// central difference of the closed-form `γ'`. The step shrinks like `x²`
/// near 0, where `γ` oscillates, and stays inside `(−1, 0)` near −1.
fn concavity(ctx: &SuiteContext) -> Vec<Case> {
    let m = ctx.l1.params.m;
    let n = 10_000;
    let (lo, hi) = (-0.999, -0.001);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let dd = gamma_dd(x, m).unwrap_or(f64::NAN);
            let fd = five_point(|t| gamma_d1(t, m).unwrap_or(f64::NAN), x, fd_step(x));
            let rel = ((fd - dd) / dd).abs();
            Case::new(id("x", i))
                .measure("x", x)
                .measure("gamma_dd", dd)
                .measure("finite_difference", fd)
                .measure("relative_error", rel)
                .tolerance("relative", 1e-4)
                .check(dd < 0.0 && rel <= 1e-4)
        })
        .collect()
}

/// Step for differentiating `γ'` at `x ∈ (−1, 0)`.
pub fn fd_step(x: f64) -> f64 {
    (1e-2 * (1.0 + x)).min(2e-2 * x * x)
}

/// `(8(f(x+h) − f(x−h)) − (f(x+2h) − f(x−2h))) / 12h`.
pub fn five_point(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

fn construction(ctx: &SuiteContext) -> Vec<Case> {
    let p = &ctx.l1.params;
    let b = &ctx.l1.boundary;
    let tol = ctx.config.tol_geom;
    let (q, r) = (p.q_f64(), p.r_f64());
    let len13 = b.norm(p.w1 - p.w3);
    let len32 = b.norm(p.w3 - p.w2);
    let mut cases = vec![
        Case::new("q-bound").measure("q", q).check(q > 0.0 && q < 0.25),
        Case::new("d-bound").measure("d", p.d).check(p.d > 0.75),
        Case::new("r-bound").measure("r", r).measure("d_over_3", p.d / 3.0).check(r > p.d / 3.0),
        Case::new("w3-inside").measure("w3_euclid", p.w3.euclid()).check(p.w3.euclid() < 1.0),
        Case::new("w3-north-east")
            .measure("cross", (p.w2 - p.w1).cross(p.w3 - p.w1))
            .check((p.w2 - p.w1).cross(p.w3 - p.w1) < 0.0),
        Case::new("segment-w1w3")
            .measure("length", len13)
            .measure("error", (len13 - r).abs())
            .tolerance("abs", tol)
            .check((len13 - r).abs() <= tol),
        Case::new("segment-w3w2")
            .measure("length", len32)
            .measure("error", (len32 - 2.0 * r).abs())
            .tolerance("abs", tol)
            .check((len32 - 2.0 * r).abs() <= tol),
    ];
    for (name, v) in [("e1", Vec2::E1), ("e2", Vec2::E2), ("minus-e1", -Vec2::E1)] {
        let err = (b.norm(v) - 1.0).abs();
        cases.push(Case::new(format!("unit-{name}")).measure("error", err).tolerance("abs", tol).check(err <= tol));
    }
    let violations = p.violations(b, tol);
    cases.push(Case::new("all-constraints").measure("violations", violations.len() as f64).check(violations.is_empty()));
    let again = ctx
        .config
        .resolved_m()
        .ok()
        .and_then(|m| construct_l1(m, &ctx.config.construction_options()).ok());
    cases.push(Case::new("deterministic").check(again.is_some_and(|l| l.params == *p)));
    cases
}

/// Radial function positive and Lipschitz on a 10⁵ grid.
fn radial(ctx: &SuiteContext) -> Vec<Case> {
    let b = &ctx.l1.boundary;
    let n = 100_000;
    let rho: Vec<f64> = (0..=n).into_par_iter().map(|i| b.radial(TAU * i as f64 / n as f64)).collect();
    let (min, max) = rho.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    // |ρ'| ≤ ρ·tan(angle between ray and normal) ≤ ρmax·√((ρmax/ρmin)² − 1).
    let lip = max * ((max / min).powi(2) - 1.0).max(0.0).sqrt();
    let step = TAU / n as f64;
    let worst = rho.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let bound = 1.01 * lip * step + 1e-12;
    vec![
        Case::new("positive").measure("rho_min", min).check(min > 0.0),
        Case::new("lipschitz")
            .measure("max_step", worst)
            .measure("bound", bound)
            .measure("rho_max", max)
            .check(worst <= bound),
        Case::new("closed")
            .measure("gap", (rho[0] - rho[n]).abs())
            .tolerance("abs", ctx.config.tol_geom)
            .check((rho[0] - rho[n]).abs() <= ctx.config.tol_geom),
    ]
}

fn random_vec(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> VecN {
    let xs: Vec<f64> = (0..d).map(|_| rng.gen_range(-radius..radius)).collect();
    VecN::from_slice(&xs)
}

/// Positivity, homogeneity and the triangle inequality in 𝓛₁ and its
/// 2-sums with Euclidean(1), Euclidean(2), on 10³ draws each.
fn norm_axioms(ctx: &SuiteContext) -> Vec<Case> {
    let spaces =
        [("L1", ctx.space()), ("L1x1", two_sum(ctx.space(), NormedSpace::euclidean(1))), ("L1x2", two_sum(ctx.space(), NormedSpace::euclidean(2)))];
    let tol = ctx.config.tol_geom;
    let mut cases = Vec::new();
    for (si, (name, space)) in spaces.iter().enumerate() {
        let d = space.dimension();
        let mut rng = ctx.rng("norm-axioms", si);
        let (mut hom, mut tri, mut pos) = (0.0f64, 0.0f64, f64::INFINITY);
        for _ in 0..1000 {
            let v = random_vec(&mut rng, d, 3.0);
            let w = random_vec(&mut rng, d, 3.0);
            let lambda = rng.gen_range(-5.0..5.0);
            let nv = space.norm(v.as_slice());
            hom = hom.max((space.norm(v.scale(lambda).as_slice()) - lambda.abs() * nv).abs() / (1.0 + nv));
            tri = tri.max(space.norm(v.add(&w).as_slice()) - nv - space.norm(w.as_slice()));
            pos = pos.min(nv / v.euclid());
        }
        let zero = space.norm(VecN::zeros(d).as_slice());
        cases.push(Case::new(format!("{name}-homogeneity")).measure("worst", hom).tolerance("rel", tol).check(hom <= tol));
        cases.push(Case::new(format!("{name}-triangle")).measure("worst_excess", tri).tolerance("abs", tol).check(tri <= tol));
        cases.push(
            Case::new(format!("{name}-definite"))
                .measure("min_ratio", pos)
                .measure("norm_zero", zero)
                .check(pos > 0.0 && zero == 0.0),
        );
    }
    cases
}

/// 10³ north-west unit vectors and `−e₁`, `e₂` are rotund; 10² interior
/// points of the four maximal segments and their endpoints are not. The
/// verdict uses the segment test; the sampling fallback is only recorded,
/// since any sample within about 10⁻⁴ of `v` has a midpoint defect below
/// `tolGeom` and reads as a chord.
fn rotundity(ctx: &SuiteContext) -> Vec<Case> {
    let space = ctx.space();
    let b = &ctx.l1.boundary;
    let tol = ctx.config.tol_geom;
    let mut points: Vec<(String, Vec2, bool)> = Vec::new();
    for i in 0..1000 {
        let theta = ctx.rng("rotundity", i).gen_range(FRAC_PI_2..PI);
        points.push((id("nw", i), b.boundary_point(theta), true));
    }
    points.push(("minus-e1".into(), -Vec2::E1, true));
    points.push(("e2".into(), Vec2::E2, true));
    for (si, (a, c)) in ctx.l1.maximal_segments().into_iter().enumerate() {
        for j in 0..25 {
            let t = ctx.rng("rotundity-segment", si * 25 + j).gen_range(0.02..0.98);
            points.push((format!("segment{si}-{j:02}"), a.lerp(c, t), false));
        }
    }
    let p = &ctx.l1.params;
    for (name, w) in [("w1", p.w1), ("w2", p.w2), ("w3", p.w3)] {
        points.push((name.into(), w, false));
        points.push((format!("minus-{name}"), -w, false));
    }
    points
        .into_par_iter()
        .map(|(name, v, want)| {
            let exact = is_rotund(&space, v, tol).unwrap_or(!want);
            let sampled = is_rotund_sampled(&space, v, tol).unwrap_or(!want);
            Case::new(name)
                .measure("expected", f64::from(u8::from(want)))
                .measure("segment_test", f64::from(u8::from(exact)))
                .measure("sampled_test", f64::from(u8::from(sampled)))
                .check(exact == want)
        })
        .collect()
}

/// Angular distance between the rays of `a` and `b`.
fn ray_angle(a: Vec2, b: Vec2) -> f64 {
    a.cross(b).atan2(a.dot(b)).abs()
}

/// 500 pairs `(v, w)` with `w` rotund: `pSD(v, w)` iff `v` lies on the ray
/// of `w`. Off-ray draws keep an angle of at least 0.05 rad to the ray.
fn psd(ctx: &SuiteContext) -> Vec<Case> {
    let space = ctx.space();
    let b = &ctx.l1.boundary;
    let f = ctx.gadgets().psd(VectorTerm::var("v"), VectorTerm::var("w"));
    let tol = ctx.config.tol_logic;
    (0..500)
        .into_par_iter()
        .map(|i| {
            let mut rng = ctx.rng("psd", i);
            let quadrant = if rng.gen_bool(0.5) { FRAC_PI_2 } else { 1.5 * PI };
            let w = b.boundary_point(quadrant + rng.gen_range(0.0..FRAC_PI_2)) * rng.gen_range(0.2..3.0);
            let v = if rng.gen_bool(0.5) {
                w * rng.gen_range(0.0..3.0)
            } else {
                loop {
                    let v = Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                    if v.euclid() > 1e-3 && ray_angle(v, w) >= 0.05 {
                        break v;
                    }
                }
            };
            let rotund = is_rotund(&space, w, ctx.config.tol_geom).unwrap_or(false);
            let case = Case::new(id("pair", i));
            if !rotund {
                return case.skip("w not rotund");
            }
            let on_ray = (v - w * (b.norm(v) / b.norm(w))).euclid() <= 1e-6;
            let mut a = Assignment::new();
            a.set_vector("v", VecN::embed(v, 2)).set_vector("w", VecN::embed(w, 2));
            let got = holds(ctx, &f, &a, tol);
            case.measure("deviation", b.norm(v + w) - b.norm(v) - b.norm(w))
                .measure("on_ray", f64::from(u8::from(on_ray)))
                .tolerance("logic", tol)
                .check(got == on_ray)
        })
        .collect()
}

/// pMult on a 13×13 grid of `(s, t) ∈ [0, 3]²`: true at `u = st`, false at
/// `u = st ± 10⁻³`.
fn mult(ctx: &SuiteContext) -> Vec<Case> {
    let p = PairExpr::var;
    let f = ctx.gadgets().pmult(&p("S"), &p("T"), &p("U"));
    let tol = ctx.config.tol_mult;
    (0..169 * 3)
        .into_par_iter()
        .map(|i| {
            let (cell, which) = (i / 3, i % 3);
            let (s, t) = (0.25 * (cell / 13) as f64, 0.25 * (cell % 13) as f64);
            let delta = [0.0, 1e-3, -1e-3][which];
            let mut a = Assignment::new();
            real_pairs(&mut a, &[("S", s), ("T", t), ("U", s * t + delta)]);
            let got = holds(ctx, &f, &a, tol);
            Case::new(format!("s{:02}-t{:02}-{}", cell / 13, cell % 13, ["exact", "plus", "minus"][which]))
                .measure("s", s)
                .measure("t", t)
                .measure("u", s * t + delta)
                .tolerance("mult", tol)
                .check(got == (which == 0))
        })
        .collect()
}

/// pSIN at 50 values of `s ∈ (0, 2π)`: true at `t = sin s`, false at
/// `t = sin s ± 10⁻³` with auxiliaries fitted to the perturbed or to the
/// true `t`.
fn sine(ctx: &SuiteContext) -> Vec<Case> {
    let p = PairExpr::var;
    let f = ctx.gadgets().psin(&p("S"), &p("T"), &p("U1"), &p("U2"));
    let (m, tol) = (ctx.l1.params.m, ctx.config.tol_logic);
    let variants: [(&str, f64, bool); 5] =
        [("exact", 0.0, true), ("plus", 1e-3, true), ("minus", -1e-3, true), ("plus-true-aux", 1e-3, false), ("minus-true-aux", -1e-3, false)];
    (0..50 * variants.len())
        .into_par_iter()
        .map(|i| {
            let (j, (name, delta, fit)) = (i / variants.len(), variants[i % variants.len()]);
            let s = TAU * (j as f64 + 0.5) / 50.0;
            let t = s.sin() + delta;
            let (u1, u2) = sine_aux(s, if fit { t } else { s.sin() }, m);
            let mut a = Assignment::new();
            real_pairs(&mut a, &[("S", s), ("T", t), ("U1", u1), ("U2", u2)]);
            Case::new(format!("s{j:02}-{name}"))
                .measure("s", s)
                .measure("t", t)
                .tolerance("logic", tol)
                .check(holds(ctx, &f, &a, tol) == (delta == 0.0))
        })
        .collect()
}

/// Numeral pairs, pN at naturals and non-naturals, pPi at `π` and nearby.
fn numerals(ctx: &SuiteContext) -> Vec<Case> {
    let g = ctx.gadgets();
    let space = ctx.space();
    let (m, tol) = (ctx.l1.params.m, ctx.config.tol_logic);
    let p = PairExpr::var;
    let mut cases = Vec::new();
    let (e1, e2) = e(2);
    let mut base = Assignment::new();
    base.set_vector("e1", e1.clone()).set_vector("e2", e2.clone());
    for i in -3i64..=10 {
        let n = PairExpr::numeral(i);
        let first = crate::logic::eval_vector(&space, &n.first, &base).unwrap_or_default();
        let second = crate::logic::eval_vector(&space, &n.second, &base).unwrap_or_default();
        let x = i as f64;
        let err = first.max_dist(&e1.scale(-x)).max(second.max_dist(&e2.scale(x)));
        cases.push(Case::new(format!("numeral{:+03}", i)).measure("error", err).check(err == 0.0));
    }
    let pn = g.pn(&p("X"), &p("U1"), &p("U2"), &p("U3"));
    let xs: Vec<(f64, bool)> = (0..=10).map(|i| (f64::from(i), true)).chain([(0.5, false), (1.5, false), (2.25, false), (1e-3, false)]).collect();
    for (x, want) in xs {
        let u1 = (x + 1.0) * PI;
        let (u2, u3) = sine_aux(u1, 0.0, m);
        let mut a = Assignment::new();
        real_pairs(&mut a, &[("A", PI), ("X", x), ("U1", u1), ("U2", u2), ("U3", u3)]);
        cases.push(Case::new(format!("pN-{x}")).measure("x", x).tolerance("logic", tol).check(holds(ctx, &pn, &a, tol) == want));
    }
    let ppi = g.ppi(&p("A"), &p("U1"), &p("U2"));
    for (name, x, want) in [("pi", PI, true), ("pi-plus", PI + 1e-3, false), ("two-pi", TAU, false), ("three", 3.0, false)] {
        let (u1, u2) = sine_aux(x, 0.0, m);
        let mut a = Assignment::new();
        real_pairs(&mut a, &[("A", x), ("U1", u1), ("U2", u2)]);
        cases.push(Case::new(format!("pPi-{name}")).measure("x", x).tolerance("logic", tol).check(holds(ctx, &ppi, &a, tol) == want));
    }
    cases
}

const PW_NAMES: [&str; 5] = ["p1", "p2", "u1", "u2", "u3"];

/// The canonical tuple for `pW(p₁, p₂, u₁, u₂, u₃)`.
pub fn canonical_tuple(l1: &L1) -> [Vec2; 5] {
    let p = &l1.params;
    [Vec2::E1, Vec2::E2, p.w1, p.w2, p.w3]
}

/// pW accepts `±(e₁, e₂, w₁, w₂, w₃)` and rejects 100 perturbations of
/// magnitude at least 10⁻³.
fn pw(ctx: &SuiteContext) -> Vec<Case> {
    let v = VectorTerm::var;
    let f = ctx.gadgets().pw(v("p1"), v("p2"), v("u1"), v("u2"), v("u3"));
    let tol = ctx.config.tol_logic;
    let canon = canonical_tuple(&ctx.l1);
    let eval = |tuple: &[Vec2; 5]| {
        let mut a = Assignment::new();
        for (name, w) in PW_NAMES.iter().zip(tuple) {
            a.set_vector(*name, VecN::embed(*w, 2));
        }
        holds(ctx, &f, &a, tol)
    };
    let mut cases = vec![
        Case::new("canonical").tolerance("logic", tol).check(eval(&canon)),
        Case::new("negated").tolerance("logic", tol).check(eval(&canon.map(|w| -w))),
    ];
    cases.par_extend((0..100).into_par_iter().map(|i| {
        let mut rng = ctx.rng("pw", i);
        let mask = rng.gen_range(1u32..32);
        let mut tuple = canon;
        let mut size = 0.0f64;
        for (j, w) in tuple.iter_mut().enumerate() {
            if mask & (1 << j) != 0 {
                let mag = 10f64.powf(rng.gen_range(-3.0..-1.0));
                *w = *w + Vec2::polar(rng.gen_range(0.0..TAU)) * mag;
                size = size.max(mag);
            }
        }
        if rng.gen_bool(0.5) {
            tuple = tuple.map(|w| -w);
        }
        Case::new(id("perturbed", i)).measure("mask", f64::from(mask)).measure("magnitude", size).check(!eval(&tuple))
    }));
    cases
}

/// Expected outcome of one crafted circle pair.
struct Crafted {
    name: &'static str,
    space: NormedSpace,
    p: Vec2,
    r: f64,
    q: Vec2,
    s: f64,
    class: Classification,
    /// Number of isolated points among the components, when pinned.
    points: Option<usize>,
}

fn crafted_pairs(ctx: &SuiteContext) -> Vec<Crafted> {
    let euc = NormedSpace::plane(crate::geometry::BoundarySpec::euclidean());
    let l1 = ctx.space();
    let p = &ctx.l1.params;
    let d13 = (p.w3 - p.w1) * (1.0 / (p.w3 - p.w1).euclid());
    let o = Vec2::ZERO;
    use Classification::*;
    let c = |name, space: &NormedSpace, p, r, q, s, class, points| Crafted { name, space: space.clone(), p, r, q, s, class, points };
    vec![
        c("euc-two-points", &euc, o, 1.0, Vec2::new(1.0, 0.0), 1.0, TwoComponents, Some(2)),
        c("euc-disjoint", &euc, o, 1.0, Vec2::new(3.0, 0.0), 1.0, Disjoint, None),
        c("euc-nested", &euc, o, 1.0, Vec2::new(0.2, 0.1), 2.0, Disjoint, None),
        c("euc-equal", &euc, o, 1.0, o, 1.0, Equal, None),
        c("l1-two-points", &l1, o, 1.0, Vec2::new(0.3, 0.3), 1.0, TwoComponents, Some(2)),
        c("l1-disjoint", &l1, o, 1.0, Vec2::new(5.0, 0.0), 1.5, Disjoint, None),
        c("l1-segments", &l1, o, 1.0, d13 * 0.05, 1.0, TwoComponents, Some(0)),
        c("l1-w1-q", &l1, p.w1, p.q_f64(), o, 1.0, TwoComponents, Some(2)),
        c("l1-w2-q", &l1, p.w2, p.q_f64(), o, 1.0, TwoComponents, Some(2)),
    ]
}

/// Crafted circle pairs: classification, component kinds and membership of
/// every reported point in both circles.
fn intersection(ctx: &SuiteContext) -> Vec<Case> {
    let tol = ctx.config.tol_geom;
    crafted_pairs(ctx)
        .into_par_iter()
        .map(|c| {
            let case = Case::new(c.name).tolerance("membership", 1e3 * tol);
            let Ok(rep) = intersect_circles(&c.space, c.p, c.r, c.q, c.s, 1 << 14, tol) else {
                return case.note("intersect_circles failed").check(false);
            };
            let mut worst = 0.0f64;
            for comp in &rep.components {
                for x in comp.points() {
                    let e1 = (c.space.norm2(x - c.p) - c.r).abs();
                    let e2 = (c.space.norm2(x - c.q) - c.s).abs();
                    worst = worst.max(e1).max(e2);
                }
            }
            let points = rep.components.iter().filter(|x| matches!(x, crate::geometry::Component::IsolatedPoint(_))).count();
            let ok = rep.classification == c.class && c.points.is_none_or(|n| n == points) && worst <= 1e3 * tol;
            case.measure("components", rep.components.len() as f64)
                .measure("isolated_points", points as f64)
                .measure("membership_error", worst)
                .note(format!("{:?}", rep.classification))
                .check(ok)
        })
        .collect()
}

/// Draws `(a, c)` with `a` on the unit circle of 𝓛₁ scaled by `rho` and
/// `|c|ₑ = √(1 − rho²)`.
fn sphere_point(rng: &mut ChaCha8Rng, k: usize, a: Vec2, rho: f64) -> VecN {
    let mut c = random_vec(rng, k, 1.0);
    let len = c.euclid();
    c = if len > 0.0 { c.scale((1.0 - rho * rho).max(0.0).sqrt() / len) } else { VecN::zeros(k) };
    let mut xs = vec![a.x * rho, a.y * rho];
    xs.extend_from_slice(c.as_slice());
    VecN::from_slice(&xs)
}

/// In `𝓛₁ ×₂ Euclidean(k)`, unit pairs with unit midpoint have equal right
/// components. Candidates are drawn on the unit sphere: half lie on a common
/// segment `{(ρ·x, c) : x ∈ [a, b]}`, the other half share the left
/// segment but move the right component by at least 10⁻³ (or move the
/// left points off a common segment).
fn two_sum_suite(ctx: &SuiteContext) -> Vec<Case> {
    let segs = ctx.l1.maximal_segments();
    let b = ctx.l1.boundary.clone();
    let mut cases = Vec::new();
    for k in [1usize, 2] {
        let space = two_sum(ctx.space(), NormedSpace::euclidean(k));
        let found: Vec<Case> = (0..2000)
            .into_par_iter()
            .map(|i| {
                let mut rng = ctx.rng(&format!("two-sum-{k}"), i);
                let (a0, a1) = segs[rng.gen_range(0..4)];
                let unit = |v: Vec2| v * (1.0 / b.norm(v));
                let x = unit(a0.lerp(a1, rng.gen_range(0.0..1.0)));
                let mut y = unit(a0.lerp(a1, rng.gen_range(0.0..1.0)));
                let rho = rng.gen_range(0.05..1.0);
                let w1 = sphere_point(&mut rng, k, x, rho);
                let mut w2 = w1.clone();
                match i % 4 {
                    0 | 1 => {}
                    2 => {
                        // Right component rotated by at least 10⁻³ relative.
                        let c = VecN::from_slice(&w1.as_slice()[2..]);
                        let shift = random_vec(&mut rng, k, 1.0);
                        let dir = if shift.euclid() > 0.0 { shift.scale(1.0 / shift.euclid()) } else { VecN::embed(Vec2::E1, k) };
                        let c2 = c.add(&dir.scale(rng.gen_range(1e-3..0.5)));
                        let rho2 = (1.0 - c2.euclid().powi(2)).max(0.0).sqrt();
                        let mut xs = vec![y.x * rho2, y.y * rho2];
                        xs.extend_from_slice(c2.as_slice());
                        w2 = VecN::from_slice(&xs);
                    }
                    _ => {
                        y = b.boundary_point(rng.gen_range(0.0..TAU));
                    }
                }
                if i % 4 != 2 {
                    let mut xs = vec![y.x * rho, y.y * rho];
                    xs.extend_from_slice(&w1.as_slice()[2..]);
                    w2 = VecN::from_slice(&xs);
                }
                (i, w1, w2)
            })
            .filter_map(|(i, w1, w2)| {
                let n1 = space.norm(w1.as_slice());
                let n2 = space.norm(w2.as_slice());
                let mid = space.norm(w1.add(&w2).scale(0.5).as_slice());
                let premise = (n1 - 1.0).abs() <= 1e-9 && (n2 - 1.0).abs() <= 1e-9 && mid >= 1.0 - 1e-9;
                if !premise {
                    return None;
                }
                let right = VecN::from_slice(&w1.as_slice()[2..]).max_dist(&VecN::from_slice(&w2.as_slice()[2..]));
                Some(
                    Case::new(format!("k{k}-{i:05}"))
                        .measure("midpoint_norm", mid)
                        .measure("right_distance", right)
                        .tolerance("right", 1e-6)
                        .check(right <= 1e-6),
                )
            })
            .collect();
        cases.extend(found.into_iter().take(1000));
    }
    cases
}

/// Flattening corpus: formulas over inputs `x₁ … x_k`.
pub const FLATTEN_CORPUS: [&str; 20] = [
    "x1 = 2",
    "x1*x1 = 4",
    "x1 + x2 = x2 + x1 and x1 = 1",
    "x1 + 1 = x1",
    "x1*x1 = 2",
    "x1 <= x2 and x2 + 1 <= x1",
    "x1*x2 = 6 or x1 = 0",
    "not x1*x1 = x1",
    "x1*x1 <= x2",
    "x1*(x2 + 1) = 4",
    "x1 < x2 and x2*x2 = 9",
    "x1*x1 + x2 = 5",
    "not (x1 = 1 or x2 = 2)",
    "x1*3 = x2 + 1",
    "2*x1 = 7",
    "x1*x1*x1 = 8",
    "x1 + x2 + x3 = 4 and x1*x2 = x3",
    "x1 <= 3 and not x1 = 2",
    "(x1 + 1)*(x2 + 1) = 6",
    "x1*x2 = x2*x1",
];

/// `Q(x) ⇔ ∃ triple values (sᵢ, tᵢ ∈ [0, bound], zᵢ = sᵢtᵢ) with Q₁`,
/// enumerated exactly. Returns the number of disagreements and the number
/// of input points.
pub fn flatten_disagreements(text: &str, x_bound: u64, st_bound: u64) -> Result<(usize, usize), String> {
    let q = parse_arith(text).map_err(|e| e.to_string())?;
    let flat = flatten_multiplications(&q).map_err(|e| e.to_string())?;
    let k = flat.k;
    let m = flat.m;
    let mut bad = 0;
    let mut total = 0;
    let mut xs = vec![0u64; k];
    loop {
        total += 1;
        let want = q.eval_inputs(&xs) == Some(true);
        let mut st = vec![0u64; 2 * m];
        let got = loop {
            let env = |v: ArithVar| {
                Some(u128::from(match v {
                    ArithVar::X(i) => *xs.get(i - 1)?,
                    ArithVar::S(i) => *st.get(2 * (i - 1))?,
                    ArithVar::T(i) => *st.get(2 * (i - 1) + 1)?,
                    ArithVar::Z(i) => st.get(2 * (i - 1))? * st.get(2 * (i - 1) + 1)?,
                }))
            };
            if flat.q1.eval(&env) == Some(true) {
                break true;
            }
            if !odometer(&mut st, st_bound) {
                break false;
            }
        };
        if got != want {
            bad += 1;
        }
        if !odometer(&mut xs, x_bound) {
            return Ok((bad, total));
        }
    }
}

/// Advances `xs` through `[0, bound]^n`; false after the last tuple.
fn odometer(xs: &mut [u64], bound: u64) -> bool {
    for x in xs.iter_mut().rev() {
        if *x < bound {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

fn flatten(_ctx: &SuiteContext) -> Vec<Case> {
    FLATTEN_CORPUS
        .par_iter()
        .enumerate()
        .map(|(i, text)| {
            let case = Case::new(id("formula", i)).note(*text);
            match flatten_disagreements(text, 5, 25) {
                Ok((bad, total)) => {
                    case.measure("disagreements", bad as f64).measure("inputs", total as f64).check(bad == 0)
                }
                Err(e) => case.note(e).check(false),
            }
        })
        .collect()
}

/// Sampling seeds for `A`: the `sentence_a_seed` family over a range of `s`.
pub fn sentence_a_seeds(l1: &L1, d: usize) -> Vec<Assignment> {
    (0..50).map(|i| sentence_a_seed(l1, d, 0.13 * f64::from(i), 0.5, 0.5)).collect()
}

/// `eval_bounded` on `A` finds no counterexample; a control sentence
/// `∀v. ‖v‖ = 1` does.
fn sentence_a(ctx: &SuiteContext) -> Vec<Case> {
    let space = ctx.space();
    let tol = ctx.config.tol_logic;
    let budget = ctx.config.sample_budget;
    let a = ctx.gadgets().sentence_a();
    let matrix = universal_matrix(&a).map(|(_, m)| m);
    let sampler = Sampler::for_l1(&ctx.l1, 2, ctx.config.seed).with_seeds(sentence_a_seeds(&ctx.l1, 2));
    let sampler = match &matrix {
        Ok(m) => sampler.with_bindings_from(m),
        Err(_) => sampler,
    };
    let outcome = eval_bounded(&space, &a, &sampler, budget, tol);
    let main = Case::new("A").measure("budget", budget as f64).tolerance("logic", tol);
    let main = match outcome {
        Ok(BoundedOutcome::HoldsOnSamples { samples }) => main.measure("samples", samples as f64).check(true),
        Ok(BoundedOutcome::Counterexample(c)) => main.note(serde_json::to_string(&c).unwrap_or_default()).check(false),
        Err(e) => main.note(e.to_string()).check(false),
    };
    let control = Formula::forall(
        vec![crate::logic::Binder::vector("v")],
        Formula::Eq(VectorTerm::var("v").norm(), crate::logic::ScalarTerm::int(1)),
    );
    let found = eval_bounded(&space, &control, &Sampler::new(2, ctx.config.seed), 1000, tol);
    let control_case = Case::new("control-unit-norm").check(matches!(found, Ok(BoundedOutcome::Counterexample(_))));
    vec![
        Case::new("A-shape").check(a.is_closed() && crate::logic::universal_form(&a).is_some()),
        main,
        control_case,
    ]
}

/// The end-to-end corpus: `(formula, satisfiable)`.
pub const E2E_CORPUS: [(&str, bool); 6] = [
    ("x1 = 2", true),
    ("x1*x1 = 4", true),
    ("x1 + x2 = x2 + x1 and x1 = 1", true),
    ("x1 + 1 = x1", false),
    ("x1*x1 = 2", false),
    ("x1 <= x2 and x2 + 1 <= x1", false),
];

/// Seeds for sampling `B`: antecedent assignments at all inputs in
/// `[0, 5]^k` (at most 36 of them).
pub fn sentence_b_seeds(flat: &crate::reduction::FlattenResult, l1: &L1, space: &NormedSpace) -> Vec<Assignment> {
    let mut xs = vec![0u64; flat.k];
    let mut out = Vec::new();
    loop {
        out.push(antecedent_assignment(flat, &xs, l1, space));
        if out.len() >= 36 || !odometer(&mut xs, 5) {
            return out;
        }
    }
}

/// Sat inputs: the lifted witness falsifies `B`'s matrix. Unsat inputs: no
/// witness up to 100 and `eval_bounded` finds no counterexample.
fn reduction_e2e(ctx: &SuiteContext) -> Vec<Case> {
    let space = ctx.space();
    let tol = ctx.config.tol_logic;
    E2E_CORPUS
        .iter()
        .enumerate()
        .map(|(i, (text, sat))| e2e_case(ctx, &space, id("formula", i), text, *sat, tol))
        .collect()
}

fn e2e_case(ctx: &SuiteContext, space: &NormedSpace, cid: String, text: &str, sat: bool, tol: f64) -> Case {
    let case = Case::new(cid).note(text);
    let q = match parse_arith(text) {
        Ok(q) => q,
        Err(e) => return case.note(e.to_string()).check(false),
    };
    let out = match compile(&q, 2, &ctx.l1.params) {
        Ok(o) => o,
        Err(e) => return case.note(e.to_string()).check(false),
    };
    let shape = out.aia_shape && check_aia_shape(&out.implication());
    let case = case.measure("aia_shape", f64::from(u8::from(shape)));
    let witness = bounded_nat_sat(&q, 100);
    if sat {
        let Some(w) = witness else {
            return case.note("no witness up to 100").check(false);
        };
        match lift_witness(&q, &w, &ctx.l1, space, tol) {
            Ok(_) => case.measure("witness_x1", w.first().copied().unwrap_or(0) as f64).check(shape),
            Err(e) => case.note(e.to_string()).check(false),
        }
    } else {
        if witness.is_some() {
            return case.note(format!("unexpected witness {witness:?}")).check(false);
        }
        let matrix = universal_matrix(&out.b).map(|(_, m)| m);
        let sampler = Sampler::for_l1(&ctx.l1, 2, ctx.config.seed).with_seeds(sentence_b_seeds(&out.flat, &ctx.l1, space));
        let sampler = match &matrix {
            Ok(m) => sampler.with_bindings_from(m),
            Err(_) => sampler,
        };
        match eval_bounded(space, &out.b, &sampler, ctx.config.sample_budget, tol) {
            Ok(BoundedOutcome::HoldsOnSamples { samples }) => case.measure("samples", samples as f64).check(shape),
            Ok(BoundedOutcome::Counterexample(c)) => case.note(serde_json::to_string(&c).unwrap_or_default()).check(false),
            Err(e) => case.note(e.to_string()).check(false),
        }
    }
}
