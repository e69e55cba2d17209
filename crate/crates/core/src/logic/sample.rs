use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ast::{Binder, Formula, ScalarTerm, Sort, VectorTerm};
use super::eval::{eval_qf, eval_scalar, Assignment};
use super::LogicError;
use crate::geometry::{NormedSpace, Vec2, VecN, L1};

/// Outcome of a sampling search for a falsifying assignment.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundedOutcome {
    HoldsOnSamples { samples: usize },
    Counterexample(Assignment),
}

impl BoundedOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, BoundedOutcome::HoldsOnSamples { .. })
    }
}

/// Seeded generator of assignments for the universally quantified
/// variables of a sentence.
///
/// Draws mix uniform box samples, special vectors (zero, `±e₁`, `±e₂`,
/// the `w`-points), pair representations `(−s·e₁, s·e₂)` for variables named
/// `X.1`/`X.2`, the canonical configuration for `e1 … w3`, and mutations of
/// supplied seed assignments. Scalars bound by an antecedent atom
/// `s = ‖t‖` are usually set to that norm.
#[derive(Clone, Debug)]
pub struct Sampler {
    seed: u64,
    dim: usize,
    pub box_radius: f64,
    e1: VecN,
    e2: VecN,
    specials: Vec<VecN>,
    canonical: BTreeMap<String, VecN>,
    reals: Vec<f64>,
    seeds: Vec<Assignment>,
    bindings: Vec<(String, VectorTerm)>,
}

impl Sampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        let e1 = VecN::embed(Vec2::E1, dim);
        let e2 = VecN::embed(Vec2::E2, dim);
        let specials = vec![VecN::zeros(dim), e1.clone(), e1.neg(), e2.clone(), e2.neg()];
        let pi = std::f64::consts::PI;
        let mut reals: Vec<f64> = (0..=10).map(f64::from).collect();
        reals.extend([-1.0, -2.0, 0.5, pi, 2.0 * pi, 3.0 * pi, pi * pi, pi.sin(), 1.0 + pi]);
        Sampler {
            seed,
            dim,
            box_radius: 4.0,
            e1,
            e2,
            specials,
            canonical: BTreeMap::new(),
            reals,
            seeds: Vec::new(),
            bindings: Vec::new(),
        }
    }

    /// Adds the points `w₁, w₂, w₃` of a constructed plane, embedded in
    /// the first two coordinates, and the canonical tuple for the variables
    /// `e1, e2, w1, w2, w3`.
    pub fn for_l1(l1: &L1, dim: usize, seed: u64) -> Self {
        let mut s = Sampler::new(dim, seed);
        let p = &l1.params;
        for (name, w) in [("e1", Vec2::E1), ("e2", Vec2::E2), ("w1", p.w1), ("w2", p.w2), ("w3", p.w3)] {
            let v = VecN::embed(w, dim);
            if name.starts_with('w') {
                s.specials.push(v.clone());
                s.specials.push(v.neg());
            }
            s.canonical.insert(name.to_string(), v);
        }
        s
    }

    pub fn with_seeds(mut self, seeds: Vec<Assignment>) -> Self {
        self.seeds = seeds;
        self
    }

    pub fn with_reals(mut self, extra: impl IntoIterator<Item = f64>) -> Self {
        self.reals.extend(extra);
        self
    }

    /// Registers every atom `s = ‖t‖` of `f` (with `s` a scalar variable)
    /// as a binding hint.
    pub fn with_bindings_from(mut self, f: &Formula) -> Self {
        collect_bindings(f, &mut self.bindings);
        self
    }

    fn random_vector(&self, rng: &mut ChaCha8Rng) -> VecN {
        if rng.gen_bool(0.3) {
            return self.specials[rng.gen_range(0..self.specials.len())].clone();
        }
        let r = self.box_radius;
        let xs: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-r..r)).collect();
        VecN::from_slice(&xs)
    }

    fn random_real(&self, rng: &mut ChaCha8Rng) -> f64 {
        if rng.gen_bool(0.5) {
            self.reals[rng.gen_range(0..self.reals.len())]
        } else {
            rng.gen_range(-2.0 * self.box_radius..2.0 * self.box_radius)
        }
    }

    fn draw_fresh(&self, rng: &mut ChaCha8Rng, binders: &[Binder], structured: bool) -> Assignment {
        let mut a = Assignment::new();
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let mut pair_reals: BTreeMap<&str, f64> = BTreeMap::new();
        for b in binders {
            match b.sort {
                Sort::Scalar => {
                    a.set_scalar(b.name.clone(), self.random_real(rng));
                }
                Sort::Vector => {
                    let v = match (structured, pair_component(&b.name)) {
                        (true, Some((base, idx))) => {
                            let s = *pair_reals.entry(base).or_insert_with(|| self.random_real(rng));
                            if idx == 1 {
                                self.e1.scale(-s)
                            } else {
                                self.e2.scale(s)
                            }
                        }
                        _ => match self.canonical.get(&b.name) {
                            Some(c) if structured => c.scale(sign),
                            _ => self.random_vector(rng),
                        },
                    };
                    a.set_vector(b.name.clone(), v);
                }
            }
        }
        a
    }

    fn redraw_one(&self, rng: &mut ChaCha8Rng, a: &mut Assignment, b: &Binder) {
        match b.sort {
            Sort::Scalar => {
                a.set_scalar(b.name.clone(), self.random_real(rng));
            }
            Sort::Vector => {
                let old = a.vectors.get(&b.name).cloned();
                let v = match old {
                    Some(o) if rng.gen_bool(0.5) => {
                        let eps = 10f64.powf(rng.gen_range(-4.0..-1.0));
                        let xs: Vec<f64> = o.as_slice().iter().map(|x| x + rng.gen_range(-eps..eps)).collect();
                        VecN::from_slice(&xs)
                    }
                    _ => self.random_vector(rng),
                };
                a.set_vector(b.name.clone(), v);
            }
        }
    }

    /// One assignment for `binders`.
    pub fn draw(&self, rng: &mut ChaCha8Rng, space: &NormedSpace, binders: &[Binder]) -> Assignment {
        let u: f64 = rng.gen();
        let mut a = if !self.seeds.is_empty() && u < 0.15 {
            let mut a = self.draw_fresh(rng, binders, true);
            a.extend(&self.seeds[rng.gen_range(0..self.seeds.len())]);
            let mutations = rng.gen_range(0..3);
            for _ in 0..mutations {
                let b = &binders[rng.gen_range(0..binders.len())];
                self.redraw_one(rng, &mut a, b);
            }
            a
        } else {
            self.draw_fresh(rng, binders, u < 0.6)
        };
        for (s, t) in &self.bindings {
            if a.scalars.contains_key(s) && rng.gen_bool(0.9) {
                if let Ok(x) = eval_scalar(space, &t.clone().norm(), &a) {
                    a.set_scalar(s.clone(), x);
                }
            }
        }
        a
    }

    /// Every vector zero and every scalar zero; the first sample of a search.
    pub fn zero_assignment(&self, binders: &[Binder]) -> Assignment {
        let mut a = Assignment::new();
        for b in binders {
            match b.sort {
                Sort::Scalar => a.set_scalar(b.name.clone(), 0.0),
                Sort::Vector => a.set_vector(b.name.clone(), VecN::zeros(self.dim)),
            };
        }
        a
    }

    fn rng_for_chunk(&self, chunk: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(chunk as u64 + 1);
        rng
    }
}

fn pair_component(name: &str) -> Option<(&str, u8)> {
    let (base, idx) = name.rsplit_once('.')?;
    match idx {
        "1" => Some((base, 1)),
        "2" => Some((base, 2)),
        _ => None,
    }
}

fn collect_bindings(f: &Formula, out: &mut Vec<(String, VectorTerm)>) {
    match f {
        Formula::Eq(ScalarTerm::Var(s), ScalarTerm::Norm(t)) => out.push((s.clone(), (**t).clone())),
        Formula::Eq(..) | Formula::Le(..) | Formula::Lt(..) | Formula::VecEq(..) => {}
        Formula::Macro(m) => collect_bindings(&m.body, out),
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => collect_bindings(g, out),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| collect_bindings(g, out)),
        Formula::Implies(a, b) => {
            collect_bindings(a, out);
            collect_bindings(b, out);
        }
    }
}

/// Strips leading `∀` blocks and `¬∃` blocks, returning the universally
/// quantified variables and a quantifier-free matrix.
pub fn universal_matrix(f: &Formula) -> Result<(Vec<Binder>, Formula), LogicError> {
    let mut binders = Vec::new();
    let mut negate = false;
    let mut cur = f;
    loop {
        match (cur, negate) {
            (Formula::Macro(m), _) => cur = &m.body,
            (Formula::Forall(bs, g), false) | (Formula::Exists(bs, g), true) => {
                binders.extend(bs.iter().cloned());
                cur = g;
            }
            (Formula::Not(g), _) => {
                negate = !negate;
                cur = g;
            }
            _ => break,
        }
    }
    if !cur.is_quantifier_free() {
        return Err(LogicError::Unsupported(
            "bounded evaluation handles universal sentences (and negated existentials) only".into(),
        ));
    }
    let matrix = if negate { Formula::not(cur.clone()) } else { cur.clone() };
    Ok((binders, matrix))
}

const CHUNK: usize = 512;

/// Searches `budget` sampled assignments for one falsifying the universal
/// sentence `f`. An assignment counts only if the matrix is false at both
/// `tol` and `tol/10`. Chunks are seeded independently, so the outcome
/// depends only on the sampler's seed.
pub fn eval_bounded(
    space: &NormedSpace,
    f: &Formula,
    sampler: &Sampler,
    budget: usize,
    tol: f64,
) -> Result<BoundedOutcome, LogicError> {
    if !f.sort_check()?.is_empty() {
        return Err(LogicError::NotClosed);
    }
    let (binders, matrix) = universal_matrix(f)?;
    let matrix = matrix.expand();
    if binders.is_empty() {
        let holds = eval_qf(space, &matrix, &Assignment::new(), tol)?
            || eval_qf(space, &matrix, &Assignment::new(), tol / 10.0)?;
        return Ok(if holds {
            BoundedOutcome::HoldsOnSamples { samples: budget }
        } else {
            BoundedOutcome::Counterexample(Assignment::new())
        });
    }
    let chunks = budget.div_ceil(CHUNK);
    let found: Result<Vec<Option<Assignment>>, LogicError> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = sampler.rng_for_chunk(c);
            let n = CHUNK.min(budget - c * CHUNK);
            for i in 0..n {
                let a = if c == 0 && i == 0 {
                    sampler.zero_assignment(&binders)
                } else {
                    sampler.draw(&mut rng, space, &binders)
                };
                if !eval_qf(space, &matrix, &a, tol)? && !eval_qf(space, &matrix, &a, tol / 10.0)? {
                    return Ok(Some(a));
                }
            }
            Ok(None)
        })
        .collect();
    Ok(match found?.into_iter().flatten().next() {
        Some(a) => BoundedOutcome::Counterexample(a),
        None => BoundedOutcome::HoldsOnSamples { samples: budget },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_v(f: Formula) -> Formula {
        Formula::forall(vec![Binder::vector("v")], f)
    }

    #[test]
    fn trivial_sentences() {
        let space = NormedSpace::euclidean(2);
        let s = Sampler::new(2, 7);
        let v = VectorTerm::var("v");
        let nonneg = all_v(Formula::Le(ScalarTerm::int(0), v.clone().norm()));
        assert!(eval_bounded(&space, &nonneg, &s, 2000, 1e-6).unwrap().holds());
        let unit = all_v(Formula::Eq(v.norm(), ScalarTerm::int(1)));
        match eval_bounded(&space, &unit, &s, 2000, 1e-6).unwrap() {
            BoundedOutcome::Counterexample(a) => assert_eq!(a.vectors["v"], VecN::zeros(2)),
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn negated_existential_is_universal() {
        let v = VectorTerm::var("v");
        let f = Formula::not(Formula::exists(
            vec![Binder::vector("v")],
            Formula::Lt(v.norm(), ScalarTerm::int(0)),
        ));
        let (bs, m) = universal_matrix(&f).unwrap();
        assert_eq!(bs.len(), 1);
        assert!(matches!(m, Formula::Not(_)));
        let open = Formula::exists(vec![Binder::vector("v")], Formula::VecEq(VectorTerm::var("v"), VectorTerm::Zero));
        assert!(universal_matrix(&open).is_err());
    }

    #[test]
    fn deterministic_by_seed() {
        let space = NormedSpace::euclidean(2);
        let s = Sampler::new(2, 99);
        let v = VectorTerm::var("v");
        let f = all_v(Formula::Le(v.norm(), ScalarTerm::int(3)));
        let a = eval_bounded(&space, &f, &s, 3000, 1e-6).unwrap();
        let b = eval_bounded(&space, &f, &s, 3000, 1e-6).unwrap();
        assert_eq!(a, b);
        assert!(!a.holds());
    }

    #[test]
    fn structured_draws_respect_pairs_and_bindings() {
        let space = NormedSpace::euclidean(2);
        let binding = Formula::Eq(ScalarTerm::var("s"), VectorTerm::var("S.2").norm());
        let s = Sampler::new(2, 3).with_bindings_from(&binding);
        let bs = vec![Binder::vector("S.1"), Binder::vector("S.2"), Binder::scalar("s")];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut paired = 0;
        let mut bound = 0;
        for _ in 0..200 {
            let a = s.draw(&mut rng, &space, &bs);
            let (p, q) = (&a.vectors["S.1"], &a.vectors["S.2"]);
            if (p.as_slice()[0] + q.as_slice()[1]).abs() < 1e-12 && p.as_slice()[1] == 0.0 {
                paired += 1;
            }
            if (a.scalars["s"] - q.euclid()).abs() < 1e-12 {
                bound += 1;
            }
        }
        assert!(paired > 80 && bound > 150, "paired {paired}, bound {bound}");
    }
}
