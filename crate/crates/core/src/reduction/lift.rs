use std::f64::consts::PI;

use super::arith::ArithFormula;
use super::compile::compile;
use super::flatten::FlattenResult;
use super::ReductionError;
use crate::geometry::{g_eval, NormedSpace, Vec2, VecN, L1};
use crate::logic::{eval_qf, explain_false, universal_matrix, Assignment, Formula};

/// First `(x₁ … x_k) ∈ [0, bound]^k` in lexicographic order satisfying `q`.
pub fn bounded_nat_sat(q: &ArithFormula, bound: u64) -> Option<Vec<u64>> {
    let k = q.num_inputs();
    let mut xs = vec![0u64; k];
    loop {
        if q.eval_inputs(&xs) == Some(true) {
            return Some(xs);
        }
        // Increment with the last coordinate fastest, so x₁ is most significant.
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if xs[i] < bound {
                xs[i] += 1;
                break;
            }
            xs[i] = 0;
        }
    }
}

fn basis(d: usize) -> (VecN, VecN) {
    (VecN::embed(Vec2::E1, d), VecN::embed(Vec2::E2, d))
}

fn set_real(a: &mut Assignment, name: &str, s: f64, d: usize) {
    let (e1, e2) = basis(d);
    a.set_real_pair(name, s, &e1, &e2);
}

/// `pSIN(S, T, U₁, U₂)` auxiliaries: `U₁ = (1+s)(2s + s² + t/M)`, `U₂ = s²`.
pub fn sine_aux(s: f64, t: f64, m: u32) -> (f64, f64) {
    ((1.0 + s) * (2.0 * s + s * s + t / f64::from(m)), s * s)
}

/// The canonical tuple `e₁, e₂, w₁, w₂, w₃`, for `d > 2` the splitting
/// `eᵢ = aᵢ + bᵢ` along `w₁`, `w₂`, and the pairs `A = π`, `U₁`, `U₂`
/// witnessing `pPi(A, U₁, U₂)`.
pub fn head_assignment(l1: &L1, d: usize) -> Assignment {
    let p = &l1.params;
    let mut a = Assignment::new();
    for (name, w) in [("e1", Vec2::E1), ("e2", Vec2::E2), ("w1", p.w1), ("w2", p.w2), ("w3", p.w3)] {
        a.set_vector(name, VecN::embed(w, d));
    }
    if d > 2 {
        let det = p.w1.cross(p.w2);
        for (i, e) in [(1, Vec2::E1), (2, Vec2::E2)] {
            let alpha = e.cross(p.w2) / det;
            let beta = p.w1.cross(e) / det;
            a.set_vector(format!("a{i}"), VecN::embed(p.w1 * alpha, d));
            a.set_vector(format!("b{i}"), VecN::embed(p.w2 * beta, d));
        }
    }
    let (u1, u2) = sine_aux(PI, 0.0, p.m);
    set_real(&mut a, "A", PI, d);
    set_real(&mut a, "U1", u1, d);
    set_real(&mut a, "U2", u2, d);
    a
}

/// Pairs for `pN(X, U₁, U₂, U₃)` at the natural `x`: `U₁ = (x+1)π` and the
/// `pSIN(U₁, 0, U₂, U₃)` auxiliaries.
fn set_natural(a: &mut Assignment, names: [String; 4], x: f64, m: u32, d: usize) {
    let u1 = (x + 1.0) * PI;
    let (u2, u3) = sine_aux(u1, 0.0, m);
    for (name, val) in names.iter().zip([x, u1, u2, u3]) {
        set_real(a, name, val, d);
    }
}

/// Assignment making the antecedent of `B` true for the inputs `xs` (any
/// naturals, satisfying `q` or not).
pub fn antecedent_assignment(flat: &FlattenResult, xs: &[u64], l1: &L1, space: &NormedSpace) -> Assignment {
    let d = space.dimension();
    let (m, k, mm) = (flat.m, flat.k, l1.params.m);
    let mut a = head_assignment(l1, d);
    let names = |l: &str, i: usize, n: usize| [i, n + i, 2 * n + i, 3 * n + i].map(|j| format!("{l}{j}"));
    for (i, (s, t, z)) in flat.triple_values(xs).into_iter().enumerate() {
        let i = i + 1;
        set_natural(&mut a, names("S", i, m), s as f64, mm, d);
        set_natural(&mut a, names("T", i, m), t as f64, mm, d);
        set_real(&mut a, &format!("Z{i}"), z as f64, d);
    }
    for i in 1..=k {
        set_natural(&mut a, names("X", i, k), xs.get(i - 1).copied().unwrap_or(0) as f64, mm, d);
    }
    let norm2 = |a: &Assignment, pair: String| space.norm(a.vectors[&format!("{pair}.2")].as_slice());
    for i in 1..=m {
        for (scalar, pair) in [("s", "S"), ("t", "T"), ("z", "Z")] {
            let x = norm2(&a, format!("{pair}{i}"));
            a.set_scalar(format!("{scalar}{i}"), x);
        }
    }
    for i in 1..=k {
        let x = norm2(&a, format!("X{i}"));
        a.set_scalar(format!("x{i}"), x);
    }
    a
}

/// A falsifying assignment for the matrix of `B`, built from a witness of
/// `q`: every antecedent conjunct holds within `tol` and `Q₁` holds.
pub fn lift_witness(
    q: &ArithFormula,
    witness: &[u64],
    l1: &L1,
    space: &NormedSpace,
    tol: f64,
) -> Result<Assignment, ReductionError> {
    let k = q.num_inputs();
    if witness.len() != k {
        return Err(ReductionError::WitnessInvalid(format!("expected {k} values, got {}", witness.len())));
    }
    if q.eval_inputs(witness) != Some(true) {
        return Err(ReductionError::WitnessInvalid(format!("{witness:?} does not satisfy {q}")));
    }
    let out = compile(q, space.dimension(), &l1.params)?;
    let a = antecedent_assignment(&out.flat, witness, l1, space);
    let (_, matrix) = universal_matrix(&out.b)?;
    let Formula::Implies(ante, cons) = &matrix else {
        unreachable!("B is an implication");
    };
    if let Some(why) = explain_false(space, ante, &a, tol)? {
        return Err(ReductionError::ToleranceBreach(why));
    }
    if let Some(why) = explain_false(space, &Formula::not((**cons).clone()), &a, tol)? {
        return Err(ReductionError::ToleranceBreach(why));
    }
    debug_assert!(!eval_qf(space, &matrix, &a, tol)?);
    Ok(a)
}

/// An assignment for the variables of `A` on which every gadget of its
/// antecedent and of `Periodic` is satisfiable: `S = s`, `T = sin s`, the
/// `pSIN` auxiliaries for `s` and `s + π`, `x = −α·e₁`, `y = β·e₂` and
/// `z = x + y`.
pub fn sentence_a_seed(l1: &L1, d: usize, s: f64, alpha: f64, beta: f64) -> Assignment {
    let m = l1.params.m;
    let mut a = head_assignment(l1, d);
    let (e1, e2) = basis(d);
    let t = s.sin();
    let (v1, v2) = sine_aux(s, t, m);
    let s2 = s + PI;
    let t2 = s2.sin();
    let (v4, v5) = sine_aux(s2, t2, m);
    for (name, val) in [("S", s), ("T", t), ("V1", v1), ("V2", v2), ("V3", t2), ("V4", v4), ("V5", v5)] {
        set_real(&mut a, name, val, d);
    }
    let x = e1.scale(-alpha);
    let y = e2.scale(beta);
    a.set_vector("z", x.add(&y));
    a.set_vector("x", x);
    a.set_vector("y", y);
    debug_assert!((g_eval(s, m) - (2.0 * s + s * s + t / f64::from(m))).abs() < 1e-9);
    a
}
