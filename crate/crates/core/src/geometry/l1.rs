//! Construction of the plane 𝓛₁: the γ-graph on the north-west quadrant,
//! euclidean arcs near `e₁`, `e₂` and two straight segments through `w₃`.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::boundary::{BoundarySpec, Piece};
use super::gamma::{concavity_gate, gamma_raw, l0_norm};
use super::roots::{bisect, sgn};
use super::{GeometryError, NormedSpace, Vec2};
use crate::rational::{self, Rational};

/// Constants of the 𝓛₁ construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L1Params {
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(with = "rational::as_str")]
    pub q: Rational,
    #[serde(with = "rational::as_str")]
    pub r: Rational,
    pub d: f64,
    pub w1: Vec2,
    pub w2: Vec2,
    pub w3: Vec2,
}

impl L1Params {
    pub fn q_f64(&self) -> f64 {
        rational::to_f64(self.q)
    }

    pub fn r_f64(&self) -> f64 {
        rational::to_f64(self.r)
    }

    /// The assembled upper half `U` of the unit circle, listed from `-e₁`
    /// clockwise to `e₁`.
    pub fn pieces(&self) -> Vec<Piece> {
        vec![
            Piece::GammaGraph { m: self.m },
            Piece::EuclideanArc { from_angle: FRAC_PI_2, to_angle: self.w2.angle() },
            Piece::Segment { a: self.w2, b: self.w3 },
            Piece::Segment { a: self.w3, b: self.w1 },
            Piece::EuclideanArc { from_angle: self.w1.angle(), to_angle: 0.0 },
        ]
    }

    /// Checks every constraint of the construction, returning one line per
    /// violated constraint.
    pub fn violations(&self, boundary: &BoundarySpec, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let quarter = Rational::new(1, 4);
        if !(self.q > Rational::zero() && self.q < quarter) {
            out.push(format!("q bound: q = {} not in (0, 1/4)", self.q));
        }
        if !(self.d > 0.75) {
            out.push(format!("d bound: d = {} not > 3/4", self.d));
        }
        if !(self.r_f64() > self.d / 3.0) {
            out.push(format!("r bound: r = {} not > d/3 = {}", self.r, self.d / 3.0));
        }
        for (name, w) in [("w1", self.w1), ("w2", self.w2)] {
            if (w.euclid() - 1.0).abs() > tol || !(w.x > 0.0 && w.y > 0.0) {
                out.push(format!("{name} is not a euclidean unit vector in the open NE quadrant"));
            }
        }
        if !(self.w3.euclid() < 1.0) {
            out.push(format!("|w3|_e = {} not < 1", self.w3.euclid()));
        }
        if !((self.w2 - self.w1).cross(self.w3 - self.w1) < 0.0) {
            out.push("w3 is not north-east of [w1, w2]".into());
        }
        let len13 = boundary.norm(self.w1 - self.w3);
        if (len13 - self.r_f64()).abs() > tol {
            out.push(format!("|w1 - w3| = {len13} differs from r = {}", self.r));
        }
        let len32 = boundary.norm(self.w3 - self.w2);
        if (len32 - 2.0 * self.r_f64()).abs() > tol {
            out.push(format!("|w3 - w2| = {len32} differs from 2r = {}", 2.0 * self.r_f64()));
        }
        for (name, e) in [("e1", Vec2::E1), ("e2", Vec2::E2), ("-e1", -Vec2::E1)] {
            if (boundary.norm(e) - 1.0).abs() > tol {
                out.push(format!("{name} is not a unit vector"));
            }
        }
        out
    }
}

/// The constructed plane together with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct L1 {
    pub params: L1Params,
    pub boundary: Arc<BoundarySpec>,
}

impl L1 {
    /// Rebuilds the plane from stored parameters and pieces, validating the
    /// boundary. No constant is recomputed.
    pub fn from_parts(params: L1Params, boundary: BoundarySpec) -> Self {
        L1 { params, boundary: Arc::new(boundary) }
    }

    pub fn space(&self) -> NormedSpace {
        NormedSpace::Plane { boundary: Arc::clone(&self.boundary) }
    }

    pub fn norm(&self, v: Vec2) -> f64 {
        self.boundary.norm(v)
    }

    /// The maximal segments `±[w₁,w₃]`, `±[w₃,w₂]`.
    pub fn maximal_segments(&self) -> [(Vec2, Vec2); 4] {
        let p = &self.params;
        [(p.w1, p.w3), (-p.w1, -p.w3), (p.w3, p.w2), (-p.w3, -p.w2)]
    }
}

/// Parameters controlling [`construct_l1`] beyond `M`.
#[derive(Clone, Debug)]
pub struct ConstructionOptions {
    pub q_candidates: Vec<Rational>,
    pub r_grid_step: Rational,
    /// Number of grid steps above `d/3` tried for `r`.
    pub r_steps: u32,
    pub tol: f64,
}

impl Default for ConstructionOptions {
    fn default() -> Self {
        ConstructionOptions {
            q_candidates: vec![
                Rational::new(1, 8),
                Rational::new(1, 10),
                Rational::new(1, 16),
                Rational::new(1, 32),
            ],
            r_grid_step: Rational::new(1, 64),
            r_steps: 256,
            tol: 1e-9,
        }
    }
}

const SCAN: usize = 1024;

/// First root of `f` scanning `[a, b]` from `a`; `f` may be undefined (`None`)
/// at some scan points.
fn first_root<F: Fn(f64) -> Option<f64>>(f: F, a: f64, b: f64) -> Option<f64> {
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..SCAN {
        let t = a + (b - a) * i as f64 / SCAN as f64;
        let Some(v) = f(t) else {
            prev = None;
            continue;
        };
        if let Some((pt, pv)) = prev {
            if sgn(pv) != sgn(v) {
                return Some(bisect(|s| f(s).unwrap_or(pv), pt, t, sgn(pv), 0.0, f64::EPSILON));
            }
        }
        prev = Some((t, v));
    }
    None
}

/// All roots of `f` on `(a, b)` found by a sign-change scan.
fn all_roots<F: Fn(f64) -> Option<f64>>(f: F, a: f64, b: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..SCAN {
        let t = a + (b - a) * i as f64 / SCAN as f64;
        let Some(v) = f(t) else {
            prev = None;
            continue;
        };
        if let Some((pt, pv)) = prev {
            if sgn(pv) != sgn(v) {
                roots.push(bisect(|s| f(s).unwrap_or(pv), pt, t, sgn(pv), 0.0, f64::EPSILON));
            }
        }
        prev = Some((t, v));
    }
    roots
}

/// Points of `S₁(r) ∩ S₂(2r)` (𝓛₀-circles about `w₁`, `w₂`) reachable with
/// `x − w₁` in the north-west and `x − w₂` in the south-east quadrant.
pub(crate) fn circle_meets(m: u32, w1: Vec2, w2: Vec2, r: f64) -> Vec<Vec2> {
    let point = |t: f64| w1 + Vec2::new(t, gamma_raw(t, m)) * r;
    let h = |t: f64| {
        let d = point(t) - w2;
        if d.x > 0.0 && d.y < 0.0 {
            Some(l0_norm(d, m).ok()? - 2.0 * r)
        } else {
            None
        }
    };
    all_roots(h, -1.0, 0.0).into_iter().map(point).collect()
}

/// Builds 𝓛₁: solves for `w₁`, `w₂` on the euclidean unit circle with
/// `‖eᵢ − wᵢ‖_{𝓛₀} = q` for the first admissible `q`, then scans rational
/// `r > d/3` on the grid `rGridStep·ℕ` for a point `w₃ ∈ S₁(r) ∩ S₂(2r)`
/// north-east of `[w₁, w₂]` with `‖w₃‖ₑ < 1`.
pub fn construct_l1(m: u32, opts: &ConstructionOptions) -> Result<L1, GeometryError> {
    if m == 0 {
        return Err(GeometryError::ConstructionFailed { constraint: "M must be positive".into() });
    }
    let (ok, worst) = concavity_gate(m, 10_000);
    if !ok {
        return Err(GeometryError::ConstructionFailed {
            constraint: format!("concavity gate: max γ'' = {worst} for M = {m}"),
        });
    }
    if opts.r_grid_step <= Rational::zero() {
        return Err(GeometryError::ConstructionFailed { constraint: "rGridStep must be positive".into() });
    }
    let mut reasons = Vec::new();
    for &q in &opts.q_candidates {
        match try_q(m, q, opts) {
            Ok(l1) => return Ok(l1),
            Err(reason) => reasons.push(format!("q = {q}: {reason}")),
        }
    }
    Err(GeometryError::ConstructionFailed {
        constraint: if reasons.is_empty() { "no q candidates".into() } else { reasons.join("; ") },
    })
}

fn try_q(m: u32, q: Rational, opts: &ConstructionOptions) -> Result<L1, String> {
    if !(q > Rational::zero() && q < Rational::new(1, 4)) {
        return Err("q bound: not in (0, 1/4)".into());
    }
    let qf = rational::to_f64(q);
    // e₁ − w₁(φ) lies in the open SE quadrant for φ ∈ (0, π/2)
    let phi = first_root(|p| l0_norm(Vec2::E1 - Vec2::polar(p), m).ok().map(|n| n - qf), 0.0, FRAC_PI_2)
        .ok_or("no w1 with |e1 - w1| = q")?;
    // e₂ − w₂(ψ) lies in the open NW quadrant; scan downward from π/2
    let psi = first_root(
        |u| l0_norm(Vec2::E2 - Vec2::polar(FRAC_PI_2 - u), m).ok().map(|n| n - qf),
        0.0,
        FRAC_PI_2,
    )
    .map(|u| FRAC_PI_2 - u)
    .ok_or("no w2 with |e2 - w2| = q")?;
    let (w1, w2) = (Vec2::polar(phi), Vec2::polar(psi));
    if !(phi < psi) {
        return Err("w1 is not clockwise of w2".into());
    }
    let d = l0_norm(w1 - w2, m).map_err(|e| e.to_string())?;
    if !(d > 0.75) {
        return Err(format!("d bound: d = {d} not > 3/4"));
    }

    let third = d / 3.0;
    let step = opts.r_grid_step;
    let base = (third / rational::to_f64(step)).floor() as i64;
    for k in 1..=i64::from(opts.r_steps) {
        let r = step * Rational::from_integer(base + k);
        let rf = rational::to_f64(r);
        if !(rf > third) {
            continue;
        }
        let candidates = circle_meets(m, w1, w2, rf);
        let Some(w3) = candidates
            .into_iter()
            .find(|x| (w2 - w1).cross(*x - w1) < 0.0 && x.euclid() < 1.0)
        else {
            continue;
        };
        let params = L1Params { m, q, r, d, w1, w2, w3 };
        let Ok(boundary) = BoundarySpec::new(params.pieces(), true) else {
            continue;
        };
        let violations = params.violations(&boundary, opts.tol);
        if violations.is_empty() {
            return Ok(L1::from_parts(params, boundary));
        }
    }
    Err(format!("no rational r on the grid {step} within {} steps gives an admissible w3", opts.r_steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn built() -> L1 {
        construct_l1(1, &ConstructionOptions::default()).unwrap()
    }

    #[test]
    fn default_construction_is_admissible() {
        let l1 = built();
        assert!(l1.params.violations(&l1.boundary, 1e-9).is_empty());
        assert_eq!(l1.params.q, Rational::new(1, 8));
        assert_eq!(*l1.params.r.denom() % 64, 0, "r sits on the 1/64 grid: {}", l1.params.r);
    }

    #[test]
    fn unit_vectors_and_vertices() {
        let l1 = built();
        for v in [Vec2::E1, Vec2::E2, -Vec2::E1, -Vec2::E2, l1.params.w1, l1.params.w2, l1.params.w3] {
            assert!((l1.norm(v) - 1.0).abs() < 1e-12, "{v:?}");
        }
        assert_eq!(l1.norm(Vec2::ZERO), 0.0);
    }

    #[test]
    fn rejects_large_q() {
        let opts = ConstructionOptions { q_candidates: vec![Rational::new(1, 2)], ..Default::default() };
        match construct_l1(1, &opts) {
            Err(GeometryError::ConstructionFailed { constraint }) => assert!(constraint.contains("q bound")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn skips_large_q_and_takes_next() {
        let opts = ConstructionOptions {
            q_candidates: vec![Rational::new(1, 2), Rational::new(1, 10)],
            ..Default::default()
        };
        assert_eq!(construct_l1(1, &opts).unwrap().params.q, Rational::new(1, 10));
    }

    #[test]
    fn circles_meet_at_two_points_near_u() {
        let p = built().params;
        let pts = circle_meets(p.m, p.w1, p.w2, p.r_f64());
        assert_eq!(pts.len(), 2);
        let sides: Vec<f64> = pts.iter().map(|x| (p.w2 - p.w1).cross(*x - p.w1)).collect();
        assert!(sides[0] * sides[1] < 0.0, "one point on each side of the line");
    }
}
