//! Intersections of two circles `S(p, r)`, `S(q, s)` of a normed plane.
//!
//! Two circles of the same plane are homothetic, so their intersection is
//! empty, the whole circle, or has one or two connected components, each a
//! point, a closed segment or (for a single component) two non-collinear
//! segments sharing an endpoint.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::boundary::BoundarySpec;
use super::roots::{bisect, sgn};
use super::{GeometryError, NormedSpace, Vec2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Component {
    IsolatedPoint(Vec2),
    ClosedSegment(Vec2, Vec2),
    /// Two non-collinear closed segments `[a, corner]`, `[corner, b]`.
    BentSegment { a: Vec2, corner: Vec2, b: Vec2 },
}

impl Component {
    /// Points that must satisfy both circle equations.
    pub fn points(&self) -> Vec<Vec2> {
        match *self {
            Component::IsolatedPoint(p) => vec![p],
            Component::ClosedSegment(a, b) => vec![a, b],
            Component::BentSegment { a, corner, b } => vec![a, corner, b],
        }
    }

    /// The endpoints of the component (equal for a point).
    pub fn endpoints(&self) -> (Vec2, Vec2) {
        match *self {
            Component::IsolatedPoint(p) => (p, p),
            Component::ClosedSegment(a, b) | Component::BentSegment { a, b, .. } => (a, b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Disjoint,
    Equal,
    OneComponent,
    TwoComponents,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionReport {
    /// Components ordered by the angle parameter of `S(p, r)`; empty for
    /// `Disjoint` and `Equal`.
    pub components: Vec<Component>,
    pub classification: Classification,
}

fn plane_of(space: &NormedSpace) -> Result<BoundarySpec, GeometryError> {
    match space {
        NormedSpace::Plane { boundary } => Ok((**boundary).clone()),
        NormedSpace::Euclidean { dim: 2 } => Ok(BoundarySpec::euclidean()),
        _ => Err(GeometryError::NotAPlane),
    }
}

/// Minimum number of consecutive in-band grid samples that make a plateau.
const PLATEAU_RUN: usize = 3;
/// Refinement factor used to decide whether a short in-band run hides a
/// plateau the grid cannot resolve.
const REFINE: usize = 16;

struct Scan<'a> {
    boundary: &'a BoundarySpec,
    p: Vec2,
    r: f64,
    q: Vec2,
    s: f64,
    n: usize,
    tol: f64,
}

impl Scan<'_> {
    fn param(&self, i: f64) -> f64 {
        TAU * i / self.n as f64
    }

    fn point(&self, t: f64) -> Vec2 {
        self.p + self.boundary.boundary_point(t) * self.r
    }

    fn h(&self, t: f64) -> f64 {
        self.boundary.norm(self.point(t) - self.q) - self.s
    }

    fn root(&self, t0: f64, t1: f64, h0: f64) -> f64 {
        bisect(|t| self.h(t), t0, t1, sgn(h0), 1e-15, 0.0)
    }

    /// Where `|h|` crosses the tolerance band between an outside sample
    /// `t_out` and an inside sample `t_in`.
    fn band_edge(&self, t_out: f64, t_in: f64) -> f64 {
        bisect(|t| self.h(t).abs() - self.tol, t_out, t_in, 1.0, 1e-15, 0.0)
    }
}

/// Computes `S(p, r) ∩ S(q, s)` by scanning `h(t) = ‖p + r·u(t) − q‖ − s` on
/// a `grid_n`-point grid of the angle parameter of the unit circle `u`.
/// Isolated sign changes are refined by bisection; runs of at least three
/// samples with `|h| ≤ tol` become segments whose ends are refined on the
/// band boundary.
pub fn intersect_circles(
    space: &NormedSpace,
    p: Vec2,
    r: f64,
    q: Vec2,
    s: f64,
    grid_n: usize,
    tol: f64,
) -> Result<IntersectionReport, GeometryError> {
    if !(r > 0.0 && s > 0.0 && r.is_finite() && s.is_finite()) {
        return Err(GeometryError::InvalidCircle(format!("radii must be positive, got {r} and {s}")));
    }
    if grid_n < 8 {
        return Err(GeometryError::InvalidCircle("grid needs at least 8 points".into()));
    }
    let boundary = plane_of(space)?;
    if p == q {
        let classification =
            if (r - s).abs() <= tol { Classification::Equal } else { Classification::Disjoint };
        return Ok(IntersectionReport { components: vec![], classification });
    }
    let scan = Scan { boundary: &boundary, p, r, q, s, n: grid_n, tol };
    let hs: Vec<f64> = (0..grid_n).map(|i| scan.h(scan.param(i as f64))).collect();
    let inside: Vec<bool> = hs.iter().map(|h| h.abs() <= tol).collect();
    if inside.iter().all(|&b| b) {
        return Ok(IntersectionReport { components: vec![], classification: Classification::Equal });
    }
    let n = grid_n;
    let start = (0..n).find(|&i| !inside[i]).expect("some sample is outside the band");
    let mut components = Vec::new();
    let mut k = 0;
    while k < n {
        let i = (start + k) % n;
        let j = (i + 1) % n;
        // unwrapped parameter index of sample i
        let ti = (start + k) as f64;
        if !inside[j] {
            if sgn(hs[i]) != sgn(hs[j]) {
                let t = scan.root(scan.param(ti), scan.param(ti + 1.0), hs[i]);
                components.push((t, Component::IsolatedPoint(scan.point(t))));
            }
            k += 1;
            continue;
        }
        // run of in-band samples starting at j
        let mut len = 0;
        while len < n && inside[(j + len) % n] {
            len += 1;
        }
        let last = ti + len as f64; // unwrapped index of the last in-band sample
        let after = (j + len) % n;
        if len >= PLATEAU_RUN {
            let t_a = scan.band_edge(scan.param(ti), scan.param(ti + 1.0));
            let t_b = scan.band_edge(scan.param(last + 1.0), scan.param(last));
            components.push((t_a, segment_component(&scan, t_a, t_b, tol)));
        } else {
            // short run: either a transversal crossing, a tangency, or a
            // plateau shorter than the grid can resolve
            let (t0, t1) = (scan.param(ti), scan.param(last + 1.0));
            let fine: Vec<(f64, f64)> = (0..=REFINE * (len + 1))
                .map(|m| {
                    let t = t0 + (t1 - t0) * m as f64 / (REFINE * (len + 1)) as f64;
                    (t, scan.h(t))
                })
                .collect();
            let fine_inside = fine.iter().filter(|(_, h)| h.abs() <= tol).count();
            if fine_inside >= REFINE / 2 {
                return Err(GeometryError::GridTooCoarse { at: scan.param(ti + 1.0) });
            }
            let t = if sgn(hs[i]) != sgn(hs[after]) {
                scan.root(t0, t1, hs[i])
            } else {
                fine.iter().min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).map(|x| x.0).unwrap()
            };
            components.push((t, Component::IsolatedPoint(scan.point(t))));
        }
        k += len + 1;
    }
    components.sort_by(|a, b| a.0.rem_euclid(TAU).total_cmp(&b.0.rem_euclid(TAU)));
    let components: Vec<Component> = components.into_iter().map(|(_, c)| c).collect();
    let classification = match components.len() {
        0 => Classification::Disjoint,
        1 => Classification::OneComponent,
        2 => Classification::TwoComponents,
        k => return Err(GeometryError::TooManyComponents(k)),
    };
    Ok(IntersectionReport { components, classification })
}

/// A plateau between parameters `t_a < t_b`: a single segment, or two
/// segments meeting at the sample farthest from the chord.
fn segment_component(scan: &Scan<'_>, t_a: f64, t_b: f64, tol: f64) -> Component {
    let a = scan.point(t_a);
    let b = scan.point(t_b);
    let samples = 64;
    let (mut far_t, mut far_d) = (t_a, 0.0);
    for m in 1..samples {
        let t = t_a + (t_b - t_a) * m as f64 / samples as f64;
        let d = scan.point(t).dist_to_segment(a, b);
        if d > far_d {
            far_d = d;
            far_t = t;
        }
    }
    let scale = (b - a).euclid().max(1.0);
    if far_d <= 1e3 * tol * scale {
        return Component::ClosedSegment(a, b);
    }
    // sharpen the corner: maximise the distance from the chord
    let (mut lo, mut hi) = (far_t - (t_b - t_a) / samples as f64, far_t + (t_b - t_a) / samples as f64);
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if scan.point(m1).dist_to_segment(a, b) < scan.point(m2).dist_to_segment(a, b) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    Component::BentSegment { a, corner: scan.point(0.5 * (lo + hi)), b }
}
