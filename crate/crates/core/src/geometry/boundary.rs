//! Piecewise descriptions of the unit circle of a normed plane.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::gamma::{gamma_ray_abscissa, gamma_raw};
use super::{GeometryError, Vec2};

/// One piece of a unit circle, described by the angular range it covers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Piece {
    /// The closure of `{(x, γ(x)) : -1 < x < 0}`; always spans the
    /// north-west quadrant, from `-e₁` to `e₂`.
    GammaGraph {
        #[serde(rename = "M")]
        m: u32,
    },
    /// An arc of the euclidean unit circle between two polar angles.
    EuclideanArc { from_angle: f64, to_angle: f64 },
    /// A straight segment.
    Segment { a: Vec2, b: Vec2 },
}

impl Piece {
    /// Angular interval `[lo, hi]` covered by the piece, with `0 ≤ lo < hi`.
    /// Intervals crossing the positive x-axis have `hi > 2π`.
    fn span(&self) -> Result<(f64, f64), GeometryError> {
        match *self {
            Piece::GammaGraph { m } => {
                if m == 0 {
                    return Err(GeometryError::InvalidBoundary("M must be positive".into()));
                }
                Ok((FRAC_PI_2, PI))
            }
            Piece::EuclideanArc { from_angle, to_angle } => {
                let (lo, hi) = if from_angle <= to_angle {
                    (from_angle, to_angle)
                } else {
                    (to_angle, from_angle)
                };
                if !(lo >= 0.0 && hi <= TAU + 1e-12 && hi > lo) {
                    return Err(GeometryError::InvalidBoundary(format!(
                        "arc angles {from_angle}, {to_angle} outside [0, 2π]"
                    )));
                }
                Ok((lo, hi))
            }
            Piece::Segment { a, b } => {
                if a.cross(b).abs() <= 1e-15 {
                    return Err(GeometryError::InvalidBoundary(
                        "segment is collinear with the origin".into(),
                    ));
                }
                let (mut lo, mut hi) = (a.angle(), b.angle());
                if lo > hi {
                    std::mem::swap(&mut lo, &mut hi);
                }
                if hi - lo > PI {
                    // wraps through angle 0
                    let (l, h) = (hi, lo + TAU);
                    lo = l;
                    hi = h;
                }
                Ok((lo, hi))
            }
        }
    }

    /// Distance from the origin to the piece along direction `theta`, which
    /// must lie in the piece's span.
    fn radial(&self, theta: f64) -> f64 {
        match *self {
            Piece::EuclideanArc { .. } => 1.0,
            Piece::Segment { a, b } => {
                let d = Vec2::polar(theta);
                let ab = b - a;
                a.cross(ab) / d.cross(ab)
            }
            Piece::GammaGraph { m } => {
                let d = Vec2::polar(theta);
                if d.x >= 0.0 || d.y <= 0.0 {
                    return 1.0;
                }
                let x = gamma_ray_abscissa(d, m);
                x.hypot(gamma_raw(x, m))
            }
        }
    }

    /// Norm of a vector `v` whose direction lies in the piece's span,
    /// computed without going through the polar angle where possible.
    fn norm_of(&self, v: Vec2) -> f64 {
        match *self {
            Piece::EuclideanArc { .. } => v.euclid(),
            Piece::Segment { a, b } => {
                let ab = b - a;
                v.cross(ab) / a.cross(ab)
            }
            Piece::GammaGraph { m } => {
                if v.x >= 0.0 || v.y <= 0.0 {
                    return v.euclid();
                }
                let x = gamma_ray_abscissa(v, m);
                v.x / x
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BoundaryDoc {
    antipodal: bool,
    pieces: Vec<Piece>,
}

/// A unit circle assembled from [`Piece`]s. With `antipodal` set, the pieces
/// describe the upper half `U` (angles `[0, π]`) and the circle is `U ∪ -U`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "BoundaryDoc", into = "BoundaryDoc")]
pub struct BoundarySpec {
    antipodal: bool,
    pieces: Vec<Piece>,
    spans: Vec<(f64, f64)>,
}

impl PartialEq for BoundarySpec {
    fn eq(&self, other: &Self) -> bool {
        self.antipodal == other.antipodal && self.pieces == other.pieces
    }
}

impl TryFrom<BoundaryDoc> for BoundarySpec {
    type Error = GeometryError;
    fn try_from(doc: BoundaryDoc) -> Result<Self, GeometryError> {
        BoundarySpec::new(doc.pieces, doc.antipodal)
    }
}

impl From<BoundarySpec> for BoundaryDoc {
    fn from(b: BoundarySpec) -> Self {
        BoundaryDoc { antipodal: b.antipodal, pieces: b.pieces }
    }
}

/// Grid used by [`BoundarySpec::new`] for the convexity check.
const CONVEXITY_GRID: usize = 4096;

impl BoundarySpec {
    /// Validates coverage, continuity of the radial function at piece joins,
    /// positivity and convexity (left turns along a dense angle grid).
    pub fn new(pieces: Vec<Piece>, antipodal: bool) -> Result<Self, GeometryError> {
        if pieces.is_empty() {
            return Err(GeometryError::InvalidBoundary("no pieces".into()));
        }
        let spans = pieces.iter().map(Piece::span).collect::<Result<Vec<_>, _>>()?;
        let spec = BoundarySpec { antipodal, pieces, spans };
        spec.check_coverage()?;
        spec.check_joins()?;
        spec.check_convex(CONVEXITY_GRID)?;
        Ok(spec)
    }

    /// The euclidean unit circle as a single antipodal arc.
    pub fn euclidean() -> Self {
        BoundarySpec::new(vec![Piece::EuclideanArc { from_angle: 0.0, to_angle: PI }], true)
            .expect("euclidean circle is valid")
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn antipodal(&self) -> bool {
        self.antipodal
    }

    fn covered_range(&self) -> f64 {
        if self.antipodal {
            PI
        } else {
            TAU
        }
    }

    fn check_coverage(&self) -> Result<(), GeometryError> {
        let mut spans = self.spans.clone();
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        let end = self.covered_range();
        let mut reach = 0.0_f64;
        // wrapped spans also cover [0, hi - 2π)
        for &(_, hi) in &spans {
            if hi > TAU {
                reach = reach.max(hi - TAU);
            }
        }
        for &(lo, hi) in &spans {
            if lo > reach + 1e-9 {
                return Err(GeometryError::InvalidBoundary(format!(
                    "angles ({reach}, {lo}) not covered"
                )));
            }
            reach = reach.max(hi);
        }
        if reach + 1e-9 < end {
            return Err(GeometryError::InvalidBoundary(format!(
                "angles ({reach}, {end}) not covered"
            )));
        }
        Ok(())
    }

    fn check_joins(&self) -> Result<(), GeometryError> {
        for &(lo, hi) in &self.spans {
            for theta in [lo, hi] {
                let vals: Vec<f64> = self
                    .pieces
                    .iter()
                    .zip(&self.spans)
                    .filter(|(_, s)| contains(**s, theta))
                    .map(|(p, _)| p.radial(theta))
                    .collect();
                let (mn, mx) = vals
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
                if mx - mn > 1e-9 {
                    return Err(GeometryError::InvalidBoundary(format!(
                        "radial function jumps from {mn} to {mx} at angle {theta}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_convex(&self, n: usize) -> Result<(), GeometryError> {
        let pts: Vec<Vec2> = (0..n)
            .map(|i| self.boundary_point(TAU * i as f64 / n as f64))
            .collect();
        for i in 0..n {
            let (a, b, c) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
            if !(self.radial(TAU * i as f64 / n as f64) > 0.0) {
                return Err(GeometryError::InvalidBoundary("non-positive radial function".into()));
            }
            let turn = (b - a).cross(c - b);
            if turn < -1e-12 * (b - a).euclid().max(1e-300) {
                return Err(GeometryError::InvalidBoundary(format!(
                    "not convex near angle {}",
                    TAU * (i + 1) as f64 / n as f64
                )));
            }
        }
        Ok(())
    }

    /// Reduce `theta` to the described range, returning the reduced angle and
    /// whether an antipodal flip was applied.
    fn reduce(&self, theta: f64) -> (f64, bool) {
        let t = theta.rem_euclid(TAU);
        if self.antipodal && t > PI {
            (t - PI, true)
        } else {
            (t, false)
        }
    }

    fn piece_for(&self, theta: f64) -> &Piece {
        self.pieces
            .iter()
            .zip(&self.spans)
            .find(|(_, s)| contains(**s, theta))
            .map(|(p, _)| p)
            .unwrap_or(&self.pieces[0])
    }

    /// Radial function `ρ(θ)`: distance from the origin to the unit circle in
    /// direction `theta`.
    pub fn radial(&self, theta: f64) -> f64 {
        let (t, _) = self.reduce(theta);
        self.piece_for(t).radial(t)
    }

    /// `ρ(θ)·(cos θ, sin θ)`.
    pub fn boundary_point(&self, theta: f64) -> Vec2 {
        Vec2::polar(theta) * self.radial(theta)
    }

    /// Norm of `v`: `‖v‖ₑ / ρ(θ(v))`, evaluated piecewise in closed form.
    pub fn norm(&self, v: Vec2) -> f64 {
        if v.is_zero() {
            return 0.0;
        }
        let (t, flipped) = self.reduce(v.angle());
        let w = if flipped { -v } else { v };
        self.piece_for(t).norm_of(w)
    }

    /// The closed segments of the circle listed as pieces, including their
    /// antipodes when the spec is antipodal.
    pub fn segments(&self) -> Vec<(Vec2, Vec2)> {
        let mut out = Vec::new();
        for p in &self.pieces {
            if let Piece::Segment { a, b } = *p {
                out.push((a, b));
                if self.antipodal {
                    out.push((-a, -b));
                }
            }
        }
        out
    }
}

#[inline]
fn contains((lo, hi): (f64, f64), theta: f64) -> bool {
    (theta >= lo && theta <= hi) || (hi > TAU && theta + TAU <= hi)
}
