use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::boundary::BoundarySpec;
use super::{GeometryError, Vec2, VecN};

/// A finite-dimensional normed space built from planes, euclidean spaces and
/// 2-sums of those.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum NormedSpace {
    Plane { boundary: Arc<BoundarySpec> },
    Euclidean { dim: usize },
    /// `left ×₂ right`, normed by `√(‖u‖² + ‖v‖²)`.
    TwoSum { left: Box<NormedSpace>, right: Box<NormedSpace> },
}

impl NormedSpace {
    pub fn plane(boundary: BoundarySpec) -> Self {
        NormedSpace::Plane { boundary: Arc::new(boundary) }
    }

    pub fn euclidean(dim: usize) -> Self {
        NormedSpace::Euclidean { dim }
    }

    pub fn dimension(&self) -> usize {
        match self {
            NormedSpace::Plane { .. } => 2,
            NormedSpace::Euclidean { dim } => *dim,
            NormedSpace::TwoSum { left, right } => left.dimension() + right.dimension(),
        }
    }

    pub fn as_plane(&self) -> Option<&BoundarySpec> {
        match self {
            NormedSpace::Plane { boundary } => Some(boundary),
            _ => None,
        }
    }

    /// Norm of `v`.
    ///
    /// # Panics
    /// If `v.len()` differs from [`NormedSpace::dimension`].
    pub fn norm(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.dimension(), "vector dimension does not match the space");
        self.norm_unchecked(v)
    }

    /// Norm of `v`, or [`GeometryError::DimensionMismatch`].
    pub fn try_norm(&self, v: &[f64]) -> Result<f64, GeometryError> {
        if v.len() != self.dimension() {
            return Err(GeometryError::DimensionMismatch { expected: self.dimension(), got: v.len() });
        }
        Ok(self.norm_unchecked(v))
    }

    fn norm_unchecked(&self, v: &[f64]) -> f64 {
        match self {
            NormedSpace::Plane { boundary } => boundary.norm(Vec2::new(v[0], v[1])),
            NormedSpace::Euclidean { .. } => v.iter().map(|a| a * a).sum::<f64>().sqrt(),
            NormedSpace::TwoSum { left, right } => {
                let k = left.dimension();
                left.norm_unchecked(&v[..k]).hypot(right.norm_unchecked(&v[k..]))
            }
        }
    }

    /// Norm of a plane vector, for two-dimensional spaces.
    pub fn norm2(&self, v: Vec2) -> f64 {
        self.norm(&[v.x, v.y])
    }
}

/// The 2-sum `left ×₂ right`.
pub fn two_sum(left: NormedSpace, right: NormedSpace) -> NormedSpace {
    NormedSpace::TwoSum { left: Box::new(left), right: Box::new(right) }
}

/// `a(v, w) = ‖v‖/(‖v‖+‖w‖)·v + ‖w‖/(‖v‖+‖w‖)·(‖v‖/‖w‖)·w`, a convex
/// combination of `v` and the rescaling of `w` to the norm of `v`.
pub fn aux_a(space: &NormedSpace, v: &VecN, w: &VecN) -> Result<VecN, GeometryError> {
    let nv = space.try_norm(v.as_slice())?;
    let nw = space.try_norm(w.as_slice())?;
    if nv == 0.0 || nw == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    let total = nv + nw;
    Ok(v.scale(nv / total).add(&w.scale(nw / total * nv / nw)))
}

/// `‖v + w‖ = ‖v‖ + ‖w‖` up to `tol`.
pub fn same_direction(space: &NormedSpace, v: &VecN, w: &VecN, tol: f64) -> bool {
    let lhs = space.norm(v.add(w).as_slice());
    (lhs - space.norm(v.as_slice()) - space.norm(w.as_slice())).abs() <= tol
}

/// Whether `v` is a rotund point: `v/‖v‖` lies on none of the closed
/// segments of the unit circle.
///
/// Exact for boundaries whose only flat parts are their `Segment` pieces, as
/// is the case for 𝓛₁ (maximal segments `±[w₁,w₃]`, `±[w₃,w₂]`).
pub fn is_rotund(space: &NormedSpace, v: Vec2, tol: f64) -> Result<bool, GeometryError> {
    let boundary = space.as_plane().ok_or(GeometryError::NotAPlane)?;
    if v.is_zero() {
        return Err(GeometryError::ZeroVector);
    }
    let u = v * (1.0 / boundary.norm(v));
    Ok(boundary.segments().iter().all(|&(a, b)| u.dist_to_segment(a, b) > tol))
}

/// Number of directions sampled by [`is_rotund_sampled`].
pub const ROTUND_SAMPLES: usize = 720;

/// Sampling test for rotundity in an arbitrary plane: `v` is reported
/// non-rotund iff some sampled `u` with `‖u‖ = ‖v‖` has `‖(u+v)/2‖ = ‖v‖`
/// within `tol` while `‖u − v‖ > 10³·tol`. Sound only up to the sampling
/// density.
pub fn is_rotund_sampled(space: &NormedSpace, v: Vec2, tol: f64) -> Result<bool, GeometryError> {
    let boundary = space.as_plane().ok_or(GeometryError::NotAPlane)?;
    if v.is_zero() {
        return Err(GeometryError::ZeroVector);
    }
    let nv = boundary.norm(v);
    for i in 0..ROTUND_SAMPLES {
        let theta = std::f64::consts::TAU * i as f64 / ROTUND_SAMPLES as f64;
        let u = boundary.boundary_point(theta) * nv;
        if boundary.norm(u - v) <= tol * 1e3 {
            continue;
        }
        if (boundary.norm((u + v) * 0.5) - nv).abs() <= tol {
            return Ok(false);
        }
    }
    Ok(true)
}
