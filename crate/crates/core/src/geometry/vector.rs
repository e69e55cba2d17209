use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// A point or vector of the plane.
///
/// Serialized as a two-element array `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };
    pub const E1: Vec2 = Vec2 { x: 1.0, y: 0.0 };
    pub const E2: Vec2 = Vec2 { x: 0.0, y: 1.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector of the euclidean circle at `angle`.
    #[inline]
    pub fn polar(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Vec2::new(c, s)
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn euclid(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Polar angle in `[0, 2π)`.
    #[inline]
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }

    /// Max-coordinate distance.
    #[inline]
    pub fn max_dist(self, o: Vec2) -> f64 {
        (self.x - o.x).abs().max((self.y - o.y).abs())
    }

    #[inline]
    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }

    /// Euclidean distance from `self` to the closed segment `[a, b]`.
    pub fn dist_to_segment(self, a: Vec2, b: Vec2) -> f64 {
        let ab = b - a;
        let len2 = ab.dot(ab);
        if len2 == 0.0 {
            return (self - a).euclid();
        }
        let t = ((self - a).dot(ab) / len2).clamp(0.0, 1.0);
        (self - a.lerp(b, t)).euclid()
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

/// A vector of arbitrary (small) dimension, used by spaces of dimension
/// other than two and by the formula evaluator.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VecN(pub SmallVec<[f64; 4]>);

impl VecN {
    pub fn zeros(dim: usize) -> Self {
        VecN(smallvec::smallvec![0.0; dim])
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        VecN(SmallVec::from_slice(xs))
    }

    /// Embeds a plane vector, padding with zeros up to `dim`.
    pub fn embed(v: Vec2, dim: usize) -> Self {
        let mut out = VecN::zeros(dim.max(2));
        out.0[0] = v.x;
        out.0[1] = v.y;
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The first two coordinates.
    pub fn head2(&self) -> Vec2 {
        Vec2::new(
            self.0.first().copied().unwrap_or(0.0),
            self.0.get(1).copied().unwrap_or(0.0),
        )
    }

    pub fn add(&self, o: &VecN) -> VecN {
        VecN(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &VecN) -> VecN {
        VecN(self.0.iter().zip(o.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> VecN {
        VecN(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: f64) -> VecN {
        VecN(self.0.iter().map(|a| a * k).collect())
    }

    pub fn max_dist(&self, o: &VecN) -> f64 {
        self.0
            .iter()
            .zip(o.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn euclid(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|a| a.is_finite())
    }
}

impl From<Vec2> for VecN {
    fn from(v: Vec2) -> Self {
        VecN::from_slice(&[v.x, v.y])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_is_in_range() {
        assert_eq!(Vec2::E1.angle(), 0.0);
        assert!((Vec2::new(0.0, -1.0).angle() - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        assert!((Vec2::new(-1.0, 0.0).angle() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn segment_distance() {
        let a = Vec2::new(0.0, 0.0);
        let b = Vec2::new(2.0, 0.0);
        assert_eq!(Vec2::new(1.0, 1.0).dist_to_segment(a, b), 1.0);
        assert_eq!(Vec2::new(3.0, 0.0).dist_to_segment(a, b), 1.0);
    }

    #[test]
    fn vec2_json_is_an_array() {
        let s = serde_json::to_string(&Vec2::new(0.5, -1.0)).unwrap();
        assert_eq!(s, "[0.5,-1.0]");
        let v: Vec2 = serde_json::from_str(&s).unwrap();
        assert_eq!(v, Vec2::new(0.5, -1.0));
    }
}
