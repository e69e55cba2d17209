//! The sine-carrying curve of the north-west quadrant and the partial norm it
//! induces on the open north-west and south-east quadrants.

use super::roots::bisect;
use super::{GeometryError, Vec2};

/// `g(s) = 2s + s² + sin(s)/M`.
#[inline]
pub fn g_eval(s: f64, m: u32) -> f64 {
    2.0 * s + s * s + s.sin() / f64::from(m)
}

#[inline]
fn g_d1(s: f64, m: u32) -> f64 {
    2.0 + 2.0 * s + s.cos() / f64::from(m)
}

#[inline]
fn g_d2(s: f64, m: u32) -> f64 {
    2.0 - s.sin() / f64::from(m)
}

/// The reparametrisation `s = (x + 1)/(-x)` mapping `(-1, 0)` onto `(0, ∞)`.
#[inline]
pub(crate) fn s_of_x(x: f64) -> f64 {
    (x + 1.0) / -x
}

/// `γ(x) = g(s)/(1 + g(s))` without the domain check. Valid on the closed
/// interval `[-1, 0]` by continuity: `γ(-1) = 0`, `γ(0) = 1`.
#[inline]
pub(crate) fn gamma_raw(x: f64, m: u32) -> f64 {
    if x >= 0.0 {
        return 1.0;
    }
    if x <= -1.0 {
        return 0.0;
    }
    let g = g_eval(s_of_x(x), m);
    if g < 1.0 {
        g / (1.0 + g)
    } else {
        1.0 - 1.0 / (1.0 + g)
    }
}

fn check_domain(op: &'static str, x: f64) -> Result<(), GeometryError> {
    if x.is_finite() && x > -1.0 && x < 0.0 {
        Ok(())
    } else {
        Err(GeometryError::Domain { op, value: x })
    }
}

/// `γ(x)` for `-1 < x < 0`.
pub fn gamma_eval(x: f64, m: u32) -> Result<f64, GeometryError> {
    check_domain("gamma_eval", x)?;
    Ok(gamma_raw(x, m))
}

/// First derivative of `γ`.
pub fn gamma_d1(x: f64, m: u32) -> Result<f64, GeometryError> {
    check_domain("gamma_d1", x)?;
    let s = s_of_x(x);
    let big_g = g_eval(s, m);
    let ds = 1.0 / (x * x);
    let dg = g_d1(s, m) * ds;
    Ok(dg / ((1.0 + big_g) * (1.0 + big_g)))
}

/// Second derivative of `γ` in closed form.
///
/// With `G(x) = g(s(x))`, `s' = 1/x²`, `s'' = -2/x³`:
/// `G' = g'(s) s'`, `G'' = g''(s) s'² + g'(s) s''` and
/// `γ'' = G''/(1+G)² - 2 G'²/(1+G)³`.
pub fn gamma_dd(x: f64, m: u32) -> Result<f64, GeometryError> {
    check_domain("gamma_dd", x)?;
    let s = s_of_x(x);
    let big_g = g_eval(s, m);
    let ds = 1.0 / (x * x);
    let dds = -2.0 / (x * x * x);
    let d1 = g_d1(s, m) * ds;
    let d2 = g_d2(s, m) * ds * ds + g_d1(s, m) * dds;
    let one_g = 1.0 + big_g;
    Ok(d2 / (one_g * one_g) - 2.0 * d1 * d1 / (one_g * one_g * one_g))
}

/// Whether `γ'' < 0` at `points` evenly spaced points of `(-0.999, -0.001)`.
/// Returns the largest value of `γ''` seen alongside the verdict.
pub fn concavity_gate(m: u32, points: usize) -> (bool, f64) {
    let (lo, hi) = (-0.999, -0.001);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..points {
        let x = lo + (hi - lo) * i as f64 / (points.max(2) - 1) as f64;
        let v = gamma_dd(x, m).unwrap_or(f64::INFINITY);
        worst = worst.max(v);
    }
    (worst < 0.0, worst)
}

/// Smallest `M ≥ 1` passing [`concavity_gate`] on a 10⁴-point grid, scanning
/// up to `max_m`.
pub fn smallest_concave_m(max_m: u32) -> Option<u32> {
    (1..=max_m).find(|&m| concavity_gate(m, 10_000).0)
}

/// The point of the curve `{(x, γ(x))}` on the ray through `v`, for `v` in the
/// open north-west quadrant; returns the abscissa `x`.
pub(crate) fn gamma_ray_abscissa(v: Vec2, m: u32) -> f64 {
    debug_assert!(v.x < 0.0 && v.y > 0.0);
    // cross((x, γ(x)), v) is negative at x = -1 and positive at x = 0
    bisect(
        |x| x * v.y - gamma_raw(x, m) * v.x,
        -1.0,
        0.0,
        -1.0,
        0.0,
        f64::EPSILON,
    )
}

/// Norm of the auxiliary plane 𝓛₀, defined here only on the open north-west
/// and south-east quadrants where the unit circle is `±{(x, γ(x))}`.
pub fn l0_norm(v: Vec2, m: u32) -> Result<f64, GeometryError> {
    if v.is_zero() {
        return Err(GeometryError::ZeroVector);
    }
    if !(v.is_finite() && v.x * v.y < 0.0) {
        return Err(GeometryError::OutsideQuadrants(v));
    }
    let w = if v.x < 0.0 { v } else { -v };
    let x = gamma_ray_abscissa(w, m);
    Ok(w.x / x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd2(x: f64, m: u32) -> f64 {
        let h = 1e-5;
        (gamma_raw(x + h, m) - 2.0 * gamma_raw(x, m) + gamma_raw(x - h, m)) / (h * h)
    }

    #[test]
    fn g_values() {
        assert_eq!(g_eval(0.0, 7), 0.0);
        assert!((g_eval(1.0, 3) - (3.0 + 1f64.sin() / 3.0)).abs() < 1e-15);
        let pi = std::f64::consts::PI;
        assert!((g_eval(pi, 5) - (2.0 * pi + pi * pi)).abs() < 1e-13);
    }

    #[test]
    fn gamma_values_and_limits() {
        let g1 = 3.0 + 1f64.sin() / 2.0;
        assert!((gamma_eval(-0.5, 2).unwrap() - g1 / (1.0 + g1)).abs() < 1e-15);
        assert!(gamma_eval(-1.0 + 1e-12, 1).unwrap() < 1e-10);
        assert!((gamma_eval(-1e-6, 1).unwrap() - 1.0).abs() < 1e-3);
        assert!(gamma_eval(0.0, 1).is_err());
        assert!(gamma_eval(-1.0, 1).is_err());
        assert!(gamma_eval(f64::NAN, 1).is_err());
    }

    #[test]
    fn second_derivative_matches_finite_differences() {
        for m in 1..4 {
            for &x in &[-0.9, -0.5, -0.1] {
                let exact = gamma_dd(x, m).unwrap();
                let approx = fd2(x, m);
                assert!(exact < 0.0);
                assert!(((exact - approx) / exact).abs() < 1e-4, "x={x} m={m}: {exact} vs {approx}");
            }
        }
    }

    #[test]
    fn gate_passes_for_one() {
        assert_eq!(smallest_concave_m(10), Some(1));
    }

    #[test]
    fn l0_norm_on_curve_is_one() {
        let m = 1;
        for &x0 in &[-0.9, -0.5, -0.2] {
            let p = Vec2::new(x0, gamma_raw(x0, m));
            assert!((l0_norm(p, m).unwrap() - 1.0).abs() < 1e-14);
            assert!((l0_norm(p * 2.0, m).unwrap() - 2.0).abs() < 1e-14);
            assert!((l0_norm(-p, m).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn l0_norm_of_antidiagonal() {
        // independent oracle: bisection on γ(x)/x + 1 in x
        let m = 1;
        let (mut lo, mut hi) = (-0.999_999, -1e-6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gamma_raw(mid, m) / mid + 1.0 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = -0.5 * (lo + hi);
        assert!((l0_norm(Vec2::new(-1.0, 1.0), m).unwrap() - 1.0 / t).abs() < 1e-12);
        assert!(l0_norm(Vec2::new(-1.0, 1.0), m).unwrap() > 1.0);
    }

    #[test]
    fn l0_norm_domain() {
        assert!(matches!(l0_norm(Vec2::ZERO, 1), Err(GeometryError::ZeroVector)));
        assert!(l0_norm(Vec2::new(1.0, 1.0), 1).is_err());
        assert!(l0_norm(Vec2::new(-1.0, 0.0), 1).is_err());
    }
}
