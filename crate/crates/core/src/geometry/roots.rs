//! Bracketing root finders shared by the geometry code.

/// Bisection on a bracket `[lo, hi]` where `f(lo)` and `f(hi)` have opposite
/// signs (or one of them is zero). `lo_sign` is the sign of `f` at `lo`; it is
/// passed in so open brackets whose endpoint cannot be evaluated still work.
///
/// Stops once the bracket is narrower than `abs_tol + rel_tol * |mid|` or no
/// further floating-point progress is possible.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, lo_sign: f64, abs_tol: f64, rel_tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(lo_sign != 0.0);
    for _ in 0..4096 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            return mid;
        }
        if (hi - lo).abs() <= abs_tol + rel_tol * mid.abs() {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (lo_sign > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign of `x` as `±1.0`, with zero mapped to `1.0`.
#[inline]
pub(crate) fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, -1.0, 0.0, 1e-16);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn decreasing_bracket() {
        let r = bisect(|x| 1.0 - x, 0.0, 3.0, 1.0, 1e-14, 0.0);
        assert!((r - 1.0).abs() < 1e-13);
    }
}
