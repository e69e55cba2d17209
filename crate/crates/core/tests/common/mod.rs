//! Test-side oracles written independently of the library: a second-order
//! jet for `γ`, a norm for 𝓛₁ derived directly from its boundary pieces,
//! and a dense brute-force scan for circle intersections.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::{Add, Div, Mul, Neg, Sub};

use normlogic::geometry::{L1Params, Vec2};

/// Value, first and second derivative.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub v: f64,
    pub d: f64,
    pub dd: f64,
}

impl Jet {
    pub fn var(x: f64) -> Self {
        Jet { v: x, d: 1.0, dd: 0.0 }
    }

    pub fn cst(c: f64) -> Self {
        Jet { v: c, d: 0.0, dd: 0.0 }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        Jet { v: s, d: c * self.d, dd: c * self.dd - s * self.d * self.d }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d: self.d + o.d, dd: self.dd + o.dd }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d: self.d - o.d, dd: self.dd - o.dd }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d: -self.d, dd: -self.dd }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet { v: self.v * o.v, d: self.d * o.v + self.v * o.d, dd: self.dd * o.v + 2.0 * self.d * o.d + self.v * o.dd }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let inv_v = 1.0 / o.v;
        let inv = Jet { v: inv_v, d: -o.d * inv_v * inv_v, dd: (2.0 * o.d * o.d * inv_v - o.dd) * inv_v * inv_v };
        self * inv
    }
}

/// `γ` and its first two derivatives at `x ∈ (−1, 0)`, from
/// `s = (x+1)/(−x)`, `g = 2s + s² + sin(s)/M`, `γ = g/(1+g)`.
pub fn gamma_jet(x: f64, m: u32) -> Jet {
    let x = Jet::var(x);
    let s = (x + Jet::cst(1.0)) / -x;
    let g = Jet::cst(2.0) * s + s * s + s.sin() / Jet::cst(f64::from(m));
    g / (g + Jet::cst(1.0))
}

/// A normed plane described by its unit circle, evaluated without the
/// library's boundary code.
#[derive(Clone, Debug)]
pub enum Plane {
    Euclid,
    L1 { m: u32, w1: Vec2, w2: Vec2, w3: Vec2 },
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn angle(v: Vec2) -> f64 {
    v.y.atan2(v.x)
}

impl Plane {
    pub fn l1(p: &L1Params) -> Self {
        Plane::L1 { m: p.m, w1: p.w1, w2: p.w2, w3: p.w3 }
    }

    /// Abscissa of the curve point `(x, γ(x))` on the ray through `v`
    /// (`v.x < 0 < v.y`), by safeguarded Newton on `x·v.y − γ(x)·v.x`.
    fn gamma_abscissa(m: u32, v: Vec2) -> f64 {
        let (mut lo, mut hi) = (-1.0f64, 0.0f64);
        let mut x = (v.x / (v.y - v.x)).clamp(-1.0 + 1e-12, -1e-300);
        for _ in 0..200 {
            let j = gamma_jet(x, m);
            let f = x * v.y - j.v * v.x;
            let df = v.y - j.d * v.x;
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if f == 0.0 {
                return x;
            }
            let mut next = x - f / df;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 1e-17 * x.abs().max(1e-300) || hi - lo <= f64::EPSILON * lo.abs() {
                return next;
            }
            x = next;
        }
        x
    }

    pub fn norm(&self, v: Vec2) -> f64 {
        let e = v.x.hypot(v.y);
        if e == 0.0 {
            return 0.0;
        }
        let (m, w1, w2, w3) = match *self {
            Plane::Euclid => return e,
            Plane::L1 { m, w1, w2, w3 } => (m, w1, w2, w3),
        };
        // the circle is symmetric: fold into the closed upper half, minus −e₁
        let u = if v.y < 0.0 || (v.y == 0.0 && v.x < 0.0) { Vec2::new(-v.x, -v.y) } else { v };
        if u.x < 0.0 {
            let x = Self::gamma_abscissa(m, u);
            let y = gamma_jet(x, m).v;
            return e / x.hypot(y);
        }
        let th = angle(u);
        if th >= angle(w2) || th <= angle(w1) {
            return e;
        }
        let (a, b) = if th <= angle(w3) { (w1, w3) } else { (w3, w2) };
        let d = Vec2::new(b.x - a.x, b.y - a.y);
        cross(u, d) / cross(a, d)
    }

    pub fn boundary_point(&self, theta: f64) -> Vec2 {
        let u = Vec2::new(theta.cos(), theta.sin());
        let n = self.norm(u);
        Vec2::new(u.x / n, u.y / n)
    }

    /// About `n` points of the unit circle in cyclic order, with spacing
    /// roughly uniform in arc length.
    pub fn boundary_samples(&self, n: usize) -> Vec<Vec2> {
        match *self {
            Plane::Euclid => (0..n).map(|i| Vec2::polar(TAU * i as f64 / n as f64)).collect(),
            Plane::L1 { m, w1, w2, w3 } => {
                let nw_len = 1.6; // an overestimate is harmless
                let arc2 = FRAC_PI_2 - angle(w2);
                let arc1 = angle(w1);
                let s23 = (w3.x - w2.x).hypot(w3.y - w2.y);
                let s31 = (w1.x - w3.x).hypot(w1.y - w3.y);
                let total = nw_len + arc2 + arc1 + s23 + s31;
                let share = |len: f64| ((n / 2) as f64 * len / total).ceil() as usize;
                let mut upper = Vec::with_capacity(n / 2 + 8);
                let k = share(nw_len);
                for i in 0..k {
                    let x = -1.0 + i as f64 / k as f64;
                    upper.push(Vec2::new(x, if i == 0 { 0.0 } else { gamma_jet(x, m).v }));
                }
                let k = share(arc2);
                for i in 0..k {
                    upper.push(Vec2::polar(FRAC_PI_2 - arc2 * i as f64 / k as f64));
                }
                for (a, b, len) in [(w2, w3, s23), (w3, w1, s31)] {
                    let k = share(len);
                    for i in 0..k {
                        upper.push(a.lerp(b, i as f64 / k as f64));
                    }
                }
                let k = share(arc1);
                for i in 0..k {
                    upper.push(Vec2::polar(arc1 * (1.0 - i as f64 / k as f64)));
                }
                let lower: Vec<Vec2> = upper.iter().map(|p| Vec2::new(-p.x, -p.y)).collect();
                upper.extend(lower);
                upper
            }
        }
    }
}

/// One component found by [`brute_intersection`].
#[derive(Clone, Debug, PartialEq)]
pub enum BruteComponent {
    Point(Vec2),
    Segment(Vec2, Vec2),
}

impl BruteComponent {
    pub fn endpoints(&self) -> (Vec2, Vec2) {
        match *self {
            BruteComponent::Point(p) => (p, p),
            BruteComponent::Segment(a, b) => (a, b),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BruteResult {
    pub equal: bool,
    pub components: Vec<BruteComponent>,
}

/// `S(p, r) ∩ S(q, s)` from `n` samples of `S(p, r)`: runs of at least three
/// consecutive samples with `|‖x − q‖ − s| ≤ band` are segments, other sign
/// changes are points. Runs may wrap around.
pub fn brute_intersection(plane: &Plane, p: Vec2, r: f64, q: Vec2, s: f64, n: usize, band: f64) -> BruteResult {
    let pts: Vec<Vec2> = plane.boundary_samples(n).into_iter().map(|u| Vec2::new(p.x + r * u.x, p.y + r * u.y)).collect();
    let n = pts.len();
    let h: Vec<f64> = pts.iter().map(|x| plane.norm(Vec2::new(x.x - q.x, x.y - q.y)) - s).collect();
    let inb: Vec<bool> = h.iter().map(|v| v.abs() <= band).collect();
    if inb.iter().all(|&b| b) {
        return BruteResult { equal: true, components: vec![] };
    }
    // rotate so index 0 is out of band; then no run wraps
    let start = inb.iter().position(|&b| !b).unwrap();
    let idx = |i: usize| (start + i) % n;
    let mut in_run = vec![false; n];
    let mut segments = Vec::new();
    let mut i = 0;
    while i < n {
        if inb[idx(i)] {
            let j0 = i;
            while i < n && inb[idx(i)] {
                i += 1;
            }
            if i - j0 >= 3 {
                for t in j0..i {
                    in_run[idx(t)] = true;
                }
                segments.push((j0, i - 1));
            }
        } else {
            i += 1;
        }
    }
    let mut comps: Vec<(usize, BruteComponent)> =
        segments.into_iter().map(|(a, b)| (a, BruteComponent::Segment(pts[idx(a)], pts[idx(b)]))).collect();
    for i in 0..n {
        let (a, b) = (idx(i), idx(i + 1));
        if in_run[a] || in_run[b] {
            continue;
        }
        if (h[a] < 0.0) != (h[b] < 0.0) {
            let t = h[a] / (h[a] - h[b]);
            comps.push((i, BruteComponent::Point(pts[a].lerp(pts[b], t))));
        }
    }
    comps.sort_by_key(|c| c.0);
    BruteResult { equal: false, components: comps.into_iter().map(|c| c.1).collect() }
}

pub fn dist(a: Vec2, b: Vec2) -> f64 {
    (a.x - b.x).abs().max((a.y - b.y).abs())
}

/// Angles in the open north-west quadrant or its antipode, kept `margin`
/// away from the axes.
pub fn rotund_angle(u: f64, upper: bool, margin: f64) -> f64 {
    let base = if upper { FRAC_PI_2 } else { 1.5 * PI };
    base + margin + u * (FRAC_PI_2 - 2.0 * margin)
}
