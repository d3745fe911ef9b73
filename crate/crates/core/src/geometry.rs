//! Points on a sphere of curvature `K = 1/R²`, the measurements `x` and
//! `S^K`, point placement and polygon realization.
//!
//! A point is stored as `ρ·(√D·u, √D·v, w)` with rational `u, v, w`, where
//! `ρ` is either 1 or `R` and `D` is a rational "stretch". This keeps `x`
//! and `S^K` rational even when `R` or the sine of a central angle is not.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diamond::{diagonal_factor, heron_k};
use crate::numeric::{q, qr, sqrt_exact, to_f64, Scalar, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("curvature must be positive")]
    BadCurvature,
    #[error("points live on different spheres")]
    ConfigMismatch,
    #[error("points use incompatible exact frames")]
    FrameMismatch,
    #[error("R = sqrt({0}) is irrational; S^K is not exact here")]
    ExactSqrtUnavailable(String),
    #[error("point is not on the sphere")]
    NotOnSphere,
    #[error("base points coincide or are antipodal (x = {0})")]
    AntipodalOrCoincident(String),
    #[error("Heron relation violated for triangle {0}")]
    HeronViolation(String),
    #[error("malformed triangulation: {0}")]
    MalformedTriangulation(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereConfig {
    k: Q,
    r2: Q,
    r: Option<Q>,
}

impl SphereConfig {
    pub fn from_curvature(k: Q) -> Result<Self, GeometryError> {
        if !k.is_positive() {
            return Err(GeometryError::BadCurvature);
        }
        let r2 = k.recip();
        let r = sqrt_exact(&r2).ok().flatten();
        Ok(SphereConfig { k, r2, r })
    }

    pub fn from_radius(r: Q) -> Result<Self, GeometryError> {
        if !r.is_positive() {
            return Err(GeometryError::BadCurvature);
        }
        let r2 = &r * &r;
        Ok(SphereConfig {
            k: r2.recip(),
            r2,
            r: Some(r),
        })
    }

    pub fn k(&self) -> &Q {
        &self.k
    }

    pub fn r2(&self) -> &Q {
        &self.r2
    }

    /// `R` itself when it is rational.
    pub fn radius(&self) -> Option<&Q> {
        self.r.as_ref()
    }
}

type V3 = [Q; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpherePoint {
    c: V3,
    times_r: bool,
    stretch: Q,
    config: SphereConfig,
}

fn frame_dot(d: &Q, x: &V3, y: &V3) -> Q {
    d * (&x[0] * &y[0] + &x[1] * &y[1]) + &x[2] * &y[2]
}

fn frame_cross(d: &Q, x: &V3, y: &V3) -> V3 {
    [
        &x[1] * &y[2] - &x[2] * &y[1],
        &x[2] * &y[0] - &x[0] * &y[2],
        d * (&x[0] * &y[1] - &x[1] * &y[0]),
    ]
}

fn scale(s: &Q, x: &V3) -> V3 {
    [s * &x[0], s * &x[1], s * &x[2]]
}

fn add(x: &V3, y: &V3) -> V3 {
    [&x[0] + &y[0], &x[1] + &y[1], &x[2] + &y[2]]
}

impl SpherePoint {
    /// A point given by ambient coordinates.
    pub fn new(coords: [Q; 3], config: &SphereConfig) -> Result<Self, GeometryError> {
        let p = SpherePoint {
            c: coords,
            times_r: false,
            stretch: Q::one(),
            config: config.clone(),
        };
        if p.norm2() != config.r2 {
            return Err(GeometryError::NotOnSphere);
        }
        Ok(p)
    }

    pub fn from_ints(x: i64, y: i64, z: i64, config: &SphereConfig) -> Result<Self, GeometryError> {
        Self::new([q(x), q(y), q(z)], config)
    }

    /// The point `R·dir` for a rational unit vector `dir`.
    pub fn from_direction(dir: [Q; 3], config: &SphereConfig) -> Result<Self, GeometryError> {
        let one = Q::one();
        if frame_dot(&one, &dir, &dir) != one {
            return Err(GeometryError::NotOnSphere);
        }
        Ok(Self::from_frame(dir, true, one, config))
    }

    fn from_frame(mut c: V3, mut times_r: bool, mut stretch: Q, config: &SphereConfig) -> Self {
        if let Some(s) = sqrt_exact(&stretch).ok().flatten() {
            if s != q(1) {
                c[0] = &c[0] * &s;
                c[1] = &c[1] * &s;
                stretch = Q::one();
            }
        }
        if times_r {
            if let Some(r) = &config.r {
                c = scale(r, &c);
                times_r = false;
            }
        }
        SpherePoint {
            c,
            times_r,
            stretch,
            config: config.clone(),
        }
    }

    pub fn config(&self) -> &SphereConfig {
        &self.config
    }

    /// Ambient coordinates, when they are rational.
    pub fn coordinates(&self) -> Option<[Q; 3]> {
        if self.times_r || self.stretch != q(1) {
            None
        } else {
            Some(self.c.clone())
        }
    }

    /// Floating-point ambient coordinates.
    pub fn approx_coordinates(&self) -> [f64; 3] {
        let rho = if self.times_r {
            to_f64(&self.config.r2).sqrt()
        } else {
            1.0
        };
        let sd = to_f64(&self.stretch).sqrt();
        [
            rho * sd * to_f64(&self.c[0]),
            rho * sd * to_f64(&self.c[1]),
            rho * to_f64(&self.c[2]),
        ]
    }

    fn rho2(&self) -> Q {
        if self.times_r {
            self.config.r2.clone()
        } else {
            Q::one()
        }
    }

    fn norm2(&self) -> Q {
        self.rho2() * frame_dot(&self.stretch, &self.c, &self.c)
    }

    fn compatible(&self, other: &SpherePoint) -> Result<(), GeometryError> {
        if self.config.k != other.config.k {
            return Err(GeometryError::ConfigMismatch);
        }
        if self.times_r != other.times_r || self.stretch != other.stretch {
            return Err(GeometryError::FrameMismatch);
        }
        Ok(())
    }

    /// `R/ρ³`, rational whenever `S^K` is exact in this frame.
    fn r_over_rho3(&self) -> Result<Q, GeometryError> {
        if self.times_r {
            Ok(self.config.k.clone())
        } else {
            self.config
                .r
                .clone()
                .ok_or_else(|| GeometryError::ExactSqrtUnavailable(self.config.r2.render()))
        }
    }
}

/// Squared chordal distance.
pub fn sq_dist(a: &SpherePoint, b: &SpherePoint) -> Result<Q, GeometryError> {
    a.compatible(b)?;
    let dot = a.rho2() * frame_dot(&a.stretch, &a.c, &b.c);
    Ok(q(2) * (&a.config.r2 - dot))
}

/// `S^K(A,B,C) = (2/R)·det[A B C]`, i.e. 12 times the signed volume of `OABC` over `R`.
pub fn s_kappa(a: &SpherePoint, b: &SpherePoint, c: &SpherePoint) -> Result<Q, GeometryError> {
    a.compatible(b)?;
    a.compatible(c)?;
    let triple = frame_dot(&a.stretch, &a.c, &frame_cross(&a.stretch, &b.c, &c.c));
    // det(actual) = ρ³·triple and S = 2·det/R = 2·triple/(R/ρ³).
    Ok(q(2) * triple / a.r_over_rho3()?)
}

/// `x = 2R²(1 - cos(d/R))`.
pub fn chord_from_geodesic(d: f64, r: f64) -> f64 {
    2.0 * r * r * (1.0 - (d / r).cos())
}

/// Inverse of [`chord_from_geodesic`] on `[0, 4R²]`.
pub fn geodesic_from_chord(x: f64, r: f64) -> Result<f64, GeometryError> {
    let top = 4.0 * r * r;
    let slack = 1e-12 * top;
    if !(x >= -slack && x <= top + slack) {
        return Err(GeometryError::OutOfRange(format!("chord {x} outside [0, {top}]")));
    }
    let c = (1.0 - x / (2.0 * r * r)).clamp(-1.0, 1.0);
    Ok(r * c.acos())
}

/// The point `B` with `x(B,C) = a`, `x(A,B) = c`, `S^K(A,B,C) = p`.
pub fn place_third_point(
    a_pt: &SpherePoint,
    c_pt: &SpherePoint,
    a: &Q,
    c: &Q,
    p: &Q,
) -> Result<SpherePoint, GeometryError> {
    a_pt.compatible(c_pt)?;
    let cfg = &a_pt.config;
    let b = sq_dist(a_pt, c_pt)?;
    if diagonal_factor(&b, &cfg.k).is_zero() {
        return Err(GeometryError::AntipodalOrCoincident(b.render()));
    }
    if p * p != heron_k(a, &b, c, &cfg.k) {
        return Err(GeometryError::HeronViolation("(A,B,C)".into()));
    }
    let d = &a_pt.stretch;
    let rho2 = a_pt.rho2();
    let half = qr(1, 2);
    let alpha = (&cfg.r2 - c * &half) / &rho2;
    let gamma = (&cfg.r2 - a * &half) / &rho2;
    let delta = p * &half * a_pt.r_over_rho3()?;
    let (ua, uc) = (&a_pt.c, &c_pt.c);
    let n = frame_cross(d, uc, ua);
    let e1 = frame_cross(d, uc, &n);
    let e2 = frame_cross(d, &n, ua);
    let e3 = frame_cross(d, ua, uc);
    let vol = frame_dot(d, ua, &e1);
    let sum = add(&add(&scale(&alpha, &e1), &scale(&gamma, &e2)), &scale(&delta, &e3));
    let ub = scale(&vol.recip(), &sum);
    let out = SpherePoint {
        c: ub,
        times_r: a_pt.times_r,
        stretch: d.clone(),
        config: cfg.clone(),
    };
    if out.norm2() != cfg.r2 {
        return Err(GeometryError::HeronViolation("(A,B,C)".into()));
    }
    Ok(out)
}

/// A triangulated `n`-gon on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub n: usize,
    pub diagonals: Vec<(usize, usize)>,
}

impl Triangulation {
    pub fn new(n: usize, diagonals: Vec<(usize, usize)>) -> Result<Self, GeometryError> {
        let bad = |m: String| Err(GeometryError::MalformedTriangulation(m));
        if n < 3 {
            return bad(format!("n = {n} < 3"));
        }
        if diagonals.len() != n - 3 {
            return bad(format!("{} diagonals, need {}", diagonals.len(), n - 3));
        }
        let mut seen = BTreeSet::new();
        let norm: Vec<(usize, usize)> = diagonals
            .iter()
            .map(|&(i, j)| (i.min(j), i.max(j)))
            .collect();
        for &(i, j) in &norm {
            if i < 1 || j > n || i == j {
                return bad(format!("diagonal {{{i},{j}}} out of range"));
            }
            if j - i == 1 || (i == 1 && j == n) {
                return bad(format!("{{{i},{j}}} is a side"));
            }
            if !seen.insert((i, j)) {
                return bad(format!("diagonal {{{i},{j}}} repeated"));
            }
        }
        for (x, &(a, b)) in norm.iter().enumerate() {
            for &(c, d) in &norm[x + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return bad(format!("{{{a},{b}}} crosses {{{c},{d}}}"));
                }
            }
        }
        Ok(Triangulation { n, diagonals: norm })
    }

    /// Sides and diagonals as sorted pairs.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut e: BTreeSet<(usize, usize)> = (1..self.n).map(|i| (i, i + 1)).collect();
        e.insert((1, self.n));
        e.extend(self.diagonals.iter().copied());
        e
    }

    /// Triangles as increasing triples.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let e = self.edges();
        let has = |i: usize, j: usize| e.contains(&(i.min(j), i.max(j)));
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                if !has(i, j) {
                    continue;
                }
                for k in j + 1..=self.n {
                    if has(i, k) && has(j, k) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// All diagonals from one vertex.
    pub fn fan(n: usize, apex: usize) -> Result<Self, GeometryError> {
        let others = (0..n)
            .map(|s| (apex - 1 + s) % n + 1)
            .skip(2)
            .take(n.saturating_sub(3))
            .map(|v| (apex, v))
            .collect();
        Self::new(n, others)
    }
}

fn sort_pair(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Sign of the permutation taking `from` to `to`, if they hold the same vertices.
fn permutation_sign(from: [usize; 3], to: [usize; 3]) -> Option<i64> {
    let mut pos = [0usize; 3];
    for (k, v) in to.iter().enumerate() {
        pos[k] = from.iter().position(|w| w == v)?;
    }
    let inv = (pos[0] > pos[1]) as u32 + (pos[0] > pos[2]) as u32 + (pos[1] > pos[2]) as u32;
    Some(if inv.is_multiple_of(2) { 1 } else { -1 })
}

/// Squared distances on the triangulation's edges and `S^K` on its triangles.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MeasurementSet {
    pub edges: BTreeMap<(usize, usize), Q>,
    /// Keys are ordered triples exactly as recorded.
    pub triangles: BTreeMap<(usize, usize, usize), Q>,
}

impl MeasurementSet {
    pub fn edge(&self, i: usize, j: usize) -> Option<&Q> {
        self.edges.get(&sort_pair(i, j))
    }

    pub fn set_edge(&mut self, i: usize, j: usize, v: Q) {
        self.edges.insert(sort_pair(i, j), v);
    }

    /// `S^K_ijk`, derived from whichever ordering was recorded.
    pub fn triangle(&self, i: usize, j: usize, k: usize) -> Option<Q> {
        self.triangles.iter().find_map(|(&(a, b, c), v)| {
            permutation_sign([a, b, c], [i, j, k]).map(|s| v * q(s))
        })
    }

    /// Measurements of `points` (vertex `i` is `points[i-1]`) on `tri`.
    pub fn from_points(tri: &Triangulation, points: &[SpherePoint]) -> Result<Self, GeometryError> {
        if points.len() != tri.n {
            return Err(GeometryError::MalformedTriangulation("point count".into()));
        }
        let mut m = MeasurementSet::default();
        for (i, j) in tri.edges() {
            m.set_edge(i, j, sq_dist(&points[i - 1], &points[j - 1])?);
        }
        for (i, j, k) in tri.triangles() {
            let v = s_kappa(&points[i - 1], &points[j - 1], &points[k - 1])?;
            m.triangles.insert((i, j, k), v);
        }
        Ok(m)
    }
}

/// Realize measurements as points, vertex `i` at index `i-1`.
///
/// Gauge: vertex 1 at `(0,0,R)`, vertex 2 in the `x≥0` half of the `xz`
/// plane, the rest placed triangle by triangle from the one on side `{1,2}`.
pub fn realize_polygon(
    tri: &Triangulation,
    m: &MeasurementSet,
    config: &SphereConfig,
) -> Result<Vec<SpherePoint>, GeometryError> {
    let tri = Triangulation::new(tri.n, tri.diagonals.clone())?;
    let k = config.k();
    for (i, j) in tri.edges() {
        let v = m
            .edge(i, j)
            .ok_or_else(|| GeometryError::MalformedTriangulation(format!("no value on {{{i},{j}}}")))?;
        if diagonal_factor(v, k).is_zero() {
            return Err(GeometryError::AntipodalOrCoincident(v.render()));
        }
    }
    let triangles = tri.triangles();
    for &(i, j, l) in &triangles {
        let s = m
            .triangle(i, j, l)
            .ok_or_else(|| GeometryError::MalformedTriangulation(format!("no S^K on ({i},{j},{l})")))?;
        let h = heron_k(m.edge(i, j).unwrap(), m.edge(i, l).unwrap(), m.edge(j, l).unwrap(), k);
        if s.clone() * s != h {
            return Err(GeometryError::HeronViolation(format!("({i},{j},{l})")));
        }
    }

    let b = m.edge(1, 2).unwrap();
    let cos = Q::one() - b * k * qr(1, 2);
    let stretch = Q::one() - &cos * &cos;
    let zero = Q::zero();
    let p1 = SpherePoint::from_frame([zero.clone(), zero.clone(), Q::one()], true, stretch.clone(), config);
    let p2 = SpherePoint::from_frame([Q::one(), zero, cos], true, stretch, config);
    let mut placed: Vec<Option<SpherePoint>> = vec![None; tri.n];
    placed[0] = Some(p1);
    placed[1] = Some(p2);
    let mut remaining = triangles;
    while !remaining.is_empty() {
        let pos = remaining.iter().position(|&(i, j, l)| {
            [i, j, l].iter().filter(|&&v| placed[v - 1].is_some()).count() >= 2
        });
        let Some(pos) = pos else {
            return Err(GeometryError::MalformedTriangulation("disconnected triangles".into()));
        };
        let (i, j, l) = remaining.remove(pos);
        let unplaced: Vec<usize> = [i, j, l].into_iter().filter(|&v| placed[v - 1].is_none()).collect();
        let Some(&w) = unplaced.first() else { continue };
        let known: Vec<usize> = [i, j, l].into_iter().filter(|&v| v != w).collect();
        let (u, v) = (known[0], known[1]);
        // B = w, A = u, C = v: a = x(w,v), c = x(u,w), p = S(u,w,v).
        let pt = place_third_point(
            placed[u - 1].as_ref().unwrap(),
            placed[v - 1].as_ref().unwrap(),
            m.edge(w, v).unwrap(),
            m.edge(u, w).unwrap(),
            &m.triangle(u, w, v).unwrap(),
        )?;
        placed[w - 1] = Some(pt);
    }
    let points: Vec<SpherePoint> = placed
        .into_iter()
        .map(|p| p.ok_or_else(|| GeometryError::MalformedTriangulation("vertex never placed".into())))
        .collect::<Result<_, _>>()?;
    let again = MeasurementSet::from_points(&tri, &points)?;
    for (key, v) in &again.edges {
        if m.edges.get(key) != Some(v) {
            return Err(GeometryError::HeronViolation(format!("edge {key:?} not reproduced")));
        }
    }
    Ok(points)
}

/// `R·(2u, 2v, u²+v²-1)/(u²+v²+1)`.
pub fn sphere_point_from_uv(u: &Q, v: &Q, config: &SphereConfig) -> SpherePoint {
    let s = u * u + v * v;
    let den = &s + Q::one();
    let dir = [q(2) * u / &den, q(2) * v / &den, (&s - Q::one()) / &den];
    SpherePoint::from_frame(dir, true, Q::one(), config)
}

fn random_small_rational(rng: &mut ChaCha8Rng) -> Q {
    qr(rng.gen_range(-12..=12), rng.gen_range(1..=6))
}

/// Seeded rational point via the inverse stereographic map.
pub fn random_rational_sphere_point(seed: u64, config: &SphereConfig) -> SpherePoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_small_rational(&mut rng);
    let v = random_small_rational(&mut rng);
    sphere_point_from_uv(&u, &v, config)
}

/// Seeded `n`-gon whose sides, diagonals and triangles are all nondegenerate.
pub fn random_polygon(seed: u64, n: usize, config: &SphereConfig) -> Vec<SpherePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pts: Vec<SpherePoint> = (0..n)
            .map(|_| {
                let u = random_small_rational(&mut rng);
                let v = random_small_rational(&mut rng);
                sphere_point_from_uv(&u, &v, config)
            })
            .collect();
        if polygon_is_generic(&pts) {
            return pts;
        }
    }
}

/// No coincident or antipodal pairs and no degenerate triangles.
pub fn polygon_is_generic(pts: &[SpherePoint]) -> bool {
    let n = pts.len();
    let k = pts[0].config.k.clone();
    for i in 0..n {
        for j in i + 1..n {
            match sq_dist(&pts[i], &pts[j]) {
                Ok(x) if !diagonal_factor(&x, &k).is_zero() => {}
                _ => return false,
            }
            for l in j + 1..n {
                let x = [
                    sq_dist(&pts[i], &pts[j]).unwrap(),
                    sq_dist(&pts[i], &pts[l]).unwrap(),
                    sq_dist(&pts[j], &pts[l]).unwrap(),
                ];
                if heron_k(&x[0], &x[1], &x[2], &k).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// The radius-7 hexagon used throughout the examples and tests.
pub fn hexagon_radius7() -> (SphereConfig, Vec<SpherePoint>) {
    let cfg = SphereConfig::from_radius(q(7)).expect("positive radius");
    let pts = [
        (7, 0, 0),
        (2, 3, 6),
        (3, 6, -2),
        (6, -2, 3),
        (-2, -3, 6),
        (-3, 2, 6),
    ]
    .iter()
    .map(|&(x, y, z)| SpherePoint::from_ints(x, y, z, &cfg).expect("on the sphere"))
    .collect();
    (cfg, pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det3(a: &[Q; 3], b: &[Q; 3], c: &[Q; 3]) -> Q {
        &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &b[0] * (&a[1] * &c[2] - &a[2] * &c[1])
            + &c[0] * (&a[1] * &b[2] - &a[2] * &b[1])
    }

    #[test]
    fn hexagon_measurements() {
        let (_, h) = hexagon_radius7();
        assert_eq!(sq_dist(&h[0], &h[3]).unwrap(), q(14));
        assert_eq!(sq_dist(&h[1], &h[4]).unwrap(), q(52));
        assert_eq!(sq_dist(&h[2], &h[2]).unwrap(), q(0));
        assert_eq!(s_kappa(&h[0], &h[1], &h[2]).unwrap(), q(-84));
        assert_eq!(s_kappa(&h[1], &h[2], &h[0]).unwrap(), q(-84));
        assert_eq!(s_kappa(&h[1], &h[0], &h[2]).unwrap(), q(84));
        let c = |p: &SpherePoint| p.coordinates().unwrap();
        let want = qr(2, 7) * det3(&c(&h[0]), &c(&h[1]), &c(&h[2]));
        assert_eq!(want, q(-84));
    }

    #[test]
    fn geodesic_conversion() {
        let r = 40000.0 / (2.0 * std::f64::consts::PI);
        // half-angle form as an independent oracle
        let oracle = |d: f64| (2.0 * r * (d / (2.0 * r)).sin()).powi(2);
        for d in [4352.0, 2557.0, 1809.0, 2025.0, 4160.0, 2414.0] {
            assert!((chord_from_geodesic(d, r) - oracle(d)).abs() <= 1e-6 * oracle(d));
        }
        // the printed city chords round-trip to the printed integer distances
        for (x, d) in [
            (18213752.0, 4352.0),
            (6450827.0, 2557.0),
            (3250522.0, 1809.0),
            (4066169.0, 2025.0),
            (16698545.0, 4160.0),
        ] {
            assert!((geodesic_from_chord(x, r).unwrap() - d).abs() < 0.01);
        }
        assert_eq!(chord_from_geodesic(0.0, r), 0.0);
        assert!((chord_from_geodesic(std::f64::consts::PI * r, r) - 4.0 * r * r).abs() < 1e-6);
        assert_eq!(geodesic_from_chord(0.0, r).unwrap(), 0.0);
        assert!((geodesic_from_chord(4.0 * r * r, r).unwrap() - std::f64::consts::PI * r).abs() < 1e-9);
        assert!(geodesic_from_chord(5.0 * r * r, r).is_err());
    }

    #[test]
    fn placement_reproduces_hexagon_vertex() {
        let (_, h) = hexagon_radius7();
        let b = place_third_point(&h[0], &h[2], &q(74), &q(70), &q(-84)).unwrap();
        assert_eq!(b.coordinates().unwrap(), [q(2), q(3), q(6)]);
        let m = place_third_point(&h[0], &h[2], &q(74), &q(70), &q(84)).unwrap();
        assert_eq!(s_kappa(&h[0], &m, &h[2]).unwrap(), q(84));
        assert_eq!(sq_dist(&m, &h[2]).unwrap(), q(74));
        assert_eq!(sq_dist(&h[0], &m).unwrap(), q(70));
        assert!(matches!(
            place_third_point(&h[0], &h[2], &q(74), &q(70), &q(83)),
            Err(GeometryError::HeronViolation(_))
        ));
        assert!(matches!(
            place_third_point(&h[0], &h[0], &q(74), &q(70), &q(84)),
            Err(GeometryError::AntipodalOrCoincident(_))
        ));
    }

    #[test]
    fn isosceles_placement() {
        // A and C mirror each other through the axis of B, so p = 0 and a = c.
        let cfg = SphereConfig::from_curvature(qr(1, 3)).unwrap();
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_small_rational(&mut rng);
            let v = random_small_rational(&mut rng);
            let a = sphere_point_from_uv(&u, &v, &cfg);
            let c = sphere_point_from_uv(&-u.clone(), &-v.clone(), &cfg);
            let apex = sphere_point_from_uv(&q(0), &q(0), &cfg);
            let b = sq_dist(&a, &c).unwrap();
            if diagonal_factor(&b, cfg.k()).is_zero() {
                continue;
            }
            let side = sq_dist(&a, &apex).unwrap();
            let m = place_third_point(&a, &c, &side, &side, &q(0)).unwrap();
            assert_eq!(sq_dist(&m, &apex).unwrap(), q(0));
            assert_eq!(sq_dist(&m, &c).unwrap(), side);
            assert_eq!(s_kappa(&a, &m, &c).unwrap(), q(0));
        }
    }

    #[test]
    fn irrational_radius_points() {
        let cfg = SphereConfig::from_curvature(qr(1, 2)).unwrap();
        assert!(cfg.radius().is_none());
        let a = random_rational_sphere_point(1, &cfg);
        let b = random_rational_sphere_point(2, &cfg);
        let c = random_rational_sphere_point(3, &cfg);
        let x = [sq_dist(&a, &b).unwrap(), sq_dist(&a, &c).unwrap(), sq_dist(&b, &c).unwrap()];
        let s = s_kappa(&a, &b, &c).unwrap();
        assert_eq!(&s * &s, heron_k(&x[0], &x[1], &x[2], cfg.k()));
        let abs = SpherePoint::new([q(0), q(0), q(1)], &SphereConfig::from_curvature(q(1)).unwrap()).unwrap();
        assert!(abs.coordinates().is_some());
    }

    #[test]
    fn uv_examples() {
        let r7 = SphereConfig::from_radius(q(7)).unwrap();
        assert_eq!(
            sphere_point_from_uv(&q(0), &q(0), &r7).coordinates().unwrap(),
            [q(0), q(0), q(-7)]
        );
        let r1 = SphereConfig::from_radius(q(1)).unwrap();
        assert_eq!(
            sphere_point_from_uv(&q(1), &q(0), &r1).coordinates().unwrap(),
            [q(1), q(0), q(0)]
        );
        let p = sphere_point_from_uv(&q(1), &q(2), &r7).coordinates().unwrap();
        assert_eq!(p, [qr(7, 3), qr(14, 3), qr(14, 3)]);
        assert_eq!(&p[0] * &p[0] + &p[1] * &p[1] + &p[2] * &p[2], q(49));
    }

    #[test]
    fn triangulation_validation() {
        assert!(Triangulation::new(6, vec![(2, 4), (2, 5), (2, 6)]).is_ok());
        assert!(Triangulation::new(6, vec![(1, 4), (2, 5), (2, 6)]).is_err());
        assert!(Triangulation::new(6, vec![(1, 2), (2, 5), (2, 6)]).is_err());
        assert!(Triangulation::new(6, vec![(2, 4), (2, 5)]).is_err());
        let t = Triangulation::fan(6, 2).unwrap();
        assert_eq!(t.diagonals, vec![(2, 4), (2, 5), (2, 6)]);
        assert_eq!(t.triangles().len(), 4);
    }

    #[test]
    fn realize_hexagon_fan() {
        let (cfg, h) = hexagon_radius7();
        let tri = Triangulation::fan(6, 2).unwrap();
        let m = MeasurementSet::from_points(&tri, &h).unwrap();
        let pts = realize_polygon(&tri, &m, &cfg).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(sq_dist(&pts[i], &pts[j]).unwrap(), sq_dist(&h[i], &h[j]).unwrap());
            }
        }
        let again = realize_polygon(&tri, &m, &cfg).unwrap();
        assert_eq!(pts, again);
    }

    #[test]
    fn realize_triangle_and_reject_bad_sign() {
        let (cfg, h) = hexagon_radius7();
        let tri = Triangulation::new(3, vec![]).unwrap();
        let m = MeasurementSet::from_points(&tri, &h[..3]).unwrap();
        let pts = realize_polygon(&tri, &m, &cfg).unwrap();
        assert_eq!(s_kappa(&pts[0], &pts[1], &pts[2]).unwrap(), q(-84));
        let mut bad = m.clone();
        bad.triangles.insert((1, 2, 3), q(-83));
        assert!(matches!(realize_polygon(&tri, &bad, &cfg), Err(GeometryError::HeronViolation(_))));
    }

    #[test]
    fn triangle_lookup_signs() {
        let mut m = MeasurementSet::default();
        m.triangles.insert((1, 2, 3), q(5));
        assert_eq!(m.triangle(2, 3, 1), Some(q(5)));
        assert_eq!(m.triangle(2, 1, 3), Some(q(-5)));
        assert_eq!(m.triangle(1, 2, 4), None);
    }
}
