//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's algebra; values are computed from coordinates.
#![allow(dead_code)]

pub mod figures;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spherical_frieze::frieze::{Frieze, FriezeIndex, FriezeKind};
use spherical_frieze::numeric::{q, qr, Q};

/// Determinant by the Leibniz formula.
pub fn leibniz(m: &[Vec<Q>]) -> Q {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..n {
                let mut v = p.clone();
                v.insert(pos, n - 1);
                out.push(v);
            }
        }
        out
    }
    let n = m.len();
    let mut acc = Q::zero();
    for p in perms(n) {
        let mut odd = false;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    odd = !odd;
                }
            }
        }
        let mut term = Q::one();
        for (i, &j) in p.iter().enumerate() {
            term *= &m[i][j];
        }
        acc += if odd { -term } else { term };
    }
    acc
}

/// Bordered distance matrix with `corner` in the top-left.
pub fn bordered_det(x: &[Vec<Q>], corner: &Q) -> Q {
    let m = x.len();
    let mut b = vec![vec![Q::one(); m + 1]; m + 1];
    b[0][0] = corner.clone();
    for i in 0..m {
        for j in 0..m {
            b[i + 1][j + 1] = x[i][j].clone();
        }
    }
    leibniz(&b)
}

/// Table of a quadrilateral diamond `(a,b,c,d,e,f) = (x14,x12,x23,x34,x13,x24)`.
pub fn quad_table(v: &[Q; 6]) -> Vec<Vec<Q>> {
    let [a, b, c, d, e, f] = v.clone();
    let z = Q::zero();
    vec![
        vec![z.clone(), b.clone(), e.clone(), a.clone()],
        vec![b, z.clone(), c.clone(), f.clone()],
        vec![e, c, z.clone(), d.clone()],
        vec![a, f, d, z],
    ]
}

/// `M^K_4` through the bordered determinant, corner `K/2`.
pub fn m4(v: &[Q; 6], k: &Q) -> Q {
    bordered_det(&quad_table(v), &(k / q(2)))
}

/// Partial derivative of `M^K_4` in entry `slot` (0..6 for a..f). `M` is
/// quadratic in each entry, so the central difference is exact.
pub fn m4_partial(v: &[Q; 6], slot: usize, k: &Q) -> Q {
    let mut up = v.clone();
    let mut down = v.clone();
    up[slot] += q(1);
    down[slot] -= q(1);
    (m4(&up, k) - m4(&down, k)) / q(2)
}

pub fn heron(a: &Q, b: &Q, c: &Q, k: &Q) -> Q {
    -(a * a) - b * b - c * c + q(2) * (a * b + a * c + b * c) - k * a * b * c
}

// ---- planar model (K = 0)

pub type P2 = [Q; 2];

pub fn small(rng: &mut ChaCha8Rng) -> Q {
    qr(rng.gen_range(-20..=20), rng.gen_range(1..=4))
}

pub fn x2(a: &P2, b: &P2) -> Q {
    let dx = &a[0] - &b[0];
    let dy = &a[1] - &b[1];
    &dx * &dx + &dy * &dy
}

/// Four times the signed area.
pub fn s2(a: &P2, b: &P2, c: &P2) -> Q {
    q(2) * ((&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0]))
}

/// Seeded planar polygon with no coincident vertices and no collinear triple.
pub fn random_planar(seed: u64, n: usize) -> Vec<P2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_91a7);
    loop {
        let pts: Vec<P2> = (0..n).map(|_| [small(&mut rng), small(&mut rng)]).collect();
        let mut ok = true;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    if i < j && j < l && s2(&pts[i], &pts[j], &pts[l]).is_zero() {
                        ok = false;
                    }
                }
            }
        }
        if ok {
            return pts;
        }
    }
}

// ---- sphere model

pub type P3 = [Q; 3];

pub fn x3(a: &P3, b: &P3) -> Q {
    (0..3).map(|i| (&a[i] - &b[i]) * (&a[i] - &b[i])).sum()
}

pub fn det3(a: &P3, b: &P3, c: &P3) -> Q {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &b[0] * (&a[1] * &c[2] - &a[2] * &c[1])
        + &c[0] * (&a[1] * &b[2] - &a[2] * &b[1])
}

/// `12·vol(OABC)/R = 2·det[A,B,C]/R`.
pub fn s3(a: &P3, b: &P3, c: &P3, r: &Q) -> Q {
    q(2) * det3(a, b, c) / r
}

/// `R·(2u, 2v, u²+v²−1)/(u²+v²+1)`.
pub fn stereo(u: &Q, v: &Q, r: &Q) -> P3 {
    let w = u * u + v * v;
    let d = &w + q(1);
    [r * q(2) * u / &d, r * q(2) * v / &d, r * (&w - q(1)) / &d]
}

/// Seeded rational radius and `n` rational points on that sphere, pairwise
/// neither equal nor antipodal and with no degenerate triangle.
pub fn random_sphere(seed: u64, n: usize) -> (Q, Vec<P3>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0b5e_55ed);
    let r = qr(rng.gen_range(1..=12), rng.gen_range(1..=3));
    loop {
        let pts: Vec<P3> = (0..n)
            .map(|_| stereo(&qr(rng.gen_range(-9..=9), rng.gen_range(1..=4)), &qr(rng.gen_range(-9..=9), rng.gen_range(1..=4)), &r))
            .collect();
        let four_r2 = q(4) * &r * &r;
        let mut ok = true;
        for i in 0..n {
            for j in i + 1..n {
                let x = x3(&pts[i], &pts[j]);
                if x.is_zero() || x == four_r2 {
                    ok = false;
                }
                for l in j + 1..n {
                    if det3(&pts[i], &pts[j], &pts[l]).is_zero() {
                        ok = false;
                    }
                }
            }
        }
        if ok {
            return (r, pts);
        }
    }
}

// ---- friezes from a measurement oracle

/// Frieze built straight from a squared-distance function and a triangle
/// function on vertex labels `0..n`, over base columns `window`.
pub fn oracle_frieze(
    n: usize,
    k: Q,
    kind: FriezeKind,
    window: (i64, i64),
    x: impl Fn(usize, usize) -> Q,
    s: impl Fn(usize, usize, usize) -> Q,
) -> Frieze<Q> {
    // column m carries vertex m mod n, counted from 1
    let v = |m: i64| (m - 1).rem_euclid(n as i64) as usize;
    let mut nodes = BTreeMap::new();
    for i2 in 2 * window.0..=2 * window.1 {
        for j2 in i2..=i2 + 2 * n as i64 {
            let (ie, je) = (i2 % 2 == 0, j2 % 2 == 0);
            let value = match (ie, je) {
                (true, true) => x(v(i2 / 2), v(j2 / 2)),
                (false, true) if kind == FriezeKind::Heronian => {
                    let i = (i2 - 1) / 2;
                    s(v(i), v(i + 1), v(j2 / 2))
                }
                (true, false) if kind == FriezeKind::Heronian => {
                    let j = (j2 - 1) / 2;
                    s(v(i2 / 2), v(j), v(j + 1))
                }
                _ => continue,
            };
            nodes.insert(FriezeIndex { i2, j2 }, value);
        }
    }
    let side = |m: i64| x(v(m), v(m + 1));
    Frieze {
        kind,
        n,
        k,
        window,
        nodes,
        ne_lines: (window.0..=window.1).map(|i| (i, side(i))).collect(),
        se_lines: (window.0..=window.1 + n as i64 - 1).map(|j| (j, side(j))).collect(),
    }
}

pub fn planar_frieze(pts: &[P2], kind: FriezeKind, window: (i64, i64)) -> Frieze<Q> {
    oracle_frieze(pts.len(), Q::zero(), kind, window, |i, j| x2(&pts[i], &pts[j]), |i, j, l| s2(&pts[i], &pts[j], &pts[l]))
}

pub fn sphere_frieze(r: &Q, pts: &[P3], kind: FriezeKind, window: (i64, i64)) -> Frieze<Q> {
    let k = q(1) / (r * r);
    oracle_frieze(pts.len(), k, kind, window, |i, j| x3(&pts[i], &pts[j]), |i, j, l| s3(&pts[i], &pts[j], &pts[l], r))
}
