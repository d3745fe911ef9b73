//! Single-diamond algebra over any [`Scalar`].
//!
//! Diamond layout, with `e`, `f` the horizontal diagonal:
//!
//! ```text
//!            a
//!       q         r
//!   e    b      d    f
//!       p         s
//!            c
//! ```
//!
//! Geometrically `a=x14, b=x12, c=x23, d=x34, e=x13, f=x24` and
//! `p=S123, q=S134, r=S124, s=S234`. `K` may be any scalar, including 0.

use thiserror::Error;

use crate::numeric::{NumericError, Scalar, TolerancePolicy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiamondError {
    #[error("degenerate diagonal {which} = {value} (must avoid 0 and 4/K)")]
    DegenerateDiagonal { which: &'static str, value: String },
    #[error("Heron relation violated: {0}")]
    HeronViolation(&'static str),
    #[error("no exact square root of {0}")]
    ExactSqrtUnavailable(String),
    #[error("interlocking diamonds disagree on {0}")]
    InterlockMismatch(&'static str),
    #[error("coherence pivot vanishes")]
    CoherencePivotZero,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("distance table must be square, symmetric, with zero diagonal")]
    BadTable,
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// The spherical Heron polynomial `-a²-b²-c²+2ab+2ac+2bc-Kabc`.
pub fn heron_k<S: Scalar>(a: &S, b: &S, c: &S, k: &S) -> S {
    let two = S::from_i64(2);
    -a.square() - b.square() - c.square()
        + two.clone() * a.clone() * b.clone()
        + two.clone() * a.clone() * c.clone()
        + two * b.clone() * c.clone()
        - k.clone() * a.clone() * b.clone() * c.clone()
}

/// `x(1 - Kx/4)`; zero exactly when `x ∈ {0, 4/K}` (just `x = 0` at `K = 0`).
pub fn diagonal_factor<S: Scalar>(x: &S, k: &S) -> S {
    x.clone() * (S::one() - k.clone() * x.clone() * S::from_ratio(1, 4))
}

fn guard_diagonal<S: Scalar>(which: &'static str, x: &S, k: &S) -> Result<S, DiamondError> {
    let g = diagonal_factor(x, k);
    if g.is_zero() {
        return Err(DiamondError::DegenerateDiagonal {
            which,
            value: x.render(),
        });
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeronianDiamond<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
    pub e: S,
    pub f: S,
    pub p: S,
    pub q: S,
    pub r: S,
    pub s: S,
}

impl<S: Scalar> HeronianDiamond<S> {
    pub fn from_array(v: [S; 10]) -> Self {
        let [a, b, c, d, e, f, p, q, r, s] = v;
        HeronianDiamond { a, b, c, d, e, f, p, q, r, s }
    }

    pub fn to_array(&self) -> [S; 10] {
        [
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            self.e.clone(),
            self.f.clone(),
            self.p.clone(),
            self.q.clone(),
            self.r.clone(),
            self.s.clone(),
        ]
    }

    pub fn corners(&self) -> CayleyMengerDiamond<S> {
        CayleyMengerDiamond {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
            e: self.e.clone(),
            f: self.f.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CayleyMengerDiamond<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
    pub e: S,
    pub f: S,
}

impl<S: Scalar> CayleyMengerDiamond<S> {
    pub fn from_array(v: [S; 6]) -> Self {
        let [a, b, c, d, e, f] = v;
        CayleyMengerDiamond { a, b, c, d, e, f }
    }

    pub fn to_array(&self) -> [S; 6] {
        [
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            self.e.clone(),
            self.f.clone(),
        ]
    }

    /// Squared-distance table of the four vertices.
    pub fn table(&self) -> Vec<Vec<S>> {
        let z = S::zero();
        let (a, b, c, d, e, f) = (
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            self.e.clone(),
            self.f.clone(),
        );
        vec![
            vec![z.clone(), b.clone(), e.clone(), a.clone()],
            vec![b, z.clone(), c.clone(), f.clone()],
            vec![e, c, z.clone(), d.clone()],
            vec![a, f, d, z],
        ]
    }
}

/// Which entry of the diamond a partial derivative is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartialDirection {
    /// d/de
    Left,
    /// d/df
    Right,
    /// d/da
    Up,
    /// d/dc
    Down,
    /// d/db
    Ne,
    /// d/dd
    Se,
}

impl PartialDirection {
    pub const ALL: [PartialDirection; 6] = [
        PartialDirection::Left,
        PartialDirection::Right,
        PartialDirection::Up,
        PartialDirection::Down,
        PartialDirection::Ne,
        PartialDirection::Se,
    ];

    /// Vertex pair (1-based) whose squared distance is differentiated.
    pub fn vertex_pair(self) -> (usize, usize) {
        match self {
            PartialDirection::Left => (1, 3),
            PartialDirection::Right => (2, 4),
            PartialDirection::Up => (1, 4),
            PartialDirection::Down => (2, 3),
            PartialDirection::Ne => (1, 2),
            PartialDirection::Se => (3, 4),
        }
    }
}

/// Laplace expansion along the first row. No division, so it works in any ring.
fn det_laplace<S: Scalar>(m: &[Vec<S>]) -> S {
    let n = m.len();
    match n {
        0 => S::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            let mut acc = S::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor = minor(m, 0, col);
                let term = m[0][col].clone() * det_laplace(&minor);
                acc = if col % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

fn minor<S: Scalar>(m: &[Vec<S>], row: usize, col: usize) -> Vec<Vec<S>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Gaussian elimination for larger tables.
fn det_eliminate<S: Scalar>(mut m: Vec<Vec<S>>) -> Result<S, DiamondError> {
    let n = m.len();
    let mut det = S::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(S::zero());
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det = det * pv.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].try_div(&pv)?;
            let (top, rest) = m.split_at_mut(r);
            for (dst, src) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *dst = dst.clone() - factor.clone() * src.clone();
            }
        }
    }
    Ok(det)
}

fn bordered<S: Scalar>(x: &[Vec<S>], k: &S) -> Vec<Vec<S>> {
    let m = x.len();
    let mut out = vec![vec![S::one(); m + 1]; m + 1];
    out[0][0] = k.clone() * S::from_ratio(1, 2);
    for i in 0..m {
        for j in 0..m {
            out[i + 1][j + 1] = x[i][j].clone();
        }
    }
    out
}

/// Determinant of the bordered matrix with `K/2` in the corner, ones on the
/// border and the squared distances inside. Vanishes on cospherical points;
/// for three points it is `-H^K`.
pub fn scm_det<S: Scalar>(x: &[Vec<S>], k: &S) -> Result<S, DiamondError> {
    let m = x.len();
    if m == 0 || x.iter().any(|r| r.len() != m) {
        return Err(DiamondError::BadTable);
    }
    for (i, row) in x.iter().enumerate() {
        if !row[i].is_zero() || (0..i).any(|j| row[j] != x[j][i]) {
            return Err(DiamondError::BadTable);
        }
    }
    let b = bordered(x, k);
    if m <= 5 {
        Ok(det_laplace(&b))
    } else {
        det_eliminate(b)
    }
}

/// `M^K_4(a,b,c,d,e,f)`.
pub fn scm4<S: Scalar>(d: &CayleyMengerDiamond<S>, k: &S) -> S {
    det_laplace(&bordered(&d.table(), k))
}

/// Exact partial derivative of `M^K_4` in one entry: twice the cofactor of
/// that entry in the bordered matrix.
pub fn scm_partial<S: Scalar>(dir: PartialDirection, d: &CayleyMengerDiamond<S>, k: &S) -> S {
    let b = bordered(&d.table(), k);
    let (u, v) = dir.vertex_pair();
    let cof = det_laplace(&minor(&b, u, v));
    let cof = if (u + v) % 2 == 0 { cof } else { -cof };
    S::from_i64(2) * cof
}

/// Residuals of the seven diamond equations, in order:
/// the four Heron relations for p, q, r, s; the p+q relation; the
/// Bretschneider analogue; the `e(r-s)` relation.
#[derive(Debug, Clone, PartialEq)]
pub struct HeronianReport<S> {
    pub residuals: [S; 7],
    pub pass: bool,
}

impl<S: Scalar> HeronianReport<S> {
    /// 1-based numbers of the equations that failed.
    pub fn failing(&self, policy: &TolerancePolicy) -> Vec<usize> {
        (0..7)
            .filter(|&i| !self.residuals[i].near_zero(policy))
            .map(|i| i + 1)
            .collect()
    }
}

pub fn heronian_residuals<S: Scalar>(x: &HeronianDiamond<S>, k: &S) -> [S; 7] {
    let HeronianDiamond { a, b, c, d, e, f, p, q, r, s } = x.clone();
    let half = S::from_ratio(1, 2);
    let quarter = S::from_ratio(1, 4);
    let four = S::from_i64(4);
    [
        p.square() - heron_k(&b, &c, &e, k),
        q.square() - heron_k(&a, &d, &e, k),
        r.square() - heron_k(&a, &b, &f, k),
        s.square() - heron_k(&c, &d, &f, k),
        p.clone() + q.clone()
            - (r.clone()
                + s.clone()
                + k.clone()
                    * half
                    * (a.clone() * p.clone() + b.clone() * q.clone() - e.clone() * r.clone())),
        four * e.clone() * f * (S::one() - k.clone() * e.clone() * quarter)
            - ((p.clone() + q.clone()).square()
                + (a.clone() - b.clone() + c.clone() - d.clone()).square()
                - k.clone() * e.clone() * (a.clone() - b.clone()) * (c.clone() - d.clone())),
        e * (r - s) - (p * (a - d) + q * (b - c)),
    ]
}

pub fn heronian_check<S: Scalar>(
    x: &HeronianDiamond<S>,
    k: &S,
    policy: &TolerancePolicy,
) -> HeronianReport<S> {
    let residuals = heronian_residuals(x, k);
    let pass = residuals.iter().all(|r| r.near_zero(policy));
    HeronianReport { residuals, pass }
}

pub fn cm_check<S: Scalar>(x: &CayleyMengerDiamond<S>, k: &S, policy: &TolerancePolicy) -> bool {
    scm4(x, k).near_zero(policy)
}

fn check_heron<S: Scalar>(
    name: &'static str,
    v: &S,
    a: &S,
    b: &S,
    c: &S,
    k: &S,
    policy: &TolerancePolicy,
) -> Result<(), DiamondError> {
    if v.square().near(&heron_k(a, b, c, k), policy) {
        Ok(())
    } else {
        Err(DiamondError::HeronViolation(name))
    }
}

/// Complete a diamond from its left half. Returns `(f, r, s)`.
///
/// `policy = None` skips the Heron precondition checks.
#[allow(clippy::too_many_arguments)]
pub fn propagate_lr<S: Scalar>(
    a: &S,
    b: &S,
    c: &S,
    d: &S,
    e: &S,
    p: &S,
    q: &S,
    k: &S,
    policy: Option<&TolerancePolicy>,
) -> Result<(S, S, S), DiamondError> {
    guard_diagonal("e", e, k)?;
    // the two factors of the diagonal term are divided out separately, so symbolic
    // scalars can cancel each one
    let w = S::one() - k.clone() * e.clone() * S::from_ratio(1, 4);
    if let Some(pol) = policy {
        check_heron("p^2 = H(b,c,e)", p, b, c, e, k, pol)?;
        check_heron("q^2 = H(a,d,e)", q, a, d, e, k, pol)?;
    }
    let (a, b, c, d, e, p, q) = (
        a.clone(),
        b.clone(),
        c.clone(),
        d.clone(),
        e.clone(),
        p.clone(),
        q.clone(),
    );
    let k = k.clone();
    let half = S::from_ratio(1, 2);
    let f_num = (p.clone() + q.clone()).square()
        + (a.clone() - b.clone() + c.clone() - d.clone()).square()
        - k.clone() * e.clone() * (a.clone() - b.clone()) * (c.clone() - d.clone());
    let r_num = p.clone()
        * (e.clone() + a.clone() - d.clone() - k.clone() * a.clone() * e.clone() * half.clone())
        + q.clone()
            * (e.clone() - c.clone() + b.clone() - k.clone() * b.clone() * e.clone() * half.clone());
    let s_num = p
        * (e.clone() - a.clone() + d.clone() - k.clone() * d * e.clone() * half.clone())
        + q * (e.clone() + c.clone() - b.clone() - k * c * e.clone() * half);
    let two_e = S::from_i64(2) * e;
    let f = f_num.try_div(&(S::from_i64(2) * two_e.clone()))?.try_div(&w)?;
    let r = r_num.try_div(&two_e)?.try_div(&w)?;
    let s = s_num.try_div(&two_e)?.try_div(&w)?;
    Ok((f, r, s))
}

/// Complete a diamond from its right half. Returns `(e, p, q)`.
#[allow(clippy::too_many_arguments)]
pub fn propagate_rl<S: Scalar>(
    a: &S,
    b: &S,
    c: &S,
    d: &S,
    f: &S,
    r: &S,
    s: &S,
    k: &S,
    policy: Option<&TolerancePolicy>,
) -> Result<(S, S, S), DiamondError> {
    let (e, q, p) = propagate_lr(a, d, c, b, f, s, r, k, policy).map_err(|err| match err {
        DiamondError::DegenerateDiagonal { value, .. } => {
            DiamondError::DegenerateDiagonal { which: "f", value }
        }
        DiamondError::HeronViolation("p^2 = H(b,c,e)") => {
            DiamondError::HeronViolation("s^2 = H(c,d,f)")
        }
        DiamondError::HeronViolation("q^2 = H(a,d,e)") => {
            DiamondError::HeronViolation("r^2 = H(a,b,f)")
        }
        other => other,
    })?;
    Ok((e, p, q))
}

/// Swap top and bottom: `(c,d,a,b,e,f,q,p,s,r)`.
pub fn flip_vertical<S: Scalar>(x: &HeronianDiamond<S>) -> HeronianDiamond<S> {
    let v = x.clone();
    HeronianDiamond {
        a: v.c,
        b: v.d,
        c: v.a,
        d: v.b,
        e: v.e,
        f: v.f,
        p: v.q,
        q: v.p,
        r: v.s,
        s: v.r,
    }
}

/// Swap left and right: `(a,d,c,b,f,e,s,r,q,p)`.
pub fn flip_horizontal<S: Scalar>(
    x: &HeronianDiamond<S>,
    k: &S,
) -> Result<HeronianDiamond<S>, DiamondError> {
    guard_diagonal("e", &x.e, k)?;
    let v = x.clone();
    Ok(HeronianDiamond {
        a: v.a,
        b: v.d,
        c: v.c,
        d: v.b,
        e: v.f,
        f: v.e,
        p: v.s,
        q: v.r,
        r: v.q,
        s: v.p,
    })
}

/// Zero patterns of the near-boundary diamonds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneratePattern {
    /// `a = q = r = 0`, forcing `d = e`, `f = b`, `s = p`.
    Aqr,
    /// `c = p = s = 0`, forcing `b = e`, `f = d`, `r = q`.
    Cps,
}

/// A diamond with some entries unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialDiamond<S> {
    pub a: Option<S>,
    pub b: Option<S>,
    pub c: Option<S>,
    pub d: Option<S>,
    pub e: Option<S>,
    pub f: Option<S>,
    pub p: Option<S>,
    pub q: Option<S>,
    pub r: Option<S>,
    pub s: Option<S>,
}

impl<S> Default for PartialDiamond<S> {
    fn default() -> Self {
        PartialDiamond {
            a: None,
            b: None,
            c: None,
            d: None,
            e: None,
            f: None,
            p: None,
            q: None,
            r: None,
            s: None,
        }
    }
}

fn unify<S: Scalar>(
    x: &mut Option<S>,
    y: &mut Option<S>,
    what: &'static str,
    policy: &TolerancePolicy,
) -> Result<(), DiamondError> {
    match (x.as_ref(), y.as_ref()) {
        (Some(u), Some(v)) => {
            if !u.near(v, policy) {
                return Err(DiamondError::Precondition(format!("degenerate diamond needs {what}")));
            }
        }
        (Some(u), None) => *y = Some(u.clone()),
        (None, Some(v)) => *x = Some(v.clone()),
        (None, None) => {
            return Err(DiamondError::Precondition(format!("{what}: both sides unknown")))
        }
    }
    Ok(())
}

fn force_zero<S: Scalar>(
    x: &mut Option<S>,
    what: &'static str,
    policy: &TolerancePolicy,
) -> Result<(), DiamondError> {
    if let Some(v) = x.as_ref() {
        if !v.near_zero(policy) {
            return Err(DiamondError::Precondition(format!("{what} must be 0")));
        }
    }
    *x = Some(S::zero());
    Ok(())
}

/// Fill in a near-boundary diamond from its forced equalities, then check
/// the one remaining Heron relation.
pub fn propagate_degenerate<S: Scalar>(
    partial: &PartialDiamond<S>,
    pattern: DegeneratePattern,
    k: &S,
    policy: &TolerancePolicy,
) -> Result<HeronianDiamond<S>, DiamondError> {
    let mut x = partial.clone();
    match pattern {
        DegeneratePattern::Aqr => {
            force_zero(&mut x.a, "a", policy)?;
            force_zero(&mut x.q, "q", policy)?;
            force_zero(&mut x.r, "r", policy)?;
            unify(&mut x.d, &mut x.e, "d = e", policy)?;
            unify(&mut x.f, &mut x.b, "f = b", policy)?;
            unify(&mut x.s, &mut x.p, "s = p", policy)?;
        }
        DegeneratePattern::Cps => {
            force_zero(&mut x.c, "c", policy)?;
            force_zero(&mut x.p, "p", policy)?;
            force_zero(&mut x.s, "s", policy)?;
            unify(&mut x.b, &mut x.e, "b = e", policy)?;
            unify(&mut x.f, &mut x.d, "f = d", policy)?;
            unify(&mut x.r, &mut x.q, "r = q", policy)?;
        }
    }
    let need = |v: Option<S>, name: &str| {
        v.ok_or_else(|| DiamondError::Precondition(format!("{name} unknown")))
    };
    let full = HeronianDiamond {
        a: need(x.a, "a")?,
        b: need(x.b, "b")?,
        c: need(x.c, "c")?,
        d: need(x.d, "d")?,
        e: need(x.e, "e")?,
        f: need(x.f, "f")?,
        p: need(x.p, "p")?,
        q: need(x.q, "q")?,
        r: need(x.r, "r")?,
        s: need(x.s, "s")?,
    };
    match pattern {
        DegeneratePattern::Aqr => {
            check_heron("p^2 = H(b,c,e)", &full.p, &full.b, &full.c, &full.e, k, policy)?
        }
        DegeneratePattern::Cps => {
            check_heron("q^2 = H(a,d,e)", &full.q, &full.a, &full.d, &full.e, k, policy)?
        }
    }
    Ok(full)
}

/// The two sides of the coherence relation around the node shared by four
/// interlocking diamonds `x1` (west), `x2` (north), `x3` (south), `x4` (east):
/// `(∂←M(x1)·∂→M(x4), ∂↑M(x2)·∂↓M(x3))`.
pub fn coherence_sides<S: Scalar>(
    x1: &CayleyMengerDiamond<S>,
    x2: &CayleyMengerDiamond<S>,
    x3: &CayleyMengerDiamond<S>,
    x4: &CayleyMengerDiamond<S>,
    k: &S,
) -> (S, S) {
    (
        scm_partial(PartialDirection::Left, x1, k) * scm_partial(PartialDirection::Right, x4, k),
        scm_partial(PartialDirection::Up, x2, k) * scm_partial(PartialDirection::Down, x3, k),
    )
}

/// Shared entries of four interlocking diamonds around `z(i,j)`:
/// `x1 = ⊞(i-1,j-1)`, `x2 = ⊞(i-1,j)`, `x3 = ⊞(i,j-1)`, `x4 = ⊞(i,j)`.
pub fn check_interlock<S: Scalar>(
    x1: &CayleyMengerDiamond<S>,
    x2: &CayleyMengerDiamond<S>,
    x3: &CayleyMengerDiamond<S>,
    x4: &CayleyMengerDiamond<S>,
    policy: &TolerancePolicy,
) -> Result<(), DiamondError> {
    let pairs: [(&S, &S, &'static str); 11] = [
        (&x1.f, &x2.c, "centre (x1.f, x2.c)"),
        (&x1.f, &x3.a, "centre (x1.f, x3.a)"),
        (&x1.f, &x4.e, "centre (x1.f, x4.e)"),
        (&x1.a, &x2.e, "x1.a = x2.e"),
        (&x1.c, &x3.e, "x1.c = x3.e"),
        (&x2.f, &x4.a, "x2.f = x4.a"),
        (&x3.f, &x4.c, "x3.f = x4.c"),
        (&x1.b, &x2.b, "x1.b = x2.b"),
        (&x3.b, &x4.b, "x3.b = x4.b"),
        (&x1.d, &x3.d, "x1.d = x3.d"),
        (&x2.d, &x4.d, "x2.d = x4.d"),
    ];
    for (u, v, what) in pairs {
        if !u.near(v, policy) {
            return Err(DiamondError::InterlockMismatch(what));
        }
    }
    Ok(())
}

pub fn coherence_check<S: Scalar>(
    x1: &CayleyMengerDiamond<S>,
    x2: &CayleyMengerDiamond<S>,
    x3: &CayleyMengerDiamond<S>,
    x4: &CayleyMengerDiamond<S>,
    k: &S,
    policy: &TolerancePolicy,
) -> Result<bool, DiamondError> {
    check_interlock(x1, x2, x3, x4, policy)?;
    let (lhs, rhs) = coherence_sides(x1, x2, x3, x4, k);
    Ok(lhs.near(&rhs, policy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Solve for the west corner `e` of `x1`.
    Left,
    /// Solve for the east corner `f` of `x4`.
    Right,
}

/// Solve the coherence relation for the one missing corner.
///
/// `Side::Right` takes `(x1, x2, x3)` and returns `x4.f`; `Side::Left`
/// takes `(x2, x3, x4)` and returns `x1.e`. The other entries of the
/// missing diamond are read off its neighbours.
pub fn coherence_solve<S: Scalar>(
    side: Side,
    u: &CayleyMengerDiamond<S>,
    v: &CayleyMengerDiamond<S>,
    w: &CayleyMengerDiamond<S>,
    k: &S,
) -> Result<S, DiamondError> {
    let exact = TolerancePolicy::exact();
    match side {
        Side::Right => {
            let (x1, x2, x3) = (u, v, w);
            let eq = |a: &S, b: &S, what| {
                if a == b {
                    Ok(())
                } else {
                    Err(DiamondError::InterlockMismatch(what))
                }
            };
            eq(&x1.f, &x2.c, "centre (x1.f, x2.c)")?;
            eq(&x1.f, &x3.a, "centre (x1.f, x3.a)")?;
            eq(&x1.a, &x2.e, "x1.a = x2.e")?;
            eq(&x1.c, &x3.e, "x1.c = x3.e")?;
            eq(&x1.b, &x2.b, "x1.b = x2.b")?;
            eq(&x1.d, &x3.d, "x1.d = x3.d")?;
            let mk = |f: S| CayleyMengerDiamond {
                a: x2.f.clone(),
                b: x3.b.clone(),
                c: x3.f.clone(),
                d: x2.d.clone(),
                e: x1.f.clone(),
                f,
            };
            let lead = scm_partial(PartialDirection::Left, x1, k);
            let rhs = scm_partial(PartialDirection::Up, x2, k)
                * scm_partial(PartialDirection::Down, x3, k);
            solve_linear(&lead, &rhs, |t| scm_partial(PartialDirection::Right, &mk(t), k))
        }
        Side::Left => {
            let (x2, x3, x4) = (u, v, w);
            let eq = |a: &S, b: &S, what| {
                if a.near(b, &exact) {
                    Ok(())
                } else {
                    Err(DiamondError::InterlockMismatch(what))
                }
            };
            eq(&x2.c, &x4.e, "centre (x2.c, x4.e)")?;
            eq(&x3.a, &x4.e, "centre (x3.a, x4.e)")?;
            eq(&x2.f, &x4.a, "x2.f = x4.a")?;
            eq(&x3.f, &x4.c, "x3.f = x4.c")?;
            eq(&x3.b, &x4.b, "x3.b = x4.b")?;
            eq(&x2.d, &x4.d, "x2.d = x4.d")?;
            let mk = |e: S| CayleyMengerDiamond {
                a: x2.e.clone(),
                b: x2.b.clone(),
                c: x3.e.clone(),
                d: x3.d.clone(),
                e,
                f: x4.e.clone(),
            };
            let lead = scm_partial(PartialDirection::Right, x4, k);
            let rhs = scm_partial(PartialDirection::Up, x2, k)
                * scm_partial(PartialDirection::Down, x3, k);
            solve_linear(&lead, &rhs, |t| scm_partial(PartialDirection::Left, &mk(t), k))
        }
    }
}

/// Solve `lead · g(t) = rhs` where `g` is affine in `t`.
fn solve_linear<S: Scalar>(lead: &S, rhs: &S, g: impl Fn(S) -> S) -> Result<S, DiamondError> {
    let g0 = g(S::zero());
    let slope = g(S::one()) - g0.clone();
    let pivot = lead.clone() * slope;
    if pivot.is_zero() {
        return Err(DiamondError::CoherencePivotZero);
    }
    Ok((rhs.clone() - lead.clone() * g0).try_div(&pivot)?)
}

/// Which of the restriction conditions a Heronian diamond meets, if any.
fn restrictable<S: Scalar>(x: &HeronianDiamond<S>, k: &S, policy: &TolerancePolicy) -> bool {
    let z = |v: &S| v.near_zero(policy);
    (z(&x.a) && z(&x.q) && z(&x.r))
        || (z(&x.c) && z(&x.p) && z(&x.s))
        || !diagonal_factor(&x.e, k).near_zero(policy)
        || !diagonal_factor(&x.f, k).near_zero(policy)
}

/// The six products of midpoints that the partials of `M^K_4` must equal:
/// `(-2rs, -2pq, 2qs, 2pr, 2ps, 2rq)` against `(∂←, ∂→, ∂↗, ∂↘, ∂↑, ∂↓)`.
pub fn product_identities<S: Scalar>(x: &HeronianDiamond<S>, k: &S) -> [(S, S); 6] {
    let cm = x.corners();
    let two = S::from_i64(2);
    let d = |dir| scm_partial(dir, &cm, k);
    [
        (-(two.clone() * x.r.clone() * x.s.clone()), d(PartialDirection::Left)),
        (-(two.clone() * x.p.clone() * x.q.clone()), d(PartialDirection::Right)),
        (two.clone() * x.q.clone() * x.s.clone(), d(PartialDirection::Ne)),
        (two.clone() * x.p.clone() * x.r.clone(), d(PartialDirection::Se)),
        (two.clone() * x.p.clone() * x.s.clone(), d(PartialDirection::Up)),
        (two * x.r.clone() * x.q.clone(), d(PartialDirection::Down)),
    ]
}

/// Forget the midpoints. Checks `M^K_4 = 0` and the six product identities.
pub fn restrict<S: Scalar>(
    x: &HeronianDiamond<S>,
    k: &S,
    policy: &TolerancePolicy,
) -> Result<CayleyMengerDiamond<S>, DiamondError> {
    if !restrictable(x, k, policy) {
        return Err(DiamondError::Precondition(
            "needs a=q=r=0, c=p=s=0, or a nondegenerate diagonal".into(),
        ));
    }
    let cm = x.corners();
    if !cm_check(&cm, k, policy) {
        return Err(DiamondError::Precondition("M^K_4 does not vanish".into()));
    }
    for (lhs, rhs) in product_identities(x, k) {
        if !lhs.near(&rhs, policy) {
            return Err(DiamondError::Precondition(
                "midpoint products disagree with the partials".into(),
            ));
        }
    }
    Ok(cm)
}

/// Sign of the square root chosen for `p` in a lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply<S: Scalar>(self, v: S) -> S {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }
}

/// The Heronian diamond over `x` with `p = sign·√H(b,c,e)`.
pub fn lift<S: Scalar>(
    x: &CayleyMengerDiamond<S>,
    k: &S,
    sign: Sign,
) -> Result<HeronianDiamond<S>, DiamondError> {
    if diagonal_factor(&x.e, k).is_zero() && diagonal_factor(&x.f, k).is_zero() {
        return Err(DiamondError::DegenerateDiagonal {
            which: "e and f",
            value: format!("{}, {}", x.e.render(), x.f.render()),
        });
    }
    let h_p = heron_k(&x.b, &x.c, &x.e, k);
    let hs = [
        h_p.clone(),
        heron_k(&x.a, &x.d, &x.e, k),
        heron_k(&x.a, &x.b, &x.f, k),
        heron_k(&x.c, &x.d, &x.f, k),
    ];
    if hs.iter().any(|h| h.is_zero()) {
        return Err(DiamondError::Precondition("a Heron polynomial vanishes".into()));
    }
    let root = h_p
        .sqrt_opt()
        .ok_or_else(|| DiamondError::ExactSqrtUnavailable(h_p.render()))?;
    let p = sign.apply(root);
    let two_p = S::from_i64(2) * p.clone();
    let q = (-scm_partial(PartialDirection::Right, x, k)).try_div(&two_p)?;
    let r = scm_partial(PartialDirection::Se, x, k).try_div(&two_p)?;
    let s = scm_partial(PartialDirection::Up, x, k).try_div(&two_p)?;
    Ok(HeronianDiamond {
        a: x.a.clone(),
        b: x.b.clone(),
        c: x.c.clone(),
        d: x.d.clone(),
        e: x.e.clone(),
        f: x.f.clone(),
        p,
        q,
        r,
        s,
    })
}

/// Given one nonzero midpoint, the other three from the product identities.
/// `known` is 0..4 for p, q, r, s.
pub fn midpoints_from_one<S: Scalar>(
    x: &CayleyMengerDiamond<S>,
    k: &S,
    known: usize,
    value: &S,
) -> Result<[S; 4], DiamondError> {
    let two_v = S::from_i64(2) * value.clone();
    let d = |dir| scm_partial(dir, x, k);
    let div = |n: S| n.try_div(&two_v);
    use PartialDirection::*;
    let out = match known {
        0 => [value.clone(), div(-d(Right))?, div(d(Se))?, div(d(Up))?],
        1 => [div(-d(Right))?, value.clone(), div(d(Down))?, div(d(Ne))?],
        2 => [div(d(Se))?, div(d(Down))?, value.clone(), div(-d(Left))?],
        3 => [div(d(Up))?, div(d(Ne))?, div(-d(Left))?, value.clone()],
        _ => return Err(DiamondError::Precondition("midpoint slot out of range".into())),
    };
    Ok(out)
}
