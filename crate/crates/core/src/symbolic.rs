//! Sparse polynomials over the rationals with `p² → H^K` reduction, and
//! fractions whose denominators are tracked as products of atoms.
//!
//! The x-variables are the integer nodes and lines of a traversing path,
//! the p-variables its midpoints. Every p-exponent is 0 or 1.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::frieze::{
    frieze_from_path, path_shape, Frieze, FriezeError, FriezeIndex, Line, PropagationOptions, Step,
    TraversingPath,
};
use crate::numeric::{self, format_rational, q, qr, NumericError, TolerancePolicy, Q};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolicError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("a numerator exceeded the cap of {0} monomials")]
    Cap(usize),
    #[error(transparent)]
    Frieze(#[from] FriezeError),
}

/// Largest number of x-variables.
pub const MAX_X_VARS: usize = 16;

/// Exponents of the x-variables packed one byte each, variable 0 in the top
/// byte, and a bitmask of the p-variables present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    deg: u32,
    x: u128,
    p: u64,
}

const HIGH_BITS: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;

fn slot(i: usize) -> u32 {
    assert!(i < MAX_X_VARS, "at most {MAX_X_VARS} x-variables");
    8 * (MAX_X_VARS - 1 - i) as u32
}

impl Monomial {
    fn new(x: u128, p: u64) -> Self {
        let deg = x.to_be_bytes().iter().map(|&b| b as u32).sum::<u32>() + p.count_ones();
        Monomial { deg, x, p }
    }

    fn var(i: usize) -> Self {
        Monomial::new(1 << slot(i), 0)
    }

    fn p_var(t: usize) -> Self {
        Monomial::new(0, 1 << t)
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    fn x_exp(&self, i: usize) -> u32 {
        ((self.x >> slot(i)) & 0xff) as u32
    }

    fn exponents(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        (0..MAX_X_VARS).map(|i| (i, self.x_exp(i))).filter(|(_, e)| *e > 0)
    }

    fn with_p(&self, p: u64) -> Self {
        Monomial { deg: self.deg - self.p.count_ones() + p.count_ones(), x: self.x, p }
    }

    /// Product of the x-parts; the p-masks are xor-ed, so squared p's drop out.
    fn times(&self, other: &Monomial) -> Monomial {
        assert!((self.x | other.x) & HIGH_BITS == 0, "exponent overflow");
        let p = self.p ^ other.p;
        let deg = self.deg + other.deg - 2 * (self.p & other.p).count_ones();
        Monomial { deg, x: self.x + other.x, p }
    }

    /// `other / self` on x-exponents, when `self` divides it and both are p-free.
    fn divides(&self, other: &Monomial) -> Option<Monomial> {
        if self.p != 0 || other.p != 0 {
            return None;
        }
        if (0..MAX_X_VARS).any(|i| other.x_exp(i) < self.x_exp(i)) {
            return None;
        }
        Some(Monomial { deg: other.deg - self.deg, x: other.x - self.x, p: 0 })
    }
}

/// Graded lexicographic, x-variables before p-variables.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then(self.x.cmp(&other.x))
            .then(self.p.reverse_bits().cmp(&other.p.reverse_bits()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One denominator factor: `x_e` or `1 − (K/4)x_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    X(usize),
    OneMinus(usize),
}

/// Variables, the reduction rules `p_t² = H_t`, and the atom list.
pub struct Ring {
    x_names: Vec<String>,
    p_names: Vec<String>,
    heron: Vec<Poly>,
    k: Q,
    atoms: Vec<(Atom, Poly)>,
    greedy: bool,
    cap: usize,
    overflow: AtomicBool,
    heron_products: Mutex<HashMap<u64, Poly>>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring")
            .field("x", &self.x_names)
            .field("p", &self.p_names)
            .field("k", &self.k)
            .finish()
    }
}

impl Ring {
    /// `heron[t]` must be a polynomial in the x-variables only.
    pub fn new(x_names: Vec<String>, p_names: Vec<String>, heron: Vec<Poly>, k: Q) -> Arc<Ring> {
        assert_eq!(p_names.len(), heron.len(), "one reduction rule per p-variable");
        assert!(p_names.len() <= 64, "at most 64 p-variables");
        Arc::new(Ring {
            x_names,
            p_names,
            heron,
            k,
            atoms: Vec::new(),
            greedy: true,
            cap: usize::MAX,
            overflow: AtomicBool::new(false),
            heron_products: Mutex::new(HashMap::new()),
        })
    }

    fn with_atoms(mut self, atom_vars: &[usize], greedy: bool, cap: usize) -> Ring {
        let mut atoms = Vec::new();
        for &v in atom_vars {
            atoms.push((Atom::X(v), Poly::x_var(None, v)));
            if !self.k.is_zero() {
                let one_minus = Poly::constant(Q::one()) - Poly::x_var(None, v).scale(&(&self.k / q(4)));
                atoms.push((Atom::OneMinus(v), one_minus));
            }
        }
        self.atoms = atoms;
        self.greedy = greedy;
        self.cap = cap;
        self
    }

    pub fn x(self: &Arc<Self>, i: usize) -> Poly {
        Poly::x_var(Some(self.clone()), i)
    }

    pub fn p(self: &Arc<Self>, t: usize) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::p_var(t), Q::one());
        Poly { terms, ring: Some(self.clone()) }
    }

    pub fn overflowed(&self) -> bool {
        self.overflow.load(AtomicOrdering::Relaxed)
    }

    pub fn atom_name(&self, a: Atom) -> String {
        match a {
            Atom::X(v) => self.x_names[v].clone(),
            Atom::OneMinus(v) => format!("(1 - K/4*{})", self.x_names[v]),
        }
    }

    /// `Π_{t ∈ mask} H_t`, memoized.
    fn heron_product(&self, mask: u64) -> Poly {
        if let Some(p) = self.heron_products.lock().expect("poisoned lock").get(&mask) {
            return p.clone();
        }
        let mut out = Poly::constant(Q::one());
        for t in 0..64 {
            if mask >> t & 1 == 1 {
                out = out.mul_ref(&self.heron[t]);
            }
        }
        self.heron_products.lock().expect("poisoned lock").insert(mask, out.clone());
        out
    }
}

fn pick_ring(a: &Option<Arc<Ring>>, b: &Option<Arc<Ring>>) -> Option<Arc<Ring>> {
    a.clone().or_else(|| b.clone())
}

/// Canonical sparse polynomial: no zero coefficients, p-squares reduced.
#[derive(Clone)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
    ring: Option<Arc<Ring>>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let name_x = |i: usize| match &self.ring {
            Some(r) if i < r.x_names.len() => r.x_names[i].clone(),
            _ => format!("x{i}"),
        };
        let name_p = |t: usize| match &self.ring {
            Some(r) if t < r.p_names.len() => r.p_names[t].clone(),
            _ => format!("p{t}"),
        };
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut factors = Vec::new();
            for (i, e) in m.exponents() {
                match e {
                    0 => {}
                    1 => factors.push(name_x(i)),
                    _ => factors.push(format!("{}^{e}", name_x(i))),
                }
            }
            for t in 0..64 {
                if m.p >> t & 1 == 1 {
                    factors.push(name_p(t));
                }
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if n > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            if factors.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new(), ring: None }
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::default(), c);
        }
        Poly { terms, ring: None }
    }

    fn x_var(ring: Option<Arc<Ring>>, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(i), Q::one());
        Poly { terms, ring }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::default()).cloned(),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly { terms: BTreeMap::new(), ring: self.ring.clone() };
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
            ring: self.ring.clone(),
        }
    }

    fn add_term(terms: &mut BTreeMap<Monomial, Q>, m: Monomial, c: Q) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let v = e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add_ref(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Poly::add_term(&mut terms, *m, c.clone());
        }
        Poly { terms, ring: pick_ring(&self.ring, &other.ring) }
    }

    pub fn sub_ref(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Poly::add_term(&mut terms, *m, -c.clone());
        }
        Poly { terms, ring: pick_ring(&self.ring, &other.ring) }
    }

    /// Product, with every `p_t²` replaced by `H_t`.
    pub fn mul_ref(&self, other: &Poly) -> Poly {
        let ring = pick_ring(&self.ring, &other.ring);
        // multiply integer numerators and divide by the common denominator once per term
        let (a, da) = self.integer_terms();
        let (b, db) = other.integer_terms();
        let den = da * db;
        let mut groups: HashMap<u64, HashMap<Monomial, BigInt>> = HashMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let doubled = ma.p & mb.p;
                let m = ma.times(mb);
                let v = ca * cb;
                match groups.entry(doubled).or_default().entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += v,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(v);
                    }
                }
            }
        }
        let mut out = Poly { terms: BTreeMap::new(), ring: ring.clone() };
        let mut groups: Vec<(u64, HashMap<Monomial, BigInt>)> = groups.into_iter().collect();
        groups.sort_by_key(|(mask, _)| *mask);
        for (mask, terms) in groups {
            let terms = terms
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Q::new(c, den.clone())))
                .collect();
            let part = Poly { terms, ring: ring.clone() };
            if mask == 0 {
                out = out.add_ref(&part);
            } else {
                let r = ring.as_ref().expect("p-variables need a ring");
                out = out.add_ref(&part.mul_ref(&r.heron_product(mask)));
            }
        }
        out
    }

    /// Coefficients scaled to integers, and the scale.
    fn integer_terms(&self) -> (Vec<(&Monomial, BigInt)>, BigInt) {
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = self.terms.iter().map(|(m, c)| (m, c.numer() * (&den / c.denom()))).collect();
        (terms, den)
    }

    /// Replace `p_t` by `−p_t`.
    fn conjugate(&self, t: usize) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m.p >> t & 1 == 1 { -c.clone() } else { c.clone() }))
                .collect(),
            ring: self.ring.clone(),
        }
    }

    fn p_mask(&self) -> u64 {
        self.terms.keys().fold(0, |acc, m| acc | m.p)
    }

    /// Long division by a p-free divisor; `None` unless it is exact.
    fn div_x(&self, d: &Poly) -> Option<Poly> {
        let (ld_m, ld_c) = d.leading()?;
        let mut rem = self.clone();
        let mut quo = Poly { terms: BTreeMap::new(), ring: pick_ring(&self.ring, &d.ring) };
        while let Some((m, c)) = rem.terms.iter().next_back() {
            let mono = ld_m.divides(m)?;
            let coeff = c / ld_c;
            for (dm, dc) in &d.terms {
                let prod = mono.times(dm);
                Poly::add_term(&mut rem.terms, prod, -(&coeff * dc));
            }
            quo.terms.insert(mono, coeff);
        }
        Some(quo)
    }

    /// Substitute values for the variables.
    pub fn eval(&self, xs: &[Q], ps: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, e) in m.exponents() {
                for _ in 0..e {
                    v *= &xs[i];
                }
            }
            for (t, pv) in ps.iter().enumerate() {
                if m.p >> t & 1 == 1 {
                    v *= pv;
                }
            }
            acc += v;
        }
        acc
    }
}

/// `num / div` in the p-reduced ring, or `None` when it does not divide.
pub fn exact_divide(num: &Poly, div: &Poly) -> Result<Option<Poly>, SymbolicError> {
    if div.is_zero() {
        return Err(SymbolicError::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(Some(Poly { terms: BTreeMap::new(), ring: pick_ring(&num.ring, &div.ring) }));
    }
    if div.p_mask() != 0 {
        let ring = pick_ring(&num.ring, &div.ring);
        if let Some(order) = ring.as_deref().and_then(WeightOrder::new) {
            return Ok(order.divide(num, div));
        }
    }
    exact_divide_direct(num, div)
}

/// A term order under which leading terms multiply, for `K ≠ 0`.
///
/// Give x-variables weight 2 and p-variables weight 3, so the top part of
/// `H_t` is the single cubic term `−K a b c`. Modulo lower weight a term
/// `x^α p^m` then behaves like the monomial with doubled exponents
/// `2α + Σ_{t∈m} (a_t + b_t + c_t)`; each p has a line of its own among its
/// three edges, so the doubled exponents determine the term.
struct WeightOrder {
    /// Doubled-exponent contribution of each p-variable.
    tops: Vec<u128>,
    /// A variable that only p-variable `t` touches.
    own: Vec<usize>,
    neg_k: Q,
}

type Key = (u32, u128);

impl WeightOrder {
    fn new(ring: &Ring) -> Option<WeightOrder> {
        if ring.k.is_zero() {
            return None;
        }
        let mut tops = Vec::new();
        for h in &ring.heron {
            let (m, _) = h.terms.iter().find(|(m, _)| m.degree() == 3)?;
            tops.push(m.x);
        }
        let mut own = Vec::new();
        for (t, top) in tops.iter().enumerate() {
            let shared = |i: usize| tops.iter().enumerate().any(|(u, o)| u != t && (o >> slot(i)) & 0xff != 0);
            own.push((0..MAX_X_VARS).find(|&i| (top >> slot(i)) & 0xff == 1 && !shared(i))?);
        }
        Some(WeightOrder { tops, own, neg_k: -ring.k.clone() })
    }

    fn key(&self, m: &Monomial) -> Key {
        let mut v = m.x << 1;
        for (t, top) in self.tops.iter().enumerate() {
            if m.p >> t & 1 == 1 {
                v += top;
            }
        }
        (v.to_be_bytes().iter().map(|&b| b as u32).sum(), v)
    }

    /// The monomial whose key is `v`, if there is one.
    fn decode(&self, v: u128) -> Option<Monomial> {
        let mut rest = v;
        let mut p = 0;
        for (t, top) in self.tops.iter().enumerate() {
            if (rest >> slot(self.own[t])) & 1 == 1 {
                if (0..MAX_X_VARS).any(|i| (rest >> slot(i)) & 0xff < (top >> slot(i)) & 0xff) {
                    return None;
                }
                rest -= top;
                p |= 1 << t;
            }
        }
        if (0..MAX_X_VARS).any(|i| (rest >> slot(i)) & 1 == 1) {
            return None;
        }
        Some(Monomial::new(rest >> 1, p))
    }

    /// Long division with leading terms taken in this order.
    fn divide(&self, num: &Poly, div: &Poly) -> Option<Poly> {
        let ring = pick_ring(&num.ring, &div.ring);
        let lead = |p: &Poly| p.terms.iter().map(|(m, c)| (self.key(m), *m, c.clone())).max_by_key(|t| t.0);
        let (dk, dm, dc) = lead(div)?;
        let mut rem: BTreeMap<Key, (Monomial, Q)> =
            num.terms.iter().map(|(m, c)| (self.key(m), (*m, c.clone()))).collect();
        let mut quo = Poly { terms: BTreeMap::new(), ring: ring.clone() };
        while let Some((&rk, (_, rc))) = rem.iter().next_back() {
            if rk.0 < dk.0 {
                return None;
            }
            let gap = rk.1.checked_sub(dk.1)?;
            if (0..MAX_X_VARS).any(|i| (rk.1 >> slot(i)) & 0xff < (dk.1 >> slot(i)) & 0xff) {
                return None;
            }
            let u = self.decode(gap)?;
            let overlap = (u.p & dm.p).count_ones() as i32;
            let coeff = rc / (&dc * num_traits::pow::Pow::pow(&self.neg_k, overlap));
            let mut term = BTreeMap::new();
            term.insert(u, coeff.clone());
            let step = Poly { terms: term, ring: ring.clone() }.mul_ref(div);
            for (m, c) in step.terms {
                let k = self.key(&m);
                match rem.entry(k) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert((m, -c));
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let v = &e.get().1 - c;
                        if v.is_zero() {
                            e.remove();
                        } else {
                            e.get_mut().1 = v;
                        }
                    }
                }
            }
            debug_assert!(rem.keys().next_back().is_none_or(|k| *k < rk));
            quo.terms.insert(u, coeff);
        }
        Some(quo)
    }
}

/// Conjugate the divisor free of p-variables, then divide each p-mask slice.
fn exact_divide_direct(num: &Poly, div: &Poly) -> Result<Option<Poly>, SymbolicError> {
    let mut d = div.clone();
    let mut n = num.clone();
    let mask = d.p_mask();
    for t in 0..64 {
        if mask >> t & 1 == 1 && d.p_mask() >> t & 1 == 1 {
            let c = d.conjugate(t);
            d = d.mul_ref(&c);
            n = n.mul_ref(&c);
        }
    }
    if d.is_zero() {
        return Err(SymbolicError::DivisionByZero);
    }
    let mut by_mask: BTreeMap<u64, BTreeMap<Monomial, Q>> = BTreeMap::new();
    for (m, c) in &n.terms {
        by_mask
            .entry(m.p)
            .or_default()
            .insert(m.with_p(0), c.clone());
    }
    let mut out = Poly { terms: BTreeMap::new(), ring: pick_ring(&num.ring, &div.ring) };
    for (mask, terms) in by_mask {
        let part = Poly { terms, ring: out.ring.clone() };
        let Some(quo) = part.div_x(&d) else {
            return Ok(None);
        };
        for (m, c) in quo.terms {
            out.terms.insert(m.with_p(mask), c);
        }
    }
    Ok(Some(out))
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        self.add_ref(&rhs)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self.sub_ref(&rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        self.mul_ref(&rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

/// `num / (Π atoms^e · Π residuals)`.
#[derive(Clone)]
pub struct TrackedFraction {
    pub num: Poly,
    pub atoms: BTreeMap<Atom, u32>,
    pub residuals: Vec<Poly>,
    ring: Option<Arc<Ring>>,
    poisoned: bool,
}

impl fmt::Debug for TrackedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", numeric::Scalar::render(self))
    }
}

impl TrackedFraction {
    pub fn from_poly(num: Poly) -> Self {
        let ring = num.ring.clone();
        TrackedFraction { num, atoms: BTreeMap::new(), residuals: Vec::new(), ring, poisoned: false }
    }

    pub fn is_clean(&self) -> bool {
        self.residuals.is_empty() && !self.poisoned
    }

    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    fn poison(ring: Option<Arc<Ring>>) -> Self {
        TrackedFraction { num: Poly::zero(), atoms: BTreeMap::new(), residuals: Vec::new(), ring, poisoned: true }
    }

    fn atom_poly(&self, a: Atom) -> Poly {
        let r = self.ring.as_ref().expect("atoms need a ring");
        r.atoms.iter().find(|(b, _)| *b == a).map(|(_, p)| p.clone()).expect("known atom")
    }

    fn pow(p: &Poly, e: u32) -> Poly {
        (0..e).fold(Poly::constant(Q::one()), |acc, _| acc.mul_ref(p))
    }

    /// Denominator as one polynomial.
    pub fn denominator(&self) -> Poly {
        let mut d = Poly::constant(Q::one());
        for (&a, &e) in &self.atoms {
            d = d.mul_ref(&Self::pow(&self.atom_poly(a), e));
        }
        for r in &self.residuals {
            d = d.mul_ref(r);
        }
        d
    }

    pub fn eval(&self, xs: &[Q], ps: &[Q]) -> Option<Q> {
        let d = self.denominator().eval(xs, ps);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(xs, ps) / d)
        }
    }

    /// Cancel residuals and atoms against the numerator where they divide it.
    fn normalize(mut self) -> Self {
        if self.poisoned {
            return self;
        }
        if self.num.is_zero() {
            self.atoms.clear();
            self.residuals.clear();
            return self;
        }
        let Some(ring) = self.ring.clone() else {
            return self;
        };
        if ring.greedy {
            let mut kept = Vec::new();
            for r in std::mem::take(&mut self.residuals) {
                match exact_divide(&self.num, &r) {
                    Ok(Some(quo)) => self.num = quo,
                    _ => kept.push(r),
                }
            }
            self.residuals = kept;
        }
        let atoms: Vec<(Atom, u32)> = self.atoms.iter().map(|(a, e)| (*a, *e)).collect();
        for (a, mut e) in atoms {
            let ap = self.atom_poly(a);
            while e > 0 {
                match exact_divide(&self.num, &ap) {
                    Ok(Some(quo)) => {
                        self.num = quo;
                        e -= 1;
                    }
                    _ => break,
                }
            }
            if e == 0 {
                self.atoms.remove(&a);
            } else {
                self.atoms.insert(a, e);
            }
        }
        if self.num.len() > ring.cap {
            ring.overflow.store(true, AtomicOrdering::Relaxed);
            return Self::poison(self.ring);
        }
        self
    }

    fn combine(a: &Self, b: &Self, sign: &Q) -> Self {
        let ring = pick_ring(&a.ring, &b.ring);
        if a.poisoned || b.poisoned {
            return Self::poison(ring);
        }
        let (mut an, mut bn) = (a.num.clone(), b.num.clone());
        let mut atoms = a.atoms.clone();
        let all: BTreeSet<Atom> = a.atoms.keys().chain(b.atoms.keys()).copied().collect();
        let ctx = TrackedFraction { ring: ring.clone(), ..TrackedFraction::from_poly(Poly::zero()) };
        for at in all {
            let ea = a.atoms.get(&at).copied().unwrap_or(0);
            let eb = b.atoms.get(&at).copied().unwrap_or(0);
            let top = ea.max(eb);
            let ap = ctx.atom_poly(at);
            an = an.mul_ref(&Self::pow(&ap, top - ea));
            bn = bn.mul_ref(&Self::pow(&ap, top - eb));
            atoms.insert(at, top);
        }
        let mut residuals = a.residuals.clone();
        let mut a_only: Vec<bool> = vec![true; a.residuals.len()];
        for r in &b.residuals {
            if let Some(pos) = (0..a.residuals.len()).find(|&i| a_only[i] && a.residuals[i] == *r) {
                a_only[pos] = false;
            } else {
                an = an.mul_ref(r);
                residuals.push(r.clone());
            }
        }
        for (i, r) in a.residuals.iter().enumerate() {
            if a_only[i] {
                bn = bn.mul_ref(r);
            }
        }
        let num = an.add_ref(&bn.scale(sign));
        TrackedFraction { num, atoms, residuals, ring, poisoned: false }.normalize()
    }

    fn product(a: &Self, b: &Self) -> Self {
        let ring = pick_ring(&a.ring, &b.ring);
        if a.poisoned || b.poisoned {
            return Self::poison(ring);
        }
        let mut atoms = a.atoms.clone();
        for (at, e) in &b.atoms {
            *atoms.entry(*at).or_insert(0) += e;
        }
        let mut residuals = a.residuals.clone();
        residuals.extend(b.residuals.iter().cloned());
        TrackedFraction { num: a.num.mul_ref(&b.num), atoms, residuals, ring, poisoned: false }.normalize()
    }

    fn quotient(a: &Self, b: &Self) -> Result<Self, NumericError> {
        let ring = pick_ring(&a.ring, &b.ring);
        if a.poisoned || b.poisoned {
            return Ok(Self::poison(ring));
        }
        if b.num.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let mut num = a.num.mul_ref(&b.denominator());
        let mut atoms = a.atoms.clone();
        let mut residuals = a.residuals.clone();
        let mut rest = b.num.clone();
        if let Some(r) = &ring {
            for (at, ap) in &r.atoms {
                while let Ok(Some(quo)) = exact_divide(&rest, ap) {
                    rest = quo;
                    *atoms.entry(*at).or_insert(0) += 1;
                }
            }
        }
        match rest.as_constant() {
            Some(c) => num = num.scale(&(Q::one() / c)),
            None => {
                let lc = rest.leading().map(|(_, c)| c.clone()).expect("nonzero");
                residuals.push(rest.scale(&(Q::one() / &lc)));
                num = num.scale(&(Q::one() / lc));
            }
        }
        Ok(TrackedFraction { num, atoms, residuals, ring, poisoned: false }.normalize())
    }
}

impl PartialEq for TrackedFraction {
    fn eq(&self, other: &Self) -> bool {
        !self.poisoned && !other.poisoned && TrackedFraction::combine(self, other, &-Q::one()).num.is_zero()
    }
}

impl Add for TrackedFraction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        TrackedFraction::combine(&self, &rhs, &Q::one())
    }
}

impl Sub for TrackedFraction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        TrackedFraction::combine(&self, &rhs, &-Q::one())
    }
}

impl Mul for TrackedFraction {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        TrackedFraction::product(&self, &rhs)
    }
}

impl Neg for TrackedFraction {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.num = -self.num;
        self
    }
}

impl numeric::Scalar for TrackedFraction {
    fn zero() -> Self {
        TrackedFraction::from_poly(Poly::zero())
    }
    fn one() -> Self {
        TrackedFraction::from_poly(Poly::constant(<Q as One>::one()))
    }
    fn from_i64(v: i64) -> Self {
        TrackedFraction::from_poly(Poly::constant(q(v)))
    }
    fn is_zero(&self) -> bool {
        !self.poisoned && self.num.is_zero()
    }
    fn try_div(&self, rhs: &Self) -> Result<Self, NumericError> {
        TrackedFraction::quotient(self, rhs)
    }
    fn sqrt_opt(&self) -> Option<Self> {
        None
    }
    fn near(&self, other: &Self, _policy: &TolerancePolicy) -> bool {
        self == other
    }
    fn render(&self) -> String {
        if self.poisoned {
            return "<overflow>".into();
        }
        let d = self.denominator();
        if d.as_constant() == Some(<Q as One>::one()) {
            format!("{}", self.num)
        } else {
            format!("({}) / ({})", self.num, d)
        }
    }
}

/// Settings for a symbolic run.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicOptions {
    /// Divide residual denominators out of numerators after every step.
    pub greedy: bool,
    /// Largest numerator, in monomials, before the run is abandoned.
    pub monomial_cap: usize,
    /// Columns to propagate. By default the path's columns, widened until
    /// they hold every entry of a period up to glide reflection.
    pub window: Option<(i64, i64)>,
}

impl Default for SymbolicOptions {
    fn default() -> Self {
        SymbolicOptions { greedy: true, monomial_cap: 200_000, window: None }
    }
}

/// A frieze over the function field of a path, plus its ring.
pub struct SymbolicFrieze {
    pub ring: Arc<Ring>,
    pub frieze: Frieze<TrackedFraction>,
    /// Path index of each x-variable (nodes) or line.
    pub x_vars: Vec<PathVar>,
    pub p_vars: Vec<FriezeIndex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathVar {
    Node(FriezeIndex),
    Line(Line),
}

fn var_name(v: &PathVar) -> String {
    match v {
        PathVar::Node(x) => format!("z{x}").replace(' ', ""),
        PathVar::Line(l) => l.to_string(),
    }
}

/// Propagate a path whose entries are all independent variables.
pub fn symbolic_propagate(
    n: usize,
    k: &Q,
    start: i64,
    steps: &[Step],
    opts: &SymbolicOptions,
) -> Result<SymbolicFrieze, SymbolicError> {
    let (nodes, lines) = path_shape(n, start, steps, true)?;
    let mut x_vars: Vec<PathVar> = nodes.iter().filter(|x| x.is_integer()).map(|x| PathVar::Node(*x)).collect();
    x_vars.extend(lines.iter().map(|l| PathVar::Line(*l)));
    let p_vars: Vec<FriezeIndex> = nodes.iter().filter(|x| !x.is_integer()).copied().collect();
    let xi = |v: PathVar| x_vars.iter().position(|w| *w == v).expect("path variable");
    let mut heron = Vec::new();
    for x in &p_vars {
        let (e1, e2, side) = if x.i2 % 2 == 0 {
            let (i, j) = (x.i2 / 2, x.j2.div_euclid(2));
            (FriezeIndex::node(i, j), FriezeIndex::node(i, j + 1), Line::Se(j))
        } else {
            let (i, j) = (x.i2.div_euclid(2), x.j2 / 2);
            (FriezeIndex::node(i, j), FriezeIndex::node(i + 1, j), Line::Ne(i))
        };
        let a = Poly::x_var(None, xi(PathVar::Node(e1)));
        let b = Poly::x_var(None, xi(PathVar::Node(e2)));
        let c = Poly::x_var(None, xi(PathVar::Line(side)));
        heron.push(heron_poly(&a, &b, &c, k));
    }
    let atom_vars: Vec<usize> = nodes
        .iter()
        .filter(|x| x.is_integer() && x.row2() >= 4 && x.row2() <= 2 * n as i64 - 4)
        .map(|x| xi(PathVar::Node(*x)))
        .collect();
    let x_names = x_vars.iter().map(var_name).collect();
    let p_names = p_vars.iter().map(|x| format!("z{x}").replace(' ', "")).collect();
    let ring = Ring::new(x_names, p_names, heron, k.clone());
    let ring = Arc::new(
        Arc::try_unwrap(ring)
            .expect("fresh ring")
            .with_atoms(&atom_vars, opts.greedy, opts.monomial_cap),
    );

    let mut node_values = Vec::new();
    let (mut xn, mut pn) = (0, 0);
    for x in &nodes {
        if x.is_integer() {
            node_values.push(TrackedFraction::from_poly(ring.x(xn)));
            xn += 1;
        } else {
            node_values.push(TrackedFraction::from_poly(ring.p(pn)));
            pn += 1;
        }
    }
    let line_values = (0..lines.len()).map(|l| TrackedFraction::from_poly(ring.x(xn + l))).collect();
    let path = TraversingPath::from_steps(n, start, steps, true, node_values, line_values)?;
    let kk = TrackedFraction::from_poly(Poly::constant(k.clone()));
    let window = opts.window.unwrap_or_else(|| glide_window(n, &nodes));
    let frieze = frieze_from_path(&path, &kk, window, &PropagationOptions::unchecked())?;
    if ring.overflowed() {
        return Err(SymbolicError::Cap(opts.monomial_cap));
    }
    Ok(SymbolicFrieze { ring, frieze, x_vars, p_vars })
}

/// Whether columns `lo..=hi` hold a representative of every entry strictly
/// between the line rows, up to translation and glide reflection.
fn covers_period(n: usize, (lo, hi): (i64, i64)) -> bool {
    let n2 = 2 * n as i64;
    let hit = |c: i64| (2 * lo..=2 * hi).any(|x| (x - c).rem_euclid(n2) == 0);
    (0..n2).all(|i2| {
        (3..=n2 - 3)
            .map(|r| FriezeIndex::new(i2, i2 + r))
            .filter(|x| x.is_valid())
            .all(|x| hit(x.i2) || hit(x.j2))
    })
}

/// The path's columns, widened one column at a time until they cover a
/// period. Far columns are where the numerators grow, so this keeps the
/// symbolic run small.
fn glide_window(n: usize, nodes: &[FriezeIndex]) -> (i64, i64) {
    let lo = nodes.iter().map(|x| x.i2.div_euclid(2)).min().unwrap_or(0);
    let hi = nodes.iter().map(|x| (x.i2 + 1).div_euclid(2)).max().unwrap_or(0);
    let mut w = (lo - 1, hi + 1);
    let mut left = false;
    while !covers_period(n, w) {
        if left {
            w.0 -= 1;
        } else {
            w.1 += 1;
        }
        left = !left;
    }
    w
}

/// `H^K(a,b,c)` over polynomials.
pub fn heron_poly(a: &Poly, b: &Poly, c: &Poly, k: &Q) -> Poly {
    let two = q(2);
    let sq = |p: &Poly| p.mul_ref(p);
    let mut h = -(sq(a) + sq(b) + sq(c));
    h = h + a.mul_ref(b).scale(&two) + a.mul_ref(c).scale(&two) + b.mul_ref(c).scale(&two);
    h - a.mul_ref(b).mul_ref(c).scale(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Clean,
    Residual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub index: String,
    pub status: EntryStatus,
    pub atom_exponents: BTreeMap<String, u32>,
    pub residuals: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaurentReport {
    pub n: usize,
    pub curvature: String,
    pub path: String,
    pub clean: bool,
    pub worst_residual_degree: u32,
    pub elapsed_ms: u128,
    pub entries: Vec<EntryReport>,
}

/// Report, entry by entry, whether the propagated frieze has only atom
/// denominators.
pub fn laurent_report(sf: &SymbolicFrieze, path: &str, elapsed_ms: u128) -> LaurentReport {
    let mut entries = Vec::new();
    let mut worst = 0;
    for (x, v) in &sf.frieze.nodes {
        let residuals: Vec<String> = v.residuals.iter().map(|r| r.to_string()).collect();
        worst = v.residuals.iter().map(Poly::degree).fold(worst, u32::max);
        entries.push(EntryReport {
            index: x.to_string(),
            status: if v.is_clean() { EntryStatus::Clean } else { EntryStatus::Residual },
            atom_exponents: v.atoms.iter().map(|(a, e)| (sf.ring.atom_name(*a), *e)).collect(),
            residuals,
        });
    }
    LaurentReport {
        n: sf.frieze.n,
        curvature: format_rational(&sf.ring.k),
        path: path.to_string(),
        clean: entries.iter().all(|e| e.status == EntryStatus::Clean),
        worst_residual_degree: worst,
        elapsed_ms,
        entries,
    }
}

/// Propagate symbolically and report on every entry of one period.
pub fn laurent_verify(
    n: usize,
    k: &Q,
    start: i64,
    steps: &[Step],
    opts: &SymbolicOptions,
) -> Result<LaurentReport, SymbolicError> {
    let t0 = Instant::now();
    let sf = symbolic_propagate(n, k, start, steps, opts)?;
    Ok(laurent_report(&sf, &Step::word(steps), t0.elapsed().as_millis()))
}

impl SymbolicFrieze {
    /// Values of the path variables read off an exact frieze.
    pub fn assignment(&self, z: &Frieze<Q>) -> Option<(Vec<Q>, Vec<Q>)> {
        let xs = self
            .x_vars
            .iter()
            .map(|v| match v {
                PathVar::Node(x) => z.get(*x).cloned(),
                PathVar::Line(l) => z.line(*l).cloned(),
            })
            .collect::<Option<Vec<Q>>>()?;
        let ps = self.p_vars.iter().map(|x| z.get(*x).cloned()).collect::<Option<Vec<Q>>>()?;
        Some((xs, ps))
    }

    /// Indices where substituting `z`'s path values disagrees with `z`.
    pub fn specialization_mismatches(&self, z: &Frieze<Q>) -> Option<Vec<FriezeIndex>> {
        let (xs, ps) = self.assignment(z)?;
        Some(
            self.frieze
                .nodes
                .iter()
                .filter(|(x, v)| match z.get(**x) {
                    Some(want) => v.eval(&xs, &ps).as_ref() != Some(want),
                    None => true,
                })
                .map(|(x, _)| *x)
                .collect(),
        )
    }
}

/// `K = 1/49`, the curvature of the radius-7 examples.
pub fn default_curvature() -> Q {
    qr(1, 49)
}
