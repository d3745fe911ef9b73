//! Friezes over the half-integer index set: construction from polygons and
//! traversing paths, validation, and conversion between the two kinds.
//!
//! Indices are doubled, so `z(i+½, j)` lives at `(2i+1, 2j)`. A frieze is
//! materialized on a window `[lo, hi]` of base columns: every index with
//! `2lo ≤ I ≤ 2hi` and `0 ≤ J−I ≤ 2n` is stored.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diamond::{
    self, cm_check, coherence_check, coherence_solve, diagonal_factor, heron_k, heronian_check,
    midpoints_from_one, propagate_lr, propagate_rl, CayleyMengerDiamond, DiamondError,
    HeronianDiamond, Side, Sign,
};
use crate::geometry::{
    s_kappa, sq_dist, GeometryError, MeasurementSet, SpherePoint, Triangulation,
};
use crate::numeric::{Scalar, TolerancePolicy, Q};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FriezeError {
    #[error("degenerate diagonal at {index}: {value} (must avoid 0 and 4/K)")]
    DegenerateDiagonal { index: FriezeIndex, value: String },
    #[error("Heron relation fails at {index}")]
    HeronViolation { index: FriezeIndex },
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("coherence pivot vanishes while solving {index}")]
    CoherencePivotZero { index: FriezeIndex },
    #[error("no exact square root: {0}")]
    ExactSqrtUnavailable(String),
    #[error("entry {0} was not determined")]
    Undetermined(String),
    #[error("inconsistent values at {0}")]
    Inconsistent(String),
    #[error("{0}")]
    Precondition(String),
    #[error("diamond at ({i},{j}): {source}")]
    Diamond { i: i64, j: i64, source: DiamondError },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FriezeKind {
    Heronian,
    CayleyMenger,
}

/// Doubled coordinates `(I, J) = (2i, 2j)`. Never both odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FriezeIndex {
    pub i2: i64,
    pub j2: i64,
}

fn half(v: i64) -> String {
    if v % 2 == 0 {
        (v / 2).to_string()
    } else {
        format!("{v}/2")
    }
}

impl fmt::Display for FriezeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", half(self.i2), half(self.j2))
    }
}

impl FriezeIndex {
    pub fn new(i2: i64, j2: i64) -> Self {
        FriezeIndex { i2, j2 }
    }

    /// The integer node `z(i, j)`.
    pub fn node(i: i64, j: i64) -> Self {
        FriezeIndex::new(2 * i, 2 * j)
    }

    pub fn is_integer(&self) -> bool {
        self.i2 % 2 == 0 && self.j2 % 2 == 0
    }

    pub fn is_valid(&self) -> bool {
        !(self.i2.rem_euclid(2) == 1 && self.j2.rem_euclid(2) == 1)
    }

    /// `2(j − i)`.
    pub fn row2(&self) -> i64 {
        self.j2 - self.i2
    }

    /// Translate by `s` base columns.
    pub fn shift(&self, s: i64) -> Self {
        FriezeIndex::new(self.i2 + 2 * s, self.j2 + 2 * s)
    }
}

/// `z(i,j) ↦ z(j, i+n)`, on doubled coordinates.
pub fn glide_image(idx: FriezeIndex, n: usize) -> FriezeIndex {
    FriezeIndex::new(idx.j2, idx.i2 + 2 * n as i64)
}

/// The vertex label `⟨m⟩ ∈ {1, …, n}` congruent to `m`.
pub fn residue(m: i64, n: usize) -> usize {
    ((m - 1).rem_euclid(n as i64) + 1) as usize
}

/// A dashed line label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Line {
    Ne(i64),
    Se(i64),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Ne(i) => write!(f, "NE({i})"),
            Line::Se(j) => write!(f, "SE({j})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Node(FriezeIndex),
    Line(Line),
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Key::Node(x) => write!(f, "{x}"),
            Key::Line(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frieze<S> {
    pub kind: FriezeKind,
    pub n: usize,
    pub k: S,
    /// Inclusive range of base columns.
    pub window: (i64, i64),
    pub nodes: BTreeMap<FriezeIndex, S>,
    pub ne_lines: BTreeMap<i64, S>,
    pub se_lines: BTreeMap<i64, S>,
}

/// Entries of diamond `⊞(i,j)`, in the order `a b c d e f p q r s`.
fn diamond_keys(i: i64, j: i64) -> [Key; 10] {
    let nd = |a: i64, b: i64| Key::Node(FriezeIndex::new(a, b));
    let (i2, j2) = (2 * i, 2 * j);
    [
        nd(i2, j2 + 2),
        Key::Line(Line::Ne(i)),
        nd(i2 + 2, j2),
        Key::Line(Line::Se(j)),
        nd(i2, j2),
        nd(i2 + 2, j2 + 2),
        nd(i2 + 1, j2),
        nd(i2, j2 + 1),
        nd(i2 + 1, j2 + 2),
        nd(i2 + 2, j2 + 1),
    ]
}

/// Every index the kind stores in base column range `[lo, hi]`.
fn window_indices(kind: FriezeKind, n: usize, lo: i64, hi: i64) -> Vec<FriezeIndex> {
    let mut out = Vec::new();
    for i2 in 2 * lo..=2 * hi {
        for r2 in 0..=2 * n as i64 {
            let idx = FriezeIndex::new(i2, i2 + r2);
            let keep = match kind {
                FriezeKind::Heronian => idx.is_valid(),
                FriezeKind::CayleyMenger => idx.is_integer(),
            };
            if keep {
                out.push(idx);
            }
        }
    }
    out
}

fn line_ranges(n: usize, lo: i64, hi: i64) -> (std::ops::RangeInclusive<i64>, std::ops::RangeInclusive<i64>) {
    (lo..=hi, lo..=hi + n as i64 - 1)
}

impl<S: Scalar> Frieze<S> {
    pub fn get(&self, idx: FriezeIndex) -> Option<&S> {
        self.nodes.get(&idx)
    }

    /// Integer node `z(i,j)`.
    pub fn z(&self, i: i64, j: i64) -> Option<&S> {
        self.nodes.get(&FriezeIndex::node(i, j))
    }

    fn key(&self, key: Key) -> Option<&S> {
        match key {
            Key::Node(x) => self.nodes.get(&x),
            Key::Line(Line::Ne(i)) => self.ne_lines.get(&i),
            Key::Line(Line::Se(j)) => self.se_lines.get(&j),
        }
    }

    pub fn line(&self, line: Line) -> Option<&S> {
        self.key(Key::Line(line))
    }

    /// Look an index up, folding it into the window by periodicity and
    /// glide reflection when it is not stored. Only meaningful on a frieze
    /// that passed validation.
    pub fn resolve(&self, idx: FriezeIndex) -> Option<&S> {
        let n = self.n as i64;
        let t = -(idx.i2 - 2 * self.window.0).div_euclid(2 * n);
        let base = idx.shift(n * t);
        let unglide = |x: FriezeIndex| FriezeIndex::new(x.j2 - 2 * n, x.i2);
        [base, base.shift(n)]
            .into_iter()
            .flat_map(|x| [x, glide_image(x, self.n), unglide(x)])
            .find_map(|x| self.nodes.get(&x))
    }

    pub fn heronian_diamond(&self, i: i64, j: i64) -> Option<HeronianDiamond<S>> {
        let keys = diamond_keys(i, j);
        let mut vals = Vec::with_capacity(10);
        for key in keys {
            vals.push(self.key(key)?.clone());
        }
        let arr: [S; 10] = vals.try_into().ok()?;
        Some(HeronianDiamond::from_array(arr))
    }

    pub fn cm_diamond(&self, i: i64, j: i64) -> Option<CayleyMengerDiamond<S>> {
        let keys = diamond_keys(i, j);
        let mut vals = Vec::with_capacity(6);
        for key in &keys[..6] {
            vals.push(self.key(*key)?.clone());
        }
        let arr: [S; 6] = vals.try_into().ok()?;
        Some(CayleyMengerDiamond::from_array(arr))
    }

    /// The same frieze with every index moved `s` columns to the right.
    pub fn translated(&self, s: i64) -> Frieze<S> {
        Frieze {
            kind: self.kind,
            n: self.n,
            k: self.k.clone(),
            window: (self.window.0 + s, self.window.1 + s),
            nodes: self.nodes.iter().map(|(x, v)| (x.shift(s), v.clone())).collect(),
            ne_lines: self.ne_lines.iter().map(|(i, v)| (i + s, v.clone())).collect(),
            se_lines: self.se_lines.iter().map(|(j, v)| (j + s, v.clone())).collect(),
        }
    }

    /// Restrict to a smaller window.
    pub fn cropped(&self, lo: i64, hi: i64) -> Result<Frieze<S>, FriezeError> {
        if lo > hi || lo < self.window.0 || hi > self.window.1 {
            return Err(FriezeError::Precondition(format!(
                "window [{lo}, {hi}] is not inside [{}, {}]",
                self.window.0, self.window.1
            )));
        }
        let (ne, se) = line_ranges(self.n, lo, hi);
        Ok(Frieze {
            kind: self.kind,
            n: self.n,
            k: self.k.clone(),
            window: (lo, hi),
            nodes: self
                .nodes
                .iter()
                .filter(|(x, _)| x.i2 >= 2 * lo && x.i2 <= 2 * hi)
                .map(|(x, v)| (*x, v.clone()))
                .collect(),
            ne_lines: self.ne_lines.iter().filter(|(i, _)| ne.contains(i)).map(|(i, v)| (*i, v.clone())).collect(),
            se_lines: self.se_lines.iter().filter(|(j, _)| se.contains(j)).map(|(j, v)| (*j, v.clone())).collect(),
        })
    }

    /// Flip the sign of every midpoint entry.
    pub fn negate_midpoints(&self) -> Frieze<S> {
        let mut out = self.clone();
        for (x, v) in out.nodes.iter_mut() {
            if !x.is_integer() {
                *v = -v.clone();
            }
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Frieze<T> {
        Frieze {
            kind: self.kind,
            n: self.n,
            k: f(&self.k),
            window: self.window,
            nodes: self.nodes.iter().map(|(x, v)| (*x, f(v))).collect(),
            ne_lines: self.ne_lines.iter().map(|(i, v)| (*i, f(v))).collect(),
            se_lines: self.se_lines.iter().map(|(j, v)| (*j, f(v))).collect(),
        }
    }
}

fn check_order(n: usize) -> Result<(), FriezeError> {
    if n < 4 {
        return Err(FriezeError::Precondition(format!("frieze order {n} < 4")));
    }
    Ok(())
}

fn check_window(window: (i64, i64)) -> Result<(), FriezeError> {
    if window.0 > window.1 {
        return Err(FriezeError::Precondition(format!("empty window [{}, {}]", window.0, window.1)));
    }
    Ok(())
}

/// `z(i,j) = x_⟨i⟩⟨j⟩`, with `S^K` values on midpoints for the Heronian kind.
pub fn frieze_from_polygon(
    points: &[SpherePoint],
    kind: FriezeKind,
    window: (i64, i64),
) -> Result<Frieze<Q>, FriezeError> {
    let n = points.len();
    check_order(n)?;
    check_window(window)?;
    let k = points[0].config().k().clone();
    let pt = |m: i64| &points[residue(m, n) - 1];
    let dist = |a: i64, b: i64| sq_dist(pt(a), pt(b));
    let tri = |a: i64, b: i64, c: i64| {
        s_kappa(pt(a), pt(b), pt(c)).map_err(|e| match e {
            GeometryError::ExactSqrtUnavailable(r2) => {
                FriezeError::ExactSqrtUnavailable(format!("R² = {r2} is not a square"))
            }
            other => other.into(),
        })
    };
    let mut nodes = BTreeMap::new();
    for idx in window_indices(kind, n, window.0, window.1) {
        let v = match (idx.i2 % 2 == 0, idx.j2 % 2 == 0) {
            (true, true) => dist(idx.i2 / 2, idx.j2 / 2)?,
            // z(i+½, j) = S_⟨i⟩⟨i+1⟩⟨j⟩
            (false, true) => {
                let i = idx.i2.div_euclid(2);
                tri(i, i + 1, idx.j2 / 2)?
            }
            // z(i, j+½) = S_⟨i⟩⟨j⟩⟨j+1⟩
            _ => {
                let j = idx.j2.div_euclid(2);
                tri(idx.i2 / 2, j, j + 1)?
            }
        };
        nodes.insert(idx, v);
    }
    let (ne, se) = line_ranges(n, window.0, window.1);
    let ne_lines = ne.map(|i| Ok((i, dist(i, i + 1)?))).collect::<Result<_, FriezeError>>()?;
    let se_lines = se.map(|j| Ok((j, dist(j, j + 1)?))).collect::<Result<_, FriezeError>>()?;
    Ok(Frieze { kind, n, k, window, nodes, ne_lines, se_lines })
}

/// A unit step of a traversing path: `Up` is `j ↦ j+1`, `Left` is `i ↦ i−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    Left,
}

impl Step {
    /// Parse a word like `"UULU"`.
    pub fn parse_word(s: &str) -> Result<Vec<Step>, FriezeError> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'U' => Ok(Step::Up),
                'L' => Ok(Step::Left),
                other => Err(FriezeError::MalformedPath(format!("unknown step {other:?}"))),
            })
            .collect()
    }

    pub fn word(steps: &[Step]) -> String {
        steps
            .iter()
            .map(|s| match s {
                Step::Up => 'U',
                Step::Left => 'L',
            })
            .collect()
    }
}

/// Indices and crossed lines of the path starting at `(start, start+1)`.
pub fn path_shape(
    n: usize,
    start: i64,
    steps: &[Step],
    midpoints: bool,
) -> Result<(Vec<FriezeIndex>, Vec<Line>), FriezeError> {
    check_order(n)?;
    if steps.len() != n - 2 {
        return Err(FriezeError::MalformedPath(format!(
            "a path for n = {n} has {} steps, got {}",
            n - 2,
            steps.len()
        )));
    }
    let (mut i, mut j) = (start, start + 1);
    let mut nodes = vec![FriezeIndex::node(i, j)];
    let mut lines = Vec::new();
    for step in steps {
        match step {
            Step::Up => {
                if midpoints {
                    nodes.push(FriezeIndex::new(2 * i, 2 * j + 1));
                }
                lines.push(Line::Se(j));
                j += 1;
            }
            Step::Left => {
                if midpoints {
                    nodes.push(FriezeIndex::new(2 * i - 1, 2 * j));
                }
                lines.push(Line::Ne(i - 1));
                i -= 1;
            }
        }
        nodes.push(FriezeIndex::node(i, j));
    }
    Ok((nodes, lines))
}

/// Path data: `2n−3` nodes with midpoints (Heronian) or `n−1` integer
/// nodes (Cayley-Menger), plus the `n−2` lines crossed.
#[derive(Debug, Clone, PartialEq)]
pub struct TraversingPath<S> {
    pub n: usize,
    pub nodes: Vec<(FriezeIndex, S)>,
    pub lines: Vec<(Line, S)>,
}

impl<S: Scalar> TraversingPath<S> {
    pub fn new(n: usize, nodes: Vec<(FriezeIndex, S)>, lines: Vec<(Line, S)>) -> Result<Self, FriezeError> {
        let path = TraversingPath { n, nodes, lines };
        path.shape()?;
        Ok(path)
    }

    /// Build from a start column, a step word and values in path order.
    pub fn from_steps(
        n: usize,
        start: i64,
        steps: &[Step],
        midpoints: bool,
        node_values: Vec<S>,
        line_values: Vec<S>,
    ) -> Result<Self, FriezeError> {
        let (idx, lines) = path_shape(n, start, steps, midpoints)?;
        if idx.len() != node_values.len() || lines.len() != line_values.len() {
            return Err(FriezeError::MalformedPath(format!(
                "expected {} node and {} line values, got {} and {}",
                idx.len(),
                lines.len(),
                node_values.len(),
                line_values.len()
            )));
        }
        Ok(TraversingPath {
            n,
            nodes: idx.into_iter().zip(node_values).collect(),
            lines: lines.into_iter().zip(line_values).collect(),
        })
    }

    /// Copy a path's values out of a frieze.
    pub fn extract(
        z: &Frieze<S>,
        start: i64,
        steps: &[Step],
        midpoints: bool,
    ) -> Result<Self, FriezeError> {
        let (idx, lines) = path_shape(z.n, start, steps, midpoints)?;
        let nodes = idx
            .into_iter()
            .map(|x| {
                z.get(x)
                    .cloned()
                    .map(|v| (x, v))
                    .ok_or_else(|| FriezeError::MalformedPath(format!("{x} is outside the frieze window")))
            })
            .collect::<Result<_, _>>()?;
        let lines = lines
            .into_iter()
            .map(|l| {
                z.line(l)
                    .cloned()
                    .map(|v| (l, v))
                    .ok_or_else(|| FriezeError::MalformedPath(format!("{l} is outside the frieze window")))
            })
            .collect::<Result<_, _>>()?;
        Ok(TraversingPath { n: z.n, nodes, lines })
    }

    pub fn has_midpoints(&self) -> bool {
        self.nodes.len() == 2 * self.n - 3
    }

    /// `(start, steps)`, after checking the indices form a traversing path.
    pub fn shape(&self) -> Result<(i64, Vec<Step>), FriezeError> {
        check_order(self.n).map_err(|e| FriezeError::MalformedPath(e.to_string()))?;
        let first = self
            .nodes
            .first()
            .ok_or_else(|| FriezeError::MalformedPath("no nodes".into()))?
            .0;
        if !first.is_integer() || first.row2() != 2 {
            return Err(FriezeError::MalformedPath(format!("path must start on row 1, not at {first}")));
        }
        let ints: Vec<FriezeIndex> = self.nodes.iter().map(|(x, _)| *x).filter(|x| x.is_integer()).collect();
        let mut steps = Vec::new();
        for w in ints.windows(2) {
            let step = match (w[1].i2 - w[0].i2, w[1].j2 - w[0].j2) {
                (0, 2) => Step::Up,
                (-2, 0) => Step::Left,
                _ => return Err(FriezeError::MalformedPath(format!("{} to {} is not a unit step", w[0], w[1]))),
            };
            steps.push(step);
        }
        let midpoints = self.nodes.len() != ints.len();
        let (idx, lines) = path_shape(self.n, first.i2 / 2, &steps, midpoints)?;
        let got: Vec<FriezeIndex> = self.nodes.iter().map(|(x, _)| *x).collect();
        let got_lines: Vec<Line> = self.lines.iter().map(|(l, _)| *l).collect();
        if idx != got || lines != got_lines {
            return Err(FriezeError::MalformedPath("indices do not follow a traversing path".into()));
        }
        Ok((first.i2 / 2, steps))
    }

    /// Columns spanned by the path.
    fn columns(&self) -> (i64, i64) {
        let lo = self.nodes.iter().map(|(x, _)| x.i2.div_euclid(2)).min().unwrap_or(0);
        let hi = self.nodes.iter().map(|(x, _)| (x.i2 + 1).div_euclid(2)).max().unwrap_or(0);
        (lo, hi)
    }
}

/// A Cayley-Menger traversing path and the values on its `(1,1)` shift.
#[derive(Debug, Clone, PartialEq)]
pub struct ThickenedPath<S> {
    pub path: TraversingPath<S>,
    pub shifted: Vec<(FriezeIndex, S)>,
}

impl<S: Scalar> ThickenedPath<S> {
    pub fn new(path: TraversingPath<S>, shifted: Vec<(FriezeIndex, S)>) -> Result<Self, FriezeError> {
        let tp = ThickenedPath { path, shifted };
        tp.check()?;
        Ok(tp)
    }

    fn check(&self) -> Result<(), FriezeError> {
        self.path.shape()?;
        if self.path.has_midpoints() {
            return Err(FriezeError::MalformedPath("a thickened path carries integer nodes only".into()));
        }
        let want: Vec<FriezeIndex> = self.path.nodes.iter().map(|(x, _)| x.shift(1)).collect();
        let got: Vec<FriezeIndex> = self.shifted.iter().map(|(x, _)| *x).collect();
        if want != got {
            return Err(FriezeError::MalformedPath("shifted copy does not match the path".into()));
        }
        Ok(())
    }

    pub fn extract(z: &Frieze<S>, start: i64, steps: &[Step]) -> Result<Self, FriezeError> {
        let path = TraversingPath::extract(z, start, steps, false)?;
        let shifted = path
            .nodes
            .iter()
            .map(|(x, _)| {
                let y = x.shift(1);
                z.get(y)
                    .cloned()
                    .map(|v| (y, v))
                    .ok_or_else(|| FriezeError::MalformedPath(format!("{y} is outside the frieze window")))
            })
            .collect::<Result<_, _>>()?;
        Ok(ThickenedPath { path, shifted })
    }

    /// Total number of prescribed values, `3n − 4`.
    pub fn len(&self) -> usize {
        self.path.nodes.len() + self.path.lines.len() + self.shifted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Knobs for path propagation.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationOptions {
    /// `None` skips every precondition and consistency check.
    pub policy: Option<TolerancePolicy>,
    /// Visit diamonds in a seeded random order instead of column order.
    pub shuffle_seed: Option<u64>,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        PropagationOptions { policy: Some(TolerancePolicy::default()), shuffle_seed: None }
    }
}

impl PropagationOptions {
    pub fn unchecked() -> Self {
        PropagationOptions { policy: None, shuffle_seed: None }
    }
}

#[derive(Debug, Clone, Copy)]
enum Task {
    Lines(i64),
    Diamond(i64, i64),
    CoherenceRight(i64, i64),
    CoherenceLeft(i64, i64),
}

struct Engine<'a, S> {
    n: i64,
    k: &'a S,
    policy: Option<TolerancePolicy>,
    vals: BTreeMap<Key, S>,
}

impl<'a, S: Scalar> Engine<'a, S> {
    fn new(n: usize, k: &'a S, policy: Option<TolerancePolicy>) -> Self {
        Engine { n: n as i64, k, policy, vals: BTreeMap::new() }
    }

    fn get(&self, key: Key) -> Option<&S> {
        self.vals.get(&key)
    }

    fn interior(&self, x: &FriezeIndex) -> bool {
        x.is_integer() && x.row2() >= 4 && x.row2() <= 2 * self.n - 4
    }

    /// Record a value. Returns whether it was new.
    fn put(&mut self, key: Key, v: S) -> Result<bool, FriezeError> {
        if let Some(old) = self.vals.get(&key) {
            if let Some(pol) = &self.policy {
                if !old.near(&v, pol) {
                    return Err(FriezeError::Inconsistent(format!(
                        "{key}: {} vs {}",
                        old.render(),
                        v.render()
                    )));
                }
            }
            return Ok(false);
        }
        if let Key::Node(x) = key {
            if self.interior(&x) && diagonal_factor(&v, self.k).is_zero() {
                return Err(FriezeError::DegenerateDiagonal { index: x, value: v.render() });
            }
        }
        self.vals.insert(key, v);
        Ok(true)
    }

    /// Make a group of entries equal once any of them is known.
    fn unify(&mut self, group: &[Key]) -> Result<bool, FriezeError> {
        let Some(v) = group.iter().find_map(|k| self.get(*k).cloned()) else {
            return Ok(false);
        };
        let mut changed = false;
        for key in group {
            if self.get(*key).is_none() {
                changed |= self.put(*key, v.clone())?;
            }
        }
        Ok(changed)
    }

    fn boundary_zeros(&mut self, cols: (i64, i64), midpoints: bool) -> Result<(), FriezeError> {
        let n2 = 2 * self.n;
        for i2 in 2 * cols.0..=2 * cols.1 {
            let rows: &[i64] = if midpoints { &[0, 1, n2 - 1, n2] } else { &[0, n2] };
            for &r2 in rows {
                let x = FriezeIndex::new(i2, i2 + r2);
                if (midpoints && x.is_valid()) || x.is_integer() {
                    self.put(Key::Node(x), S::zero())?;
                }
            }
        }
        Ok(())
    }

    /// `z(i,i+1) = NE(i) = SE(i)` and `z(i,i+n−1) = NE(i−1) = SE(i+n−1)`.
    fn lines(&mut self, i: i64) -> Result<bool, FriezeError> {
        let a = self.unify(&[
            Key::Node(FriezeIndex::node(i, i + 1)),
            Key::Line(Line::Ne(i)),
            Key::Line(Line::Se(i)),
        ])?;
        let b = self.unify(&[
            Key::Node(FriezeIndex::node(i, i + self.n - 1)),
            Key::Line(Line::Ne(i - 1)),
            Key::Line(Line::Se(i + self.n - 1)),
        ])?;
        Ok(a || b)
    }

    fn values(&self, keys: &[Key]) -> Option<Vec<S>> {
        keys.iter().map(|k| self.get(*k).cloned()).collect()
    }

    fn diamond(&mut self, i: i64, j: i64) -> Result<bool, FriezeError> {
        let [a, b, c, d, e, f, p, q, r, s] = diamond_keys(i, j);
        let row = j - i;
        if row == 1 {
            let x = self.unify(&[b, e])?;
            let y = self.unify(&[f, d])?;
            let z = self.unify(&[r, q])?;
            return Ok(x || y || z);
        }
        if row == self.n - 1 {
            let x = self.unify(&[d, e])?;
            let y = self.unify(&[f, b])?;
            let z = self.unify(&[s, p])?;
            return Ok(x || y || z);
        }
        let pol = self.policy;
        let wrap = |err: DiamondError, left: bool| -> FriezeError {
            let at = |k: Key| match k {
                Key::Node(x) => x,
                Key::Line(_) => unreachable!(),
            };
            match err {
                DiamondError::DegenerateDiagonal { value, .. } => FriezeError::DegenerateDiagonal {
                    index: at(if left { e } else { f }),
                    value,
                },
                DiamondError::HeronViolation(what) => {
                    let first = what.starts_with('p') || what.starts_with('r');
                    let key = match (left, first) {
                        (true, true) => p,
                        (true, false) => q,
                        (false, true) => r,
                        (false, false) => s,
                    };
                    FriezeError::HeronViolation { index: at(key) }
                }
                other => FriezeError::Diamond { i, j, source: other },
            }
        };
        let unknown = |eng: &Self, ks: &[Key]| ks.iter().any(|k| eng.get(*k).is_none());
        if unknown(self, &[f, r, s]) {
            if let Some(v) = self.values(&[a, b, c, d, e, p, q]) {
                let (fv, rv, sv) = propagate_lr(&v[0], &v[1], &v[2], &v[3], &v[4], &v[5], &v[6], self.k, pol.as_ref())
                    .map_err(|err| wrap(err, true))?;
                self.put(f, fv)?;
                self.put(r, rv)?;
                self.put(s, sv)?;
                return Ok(true);
            }
        }
        if unknown(self, &[e, p, q]) {
            if let Some(v) = self.values(&[a, b, c, d, f, r, s]) {
                let (ev, pv, qv) = propagate_rl(&v[0], &v[1], &v[2], &v[3], &v[4], &v[5], &v[6], self.k, pol.as_ref())
                    .map_err(|err| wrap(err, false))?;
                self.put(e, ev)?;
                self.put(p, pv)?;
                self.put(q, qv)?;
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn cm(&self, i: i64, j: i64) -> Option<CayleyMengerDiamond<S>> {
        let v = self.values(&diamond_keys(i, j)[..6])?;
        let arr: [S; 6] = v.try_into().ok()?;
        Some(CayleyMengerDiamond::from_array(arr))
    }

    /// Solve for `z(i+1,j+1)` or `z(i−1,j−1)` around the centre `z(i,j)`.
    fn coherence(&mut self, i: i64, j: i64, side: Side) -> Result<bool, FriezeError> {
        let target = match side {
            Side::Right => FriezeIndex::node(i + 1, j + 1),
            Side::Left => FriezeIndex::node(i - 1, j - 1),
        };
        if self.get(Key::Node(target)).is_some() {
            return Ok(false);
        }
        let x2 = self.cm(i - 1, j);
        let x3 = self.cm(i, j - 1);
        let solved = match side {
            Side::Right => {
                let (Some(x1), Some(x2), Some(x3)) = (self.cm(i - 1, j - 1), x2, x3) else {
                    return Ok(false);
                };
                coherence_solve(Side::Right, &x1, &x2, &x3, self.k)
            }
            Side::Left => {
                let (Some(x2), Some(x3), Some(x4)) = (x2, x3, self.cm(i, j)) else {
                    return Ok(false);
                };
                coherence_solve(Side::Left, &x2, &x3, &x4, self.k)
            }
        };
        let v = solved.map_err(|err| match err {
            DiamondError::CoherencePivotZero => FriezeError::CoherencePivotZero { index: target },
            DiamondError::InterlockMismatch(what) => {
                FriezeError::Inconsistent(format!("around {}: {what}", FriezeIndex::node(i, j)))
            }
            other => FriezeError::Diamond { i, j, source: other },
        })?;
        self.put(Key::Node(target), v)
    }

    fn run(&mut self, mut tasks: Vec<Task>, shuffle: Option<u64>) -> Result<(), FriezeError> {
        let mut rng = shuffle.map(ChaCha8Rng::seed_from_u64);
        loop {
            if let Some(rng) = rng.as_mut() {
                tasks.shuffle(rng);
            }
            let mut progress = false;
            for t in &tasks {
                progress |= match *t {
                    Task::Lines(i) => self.lines(i)?,
                    Task::Diamond(i, j) => self.diamond(i, j)?,
                    Task::CoherenceRight(i, j) => self.coherence(i, j, Side::Right)?,
                    Task::CoherenceLeft(i, j) => self.coherence(i, j, Side::Left)?,
                };
            }
            if !progress {
                return Ok(());
            }
        }
    }

    fn into_frieze(
        self,
        kind: FriezeKind,
        window: (i64, i64),
    ) -> Result<Frieze<S>, FriezeError> {
        let n = self.n as usize;
        let mut nodes = BTreeMap::new();
        for idx in window_indices(kind, n, window.0, window.1) {
            let v = self.get(Key::Node(idx)).ok_or_else(|| FriezeError::Undetermined(idx.to_string()))?;
            nodes.insert(idx, v.clone());
        }
        let (ne, se) = line_ranges(n, window.0, window.1);
        let line = |l: Line| {
            self.get(Key::Line(l))
                .cloned()
                .ok_or_else(|| FriezeError::Undetermined(l.to_string()))
        };
        let ne_lines = ne.map(|i| Ok((i, line(Line::Ne(i))?))).collect::<Result<_, FriezeError>>()?;
        let se_lines = se.map(|j| Ok((j, line(Line::Se(j))?))).collect::<Result<_, FriezeError>>()?;
        Ok(Frieze { kind, n, k: self.k.clone(), window, nodes, ne_lines, se_lines })
    }
}

fn final_check<S: Scalar>(z: Frieze<S>, policy: &Option<TolerancePolicy>) -> Result<Frieze<S>, FriezeError> {
    if let Some(pol) = policy {
        let report = frieze_validate(&z, pol);
        if let Some(bad) = report.failures().first() {
            return Err(FriezeError::Inconsistent(format!("{:?} check fails at {}", bad.check, bad.site)));
        }
    }
    Ok(z)
}

/// The Heronian frieze agreeing with a traversing path.
pub fn frieze_from_path<S: Scalar>(
    path: &TraversingPath<S>,
    k: &S,
    window: (i64, i64),
    opts: &PropagationOptions,
) -> Result<Frieze<S>, FriezeError> {
    check_window(window)?;
    path.shape()?;
    if !path.has_midpoints() {
        return Err(FriezeError::MalformedPath("a Heronian path needs its midpoints".into()));
    }
    let n = path.n;
    let mut eng = Engine::new(n, k, opts.policy);
    for (x, v) in &path.nodes {
        eng.put(Key::Node(*x), v.clone())?;
    }
    for (l, v) in &path.lines {
        eng.put(Key::Line(*l), v.clone())?;
    }
    if let Some(pol) = &opts.policy {
        check_path_heron(&eng, path, pol)?;
    }
    let (pl, ph) = path.columns();
    let cols = (window.0.min(pl), window.1.max(ph));
    eng.boundary_zeros(cols, true)?;
    let mut tasks: Vec<Task> = (cols.0..=cols.1).map(Task::Lines).collect();
    for i in cols.0..cols.1 {
        for row in 1..n as i64 {
            tasks.push(Task::Diamond(i, i + row));
        }
    }
    eng.run(tasks, opts.shuffle_seed)?;
    final_check(eng.into_frieze(FriezeKind::Heronian, window)?, &opts.policy)
}

/// Every path midpoint squares to `H^K` of its triangle's sides.
fn check_path_heron<S: Scalar>(
    eng: &Engine<S>,
    path: &TraversingPath<S>,
    pol: &TolerancePolicy,
) -> Result<(), FriezeError> {
    for (x, v) in path.nodes.iter().filter(|(x, _)| !x.is_integer()) {
        let (e1, e2, side) = if x.i2 % 2 == 0 {
            let (i, j) = (x.i2 / 2, x.j2.div_euclid(2));
            (FriezeIndex::node(i, j), FriezeIndex::node(i, j + 1), Line::Se(j))
        } else {
            let (i, j) = (x.i2.div_euclid(2), x.j2 / 2);
            (FriezeIndex::node(i, j), FriezeIndex::node(i + 1, j), Line::Ne(i))
        };
        let get = |k: Key| eng.get(k).cloned().ok_or_else(|| FriezeError::MalformedPath(format!("{k} missing")));
        let h = heron_k(&get(Key::Node(e1))?, &get(Key::Node(e2))?, &get(Key::Line(side))?, eng.k);
        if !v.square().near(&h, pol) {
            return Err(FriezeError::HeronViolation { index: *x });
        }
    }
    Ok(())
}

/// The coherent Cayley-Menger frieze agreeing with a thickened path.
pub fn cm_frieze_from_thickened_path<S: Scalar>(
    tp: &ThickenedPath<S>,
    k: &S,
    window: (i64, i64),
    opts: &PropagationOptions,
) -> Result<Frieze<S>, FriezeError> {
    check_window(window)?;
    tp.check()?;
    let n = tp.path.n;
    let mut eng = Engine::new(n, k, opts.policy);
    for (x, v) in tp.path.nodes.iter().chain(&tp.shifted) {
        eng.put(Key::Node(*x), v.clone())?;
    }
    for (l, v) in &tp.path.lines {
        eng.put(Key::Line(*l), v.clone())?;
    }
    let (pl, ph) = tp.path.columns();
    let cols = (window.0.min(pl), window.1.max(ph + 1));
    eng.boundary_zeros(cols, false)?;
    let mut tasks: Vec<Task> = (cols.0..=cols.1).map(Task::Lines).collect();
    for i in cols.0 + 1..cols.1 {
        for row in 2..n as i64 - 1 {
            tasks.push(Task::CoherenceRight(i, i + row));
            tasks.push(Task::CoherenceLeft(i, i + row));
        }
    }
    eng.run(tasks, opts.shuffle_seed)?;
    final_check(eng.into_frieze(FriezeKind::CayleyMenger, window)?, &opts.policy)
}

fn check_interior<S: Scalar>(z: &Frieze<S>) -> Result<(), FriezeError> {
    let n2 = 2 * z.n as i64;
    for (x, v) in &z.nodes {
        if x.is_integer() && x.row2() >= 4 && x.row2() <= n2 - 4 && diagonal_factor(v, &z.k).is_zero() {
            return Err(FriezeError::DegenerateDiagonal { index: *x, value: v.render() });
        }
    }
    Ok(())
}

fn complete_diamonds(n: usize, window: (i64, i64)) -> impl Iterator<Item = (i64, i64)> {
    (window.0..window.1).flat_map(move |i| (1..n as i64).map(move |r| (i, i + r)))
}

/// Drop the midpoints of a Heronian frieze.
pub fn frieze_restrict<S: Scalar>(z: &Frieze<S>, policy: &TolerancePolicy) -> Result<Frieze<S>, FriezeError> {
    if z.kind != FriezeKind::Heronian {
        return Err(FriezeError::Precondition("restrict takes a Heronian frieze".into()));
    }
    check_interior(z)?;
    for (i, j) in complete_diamonds(z.n, z.window) {
        let x = z
            .heronian_diamond(i, j)
            .ok_or_else(|| FriezeError::Undetermined(format!("diamond ({i},{j})")))?;
        diamond::restrict(&x, &z.k, policy).map_err(|source| FriezeError::Diamond { i, j, source })?;
    }
    Ok(Frieze {
        kind: FriezeKind::CayleyMenger,
        nodes: z.nodes.iter().filter(|(x, _)| x.is_integer()).map(|(x, v)| (*x, v.clone())).collect(),
        ..z.clone()
    })
}

/// The first diamond `⊞(i, i+2)` whose `H^K(b,c,e)` is a nonzero square in
/// the model. Its `p = z(i+½, i+2)` carries the sign chosen by a lift.
pub fn lift_seed<S: Scalar>(z: &Frieze<S>) -> Option<FriezeIndex> {
    (z.window.0..z.window.1).find_map(|i| {
        let x = z.cm_diamond(i, i + 2)?;
        let h = heron_k(&x.b, &x.c, &x.e, &z.k);
        if h.is_zero() || h.sqrt_opt().is_none() {
            return None;
        }
        Some(FriezeIndex::new(2 * i + 1, 2 * i + 4))
    })
}

/// Heronian frieze over a coherent Cayley-Menger frieze. `sign` is the sign
/// of the entry at [`lift_seed`]; the other choice negates every midpoint.
pub fn frieze_lift<S: Scalar>(z: &Frieze<S>, sign: Sign, policy: &TolerancePolicy) -> Result<Frieze<S>, FriezeError> {
    if z.kind != FriezeKind::CayleyMenger {
        return Err(FriezeError::Precondition("lift takes a Cayley-Menger frieze".into()));
    }
    check_interior(z)?;
    let n = z.n as i64;
    let seed = lift_seed(z).ok_or_else(|| {
        FriezeError::ExactSqrtUnavailable("no row-2 diamond has a square H^K(b,c,e)".into())
    })?;
    let (i0, j0) = (seed.i2 / 2, seed.j2 / 2);
    let x0 = z.cm_diamond(i0, j0).expect("seed diamond is complete");
    let root = heron_k(&x0.b, &x0.c, &x0.e, &z.k).sqrt_opt().expect("seed is a square");

    let mut eng = Engine::new(z.n, &z.k, Some(*policy));
    for (x, v) in &z.nodes {
        eng.put(Key::Node(*x), v.clone())?;
    }
    for (i, v) in &z.ne_lines {
        eng.put(Key::Line(Line::Ne(*i)), v.clone())?;
    }
    for (j, v) in &z.se_lines {
        eng.put(Key::Line(Line::Se(*j)), v.clone())?;
    }
    eng.boundary_zeros(z.window, true)?;
    eng.put(Key::Node(seed), sign.apply(root))?;

    let diamonds: Vec<(i64, i64)> = complete_diamonds(z.n, z.window).collect();
    loop {
        let mut progress = false;
        for &(i, j) in &diamonds {
            let keys = diamond_keys(i, j);
            let mids = [keys[6], keys[7], keys[8], keys[9]];
            let row = j - i;
            if row == 1 {
                progress |= eng.unify(&[keys[8], keys[7]])?;
                continue;
            }
            if row == n - 1 {
                progress |= eng.unify(&[keys[9], keys[6]])?;
                continue;
            }
            if mids.iter().all(|m| eng.get(*m).is_some()) {
                continue;
            }
            let Some((slot, v)) = mids
                .iter()
                .enumerate()
                .find_map(|(s, m)| eng.get(*m).filter(|v| !v.is_zero()).map(|v| (s, v.clone())))
            else {
                continue;
            };
            let x = z.cm_diamond(i, j).ok_or_else(|| FriezeError::Undetermined(format!("diamond ({i},{j})")))?;
            let out = midpoints_from_one(&x, &z.k, slot, &v).map_err(|source| FriezeError::Diamond { i, j, source })?;
            for (m, val) in mids.iter().zip(out) {
                progress |= eng.put(*m, val)?;
            }
        }
        if !progress {
            break;
        }
    }
    let lifted = eng.into_frieze(FriezeKind::Heronian, z.window).map_err(|e| match e {
        FriezeError::Undetermined(at) => {
            FriezeError::Precondition(format!("midpoint {at} unreachable; a Heron polynomial vanishes"))
        }
        other => other,
    })?;
    final_check(lifted, &Some(*policy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Boundary,
    Line,
    Diamond,
    Periodicity,
    Glide,
    Coherence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Site {
    Node(FriezeIndex),
    Pair(FriezeIndex, FriezeIndex),
    LinePair(Line, Line),
    Diamond(i64, i64),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Node(x) => write!(f, "{x}"),
            Site::Pair(x, y) => write!(f, "{x} ~ {y}"),
            Site::LinePair(x, y) => write!(f, "{x} ~ {y}"),
            Site::Diamond(i, j) => write!(f, "diamond ({i},{j})"),
        }
    }
}

impl Site {
    /// Whether the check at this site reads the given node.
    pub fn touches(&self, idx: FriezeIndex) -> bool {
        match self {
            Site::Node(x) => *x == idx,
            Site::Pair(x, y) => *x == idx || *y == idx,
            Site::LinePair(..) => false,
            Site::Diamond(i, j) => diamond_keys(*i, *j).contains(&Key::Node(idx)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub check: Check,
    pub site: Site,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub items: Vec<CheckItem>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items.iter().filter(|c| !c.pass).collect()
    }

    pub fn count(&self, check: Check) -> usize {
        self.items.iter().filter(|c| c.check == check).count()
    }
}

/// Itemized check of boundary rows, lines, diamonds, periodicity, glide
/// symmetry and, for the Cayley-Menger kind, coherence.
pub fn frieze_validate<S: Scalar>(z: &Frieze<S>, policy: &TolerancePolicy) -> ValidationReport {
    let mut items = Vec::new();
    let mut push = |check, site, pass| items.push(CheckItem { check, site, pass });
    let n2 = 2 * z.n as i64;
    let same = |a: Option<&S>, b: Option<&S>| match (a, b) {
        (Some(x), Some(y)) => Some(x.near(y, policy)),
        _ => None,
    };

    for (x, v) in &z.nodes {
        let r = x.row2();
        let zero_row = r == 0 || r == n2 || (z.kind == FriezeKind::Heronian && (r == 1 || r == n2 - 1));
        if zero_row {
            push(Check::Boundary, Site::Node(*x), v.near_zero(policy));
        }
    }

    for i in z.window.0..=z.window.1 {
        let node = FriezeIndex::node(i, i + 1);
        for l in [Line::Ne(i), Line::Se(i)] {
            if let Some(ok) = same(z.get(node), z.line(l)) {
                push(Check::Line, Site::Pair(node, node), ok);
            }
        }
        let top = FriezeIndex::node(i, i + z.n as i64 - 1);
        for l in [Line::Ne(i - 1), Line::Se(i + z.n as i64 - 1)] {
            if let Some(ok) = same(z.get(top), z.line(l)) {
                push(Check::Line, Site::Pair(top, top), ok);
            }
        }
    }

    for (i, j) in complete_diamonds(z.n, z.window) {
        let ok = match z.kind {
            FriezeKind::Heronian => z.heronian_diamond(i, j).map(|x| heronian_check(&x, &z.k, policy).pass),
            FriezeKind::CayleyMenger => z.cm_diamond(i, j).map(|x| cm_check(&x, &z.k, policy)),
        };
        if let Some(ok) = ok {
            push(Check::Diamond, Site::Diamond(i, j), ok);
        }
    }

    for (x, v) in &z.nodes {
        let y = x.shift(z.n as i64);
        if let Some(w) = z.get(y) {
            push(Check::Periodicity, Site::Pair(*x, y), v.near(w, policy));
        }
        let g = glide_image(*x, z.n);
        if let Some(w) = z.get(g) {
            push(Check::Glide, Site::Pair(*x, g), v.near(w, policy));
        }
    }
    for (i, v) in &z.ne_lines {
        let j = i + z.n as i64;
        if let Some(w) = z.se_lines.get(&j) {
            push(Check::Glide, Site::LinePair(Line::Ne(*i), Line::Se(j)), v.near(w, policy));
        }
    }

    if z.kind == FriezeKind::CayleyMenger {
        for i in z.window.0 + 1..z.window.1 {
            for r in 2..z.n as i64 - 1 {
                let j = i + r;
                let blocks = (z.cm_diamond(i - 1, j - 1), z.cm_diamond(i - 1, j), z.cm_diamond(i, j - 1), z.cm_diamond(i, j));
                if let (Some(x1), Some(x2), Some(x3), Some(x4)) = blocks {
                    let ok = matches!(coherence_check(&x1, &x2, &x3, &x4, &z.k, policy), Ok(true));
                    push(Check::Coherence, Site::Node(FriezeIndex::node(i, j)), ok);
                }
            }
        }
    }
    ValidationReport { items }
}

/// The zigzag triangulation whose diagonals and triangles are the path's
/// interior integer nodes and midpoints.
pub fn path_to_triangulation(n: usize, start: i64, steps: &[Step]) -> Result<Triangulation, FriezeError> {
    let (nodes, _) = path_shape(n, start, steps, false)?;
    let diagonals = nodes
        .iter()
        .filter(|x| x.row2() >= 4 && x.row2() <= 2 * n as i64 - 4)
        .map(|x| (residue(x.i2 / 2, n), residue(x.j2 / 2, n)))
        .collect();
    Triangulation::new(n, diagonals).map_err(|e| FriezeError::MalformedPath(e.to_string()))
}

/// The triangulation of a Heronian path and its measurements on it.
pub fn path_measurements(path: &TraversingPath<Q>) -> Result<(Triangulation, MeasurementSet), FriezeError> {
    let (start, steps) = path.shape()?;
    if !path.has_midpoints() {
        return Err(FriezeError::MalformedPath("measurements need the midpoints".into()));
    }
    let n = path.n;
    let tri = path_to_triangulation(n, start, &steps)?;
    let v = |m: i64| residue(m, n);
    let mut m = MeasurementSet::default();
    for (x, val) in &path.nodes {
        if x.is_integer() {
            m.set_edge(v(x.i2 / 2), v(x.j2 / 2), val.clone());
        } else if x.i2 % 2 == 0 {
            let (i, j) = (x.i2 / 2, x.j2.div_euclid(2));
            m.triangles.insert((v(i), v(j), v(j + 1)), val.clone());
        } else {
            let (i, j) = (x.i2.div_euclid(2), x.j2 / 2);
            m.triangles.insert((v(i), v(i + 1), v(j)), val.clone());
        }
    }
    for (l, val) in &path.lines {
        let i = match l {
            Line::Ne(i) | Line::Se(i) => *i,
        };
        m.set_edge(v(i), v(i + 1), val.clone());
    }
    Ok((tri, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{hexagon_radius7, random_polygon, realize_polygon, SphereConfig};
    use crate::numeric::{q, qr};

    fn hexagon(kind: FriezeKind, window: (i64, i64)) -> Frieze<Q> {
        let (_, pts) = hexagon_radius7();
        frieze_from_polygon(&pts, kind, window).unwrap()
    }

    fn vertical_path() -> TraversingPath<Q> {
        let steps = Step::parse_word("UUUU").unwrap();
        let nodes = vec![
            q(74),
            q(-82),
            q(50),
            qr(-528, 7),
            q(52),
            qr(-312, 7),
            q(26),
            q(12),
            q(70),
        ];
        let lines = vec![q(98), q(74), q(26), q(140)];
        TraversingPath::from_steps(6, 2, &steps, true, nodes, lines).unwrap()
    }

    #[test]
    fn residues_and_glide() {
        assert_eq!(residue(0, 6), 6);
        assert_eq!(residue(1, 6), 1);
        assert_eq!(residue(7, 6), 1);
        assert_eq!(residue(-5, 6), 1);
        let n = 6;
        assert_eq!(glide_image(FriezeIndex::node(0, 2), n), FriezeIndex::node(2, 6));
        assert_eq!(glide_image(FriezeIndex::new(1, 4), n), FriezeIndex::new(4, 13));
        let twice = glide_image(glide_image(FriezeIndex::node(0, 2), n), n);
        assert_eq!(twice, FriezeIndex::node(6, 8));
        assert_eq!(FriezeIndex::new(3, 8).to_string(), "(3/2, 4)");
    }

    #[test]
    fn hexagon_nodes_match_vertex_distances() {
        let z = hexagon(FriezeKind::Heronian, (0, 5));
        let far = hexagon(FriezeKind::Heronian, (-20, 20));
        for (x, v) in &far.nodes {
            assert_eq!(z.resolve(*x), Some(v), "{x}");
        }
        // x13 = 56 sits at z(1,3); x61 = 140 at z(0,1)
        assert_eq!(z.z(1, 3), Some(&q(56)));
        assert_eq!(z.z(0, 1), Some(&q(140)));
        assert_eq!(z.get(FriezeIndex::new(3, 6)), Some(&q(-84)));
        assert_eq!(z.get(FriezeIndex::new(0, 3)), Some(&q(12)));
        assert!(frieze_validate(&z, &TolerancePolicy::exact()).passed());
    }

    #[test]
    fn vertical_path_recovers_hexagon() {
        let want = hexagon(FriezeKind::Heronian, (0, 11));
        let got = frieze_from_path(&vertical_path(), &qr(1, 49), (0, 11), &PropagationOptions::default()).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn shuffled_order_gives_the_same_frieze() {
        let base = frieze_from_path(&vertical_path(), &qr(1, 49), (-2, 8), &PropagationOptions::default()).unwrap();
        for seed in 0..5 {
            let opts = PropagationOptions { shuffle_seed: Some(seed), ..Default::default() };
            assert_eq!(frieze_from_path(&vertical_path(), &qr(1, 49), (-2, 8), &opts).unwrap(), base);
        }
    }

    #[test]
    fn zero_diagonal_is_reported_with_its_index() {
        let mut path = vertical_path();
        path.nodes[4].1 = q(0);
        let err = frieze_from_path(&path, &qr(1, 49), (0, 6), &PropagationOptions::unchecked()).unwrap_err();
        assert!(matches!(err, FriezeError::DegenerateDiagonal { index, .. } if index == FriezeIndex::node(2, 5)));
    }

    #[test]
    fn heron_violation_on_path() {
        let mut path = vertical_path();
        path.nodes[1].1 = q(81);
        let err = frieze_from_path(&path, &qr(1, 49), (0, 6), &PropagationOptions::default()).unwrap_err();
        assert!(matches!(err, FriezeError::HeronViolation { .. }));
    }

    #[test]
    fn malformed_paths() {
        let mut path = vertical_path();
        path.nodes.swap(2, 4);
        assert!(matches!(path.shape(), Err(FriezeError::MalformedPath(_))));
        assert!(path_shape(6, 0, &[Step::Up], true).is_err());
        assert!(Step::parse_word("UX").is_err());
    }

    #[test]
    fn thickened_vertical_path_recovers_cm_hexagon() {
        let want = hexagon(FriezeKind::CayleyMenger, (0, 11));
        let tp = ThickenedPath::extract(&want, 2, &Step::parse_word("UUUU").unwrap()).unwrap();
        assert_eq!(tp.len(), 3 * 6 - 4);
        let got = cm_frieze_from_thickened_path(&tp, &qr(1, 49), (0, 11), &PropagationOptions::default()).unwrap();
        assert_eq!(got.z(1, 4), Some(&q(14)));
        assert_eq!(got.z(4, 6), Some(&q(106)));
        assert_eq!(got.z(1, 5), Some(&q(126)));
        assert_eq!(got.z(3, 6), Some(&q(116)));
        assert_eq!(got, want);
    }

    #[test]
    fn restrict_and_lift() {
        let her = hexagon(FriezeKind::Heronian, (0, 8));
        let pol = TolerancePolicy::exact();
        let cm = frieze_restrict(&her, &pol).unwrap();
        assert_eq!(cm, hexagon(FriezeKind::CayleyMenger, (0, 8)));
        let report = frieze_validate(&cm, &pol);
        assert!(report.passed());
        assert!(report.count(Check::Coherence) > 0);
        let seed = lift_seed(&cm).unwrap();
        assert_eq!(seed, FriezeIndex::new(1, 4));
        assert_eq!(her.get(seed), Some(&q(12)));
        assert_eq!(frieze_lift(&cm, Sign::Plus, &pol).unwrap(), her);
        assert_eq!(frieze_lift(&cm, Sign::Minus, &pol).unwrap(), her.negate_midpoints());
    }

    #[test]
    fn corrupted_node_is_localized() {
        let mut z = hexagon(FriezeKind::Heronian, (0, 12));
        let bad = FriezeIndex::node(4, 7);
        z.nodes.insert(bad, q(1000));
        let report = frieze_validate(&z, &TolerancePolicy::exact());
        let fails = report.failures();
        assert!(!fails.is_empty());
        assert!(fails.iter().all(|c| c.site.touches(bad)));
        assert!(fails.iter().any(|c| c.check == Check::Glide));
        assert!(fails.iter().any(|c| c.check == Check::Diamond));
    }

    #[test]
    fn fan_triangulation_from_vertical_path() {
        let tri = path_to_triangulation(6, 2, &Step::parse_word("UUUU").unwrap()).unwrap();
        assert_eq!(tri, Triangulation::new(6, vec![(2, 4), (2, 5), (2, 6)]).unwrap());
        let tri4 = path_to_triangulation(4, 0, &Step::parse_word("UL").unwrap()).unwrap();
        assert_eq!(tri4.diagonals.len(), 1);
    }

    #[test]
    fn realized_path_polygon_gives_the_same_frieze() {
        let cfg = SphereConfig::from_radius(q(3)).unwrap();
        let pts = random_polygon(11, 7, &cfg);
        let z = frieze_from_polygon(&pts, FriezeKind::Heronian, (-3, 10)).unwrap();
        let steps = Step::parse_word("ULUUL").unwrap();
        let path = TraversingPath::extract(&z, 4, &steps, true).unwrap();
        let (tri, m) = path_measurements(&path).unwrap();
        let again = realize_polygon(&tri, &m, &cfg).unwrap();
        let w = frieze_from_polygon(&again, FriezeKind::Heronian, (-3, 10)).unwrap();
        let from_path = frieze_from_path(&path, cfg.k(), (-3, 10), &PropagationOptions::default()).unwrap();
        assert_eq!(w, z);
        assert_eq!(from_path, z);
    }

    #[test]
    fn translation_equivariance() {
        let (_, pts) = hexagon_radius7();
        let cfg = pts[0].config().clone();
        let z = frieze_from_polygon(&pts, FriezeKind::Heronian, (0, 7)).unwrap();
        let path = TraversingPath::extract(&z, 3, &Step::parse_word("LULU").unwrap(), true).unwrap();
        let a = frieze_from_path(&path, cfg.k(), (0, 5), &PropagationOptions::default()).unwrap();
        let b = frieze_from_path(&path, cfg.k(), (1, 6), &PropagationOptions::default()).unwrap();
        // the frieze has period n, so a one-column shift of `a` agrees with `b`
        // only after folding back; compare through the translate instead
        let shifted_path = TraversingPath {
            n: path.n,
            nodes: path.nodes.iter().map(|(x, v)| (x.shift(1), v.clone())).collect(),
            lines: path
                .lines
                .iter()
                .map(|(l, v)| {
                    let l = match l {
                        Line::Ne(i) => Line::Ne(i + 1),
                        Line::Se(j) => Line::Se(j + 1),
                    };
                    (l, v.clone())
                })
                .collect(),
        };
        let c = frieze_from_path(&shifted_path, cfg.k(), (1, 6), &PropagationOptions::default()).unwrap();
        assert_eq!(a.translated(1), c);
        assert_eq!(b.cropped(1, 5).unwrap(), a.cropped(1, 5).unwrap());
    }
}
