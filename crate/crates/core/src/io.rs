//! JSON payloads for polygons, diamonds, friezes, paths and reports, and the
//! ASCII strip renderer.
//!
//! Every scalar travels as a string: `"num/den"` for exact values, a decimal
//! literal for floats.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frieze::{
    CheckItem, Frieze, FriezeIndex, FriezeKind, Line, ThickenedPath, TraversingPath, ValidationReport,
};
use crate::geometry::{GeometryError, SphereConfig, SpherePoint};
use crate::numeric::{parse_rational, to_f64, NumericError, Scalar, Q};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad value for {field}: {source}")]
    Value { field: String, source: NumericError },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Scalars that can be read back from their JSON string form.
pub trait ParseScalar: Scalar {
    fn parse_scalar(s: &str) -> Result<Self, NumericError>;
}

impl ParseScalar for Q {
    fn parse_scalar(s: &str) -> Result<Self, NumericError> {
        parse_rational(s)
    }
}

impl ParseScalar for f64 {
    /// Decimal literals, or rationals rounded to the nearest float.
    fn parse_scalar(s: &str) -> Result<Self, NumericError> {
        if let Ok(r) = parse_rational(s) {
            return Ok(to_f64(&r));
        }
        let t = s.trim().replace('\u{2212}', "-");
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(NumericError::Parse(s.to_string())),
        }
    }
}

fn value<S: ParseScalar>(field: impl Into<String>, s: &str) -> Result<S, IoError> {
    S::parse_scalar(s).map_err(|source| IoError::Value { field: field.into(), source })
}

// ---- polygons

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<String>,
    pub points: Vec<[String; 3]>,
}

impl PolygonJson {
    pub fn config(&self) -> Result<SphereConfig, IoError> {
        match (&self.radius, &self.curvature) {
            (Some(r), None) => Ok(SphereConfig::from_radius(value("radius", r)?)?),
            (None, Some(k)) => Ok(SphereConfig::from_curvature(value("curvature", k)?)?),
            _ => Err(IoError::Schema("exactly one of radius and curvature is required".into())),
        }
    }

    pub fn points(&self) -> Result<(SphereConfig, Vec<SpherePoint>), IoError> {
        let cfg = self.config()?;
        let pts = self
            .points
            .iter()
            .enumerate()
            .map(|(i, [x, y, z])| {
                let c = [
                    value(format!("points[{i}][0]"), x)?,
                    value(format!("points[{i}][1]"), y)?,
                    value(format!("points[{i}][2]"), z)?,
                ];
                Ok(SpherePoint::new(c, &cfg)?)
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok((cfg, pts))
    }
}

pub fn parse_polygon(text: &str) -> Result<(SphereConfig, Vec<SpherePoint>), IoError> {
    serde_json::from_str::<PolygonJson>(text)?.points()
}

// ---- diamonds

/// A diamond, possibly partial: completion inputs leave `f` and the right
/// midpoints out.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiamondJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
}

impl DiamondJson {
    /// The named entry, if present.
    pub fn get<S: ParseScalar>(&self, name: char) -> Result<Option<S>, IoError> {
        let slot = match name {
            'a' => &self.a,
            'b' => &self.b,
            'c' => &self.c,
            'd' => &self.d,
            'e' => &self.e,
            'f' => &self.f,
            'p' => &self.p,
            'q' => &self.q,
            'r' => &self.r,
            's' => &self.s,
            _ => return Err(IoError::Schema(format!("no diamond entry {name:?}"))),
        };
        slot.as_deref().map(|s| value(name.to_string(), s)).transpose()
    }

    pub fn require<S: ParseScalar>(&self, name: char) -> Result<S, IoError> {
        self.get(name)?
            .ok_or_else(|| IoError::Schema(format!("diamond entry {name:?} is required")))
    }
}

// ---- friezes and paths

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeJson {
    #[serde(rename = "I")]
    pub i2: i64,
    #[serde(rename = "J")]
    pub j2: i64,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FriezeJson {
    pub kind: FriezeKind,
    pub n: usize,
    pub curvature: String,
    pub window: [i64; 2],
    pub nodes: Vec<NodeJson>,
    pub ne_lines: BTreeMap<i64, String>,
    pub se_lines: BTreeMap<i64, String>,
}

fn node_json<S: Scalar>((x, v): (&FriezeIndex, &S)) -> NodeJson {
    NodeJson { i2: x.i2, j2: x.j2, value: v.render() }
}

fn node_entry<S: ParseScalar>(nd: &NodeJson) -> Result<(FriezeIndex, S), IoError> {
    let idx = FriezeIndex::new(nd.i2, nd.j2);
    if !idx.is_valid() {
        return Err(IoError::Schema(format!("({}, {}) is not a frieze index", nd.i2, nd.j2)));
    }
    Ok((idx, value(idx.to_string(), &nd.value)?))
}

impl FriezeJson {
    pub fn from_frieze<S: Scalar>(z: &Frieze<S>) -> Self {
        FriezeJson {
            kind: z.kind,
            n: z.n,
            curvature: z.k.render(),
            window: [z.window.0, z.window.1],
            nodes: z.nodes.iter().map(node_json).collect(),
            ne_lines: z.ne_lines.iter().map(|(i, v)| (*i, v.render())).collect(),
            se_lines: z.se_lines.iter().map(|(j, v)| (*j, v.render())).collect(),
        }
    }

    pub fn to_frieze<S: ParseScalar>(&self) -> Result<Frieze<S>, IoError> {
        if self.window[0] > self.window[1] {
            return Err(IoError::Schema("window must satisfy lo <= hi".into()));
        }
        let lines = |m: &BTreeMap<i64, String>, tag: &str| {
            m.iter()
                .map(|(i, s)| Ok((*i, value(format!("{tag}({i})"), s)?)))
                .collect::<Result<BTreeMap<i64, S>, IoError>>()
        };
        Ok(Frieze {
            kind: self.kind,
            n: self.n,
            k: value("curvature", &self.curvature)?,
            window: (self.window[0], self.window[1]),
            nodes: self.nodes.iter().map(node_entry).collect::<Result<_, _>>()?,
            ne_lines: lines(&self.ne_lines, "NE")?,
            se_lines: lines(&self.se_lines, "SE")?,
        })
    }
}

pub fn frieze_to_json<S: Scalar>(z: &Frieze<S>) -> String {
    serde_json::to_string_pretty(&FriezeJson::from_frieze(z)).expect("frieze JSON serializes")
}

pub fn parse_frieze<S: ParseScalar>(text: &str) -> Result<Frieze<S>, IoError> {
    serde_json::from_str::<FriezeJson>(text)?.to_frieze()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineDir {
    Ne,
    Se,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineJson {
    pub dir: LineDir,
    pub index: i64,
    pub value: String,
}

/// A traversing path in path order. With `shifted` present it is a
/// thickened path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathJson {
    pub n: usize,
    pub curvature: String,
    pub nodes: Vec<NodeJson>,
    pub lines: Vec<LineJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifted: Option<Vec<NodeJson>>,
}

fn line_json<S: Scalar>((l, v): &(Line, S)) -> LineJson {
    let (dir, index) = match *l {
        Line::Ne(i) => (LineDir::Ne, i),
        Line::Se(j) => (LineDir::Se, j),
    };
    LineJson { dir, index, value: v.render() }
}

impl PathJson {
    pub fn from_path<S: Scalar>(path: &TraversingPath<S>, k: &S) -> Self {
        PathJson {
            n: path.n,
            curvature: k.render(),
            nodes: path.nodes.iter().map(|(x, v)| node_json((x, v))).collect(),
            lines: path.lines.iter().map(line_json).collect(),
            shifted: None,
        }
    }

    pub fn from_thickened<S: Scalar>(tp: &ThickenedPath<S>, k: &S) -> Self {
        let mut pj = PathJson::from_path(&tp.path, k);
        pj.shifted = Some(tp.shifted.iter().map(|(x, v)| node_json((x, v))).collect());
        pj
    }

    pub fn curvature<S: ParseScalar>(&self) -> Result<S, IoError> {
        value("curvature", &self.curvature)
    }

    pub fn to_path<S: ParseScalar>(&self) -> Result<TraversingPath<S>, IoError> {
        let nodes = self.nodes.iter().map(node_entry).collect::<Result<Vec<_>, _>>()?;
        let lines = self
            .lines
            .iter()
            .map(|l| {
                let line = match l.dir {
                    LineDir::Ne => Line::Ne(l.index),
                    LineDir::Se => Line::Se(l.index),
                };
                Ok((line, value(line.to_string(), &l.value)?))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        TraversingPath::new(self.n, nodes, lines).map_err(|e| IoError::Schema(e.to_string()))
    }

    pub fn to_thickened<S: ParseScalar>(&self) -> Result<ThickenedPath<S>, IoError> {
        let shifted = self
            .shifted
            .as_ref()
            .ok_or_else(|| IoError::Schema("a thickened path needs \"shifted\"".into()))?
            .iter()
            .map(node_entry)
            .collect::<Result<Vec<_>, _>>()?;
        ThickenedPath::new(self.to_path()?, shifted).map_err(|e| IoError::Schema(e.to_string()))
    }
}

// ---- reports

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckItemJson {
    pub check: crate::frieze::Check,
    pub site: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationJson {
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub items: Vec<CheckItemJson>,
}

impl ValidationJson {
    pub fn from_report(r: &ValidationReport) -> Self {
        let item = |c: &CheckItem| CheckItemJson { check: c.check, site: c.site.to_string(), pass: c.pass };
        ValidationJson {
            passed: r.passed(),
            total: r.items.len(),
            failed: r.failures().len(),
            items: r.items.iter().map(item).collect(),
        }
    }
}

// ---- ASCII

/// The frieze as a rotated strip: row `J−I` top to bottom, position `I+J`
/// left to right. Integer nodes are boxed, midpoints plain, lines listed
/// as dashed headers above the strip.
pub fn render_ascii<S: Scalar>(z: &Frieze<S>) -> String {
    let kind = match z.kind {
        FriezeKind::Heronian => "Heronian",
        FriezeKind::CayleyMenger => "Cayley-Menger",
    };
    let mut out = format!(
        "{kind} frieze of order {}, K = {}, columns {}..{}\n",
        z.n,
        z.k.render(),
        z.window.0,
        z.window.1
    );
    let header = |tag: &str, m: &BTreeMap<i64, S>| {
        let body: Vec<String> = m.iter().map(|(i, v)| format!("{tag}({i}) = {}", v.render())).collect();
        format!("--- {} ---\n", body.join("  "))
    };
    out += &header("NE", &z.ne_lines);
    out += &header("SE", &z.se_lines);

    let label = |x: &FriezeIndex, v: &S| {
        if x.is_integer() {
            format!("[{}]", v.render())
        } else {
            v.render()
        }
    };
    let width = z.nodes.iter().map(|(x, v)| label(x, v).chars().count()).max().unwrap_or(1) + 1;
    let Some(smin) = z.nodes.keys().map(|x| x.i2 + x.j2).min() else {
        return out;
    };
    let mut rows: BTreeMap<i64, Vec<(i64, String)>> = BTreeMap::new();
    for (x, v) in &z.nodes {
        rows.entry(x.row2()).or_default().push((x.i2 + x.j2, label(x, v)));
    }
    for (r2, cells) in rows.iter().rev() {
        let mut line = String::new();
        for (s, text) in cells {
            let end = ((s - smin) / 2 + 1) as usize * width;
            let pad = end.saturating_sub(line.chars().count() + text.chars().count());
            line.extend(std::iter::repeat_n(' ', pad.max(1)));
            line += text;
        }
        let tag = if r2 % 2 == 0 { format!("{:>5}", r2 / 2) } else { format!("{:>5}", format!("{}/2", r2)) };
        out += &format!("{tag} |{line}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frieze::{frieze_from_polygon, Step};
    use crate::geometry::hexagon_radius7;
    use crate::numeric::qr;

    const HEXAGON: &str = r#"{"radius": "7", "points": [["7","0","0"],["2","3","6"],["3","6","-2"],
        ["6","-2","3"],["-2","-3","6"],["-3","2","6"]]}"#;

    #[test]
    fn polygon_parsing() {
        let (cfg, pts) = parse_polygon(HEXAGON).unwrap();
        assert_eq!(cfg.k(), &qr(1, 49));
        assert_eq!(pts, hexagon_radius7().1);
        let both = r#"{"radius": "7", "curvature": "1/49", "points": []}"#;
        assert!(matches!(parse_polygon(both), Err(IoError::Schema(_))));
        let bad = r#"{"radius": "7", "points": [["7","0","1/0"]]}"#;
        assert!(matches!(parse_polygon(bad), Err(IoError::Value { .. })));
        assert!(matches!(parse_polygon("{"), Err(IoError::Json(_))));
        let off = r#"{"radius": "7", "points": [["7","1","0"]]}"#;
        assert!(matches!(parse_polygon(off), Err(IoError::Geometry(GeometryError::NotOnSphere))));
    }

    #[test]
    fn frieze_round_trip_is_byte_identical() {
        let (_, pts) = hexagon_radius7();
        for kind in [FriezeKind::Heronian, FriezeKind::CayleyMenger] {
            let z = frieze_from_polygon(&pts, kind, (0, 6)).unwrap();
            let text = frieze_to_json(&z);
            let back: Frieze<Q> = parse_frieze(&text).unwrap();
            assert_eq!(back, z);
            assert_eq!(frieze_to_json(&back), text);
        }
    }

    #[test]
    fn rationals_serialize_as_strings() {
        let (_, pts) = hexagon_radius7();
        let z = frieze_from_polygon(&pts, FriezeKind::Heronian, (0, 1)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&frieze_to_json(&z)).unwrap();
        assert_eq!(v["curvature"], "1/49");
        assert_eq!(v["kind"], "heronian");
        let midpoint = v["nodes"]
            .as_array()
            .unwrap()
            .iter()
            .find(|nd| nd["I"] == 0 && nd["J"] == 5)
            .unwrap();
        assert_eq!(midpoint["value"], "376/7");
        assert_eq!(v["ne_lines"]["1"], "70");
    }

    #[test]
    fn path_round_trip() {
        let (_, pts) = hexagon_radius7();
        let z = frieze_from_polygon(&pts, FriezeKind::Heronian, (0, 6)).unwrap();
        let steps = Step::parse_word("UUUU").unwrap();
        let path = TraversingPath::extract(&z, 1, &steps, true).unwrap();
        let pj = PathJson::from_path(&path, &z.k);
        let text = serde_json::to_string(&pj).unwrap();
        let back: PathJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_path::<Q>().unwrap(), path);
        assert!(back.to_thickened::<Q>().is_err());

        let c = frieze_from_polygon(&pts, FriezeKind::CayleyMenger, (0, 6)).unwrap();
        let tp = ThickenedPath::extract(&c, 1, &steps).unwrap();
        let back: PathJson = serde_json::from_str(&serde_json::to_string(&PathJson::from_thickened(&tp, &c.k)).unwrap()).unwrap();
        assert_eq!(back.to_thickened::<Q>().unwrap(), tp);
    }

    #[test]
    fn diamond_fields() {
        let d: DiamondJson = serde_json::from_str(r#"{"a": "−528/7", "e": "50"}"#).unwrap();
        assert_eq!(d.require::<Q>('a').unwrap(), qr(-528, 7));
        assert_eq!(d.get::<Q>('b').unwrap(), None);
        assert!(d.require::<Q>('b').is_err());
        assert_eq!(d.require::<f64>('e').unwrap(), 50.0);
        assert!(serde_json::from_str::<DiamondJson>(r#"{"g": "1"}"#).is_err());
    }

    #[test]
    fn float_parsing() {
        assert_eq!(f64::parse_scalar("1/4").unwrap(), 0.25);
        assert_eq!(f64::parse_scalar("2.5e-3").unwrap(), 0.0025);
        assert!(f64::parse_scalar("inf").is_err());
        assert!(f64::parse_scalar("x").is_err());
    }

    #[test]
    fn ascii_layout() {
        let (_, pts) = hexagon_radius7();
        let z = frieze_from_polygon(&pts, FriezeKind::Heronian, (1, 3)).unwrap();
        let text = render_ascii(&z);
        assert!(text.starts_with("Heronian frieze of order 6, K = 1/49, columns 1..3\n"));
        assert!(text.contains("--- NE(1) = "));
        assert!(text.contains("[56]"));
        assert!(text.contains(" -528/7"));
        // one line per half row, plus title and two headers
        assert_eq!(text.lines().count(), 3 + 13);
    }
}
