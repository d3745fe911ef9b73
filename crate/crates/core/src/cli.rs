//! The `sphfrieze` command line. [`run`] parses arguments, executes one
//! subcommand in process and returns the exit code with everything that
//! would be printed.
//!
//! Exit codes: 0 success, 2 input or parse error, 3 mathematical
//! degeneracy (including a failed `check`), 4 resource cap.

use std::ffi::OsString;
use std::fs;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::diamond::{heronian_check, propagate_lr, DiamondError, HeronianDiamond, Sign};
use crate::frieze::{
    cm_frieze_from_thickened_path, frieze_from_path, frieze_from_polygon, frieze_lift, frieze_restrict,
    frieze_validate, Frieze, FriezeError, FriezeKind, PropagationOptions, Step,
};
use crate::geometry::{chord_from_geodesic, geodesic_from_chord, GeometryError};
use crate::io::{
    frieze_to_json, parse_frieze, parse_polygon, render_ascii, DiamondJson, IoError, ParseScalar, PathJson,
    ValidationJson,
};
use crate::numeric::{to_f64, Scalar, TolerancePolicy, Q};
use crate::symbolic::{default_curvature, laurent_verify, SymbolicError, SymbolicOptions};

#[derive(Debug, Parser)]
#[command(name = "sphfrieze", version, about = "Spherical Heronian and Cayley-Menger friezes")]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format for friezes.
    #[arg(long, global = true, value_enum, default_value_t = Render::Json)]
    pub render: Render,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Relative tolerance, optionally `REL:ABS` (float mode only).
    #[arg(long, global = true)]
    pub tolerance: Option<String>,
    /// Write the result here instead of printing it.
    #[arg(long, short, global = true)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Render {
    Json,
    Ascii,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Heronian,
    Cm,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frieze of a polygon JSON file.
    PolygonToFrieze {
        input: String,
        #[arg(long, value_enum, default_value_t = KindArg::Heronian)]
        kind: KindArg,
        /// Base columns `LO:HI`, default `0:n`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Heronian frieze from a traversing path JSON file.
    PathToFrieze {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Visit diamonds in a seeded random order.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Cayley-Menger frieze from a thickened path JSON file.
    ThickenedToFrieze {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Complete a quadrilateral from a, b, c, d, e and orientations.
    CompleteQuad {
        /// Diamond JSON with a..e and optionally p, q.
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        curvature: Option<String>,
        #[arg(long)]
        radius: Option<String>,
        /// Signs of p and q: one character for both, or two.
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<String>,
        /// Also report the geodesic length belonging to f.
        #[arg(long)]
        geodesic: bool,
        /// Read a..e as geodesic lengths instead of squared chords.
        #[arg(long)]
        geodesic_input: bool,
    },
    /// Validate a frieze JSON file.
    Check { input: String },
    /// Restrict a Heronian frieze, or lift a Cayley-Menger one.
    Convert {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<String>,
    },
    /// Check the Laurent property for a path of independent variables.
    Laurent {
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Step word over U and L, default all U.
        #[arg(long)]
        path: Option<String>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        start: i64,
        #[arg(long, allow_hyphen_values = true)]
        curvature: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Largest numerator in monomials.
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {msg}")]
    Read { path: String, msg: String },
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Frieze(#[from] FriezeError),
    #[error(transparent)]
    Diamond(#[from] DiamondError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn geometry_code(e: &GeometryError) -> i32 {
    match e {
        GeometryError::AntipodalOrCoincident(_)
        | GeometryError::HeronViolation(_)
        | GeometryError::ExactSqrtUnavailable(_) => 3,
        _ => 2,
    }
}

fn frieze_code(e: &FriezeError) -> i32 {
    match e {
        FriezeError::MalformedPath(_) | FriezeError::Precondition(_) => 2,
        FriezeError::Geometry(g) => geometry_code(g),
        _ => 3,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } => 2,
            CliError::Io(IoError::Geometry(g)) => geometry_code(g),
            CliError::Io(_) => 2,
            CliError::Frieze(e) => frieze_code(e),
            CliError::Diamond(DiamondError::Precondition(_)) => 2,
            CliError::Diamond(_) => 3,
            CliError::Symbolic(SymbolicError::Cap(_)) => 4,
            CliError::Symbolic(SymbolicError::Frieze(e)) => frieze_code(e),
            CliError::Symbolic(SymbolicError::DivisionByZero) => 3,
            CliError::Geometry(g) => geometry_code(g),
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (program name first) and run the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CommandConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cfg) {
        Ok((code, text)) => match &cfg.common.output {
            Some(path) => match fs::write(path, &text) {
                Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: cannot write {path}: {e}\n") },
            },
            None => Outcome { code, stdout: text, stderr: String::new() },
        },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    let fail = |e: std::io::Error| CliError::Read { path: path.to_string(), msg: e.to_string() };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(fail)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(fail)
    }
}

pub fn parse_window(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Usage(format!("window must look like LO:HI, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().replace('\u{2212}', "-").parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().replace('\u{2212}', "-").parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// `+`, `-`, or two of them for `p` and `q` separately.
pub fn parse_signs(s: &str) -> Result<(Sign, Sign), CliError> {
    let signs = s
        .chars()
        .map(|c| match c {
            '+' => Ok(Sign::Plus),
            '-' | '\u{2212}' => Ok(Sign::Minus),
            _ => Err(CliError::Usage(format!("sign must be made of + and -, got {s:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    match signs[..] {
        [a] => Ok((a, a)),
        [a, b] => Ok((a, b)),
        _ => Err(CliError::Usage(format!("expected one or two signs, got {s:?}"))),
    }
}

fn policy(common: &Common) -> Result<TolerancePolicy, CliError> {
    let Some(t) = &common.tolerance else {
        return Ok(TolerancePolicy::default());
    };
    if common.mode == Mode::Exact {
        return Err(CliError::Usage("--tolerance applies to float mode only".into()));
    }
    let num = |v: &str| {
        v.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite() && *x >= 0.0)
            .ok_or_else(|| CliError::Usage(format!("bad tolerance {t:?}")))
    };
    let (rel, abs) = match t.split_once(':') {
        Some((r, a)) => (num(r)?, num(a)?),
        None => (num(t)?, TolerancePolicy::default().absolute_epsilon),
    };
    Ok(TolerancePolicy { relative_epsilon: rel, absolute_epsilon: abs })
}

fn render_frieze<S: Scalar>(z: &Frieze<S>, common: &Common) -> String {
    match common.render {
        Render::Json => frieze_to_json(z) + "\n",
        Render::Ascii => render_ascii(z),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn execute(cfg: &CommandConfig) -> Result<(i32, String), CliError> {
    let common = &cfg.common;
    let pol = policy(common)?;
    let float = common.mode == Mode::Float;
    match &cfg.command {
        Command::PolygonToFrieze { input, kind, window } => {
            let (_, pts) = parse_polygon(&read_input(input)?)?;
            let window = match window {
                Some(w) => parse_window(w)?,
                None => (0, pts.len() as i64),
            };
            let kind = match kind {
                KindArg::Heronian => FriezeKind::Heronian,
                KindArg::Cm => FriezeKind::CayleyMenger,
            };
            let z = frieze_from_polygon(&pts, kind, window)?;
            Ok((0, if float { render_frieze(&z.map(to_f64), common) } else { render_frieze(&z, common) }))
        }
        Command::PathToFrieze { input, window, seed } | Command::ThickenedToFrieze { input, window, seed } => {
            let thick = matches!(cfg.command, Command::ThickenedToFrieze { .. });
            let pj: PathJson = serde_json::from_str(&read_input(input)?).map_err(IoError::from)?;
            let window = match window {
                Some(w) => parse_window(w)?,
                None => (0, pj.n as i64),
            };
            let opts = PropagationOptions { policy: Some(pol), shuffle_seed: *seed };
            if float {
                path_frieze::<f64>(&pj, thick, window, &opts, common)
            } else {
                path_frieze::<Q>(&pj, thick, window, &opts, common)
            }
        }
        Command::CompleteQuad { input, curvature, radius, sign, geodesic, geodesic_input } => {
            if !float && (*geodesic || *geodesic_input) {
                return Err(CliError::Usage("geodesic lengths need --mode float".into()));
            }
            let dj: DiamondJson = serde_json::from_str(&read_input(input)?).map_err(IoError::from)?;
            let quad = QuadArgs { curvature, radius, sign, geodesic: *geodesic, geodesic_input: *geodesic_input };
            if float {
                complete_quad::<f64>(&dj, &quad, &pol)
            } else {
                complete_quad::<Q>(&dj, &quad, &pol)
            }
        }
        Command::Check { input } => {
            let text = read_input(input)?;
            let report = if float {
                frieze_validate(&parse_frieze::<f64>(&text)?, &pol)
            } else {
                frieze_validate(&parse_frieze::<Q>(&text)?, &pol)
            };
            Ok((if report.passed() { 0 } else { 3 }, json(&ValidationJson::from_report(&report))))
        }
        Command::Convert { input, sign } => {
            let text = read_input(input)?;
            if float {
                convert(&parse_frieze::<f64>(&text)?, sign.as_deref(), &pol, common)
            } else {
                convert(&parse_frieze::<Q>(&text)?, sign.as_deref(), &pol, common)
            }
        }
        Command::Laurent { n, path, start, curvature, window, cap } => {
            if float {
                return Err(CliError::Usage("laurent runs in exact mode only".into()));
            }
            let word = path.clone().unwrap_or_else(|| "U".repeat(n.saturating_sub(2)));
            let steps = Step::parse_word(&word)?;
            let k = match curvature {
                Some(s) => Q::parse_scalar(s).map_err(|e| CliError::Usage(e.to_string()))?,
                None => default_curvature(),
            };
            let mut opts = SymbolicOptions::default();
            if let Some(w) = window {
                opts.window = Some(parse_window(w)?);
            }
            if let Some(c) = cap {
                opts.monomial_cap = *c;
            }
            let report = laurent_verify(*n, &k, *start, &steps, &opts)?;
            Ok((if report.clean { 0 } else { 3 }, json(&report)))
        }
    }
}

fn path_frieze<S: ParseScalar>(
    pj: &PathJson,
    thick: bool,
    window: (i64, i64),
    opts: &PropagationOptions,
    common: &Common,
) -> Result<(i32, String), CliError> {
    let k: S = pj.curvature()?;
    let z = if thick {
        cm_frieze_from_thickened_path(&pj.to_thickened::<S>()?, &k, window, opts)?
    } else {
        frieze_from_path(&pj.to_path::<S>()?, &k, window, opts)?
    };
    Ok((0, render_frieze(&z, common)))
}

fn convert<S: Scalar>(
    z: &Frieze<S>,
    sign: Option<&str>,
    pol: &TolerancePolicy,
    common: &Common,
) -> Result<(i32, String), CliError> {
    let out = match z.kind {
        FriezeKind::Heronian => frieze_restrict(z, pol)?,
        FriezeKind::CayleyMenger => {
            let sign = sign.ok_or_else(|| CliError::Usage("lifting a Cayley-Menger frieze needs --sign".into()))?;
            match parse_signs(sign)? {
                (s, t) if s == t => frieze_lift(z, s, pol)?,
                _ => return Err(CliError::Usage("convert takes a single sign".into())),
            }
        }
    };
    Ok((0, render_frieze(&out, common)))
}

struct QuadArgs<'a> {
    curvature: &'a Option<String>,
    radius: &'a Option<String>,
    sign: &'a Option<String>,
    geodesic: bool,
    geodesic_input: bool,
}

/// Completed quadrilateral, values rendered as strings.
#[derive(Debug, Serialize)]
struct QuadReport {
    a: String,
    b: String,
    c: String,
    d: String,
    e: String,
    f: String,
    p: String,
    q: String,
    r: String,
    s: String,
    heronian_check: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    geodesic_f: Option<String>,
}

fn complete_quad<S: ParseScalar>(dj: &DiamondJson, args: &QuadArgs, pol: &TolerancePolicy) -> Result<(i32, String), CliError> {
    let usage = |m: &str| CliError::Usage(m.to_string());
    let scalar = |name: &str, v: &str| S::parse_scalar(v).map_err(|e| CliError::Usage(format!("{name}: {e}")));
    let (k, radius): (S, Option<S>) = match (args.curvature, args.radius) {
        (Some(k), None) => (scalar("curvature", k)?, None),
        (None, Some(r)) => {
            let r = scalar("radius", r)?;
            (S::one().try_div(&r.square()).map_err(|e| usage(&e.to_string()))?, Some(r))
        }
        _ => return Err(usage("give exactly one of --curvature and --radius")),
    };
    let mut v: Vec<S> = "abcde".chars().map(|c| dj.require::<S>(c)).collect::<Result<_, _>>()?;
    let float_radius = || -> Result<f64, CliError> {
        let r = match &radius {
            Some(r) => r.render(),
            None => k.render(),
        };
        let r: f64 = f64::parse_scalar(&r).map_err(|e| usage(&e.to_string()))?;
        Ok(if radius.is_some() { r } else { 1.0 / r.sqrt() })
    };
    if args.geodesic_input {
        let r = float_radius()?;
        for x in v.iter_mut() {
            let d = f64::parse_scalar(&x.render()).map_err(|e| usage(&e.to_string()))?;
            *x = S::parse_scalar(&chord_from_geodesic(d, r).to_string()).map_err(|e| usage(&e.to_string()))?;
        }
    }
    let [a, b, c, d, e]: [S; 5] = v.try_into().expect("five entries");
    let root = |name: &'static str, x: &S, y: &S, z: &S, sign: Sign| -> Result<S, CliError> {
        let h = crate::diamond::heron_k(x, y, z, &k);
        let h = if h.near_zero(pol) { S::zero() } else { h };
        let r = h.sqrt_opt().ok_or_else(|| {
            CliError::Diamond(DiamondError::ExactSqrtUnavailable(format!("{name}^2 = {}", h.render())))
        })?;
        Ok(sign.apply(r))
    };
    let (p, q) = match (dj.get::<S>('p')?, dj.get::<S>('q')?, args.sign) {
        (Some(p), Some(q), None) => (p, q),
        (None, None, Some(sign)) => {
            let (sp, sq) = parse_signs(sign)?;
            (root("p", &b, &c, &e, sp)?, root("q", &a, &d, &e, sq)?)
        }
        (Some(_), Some(_), Some(_)) => return Err(usage("give either p and q or --sign, not both")),
        _ => return Err(usage("give both p and q, or --sign")),
    };
    let (f, r, s) = propagate_lr(&a, &b, &c, &d, &e, &p, &q, &k, Some(pol))?;
    // every relation is homogeneous once K is given weight -1, so checking in
    // units of e keeps float residuals at unit scale
    let unit = |x: &S| x.try_div(&e).map_err(|err| CliError::Diamond(err.into()));
    let full = HeronianDiamond::from_array([
        unit(&a)?,
        unit(&b)?,
        unit(&c)?,
        unit(&d)?,
        S::one(),
        unit(&f)?,
        unit(&p)?,
        unit(&q)?,
        unit(&r)?,
        unit(&s)?,
    ]);
    let check = heronian_check(&full, &(k.clone() * e.clone()), pol).pass;
    let geodesic_f = if args.geodesic {
        let x = f64::parse_scalar(&f.render()).map_err(|e| usage(&e.to_string()))?;
        Some(geodesic_from_chord(x, float_radius()?)?.to_string())
    } else {
        None
    };
    let report = QuadReport {
        a: a.render(),
        b: b.render(),
        c: c.render(),
        d: d.render(),
        e: e.render(),
        f: f.render(),
        p: p.render(),
        q: q.render(),
        r: r.render(),
        s: s.render(),
        heronian_check: check,
        geodesic_f,
    };
    Ok((if check { 0 } else { 3 }, json(&report)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_and_signs() {
        assert_eq!(parse_window("-1:3").unwrap(), (-1, 3));
        assert!(parse_window("3:1").is_err());
        assert!(parse_window("3").is_err());
        assert_eq!(parse_signs("+").unwrap(), (Sign::Plus, Sign::Plus));
        assert_eq!(parse_signs("-+").unwrap(), (Sign::Minus, Sign::Plus));
        assert!(parse_signs("+-+").is_err());
        assert!(parse_signs("x").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let out = run(["sphfrieze", "polygon-to-frieze"]);
        assert_eq!(out.code, 2);
        let out = run(["sphfrieze", "frobnicate"]);
        assert_eq!(out.code, 2);
        let out = run(["sphfrieze", "check", "/nonexistent/frieze.json"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("cannot read"));
        let out = run(["sphfrieze", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("polygon-to-frieze"));
    }

    #[test]
    fn laurent_n4() {
        let out = run(["sphfrieze", "laurent", "--n", "4"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["clean"], true);
        assert_eq!(v["curvature"], "1/49");
        let out = run(["sphfrieze", "laurent", "--n", "4", "--mode", "float"]);
        assert_eq!(out.code, 2);
    }

    #[test]
    fn cap_exits_4() {
        let out = run(["sphfrieze", "laurent", "--n", "5", "--cap", "10"]);
        assert_eq!(out.code, 4, "{}", out.stderr);
    }

    #[test]
    fn exact_mode_rejects_float_only_flags() {
        let out = run(["sphfrieze", "check", "x.json", "--tolerance", "1e-9"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("float mode"));
    }
}
