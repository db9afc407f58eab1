//! Run configuration: flag and `key=value` file parsing, angle and sweep syntax.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use dipole_focus::multipole::GOUY_PHASE;
use dipole_focus::IlluminationKind;

use crate::RunError;

/// Default quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
pub const TOL_RANGE: (f64, f64) = (1e-14, 1e-4);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    K0Curve,
    TMap,
    Spectrum,
    FocalProfile,
    ModeContent,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::K0Curve => "k0-curve",
            Command::TMap => "t-map",
            Command::Spectrum => "spectrum",
            Command::FocalProfile => "focal-profile",
            Command::ModeContent => "mode-content",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = RunError;
    fn from_str(s: &str) -> Result<Self, RunError> {
        Ok(match s {
            "k0-curve" => Command::K0Curve,
            "t-map" => Command::TMap,
            "spectrum" => Command::Spectrum,
            "focal-profile" => Command::FocalProfile,
            "mode-content" => Command::ModeContent,
            "verify" => Command::Verify,
            other => return Err(RunError::Config(format!("unknown command '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = RunError;
    fn from_str(s: &str) -> Result<Self, RunError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(RunError::Config(format!("unknown format '{other}'"))),
        }
    }
}

/// A single value or an inclusive linear sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Single(f64),
    Sweep { start: f64, stop: f64, n: usize },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Single(v) => vec![v],
            Axis::Sweep { start, stop, n } => (0..n)
                .map(|i| {
                    if i + 1 == n {
                        stop
                    } else {
                        start + (stop - start) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Axis::Single(_) => 1,
            Axis::Sweep { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn single(&self) -> Option<f64> {
        match self {
            Axis::Single(v) => Some(*v),
            Axis::Sweep { .. } => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Axis::Single(v) => format!("{v}"),
            Axis::Sweep { start, stop, n } => format!("sweep({start}, {stop}, {n})"),
        }
    }
}

/// Parses `0.43pi`, `pi/3`, `2pi/3`, `pi` or a plain number.
pub fn parse_scalar(s: &str) -> Result<f64, RunError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || RunError::Config(format!("cannot parse number '{s}'"));
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
    let v = match t.find("pi") {
        None => num(&t)?,
        Some(at) => {
            let coef = t[..at].trim_end_matches('*');
            let coef = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => num(c)?,
            };
            let rest = &t[at + 2..];
            let den = match rest.strip_prefix('/') {
                Some(d) => num(d)?,
                None if rest.is_empty() => 1.0,
                None => return Err(bad()),
            };
            coef * PI / den
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Parses a scalar or `sweep(start, stop, n)`; sweeps need `n >= 2`.
pub fn parse_axis(s: &str) -> Result<Axis, RunError> {
    let t = s.trim();
    let Some(inner) = t.strip_prefix("sweep(").and_then(|r| r.strip_suffix(')')) else {
        return Ok(Axis::Single(parse_scalar(t)?));
    };
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(RunError::Config(format!("sweep needs (start, stop, n), got '{s}'")));
    }
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| RunError::Config(format!("sweep count '{}' is not an integer", parts[2].trim())))?;
    if n < 2 {
        return Err(RunError::Config(format!("sweep count must be >= 2, got {n}")));
    }
    Ok(Axis::Sweep {
        start: parse_scalar(parts[0])?,
        stop: parse_scalar(parts[1])?,
        n,
    })
}

fn parse_grid(s: &str) -> Result<(usize, usize), RunError> {
    let bad = || RunError::Config(format!("grid must be N or NxM, got '{s}'"));
    let dims: Vec<usize> = s
        .split(['x', 'X'])
        .map(|d| d.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let (a, b) = match dims[..] {
        [n] => (n, n),
        [a, b] => (a, b),
        _ => return Err(bad()),
    };
    if a < 2 || b < 2 {
        return Err(RunError::Config(format!("degenerate {a}x{b} grid")));
    }
    Ok((a, b))
}

fn parse_bool(key: &str, s: &str) -> Result<bool, RunError> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(RunError::Config(format!("{key}: expected true/false, got '{s}'"))),
    }
}

/// A fully validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub mode: Option<IlluminationKind>,
    pub alpha: Option<Axis>,
    pub beta: Option<Axis>,
    pub detuning: Option<Axis>,
    pub x: Option<Axis>,
    pub grid: Option<(usize, usize)>,
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub with_oracle: bool,
    pub sequential: bool,
    /// Phase given to the outgoing dipole mode; only changed by test fixtures.
    pub gouy_phase: f64,
}

pub const KEYS: [&str; 12] = [
    "command", "mode", "alpha", "beta", "detuning", "x", "grid", "tol", "format", "out", "with-oracle", "sequential",
];

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            mode: None,
            alpha: None,
            beta: None,
            detuning: None,
            x: None,
            grid: None,
            tol: DEFAULT_TOL,
            format: Format::Csv,
            out: None,
            with_oracle: false,
            sequential: false,
            gouy_phase: GOUY_PHASE,
        }
    }

    /// Builds a config from `key = value` pairs; `command` is required.
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, RunError> {
        for k in pairs.keys() {
            if !KEYS.contains(&k.as_str()) {
                return Err(RunError::Config(format!("unknown key '{k}'")));
            }
        }
        let command = pairs
            .get("command")
            .ok_or_else(|| RunError::Config("no command given".into()))?
            .parse()?;
        let mut cfg = Self::new(command);
        for (k, v) in pairs {
            let v = v.trim();
            match k.as_str() {
                "command" => {}
                "mode" => {
                    cfg.mode = Some(v.parse().map_err(|e| RunError::Config(format!("mode: {e}")))?);
                }
                "alpha" => cfg.alpha = Some(parse_axis(v)?),
                "beta" => cfg.beta = Some(parse_axis(v)?),
                "detuning" => cfg.detuning = Some(parse_axis(v)?),
                "x" => cfg.x = Some(parse_axis(v)?),
                "grid" => cfg.grid = Some(parse_grid(v)?),
                "tol" => cfg.tol = parse_scalar(v)?,
                "format" => cfg.format = v.parse()?,
                "out" => cfg.out = Some(PathBuf::from(v)),
                "with-oracle" => cfg.with_oracle = parse_bool(k, v)?,
                "sequential" => cfg.sequential = parse_bool(k, v)?,
                _ => unreachable!(),
            }
        }
        if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&cfg.tol) {
            return Err(RunError::Config(format!(
                "tolerance {} outside [{:e}, {:e}]",
                cfg.tol, TOL_RANGE.0, TOL_RANGE.1
            )));
        }
        Ok(cfg)
    }

    /// Canonical `key -> value` form, echoed into JSON output.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("command".into(), self.command.name().into());
        if let Some(k) = self.mode {
            m.insert("mode".into(), k.label().into());
        }
        for (key, axis) in [("alpha", self.alpha), ("beta", self.beta), ("detuning", self.detuning), ("x", self.x)] {
            if let Some(a) = axis {
                m.insert(key.into(), a.render());
            }
        }
        if let Some((a, b)) = self.grid {
            m.insert("grid".into(), format!("{a}x{b}"));
        }
        m.insert("tol".into(), format!("{:e}", self.tol));
        m.insert(
            "format".into(),
            match self.format {
                Format::Csv => "csv",
                Format::Json => "json",
            }
            .into(),
        );
        m.insert("with-oracle".into(), self.with_oracle.to_string());
        m
    }
}

/// Parses a plain-text `key = value` file; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, RunError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| RunError::Config(format!("line {}: expected key=value", i + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}
