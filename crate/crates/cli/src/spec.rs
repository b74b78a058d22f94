//! Parsing of state, settings, grid and bracket arguments.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use coherence_bell::bell::{example1_settings, example2_settings, Family};
use coherence_bell::matcore::ComplexMatrix;
use coherence_bell::quantum;
use coherence_bell::{BellSettings, DensityMatrix};
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    W,
    Ghz,
    Family(Family, Vec<f64>),
    File(PathBuf),
}

fn parse_reals(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("not a finite number: {t:?}"))
        })
        .collect()
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "w" => return Ok(StateSpec::W),
            "ghz" => return Ok(StateSpec::Ghz),
            _ => {}
        }
        let (head, rest) = s.split_once(':').ok_or_else(|| {
            format!("unknown state {s:?}; expected w, ghz, w-pure:θ,φ, ghz-pure:θ, w-werner:p, ghz-werner:p or file:path")
        })?;
        if head == "file" {
            if rest.is_empty() {
                return Err("file: needs a path".into());
            }
            return Ok(StateSpec::File(PathBuf::from(rest)));
        }
        let family: Family = head.parse().map_err(|e| format!("{e}"))?;
        let params = parse_reals(rest)?;
        if params.len() != family.arity() {
            return Err(format!(
                "{family} takes {} parameter(s), got {}",
                family.arity(),
                params.len()
            ));
        }
        Ok(StateSpec::Family(family, params))
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::W => write!(f, "w"),
            StateSpec::Ghz => write!(f, "ghz"),
            StateSpec::Family(family, p) => {
                let p: Vec<String> = p.iter().map(f64::to_string).collect();
                write!(f, "{family}:{}", p.join(","))
            }
            StateSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

#[derive(Deserialize)]
struct StateFile {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl StateSpec {
    pub fn load(&self) -> Result<DensityMatrix, CliError> {
        let state = |e: coherence_bell::Error| CliError::State(e.to_string());
        match self {
            StateSpec::W => Ok(quantum::pure_density(&quantum::w_state())),
            StateSpec::Ghz => Ok(quantum::pure_density(&quantum::ghz_state())),
            StateSpec::Family(f, p) => f.state(p).map_err(state),
            StateSpec::File(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                let file: StateFile = serde_json::from_str(&text)
                    .map_err(|e| CliError::State(format!("{}: {e}", path.display())))?;
                if file.entries.len() != file.dim * file.dim {
                    return Err(CliError::State(format!(
                        "{}: dim {} needs {} entries, found {}",
                        path.display(),
                        file.dim,
                        file.dim * file.dim,
                        file.entries.len()
                    )));
                }
                let data: Vec<Complex64> = file
                    .entries
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                if data.iter().any(|z| !z.is_finite()) {
                    return Err(CliError::State(format!(
                        "{}: non-finite entry",
                        path.display()
                    )));
                }
                DensityMatrix::new(ComplexMatrix::from_rows(file.dim, file.dim, data))
                    .map_err(state)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SettingsSpec(pub BellSettings);

impl FromStr for SettingsSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "example1" => Ok(SettingsSpec(example1_settings())),
            "example2" => Ok(SettingsSpec(example2_settings())),
            _ => {
                let rest = s.strip_prefix("angles:").ok_or_else(|| {
                    format!(
                        "unknown settings {s:?}; expected example1, example2 or angles:<12 reals>"
                    )
                })?;
                let a: [f64; 12] = parse_reals(rest)?
                    .try_into()
                    .map_err(|v: Vec<f64>| format!("angles needs 12 values, got {}", v.len()))?;
                Ok(SettingsSpec(BellSettings::from_angles(&a)))
            }
        }
    }
}

/// One grid axis: `lo:hi:n` (closed, endpoints included) or `n` (n interior
/// points of the family's domain).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Closed { lo: f64, hi: f64, n: usize },
    Interior(usize),
}

fn parse_count(s: &str) -> Result<usize, String> {
    let n: usize = s
        .trim()
        .parse()
        .map_err(|_| format!("bad point count {s:?}"))?;
    if n < 2 {
        return Err(format!("point count must be at least 2, got {n}"));
    }
    Ok(n)
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [n] => Ok(Axis::Interior(parse_count(n)?)),
            [lo, hi, n] => {
                let r = parse_reals(&format!("{lo},{hi}"))?;
                if r[0] > r[1] {
                    return Err(format!("empty range {lo}:{hi}"));
                }
                Ok(Axis::Closed {
                    lo: r[0],
                    hi: r[1],
                    n: parse_count(n)?,
                })
            }
            _ => Err(format!("bad grid axis {s:?}; expected lo:hi:n or n")),
        }
    }
}

impl Axis {
    pub fn points(&self, domain: (f64, f64)) -> Vec<f64> {
        match *self {
            Axis::Closed { lo, hi, n } => (0..n)
                .map(|k| {
                    if k + 1 == n {
                        hi
                    } else {
                        lo + (hi - lo) * (k as f64 / (n - 1) as f64)
                    }
                })
                .collect(),
            Axis::Interior(n) => {
                let (lo, hi) = domain;
                (0..n)
                    .map(|k| lo + (hi - lo) * ((k + 1) as f64 / (n + 1) as f64))
                    .collect()
            }
        }
    }
}

/// Axes separated by `x`, `×` or `,`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<Axis>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let axes = s
            .split(['x', '×', ','])
            .map(str::parse)
            .collect::<Result<Vec<Axis>, String>>()?;
        Ok(Grid(axes))
    }
}

impl Grid {
    /// Grid points in lexicographic order, the first parameter varying slowest.
    pub fn points(&self, family: Family) -> Result<Vec<Vec<f64>>, CliError> {
        let domain = family.domain();
        if self.0.len() != domain.len() {
            return Err(CliError::Parse(format!(
                "{family} needs a {}-axis grid, got {}",
                domain.len(),
                self.0.len()
            )));
        }
        let mut out = vec![Vec::new()];
        for (axis, &d) in self.0.iter().zip(domain) {
            let values = axis.points(d);
            if let Some(&x) = values.iter().find(|x| !(d.0..=d.1).contains(*x)) {
                return Err(CliError::Parse(format!(
                    "grid value {x} outside the {family} domain [{}, {}]",
                    d.0, d.1
                )));
            }
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

/// `lo:hi` or `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket(pub f64, pub f64);

impl FromStr for Bracket {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s
            .split_once("..")
            .or_else(|| s.split_once(':'))
            .ok_or_else(|| format!("bad bracket {s:?}; expected lo..hi"))?;
        let r = parse_reals(&format!("{lo},{hi}"))?;
        if r[0] >= r[1] {
            return Err(format!("empty bracket {s}"));
        }
        Ok(Bracket(r[0], r[1]))
    }
}
