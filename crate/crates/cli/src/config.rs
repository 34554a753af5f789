//! Suite configuration: defaults, the flat `key = value` file format, and validation.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use gl3_voronoi::{Complex64, Window};

use crate::checks::{CheckName, ALL_CHECKS};
use crate::report::Format;

pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {reason}")]
    Value { key: String, reason: String },
    #[error("{0}")]
    Invalid(String),
}

/// Which Fourier–Bessel grid to sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Grid {
    #[default]
    Default,
    Extended,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "default" => Ok(Grid::Default),
            "extended" => Ok(Grid::Extended),
            other => Err(format!("unknown grid `{other}` (expected default or extended)")),
        }
    }
}

/// Sweep overrides; `None` means the check's own default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub c_max: Option<u64>,
    pub m_set: Option<Vec<i64>>,
    pub m2_max: Option<i64>,
    pub m_max: Option<u64>,
    pub ell_max: Option<u64>,
    pub n_max: Option<u64>,
    pub level: Option<Vec<u64>>,
    pub prime_bound: Option<u64>,
    pub power_bound: Option<u32>,
    pub trials: Option<u64>,
    pub q: Option<Vec<u64>>,
    pub cstar: Option<Vec<u64>>,
    pub window: Option<Window>,
    pub grid: Option<Grid>,
    pub nu1: Option<Complex64>,
    pub nu2: Option<Complex64>,
}

macro_rules! overlay_fields {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $(if $src.$f.is_some() { $dst.$f = $src.$f.clone(); })*
    };
}

impl Params {
    /// Fields set in `other` replace those in `self`.
    pub fn overlay(&mut self, other: &Params) {
        overlay_fields!(self, other; c_max, m_set, m2_max, m_max, ell_max, n_max, level, prime_bound,
            power_bound, trials, q, cstar, window, grid, nu1, nu2);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub params: Params,
    /// Tolerance applied to every report of the selected checks.
    pub tol: Option<f64>,
    /// Per-report tolerance overrides keyed by report name.
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<CheckName>,
    pub inject_fault: bool,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            params: Params::default(),
            tol: None,
            tolerances: BTreeMap::new(),
            checks: ALL_CHECKS.to_vec(),
            inject_fault: false,
            format: Format::Json,
            output: None,
        }
    }
}

fn value_err(key: &str, reason: impl ToString) -> ConfigError {
    ConfigError::Value { key: key.to_string(), reason: reason.to_string() }
}

fn parse_one<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| value_err(key, e))
}

/// Comma-separated list; an empty value is an empty list.
pub fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse_one(key, s)).collect()
}

/// `X:P:Q`.
pub fn parse_window(v: &str) -> Result<Window, ConfigError> {
    let parts: Vec<u64> = v.split(':').map(|s| parse_one("window", s)).collect::<Result<_, _>>()?;
    match parts[..] {
        [x, p, q] => Window::new(x, p, q).map_err(|e| value_err("window", e)),
        _ => Err(value_err("window", "expected X:P:Q")),
    }
}

pub fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(value_err(key, format!("`{other}` is not a boolean"))),
    }
}

fn parse_checks(v: &str) -> Result<Vec<CheckName>, ConfigError> {
    let mut out: Vec<CheckName> = Vec::new();
    for name in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if name == "all" {
            out.extend(ALL_CHECKS);
        } else {
            out.push(name.parse().map_err(|e| value_err("checks", e))?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

impl SuiteConfig {
    /// Applies one `key = value` setting. Keys are the long flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        let p = &mut self.params;
        match key {
            "seed" => self.seed = parse_one(key, v)?,
            "tol" => self.tol = Some(parse_one(key, v)?),
            "checks" => self.checks = parse_checks(v)?,
            "inject-fault" => self.inject_fault = parse_bool(key, v)?,
            "format" => self.format = parse_one(key, v)?,
            "output" => self.output = Some(PathBuf::from(v)),
            "c-max" => p.c_max = Some(parse_one(key, v)?),
            "m-set" => p.m_set = Some(parse_list(key, v)?),
            "m2-max" => p.m2_max = Some(parse_one(key, v)?),
            "m-max" => p.m_max = Some(parse_one(key, v)?),
            "ell-max" => p.ell_max = Some(parse_one(key, v)?),
            "n-max" => p.n_max = Some(parse_one(key, v)?),
            "level" => p.level = Some(parse_list(key, v)?),
            "prime-bound" => p.prime_bound = Some(parse_one(key, v)?),
            "power-bound" => p.power_bound = Some(parse_one(key, v)?),
            "trials" => p.trials = Some(parse_one(key, v)?),
            "q" => p.q = Some(parse_list(key, v)?),
            "cstar" => p.cstar = Some(parse_list(key, v)?),
            "window" => p.window = Some(parse_window(v)?),
            "grid" => p.grid = Some(parse_one(key, v)?),
            "nu1" => p.nu1 = Some(parse_one(key, v)?),
            "nu2" => p.nu2 = Some(parse_one(key, v)?),
            _ => match key.strip_prefix("tol.") {
                Some(name) if !name.is_empty() => {
                    self.tolerances.insert(name.to_string(), parse_one(key, v)?);
                }
                _ => return Err(ConfigError::UnknownKey(key.to_string())),
            },
        }
        Ok(())
    }

    /// Reads a flat configuration: one `key = value` per line, `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
            };
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = &self.params;
        let positive = [
            ("c-max", p.c_max),
            ("m-max", p.m_max),
            ("ell-max", p.ell_max),
            ("n-max", p.n_max),
            ("prime-bound", p.prime_bound),
            ("trials", p.trials),
            ("power-bound", p.power_bound.map(u64::from)),
        ];
        for (name, v) in positive {
            if v == Some(0) {
                return Err(ConfigError::Invalid(format!("{name} must be at least 1")));
            }
        }
        if matches!(p.m2_max, Some(v) if v < 0) {
            return Err(ConfigError::Invalid("m2-max must be nonnegative".into()));
        }
        let zero_in = |name: &str, list: &Option<Vec<u64>>| match list {
            Some(l) if l.contains(&0) => Err(ConfigError::Invalid(format!("{name} entries must be positive"))),
            _ => Ok(()),
        };
        zero_in("level", &p.level)?;
        zero_in("q", &p.q)?;
        zero_in("cstar", &p.cstar)?;
        if matches!(&p.m_set, Some(l) if l.contains(&0)) {
            return Err(ConfigError::Invalid("m-set entries must be nonzero".into()));
        }
        let tols = self.tol.iter().chain(self.tolerances.values());
        for t in tols {
            if t.is_nan() || *t < 0.0 {
                return Err(ConfigError::Invalid(format!("tolerance {t} must be nonnegative")));
            }
        }
        Ok(())
    }

    pub fn tolerance_for(&self, report: &str, default: f64) -> f64 {
        self.tolerances.get(report).copied().or(self.tol).unwrap_or(default)
    }
}
