//! Run configuration and its textual forms.

use std::fmt;
use std::str::FromStr;

use certquad::{Level, NormRegime, DEFAULT_RESOLUTION};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_MAX_PANELS: usize = 4096;
pub const ORACLE_ENV: &str = "QUAD_ORACLE_RESOLUTION";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Mode {
    Single,
    Composite(usize),
    Adaptive(f64),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Single => write!(f, "single"),
            Mode::Composite(m) => write!(f, "composite:{m}"),
            Mode::Adaptive(tol) => write!(f, "adaptive:{tol:e}"),
        }
    }
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |reason: &str| CliError::BadValue {
            flag: "mode",
            value: s.to_string(),
            reason: reason.to_string(),
        };
        match s.split_once(':') {
            None if s == "single" => Ok(Mode::Single),
            Some(("composite", m)) => match m.parse::<usize>() {
                Ok(m) if m > 0 => Ok(Mode::Composite(m)),
                _ => Err(bad("panel count must be a positive integer")),
            },
            Some(("adaptive", tol)) => match tol.parse::<f64>() {
                Ok(t) if t > 0.0 && t.is_finite() => Ok(Mode::Adaptive(t)),
                _ => Err(bad("tolerance must be a positive number")),
            },
            _ => Err(bad("expected single, composite:M or adaptive:TOL")),
        }
    }
}

impl TryFrom<String> for Mode {
    type Error = CliError;
    fn try_from(s: String) -> Result<Self, CliError> {
        s.parse()
    }
}

impl From<Mode> for String {
    fn from(m: Mode) -> String {
        m.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub function: String,
    /// Space label; `None` means the function's native space.
    pub space: Option<String>,
    pub interval: (f64, f64),
    pub rule: String,
    pub regime: NormRegime,
    pub level: Level,
    pub mode: Mode,
    pub resolution: usize,
    pub output: OutputFormat,
    pub threads: usize,
    pub max_panels: usize,
}

impl RunConfig {
    /// Defaults for everything but the function and rule.
    pub fn new(function: &str, rule: &str) -> Self {
        Self {
            function: function.to_string(),
            space: None,
            interval: (0.0, 1.0),
            rule: rule.to_string(),
            regime: NormRegime::Linf,
            level: Level::Three,
            mode: Mode::Single,
            resolution: DEFAULT_RESOLUTION,
            output: OutputFormat::Json,
            threads: 1,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

/// Oracle panel count: `QUAD_ORACLE_RESOLUTION` if set, else 65536, raised
/// to at least 16 times the seminorm resolution and rounded up to even.
pub fn oracle_resolution(resolution: usize, env: Option<&str>) -> Result<usize, CliError> {
    let base = match env {
        None => certquad::ORACLE_RESOLUTION,
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 2 => n,
            _ => {
                return Err(CliError::BadValue {
                    flag: "oracle-resolution",
                    value: v.to_string(),
                    reason: format!("{ORACLE_ENV} must be an integer >= 2"),
                })
            }
        },
    };
    let n = base.max(resolution.saturating_mul(16));
    Ok(n + n % 2)
}
