//! Reports and their JSON / CSV / table renderings.

use std::fmt::Write as _;

use certquad::{Interval, Level, NormRegime, SpaceKind};
use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, RunConfig};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub bound: f64,
    pub level: Level,
    pub regime: Option<NormRegime>,
    pub certified: bool,
    /// Per-segment terms for a single panel, per-panel bounds otherwise.
    pub segments: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelSummary {
    pub interval: Interval,
    pub approximation_norm: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub config: RunConfig,
    pub space: SpaceKind,
    pub rule_label: String,
    /// Real coordinates of the approximation (complex as re/im pairs,
    /// matrices row-major).
    pub approximation: Vec<f64>,
    pub oracle: Vec<f64>,
    pub oracle_resolution: usize,
    pub actual_error: f64,
    pub certificate: CertificateSummary,
    pub panels: Vec<PanelSummary>,
    pub evaluations: usize,
    pub converged: bool,
    /// Present only when requested, so default output is reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub rule: String,
    /// Level-3 geometry factor divided by `(b - a)^power`.
    pub constant: f64,
    pub certificate: f64,
    pub certified: bool,
    pub actual_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareTable {
    pub schema: u32,
    pub function: String,
    pub interval: Interval,
    pub regime: NormRegime,
    pub rows: Vec<CompareRow>,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports contain only finite numbers");
    s.push('\n');
    s
}

fn regime_label(r: &Option<NormRegime>) -> String {
    r.map(|r| r.to_string()).unwrap_or_else(|| "-".into())
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => {
                let mut s = String::from("panel,a,b,approximation_norm,bound\n");
                for (i, p) in self.panels.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "{i},{},{},{},{}",
                        p.interval.a(),
                        p.interval.b(),
                        p.approximation_norm,
                        p.bound
                    );
                }
                s
            }
            OutputFormat::Table => {
                let c = &self.certificate;
                let mut s = String::new();
                let _ = writeln!(s, "function      {} in {}", self.config.function, self.space);
                let _ = writeln!(
                    s,
                    "interval      [{}, {}]",
                    self.config.interval.0, self.config.interval.1
                );
                let _ = writeln!(s, "rule          {}", self.rule_label);
                let _ = writeln!(s, "mode          {}", self.config.mode);
                let _ = writeln!(s, "approximation {:?}", self.approximation);
                let _ = writeln!(s, "oracle        {:?}", self.oracle);
                let _ = writeln!(s, "actual error  {:.6e}", self.actual_error);
                let _ = writeln!(
                    s,
                    "bound         {:.6e}  (level {}, {}, {})",
                    c.bound,
                    c.level,
                    regime_label(&c.regime),
                    if c.certified { "certified" } else { "NOT certified" }
                );
                let _ = writeln!(s, "panels        {}", self.panels.len());
                let _ = writeln!(s, "converged     {}", self.converged);
                s
            }
        }
    }
}

impl CompareTable {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => json(self),
            OutputFormat::Csv => {
                let mut s = String::from("rule,constant,certificate,certified,actual_error\n");
                for r in &self.rows {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        r.rule, r.constant, r.certificate, r.certified, r.actual_error
                    );
                }
                s
            }
            OutputFormat::Table => {
                let mut s = format!(
                    "{} on [{}, {}], {}\n{:<32} {:>12} {:>14} {:>14}\n",
                    self.function,
                    self.interval.a(),
                    self.interval.b(),
                    self.regime,
                    "rule",
                    "constant",
                    "certificate",
                    "actual error"
                );
                for r in &self.rows {
                    let _ = writeln!(
                        s,
                        "{:<32} {:>12.6} {:>14.6e} {:>14.6e}{}",
                        r.rule,
                        r.constant,
                        r.certificate,
                        r.actual_error,
                        if r.certified { "" } else { "  (not certified)" }
                    );
                }
                s
            }
        }
    }
}
