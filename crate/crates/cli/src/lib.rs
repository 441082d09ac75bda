//! Command-line front end for `certquad`: a compiled function registry,
//! single/composite/adaptive runs with oracle comparison, and rule
//! comparison tables.

pub mod commands;
pub mod config;
pub mod error;
pub mod registry;
pub mod report;

use clap::{Args, Parser, Subcommand};

use certquad::{Interval, Level, NormRegime, DEFAULT_RESOLUTION};
use config::{Mode, OutputFormat, RunConfig, DEFAULT_MAX_PANELS};
use error::CliError;

/// Exit code for a run whose adaptive refinement did not reach `tol`.
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "certquad", version, about = "Quadrature with computable error certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one registry function and compare against the oracle.
    Run(RunArgs),
    /// Rank rules by their level-3 certificate on one panel.
    Compare(CompareArgs),
    /// List registry functions and rule presets.
    List,
}

fn parse_regime(s: &str) -> Result<NormRegime, String> {
    s.parse().map_err(|e: certquad::QuadError| e.to_string())
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse::<u8>()
        .map_err(|e| e.to_string())
        .and_then(Level::try_from)
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub function: String,

    /// Space label (scalar, R3, R2max, C1, M2x2); defaults to the function's own.
    #[arg(long)]
    pub space: Option<String>,

    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, default_values_t = [0.0, 1.0])]
    pub interval: Vec<f64>,

    /// l1, lp:P or linf.
    #[arg(long, default_value = "linf", value_parser = parse_regime)]
    pub regime: NormRegime,

    /// Seminorm quadrature panels / sampling subintervals.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

impl CommonArgs {
    pub fn interval(&self) -> Result<Interval, CliError> {
        Ok(Interval::new(self.interval[0], self.interval[1])?)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// NAME or NAME:p1,p2,...
    #[arg(long)]
    pub rule: String,

    #[arg(long, default_value = "3", value_parser = parse_level)]
    pub level: Level,

    /// single, composite:M or adaptive:TOL (adaptive always uses level 2).
    #[arg(long, default_value = "single", value_parser = parse_mode)]
    pub mode: Mode,

    #[arg(long, default_value_t = 1)]
    pub threads: usize,

    #[arg(long, default_value_t = DEFAULT_MAX_PANELS)]
    pub max_panels: usize,

    /// Exit with status 1 if a certified bound is below the oracle error.
    #[arg(long)]
    pub self_check: bool,

    /// Include wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
}

impl RunArgs {
    pub fn to_config(&self) -> Result<RunConfig, CliError> {
        let iv = self.common.interval()?;
        Ok(RunConfig {
            function: self.common.function.clone(),
            space: self.common.space.clone(),
            interval: (iv.a(), iv.b()),
            rule: self.rule.clone(),
            regime: self.common.regime,
            level: self.level,
            mode: self.mode,
            resolution: self.common.resolution,
            output: self.common.output,
            threads: self.threads,
            max_panels: self.max_panels,
        })
    }
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Comma-separated rule specs; parameters inside a spec use `;` instead of `,`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub rules: Vec<String>,
}

/// Runs a parsed command, returning the text for stdout and the exit code.
pub fn execute(cli: &Cli, oracle_env: Option<&str>) -> Result<(String, i32), CliError> {
    match &cli.command {
        Command::List => Ok((commands::list(), 0)),
        Command::Run(args) => {
            let config = args.to_config()?;
            let oracle = config::oracle_resolution(config.resolution, oracle_env)?;
            let report = commands::run(&config, oracle, args.timing)?;
            let text = report.render(config.output);
            if args.self_check {
                if !report.certificate.certified && report.actual_error > report.certificate.bound {
                    eprintln!(
                        "warning: uncertified bound {} is below the oracle error {}",
                        report.certificate.bound, report.actual_error
                    );
                }
                if let Err(e) = commands::self_check(&report) {
                    print!("{text}");
                    return Err(e);
                }
            }
            let code = if report.converged { 0 } else { EXIT_NOT_CONVERGED };
            Ok((text, code))
        }
        Command::Compare(args) => {
            let oracle = config::oracle_resolution(args.common.resolution, oracle_env)?;
            let rules: Vec<String> = args.rules.iter().map(|r| r.replace(';', ",")).collect();
            let table = commands::compare_rules(
                &args.common.function,
                args.common.space.as_deref(),
                args.common.interval()?,
                args.common.regime,
                &rules,
                args.common.resolution,
                oracle,
            )?;
            Ok((table.render(args.common.output), 0))
        }
    }
}
