use std::time::Instant;

use certquad::bounds::geometry_factor;
use certquad::engine::{integrate_adaptive, integrate_composite};
use certquad::{
    apply_rule, certify, oracle_integral, parse_rule_spec, uniform_partition, Element, Interval, Level,
    NormRegime, Partition, VectorFunction,
};

use crate::config::{Mode, RunConfig};
use crate::error::CliError;
use crate::registry;
use crate::report::{CertificateSummary, CompareRow, CompareTable, PanelSummary, Report, Timing, SCHEMA};

fn resolve_function(name: &str, space: Option<&str>) -> Result<Box<dyn VectorFunction>, CliError> {
    let space = space
        .map(|s| s.parse().map_err(certquad::QuadError::from))
        .transpose()?;
    registry::lookup(name, space)
}

fn error_norm(approx: &Element, oracle: &Element) -> Result<f64, CliError> {
    Ok(approx.sub(oracle).map_err(certquad::QuadError::from)?.norm())
}

/// Executes one configuration. Non-convergence is reported through
/// `Report::converged`, not as an error.
pub fn run(config: &RunConfig, oracle_resolution: usize, timing: bool) -> Result<Report, CliError> {
    let started = Instant::now();
    if config.threads == 0 {
        return Err(CliError::BadValue {
            flag: "threads",
            value: "0".into(),
            reason: "need at least one thread".into(),
        });
    }
    let f = resolve_function(&config.function, config.space.as_deref())?;
    let rule = parse_rule_spec(&config.rule)?;
    let interval = Interval::new(config.interval.0, config.interval.1)?;

    let result = match config.mode {
        Mode::Single => integrate_composite(
            f.as_ref(),
            &rule,
            &Partition::single(interval),
            config.regime,
            config.level,
            config.resolution,
            config.threads,
        )?,
        Mode::Composite(m) => integrate_composite(
            f.as_ref(),
            &rule,
            &uniform_partition(interval, m)?,
            config.regime,
            config.level,
            config.resolution,
            config.threads,
        )?,
        Mode::Adaptive(tol) => integrate_adaptive(
            f.as_ref(),
            &rule,
            interval,
            config.regime,
            tol,
            config.max_panels,
            config.resolution,
        )?,
    };

    let oracle = oracle_integral(f.as_ref(), interval, oracle_resolution)?;
    let actual_error = error_norm(&result.approximation, &oracle)?;
    let segments = match (config.mode, result.panels.as_slice()) {
        (Mode::Single, [only]) => only.certificate.segment_contributions.clone(),
        _ => result.certificate.segment_contributions.clone(),
    };
    let panels = result
        .panels
        .iter()
        .map(|p| PanelSummary {
            interval: p.interval,
            approximation_norm: p.approximation.norm(),
            bound: p.certificate.bound,
        })
        .collect();
    Ok(Report {
        schema: SCHEMA,
        config: config.clone(),
        space: f.space(),
        rule_label: rule.label(),
        approximation: result.approximation.components(),
        oracle: oracle.components(),
        oracle_resolution,
        actual_error,
        certificate: CertificateSummary {
            bound: result.certificate.bound,
            level: result.certificate.level,
            regime: result.certificate.regime,
            certified: result.certificate.certified,
            segments,
        },
        panels,
        evaluations: result.evaluations,
        converged: result.converged,
        timing: timing.then(|| Timing {
            elapsed_seconds: started.elapsed().as_secs_f64(),
        }),
    })
}

/// Checks `actual_error <= bound` for certified reports.
///
/// Uncertified reports are not judged; the caller may warn.
pub fn self_check(report: &Report) -> Result<(), CliError> {
    let c = &report.certificate;
    if c.certified && report.actual_error > c.bound {
        return Err(CliError::SelfCheck {
            actual: report.actual_error,
            bound: c.bound,
        });
    }
    Ok(())
}

/// Level-3 certificates of several rules on one panel, sorted by
/// certificate (stable, so ties keep the input order).
pub fn compare_rules(
    function: &str,
    space: Option<&str>,
    interval: Interval,
    regime: NormRegime,
    rules: &[String],
    resolution: usize,
    oracle_resolution: usize,
) -> Result<CompareTable, CliError> {
    let f = resolve_function(function, space)?;
    let oracle = oracle_integral(f.as_ref(), interval, oracle_resolution)?;
    let scale = interval.length().powf(regime.length_power());
    let mut rows = Vec::with_capacity(rules.len());
    for spec in rules {
        let rule = parse_rule_spec(spec)?;
        let cert = certify(f.as_ref(), &rule, interval, regime, Level::Three, resolution)?;
        let approx = apply_rule(f.as_ref(), &rule, interval)?;
        let factor = geometry_factor(&rule, interval, regime)?;
        rows.push(CompareRow {
            rule: rule.label(),
            constant: if scale > 0.0 { factor / scale } else { 0.0 },
            certificate: cert.bound,
            certified: cert.certified,
            actual_error: error_norm(&approx, &oracle)?,
        });
    }
    rows.sort_by(|x, y| x.certificate.total_cmp(&y.certificate));
    Ok(CompareTable {
        schema: SCHEMA,
        function: function.to_string(),
        interval,
        regime,
        rows,
    })
}

/// Lines for `certquad list`.
pub fn list() -> String {
    let mut out = String::from("functions:\n");
    for name in registry::FUNCTION_NAMES {
        let f = registry::native(name).expect("registered");
        out.push_str(&format!("  {name:<16} {}\n", f.space()));
    }
    out.push_str("rules:\n");
    for name in certquad::rules::PRESET_NAMES {
        out.push_str(&format!("  {name}\n"));
    }
    out
}
