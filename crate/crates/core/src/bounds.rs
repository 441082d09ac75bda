//! Error certificates for a single application of a rule.
//!
//! Three majorants of `‖(b-a) Σ p_i f(x_i) - ∫_a^b f‖`, each looser and
//! cheaper than the previous one:
//!
//! 1. the kernel-weighted integral of `‖f'‖` over the `n + 1` segments;
//! 2. per-segment seminorms times per-segment geometry factors;
//! 3. one global seminorm times one geometry factor.
//!
//! Level 2 and level 3 compute their geometry independently so comparing
//! them tests something.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QuadError, Result};
use crate::geometry::{ln_mu, log_sum_exp, mu, mu_root, Exponent, Interval, NormRegime, LOG_SPACE_Q};
use crate::rules::QuadratureRule;
use crate::seminorm::{derivative_norm, simpson_panels, SeminormEstimate, SeminormProfile};
use crate::sum::{ordered_sum, NeumaierSum};
use crate::space::VectorFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Level {
    One = 1,
    Two = 2,
    Three = 3,
}

impl TryFrom<u8> for Level {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Level::One),
            2 => Ok(Level::Two),
            3 => Ok(Level::Three),
            other => Err(format!("level must be 1, 2 or 3, got {other}")),
        }
    }
}

impl From<Level> for u8 {
    fn from(l: Level) -> u8 {
        l as u8
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

/// An upper bound on the quadrature error in the space norm.
///
/// `regime` is `None` for level 1, which does not depend on a seminorm.
/// `certified` is true only when every seminorm consumed was itself
/// certified; level 1 is a numerical integral and never certified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCertificate {
    pub bound: f64,
    pub level: Level,
    pub regime: Option<NormRegime>,
    pub segment_contributions: Vec<f64>,
    pub certified: bool,
    pub rule_name: String,
    pub interval: Interval,
}

impl ErrorCertificate {
    /// Certificate of an exact result: bound zero, certified.
    pub fn zero(level: Level, regime: Option<NormRegime>, rule: &QuadratureRule, interval: Interval) -> Self {
        Self {
            bound: 0.0,
            level,
            regime,
            segment_contributions: Vec::new(),
            certified: true,
            rule_name: rule.label(),
            interval,
        }
    }
}

/// `∫_α^β |t - c| ‖f'(t)‖ dt`, split at `c` when it is strictly inside.
fn weighted_segment<F: VectorFunction + ?Sized>(
    f: &F,
    segment: Interval,
    c: f64,
    resolution: usize,
) -> Result<f64> {
    let weighted = |t: f64| Ok((t - c).abs() * derivative_norm(f, t)?);
    if segment.a() < c && c < segment.b() {
        let left = simpson_panels(&Interval::new(segment.a(), c)?, resolution, weighted)?;
        let right = simpson_panels(&Interval::new(c, segment.b())?, resolution, weighted)?;
        Ok(left + right)
    } else {
        simpson_panels(&segment, resolution, weighted)
    }
}

pub fn bound_level1<F: VectorFunction + ?Sized>(
    f: &F,
    rule: &QuadratureRule,
    interval: Interval,
    resolution: usize,
) -> Result<ErrorCertificate> {
    if resolution < 2 {
        return Err(QuadError::ResolutionTooSmall(resolution));
    }
    if f.derivative(interval.a()).is_none() {
        return Err(QuadError::NoDerivative);
    }
    let segments = rule.segments_on(&interval);
    let xi = rule.cumulative(&interval).xi;
    let n = segments.len() - 1;
    let mut contributions = Vec::with_capacity(segments.len());
    for (j, seg) in segments.iter().enumerate() {
        let c = match j {
            0 => interval.a(),
            k if k == n => interval.b(),
            k => xi[k - 1],
        };
        contributions.push(weighted_segment(f, *seg, c, resolution)?.max(0.0));
    }
    Ok(ErrorCertificate {
        bound: ordered_sum(contributions.iter().copied()),
        level: Level::One,
        regime: None,
        segment_contributions: contributions,
        certified: false,
        rule_name: rule.label(),
        interval,
    })
}

/// `h^{1+1/q} / (q+1)^{1/q}`, the Hölder factor of an outer segment.
fn outer_holder(h: f64, q: f64) -> f64 {
    if h == 0.0 {
        0.0
    } else {
        h * (h / (q + 1.0)).powf(1.0 / q)
    }
}

pub fn bound_level2(
    profile: &SeminormProfile,
    rule: &QuadratureRule,
    interval: Interval,
) -> Result<ErrorCertificate> {
    let segments = rule.segments_on(&interval);
    if profile.segments.len() != segments.len()
        || profile.global.interval != interval
        || profile
            .segments
            .iter()
            .zip(&segments)
            .any(|(est, seg)| est.interval != *seg || est.regime != profile.global.regime)
    {
        return Err(QuadError::ProfileMismatch);
    }
    let regime = profile.regime();
    let x = rule.nodes_on(&interval);
    let xi = rule.cumulative(&interval).xi;
    let n = x.len();
    let (a, b) = (interval.a(), interval.b());

    let mut factors = Vec::with_capacity(n + 1);
    let (first, last) = (x[0] - a, b - x[n - 1]);
    match regime {
        NormRegime::L1 => {
            factors.push(first);
            for i in 0..n - 1 {
                factors.push(mu(Exponent::Infinity, x[i], xi[i], x[i + 1])?);
            }
            factors.push(last);
        }
        NormRegime::Lp(h) => {
            let q = h.q();
            factors.push(outer_holder(first, q));
            for i in 0..n - 1 {
                factors.push(mu_root(q, x[i], xi[i], x[i + 1])?);
            }
            factors.push(outer_holder(last, q));
        }
        NormRegime::Linf => {
            factors.push(first * first / 2.0);
            for i in 0..n - 1 {
                factors.push(mu(Exponent::Finite(1.0), x[i], xi[i], x[i + 1])?);
            }
            factors.push(last * last / 2.0);
        }
    }
    let contributions: Vec<f64> = factors
        .iter()
        .zip(&profile.segments)
        .map(|(g, s)| if *g == 0.0 { 0.0 } else { g * s.value })
        .collect();
    Ok(ErrorCertificate {
        bound: ordered_sum(contributions.iter().copied()),
        level: Level::Two,
        regime: Some(regime),
        segment_contributions: contributions,
        certified: profile.certified(),
        rule_name: rule.label(),
        interval,
    })
}

/// The level-3 factor multiplying the global seminorm:
///
/// * L1: `max(x_1 - a, max_i mu_∞(x_i, xi_i, x_{i+1}), b - x_n)`
/// * Lp: `[(x_1 - a)^{q+1}/(q+1) + Σ mu_q(x_i, xi_i, x_{i+1}) + (b - x_n)^{q+1}/(q+1)]^{1/q}`
/// * L∞: `(x_1 - a)²/2 + Σ mu_1(x_i, xi_i, x_{i+1}) + (b - x_n)²/2`
pub fn geometry_factor(rule: &QuadratureRule, interval: Interval, regime: NormRegime) -> Result<f64> {
    let x = rule.nodes_on(&interval);
    let xi = rule.cumulative(&interval).xi;
    let n = x.len();
    let (first, last) = (x[0] - interval.a(), interval.b() - x[n - 1]);
    let inner = (0..n - 1).map(|i| (x[i], xi[i], x[i + 1]));
    match regime {
        NormRegime::L1 => {
            let mut m = first.max(last);
            for (l, c, r) in inner {
                m = m.max(mu(Exponent::Infinity, l, c, r)?);
            }
            Ok(m)
        }
        NormRegime::Linf => {
            let mut acc = NeumaierSum::new();
            acc.add(first * first / 2.0);
            for (l, c, r) in inner {
                acc.add(mu(Exponent::Finite(1.0), l, c, r)?);
            }
            acc.add(last * last / 2.0);
            Ok(acc.value())
        }
        NormRegime::Lp(h) => {
            let q = h.q();
            if q > LOG_SPACE_Q {
                let outer = |len: f64| {
                    if len == 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        (q + 1.0) * len.ln() - (q + 1.0).ln()
                    }
                };
                let mut ln_total = log_sum_exp(outer(first), outer(last));
                for (l, c, r) in inner {
                    ln_total = log_sum_exp(ln_total, ln_mu(q, l, c, r)?);
                }
                Ok(if ln_total == f64::NEG_INFINITY {
                    0.0
                } else {
                    (ln_total / q).exp()
                })
            } else {
                let mut acc = NeumaierSum::new();
                acc.add(first.powf(q + 1.0) / (q + 1.0));
                for (l, c, r) in inner {
                    acc.add(mu(Exponent::Finite(q), l, c, r)?);
                }
                acc.add(last.powf(q + 1.0) / (q + 1.0));
                Ok(acc.value().max(0.0).powf(1.0 / q))
            }
        }
    }
}

pub fn bound_level3(
    global: &SeminormEstimate,
    rule: &QuadratureRule,
    interval: Interval,
) -> Result<ErrorCertificate> {
    if global.interval != interval {
        return Err(QuadError::ProfileMismatch);
    }
    let factor = geometry_factor(rule, interval, global.regime)?;
    let bound = if factor == 0.0 { 0.0 } else { factor * global.value };
    Ok(ErrorCertificate {
        bound,
        level: Level::Three,
        regime: Some(global.regime),
        segment_contributions: Vec::new(),
        certified: global.certified,
        rule_name: rule.label(),
        interval,
    })
}

/// Tabulated level-3 constants `K` with `factor = K (b-a)^{length_power}`
/// for the four classical rules.
///
/// For `qs` in the Lp regime this returns the published constant
/// `1/(2^{2+1/q} (q+1)^{1/q})`. The general factor for that rule is
/// `1/(4 (q+1)^{1/q})`, larger by `2^{1/q}`; the published value is not
/// a valid bound (see `qs_published_lp_constant_is_too_small` below).
pub fn closed_form_constant(rule_name: &str, regime: NormRegime) -> Result<f64> {
    let base = rule_name.split(':').next().unwrap_or(rule_name);
    let lp = |q: f64| (q + 1.0).powf(1.0 / q);
    let k = match (base, regime) {
        ("trapezoid", NormRegime::L1) => 0.5,
        ("trapezoid", NormRegime::Linf) => 0.25,
        ("trapezoid", NormRegime::Lp(h)) => 1.0 / (2.0 * lp(h.q())),
        ("qt", NormRegime::L1) => 0.25,
        ("qt", NormRegime::Linf) => 0.125,
        ("qt", NormRegime::Lp(h)) => 1.0 / (4.0 * lp(h.q())),
        ("qs", NormRegime::L1) => 0.25,
        ("qs", NormRegime::Linf) => 0.125,
        ("qs", NormRegime::Lp(h)) => {
            let q = h.q();
            1.0 / (2f64.powf(2.0 + 1.0 / q) * lp(q))
        }
        ("simpson", NormRegime::L1) => 1.0 / 3.0,
        ("simpson", NormRegime::Linf) => 5.0 / 36.0,
        ("simpson", NormRegime::Lp(h)) => {
            let q = h.q();
            (2f64.powf(q + 1.0) + 1.0).powf(1.0 / q) / (2.0 * 3f64.powf(1.0 + 1.0 / q) * lp(q))
        }
        _ => return Err(QuadError::NoClosedForm(rule_name.to_string())),
    };
    Ok(k)
}

/// Level-2 factors in midpoint-offset form `h_i/2 + |xi_i - m_i|` (L1)
/// and `h_i²/4 + (xi_i - m_i)²` (L∞), valid only when every `xi_i` lies in
/// its segment. Used to cross-check [`mu`].
pub fn corollary_factors(rule: &QuadratureRule, interval: Interval, regime: NormRegime) -> Result<Vec<f64>> {
    if let Some(index) = rule.first_corollary_violation(&interval) {
        return Err(QuadError::CorollaryCondition { index: index + 1 });
    }
    let x = rule.nodes_on(&interval);
    let xi = rule.cumulative(&interval).xi;
    let n = x.len();
    let mid = |i: usize| {
        let h = x[i + 1] - x[i];
        (h, xi[i] - (x[i] + x[i + 1]) / 2.0)
    };
    let (first, last) = (x[0] - interval.a(), interval.b() - x[n - 1]);
    let mut out = Vec::with_capacity(n + 1);
    match regime {
        NormRegime::L1 => {
            out.push(first);
            out.extend((0..n - 1).map(|i| {
                let (h, d) = mid(i);
                h / 2.0 + d.abs()
            }));
            out.push(last);
        }
        NormRegime::Linf => {
            out.push(first * first / 2.0);
            out.extend((0..n - 1).map(|i| {
                let (h, d) = mid(i);
                h * h / 4.0 + d * d
            }));
            out.push(last * last / 2.0);
        }
        NormRegime::Lp(_) => {
            return Err(QuadError::RegimeMismatch {
                expected: "l1 | linf".into(),
                found: regime.to_string(),
            })
        }
    }
    Ok(out)
}
