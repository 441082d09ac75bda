//! Convex-combination quadrature rules.
//!
//! A rule is stored in relative coordinates on `[0, 1]` and instantiated
//! on any interval, so one rule object serves composite panels of any
//! width. Weights must be strictly positive and sum to one; zero weights
//! have to be dropped by the caller together with their nodes. Coincident
//! nodes are fine.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QuadError, Result};
use crate::geometry::Interval;
use crate::sum::ordered_sum;

/// Allowed deviation of `Σ p_i` from one.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRule")]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

#[derive(Deserialize)]
struct RawRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    name: Option<String>,
}

impl TryFrom<RawRule> for QuadratureRule {
    type Error = QuadError;

    fn try_from(raw: RawRule) -> Result<Self> {
        let rule = make_rule(raw.nodes, raw.weights)?;
        Ok(match raw.name {
            Some(n) => rule.with_name(n),
            None => rule,
        })
    }
}

/// Validates relative nodes `u_1 <= ... <= u_n` in `[0, 1]` and weights.
pub fn make_rule(nodes: Vec<f64>, weights: Vec<f64>) -> Result<QuadratureRule> {
    if nodes.is_empty() {
        return Err(QuadError::EmptyRule);
    }
    if nodes.len() != weights.len() {
        return Err(QuadError::LengthMismatch {
            nodes: nodes.len(),
            weights: weights.len(),
        });
    }
    for (index, &value) in weights.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(QuadError::NonPositiveWeight { index, value });
        }
    }
    let sum = ordered_sum(weights.iter().copied());
    if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(QuadError::WeightSum { sum });
    }
    for (index, &value) in nodes.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(QuadError::NodeOutOfRange { index, value });
        }
    }
    if let Some(i) = nodes.windows(2).position(|w| w[1] < w[0]) {
        return Err(QuadError::UnsortedNodes { index: i + 1 });
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        name: None,
    })
}

/// Cumulative weights `P_i`, their complements and the kernel break values
/// `xi_i = P_i b + (1 - P_i) a` for `i = 1..n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeWeights {
    pub partial: Vec<f64>,
    pub complement: Vec<f64>,
    pub xi: Vec<f64>,
}

impl QuadratureRule {
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn nodes_rel(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "custom".to_string())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Absolute nodes `x_i = a + u_i (b - a)`.
    pub fn nodes_on(&self, interval: &Interval) -> Vec<f64> {
        self.nodes.iter().map(|&u| interval.at_relative(u)).collect()
    }

    /// The `n + 1` segments `[a, x_1], [x_1, x_2], ..., [x_n, b]`.
    pub fn segments_on(&self, interval: &Interval) -> Vec<Interval> {
        let x = self.nodes_on(interval);
        let mut cuts = Vec::with_capacity(x.len() + 2);
        cuts.push(interval.a());
        cuts.extend_from_slice(&x);
        cuts.push(interval.b());
        cuts.windows(2)
            .map(|w| Interval::new(w[0], w[1]).expect("nodes are sorted inside the interval"))
            .collect()
    }

    pub fn cumulative(&self, interval: &Interval) -> CumulativeWeights {
        let (a, b) = (interval.a(), interval.b());
        let mut running = 0.0;
        let partial: Vec<f64> = self
            .weights
            .iter()
            .map(|p| {
                running += p;
                running
            })
            .collect();
        let complement: Vec<f64> = partial.iter().map(|p| 1.0 - p).collect();
        let n = self.nodes.len();
        let xi = partial[..n - 1]
            .iter()
            .zip(&complement[..n - 1])
            .map(|(p, pbar)| (p * b + pbar * a).clamp(a, b))
            .collect();
        CumulativeWeights {
            partial,
            complement,
            xi,
        }
    }

    /// Whether every `xi_i` lies in `[x_i, x_{i+1}]`.
    ///
    /// Comparisons are inclusive with a few ulps of slack, so break values
    /// that coincide with a node in exact arithmetic are accepted.
    pub fn corollary_condition_holds(&self, interval: &Interval) -> bool {
        self.first_corollary_violation(interval).is_none()
    }

    pub(crate) fn first_corollary_violation(&self, interval: &Interval) -> Option<usize> {
        let x = self.nodes_on(interval);
        let xi = self.cumulative(interval).xi;
        let slack = 8.0 * f64::EPSILON * interval.a().abs().max(interval.b().abs());
        xi.iter()
            .enumerate()
            .position(|(i, &c)| c < x[i] - slack || c > x[i + 1] + slack)
    }
}

impl fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

pub fn cumulative(rule: &QuadratureRule, interval: &Interval) -> CumulativeWeights {
    rule.cumulative(interval)
}

pub fn corollary_condition_holds(rule: &QuadratureRule, interval: &Interval) -> bool {
    rule.corollary_condition_holds(interval)
}

/// Stable preset names accepted by [`preset`] and [`parse_rule_spec`].
pub const PRESET_NAMES: [&str; 10] = [
    "ostrowski",
    "trapezoid",
    "weighted_endpoints",
    "quarter_points",
    "qt",
    "three_point",
    "endpoints_midpoint",
    "qs",
    "simpson",
    "quarter_three_point",
];

fn expect_params(name: &str, params: &[f64], count: usize) -> Result<()> {
    if params.len() != count {
        return Err(QuadError::PresetParams {
            name: name.to_string(),
            reason: format!("expected {count} parameter(s), got {}", params.len()),
        });
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(QuadError::PresetParams {
            name: name.to_string(),
            reason: "parameters must be finite".into(),
        });
    }
    Ok(())
}

fn spec_label(name: &str, params: &[f64]) -> String {
    if params.is_empty() {
        name.to_string()
    } else {
        let joined: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        format!("{name}:{}", joined.join(","))
    }
}

/// Builds a named rule.
///
/// Weight parameters outside the admissibility windows of the two- and
/// three-point families are accepted as long as the weights stay positive;
/// such rules simply fail [`QuadratureRule::corollary_condition_holds`] and
/// are certified through the general bound path.
pub fn preset(name: &str, params: &[f64]) -> Result<QuadratureRule> {
    let third = |alpha: f64, beta: f64| 1.0 - alpha - beta;
    let rule = match name {
        "ostrowski" => {
            expect_params(name, params, 1)?;
            make_rule(vec![params[0]], vec![1.0])?
        }
        "trapezoid" => {
            expect_params(name, params, 0)?;
            make_rule(vec![0.0, 1.0], vec![0.5, 0.5])?
        }
        "weighted_endpoints" => {
            expect_params(name, params, 1)?;
            let t = params[0];
            make_rule(vec![0.0, 1.0], vec![1.0 - t, t])?
        }
        "quarter_points" => {
            expect_params(name, params, 1)?;
            let t = params[0];
            make_rule(vec![0.25, 0.75], vec![t, 1.0 - t])?
        }
        "qt" => {
            expect_params(name, params, 0)?;
            make_rule(vec![0.25, 0.75], vec![0.5, 0.5])?
        }
        "three_point" => {
            expect_params(name, params, 5)?;
            let (alpha, beta) = (params[0], params[1]);
            make_rule(
                vec![params[2], params[3], params[4]],
                vec![alpha, beta, third(alpha, beta)],
            )?
        }
        "endpoints_midpoint" => {
            expect_params(name, params, 2)?;
            let (alpha, beta) = (params[0], params[1]);
            make_rule(vec![0.0, 0.5, 1.0], vec![alpha, beta, third(alpha, beta)])?
        }
        "qs" => {
            expect_params(name, params, 0)?;
            make_rule(vec![0.0, 0.5, 1.0], vec![0.25, 0.5, 0.25])?
        }
        "simpson" => {
            expect_params(name, params, 0)?;
            make_rule(vec![0.0, 0.5, 1.0], vec![1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0])?
        }
        "quarter_three_point" => {
            expect_params(name, params, 2)?;
            let (alpha, beta) = (params[0], params[1]);
            make_rule(
                vec![0.25, 0.5, 0.75],
                vec![alpha, beta, third(alpha, beta)],
            )?
        }
        other => return Err(QuadError::UnknownPreset(other.to_string())),
    };
    Ok(rule.with_name(spec_label(name, params)))
}

/// Parses `NAME` or `NAME:p1,p2,...` into a preset rule.
pub fn parse_rule_spec(spec: &str) -> Result<QuadratureRule> {
    let (name, params) = match spec.split_once(':') {
        Some((n, rest)) => {
            let params = rest
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| QuadError::PresetParams {
                        name: n.to_string(),
                        reason: format!("cannot parse `{s}` as a number"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            (n, params)
        }
        None => (spec, Vec::new()),
    };
    preset(name.trim(), &params)
}
