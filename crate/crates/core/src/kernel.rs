//! The Peano kernel of a convex-combination rule and a numerical check of
//! the error identity
//!
//! ```text
//! Σ p_i f(x_i) - (1/(b-a)) ∫_a^b f = (1/(b-a)) ∫_a^b S(t) f'(t) dt
//! ```
//!
//! where `S(t) = Σ p_i k(x_i, t)` and `k(x, t)` is `t - a` for `t <= x`,
//! `t - b` otherwise.

use crate::engine::oracle_components;
use crate::error::{QuadError, Result};
use crate::geometry::Interval;
use crate::rules::{CumulativeWeights, QuadratureRule};
use crate::space::{Element, VectorFunction};

/// The two-piece kernel `k(x, t)` of a single node `x`.
pub fn point_kernel(x: f64, t: f64, interval: &Interval) -> f64 {
    if t <= x {
        t - interval.a()
    } else {
        t - interval.b()
    }
}

#[derive(Debug, Clone)]
pub struct PeanoKernel {
    rule: QuadratureRule,
    interval: Interval,
    cumulative: CumulativeWeights,
    nodes: Vec<f64>,
}

impl PeanoKernel {
    pub fn new(rule: &QuadratureRule, interval: Interval) -> Self {
        Self {
            rule: rule.clone(),
            interval,
            cumulative: rule.cumulative(&interval),
            nodes: rule.nodes_on(&interval),
        }
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn cumulative(&self) -> &CumulativeWeights {
        &self.cumulative
    }

    /// Offsets `a, xi_1, ..., xi_{n-1}, b`: on segment `j` the kernel is
    /// `t - offsets[j]`.
    pub fn offsets(&self) -> Vec<f64> {
        let mut o = Vec::with_capacity(self.nodes.len() + 1);
        o.push(self.interval.a());
        o.extend_from_slice(&self.cumulative.xi);
        o.push(self.interval.b());
        o
    }

    /// `S(t)`. A node `t = x_i` belongs to the piece on its left, so with
    /// `x_n = b` the value at `b` is `b - xi_{n-1}` rather than zero.
    pub fn kernel_value(&self, t: f64) -> Result<f64> {
        let (a, b) = (self.interval.a(), self.interval.b());
        if !(a..=b).contains(&t) {
            return Err(QuadError::OutsideInterval { t, a, b });
        }
        // Number of nodes strictly left of t.
        let i = self.nodes.partition_point(|&x| x < t);
        let n = self.nodes.len();
        let offset = match i {
            0 => a,
            k if k == n => b,
            k => self.cumulative.xi[k - 1],
        };
        Ok(t - offset)
    }

    /// `Σ p_i k(x_i, t)` evaluated term by term.
    pub fn direct_sum(&self, t: f64) -> f64 {
        self.rule
            .weights()
            .iter()
            .zip(&self.nodes)
            .map(|(p, &x)| p * point_kernel(x, t, &self.interval))
            .sum()
    }
}

/// `‖LHS - RHS‖` of the error identity, with both integrals taken by the
/// reference Simpson oracle at `oracle_resolution` panels.
///
/// The kernel side is integrated segment by segment (`oracle_resolution`
/// panels each) so its jumps at the nodes do not pollute the check.
pub fn identity_residual<F: VectorFunction + ?Sized>(
    f: &F,
    rule: &QuadratureRule,
    interval: Interval,
    oracle_resolution: usize,
) -> Result<f64> {
    if oracle_resolution < 2 || oracle_resolution % 2 != 0 {
        return Err(QuadError::OddResolution(oracle_resolution));
    }
    if interval.is_degenerate() {
        return Ok(0.0);
    }
    let space = f.space();
    let dim = space.real_dim();
    let len = interval.length();

    let quadrature: Vec<f64> = {
        let mut acc = crate::sum::VectorSum::zeros(dim);
        for (p, x) in rule.weights().iter().zip(rule.nodes_on(&interval)) {
            acc.add_scaled(*p, &eval_components(f, x)?);
        }
        acc.values()
    };
    let integral = oracle_components(&interval, oracle_resolution, dim, |t| eval_components(f, t))?;

    let kernel = PeanoKernel::new(rule, interval);
    let offsets = kernel.offsets();
    let mut rhs = crate::sum::VectorSum::zeros(dim);
    for (segment, offset) in rule.segments_on(&interval).iter().zip(offsets) {
        let part = oracle_components(segment, oracle_resolution, dim, |t| {
            let d = f.derivative(t).ok_or(QuadError::NoDerivative)?;
            let s = t - offset;
            Ok(d.components().into_iter().map(|c| s * c).collect())
        })?;
        rhs.add_scaled(1.0, &part);
    }
    let rhs = rhs.values();

    let diff: Vec<f64> = (0..dim)
        .map(|k| (quadrature[k] - integral[k] / len) - rhs[k] / len)
        .collect();
    Ok(Element::from_components(space, diff)?.norm())
}

fn eval_components<F: VectorFunction + ?Sized>(f: &F, t: f64) -> Result<Vec<f64>> {
    let v = f.eval(t);
    if !v.is_finite() {
        return Err(QuadError::NonFinite { t });
    }
    Ok(v.components())
}
