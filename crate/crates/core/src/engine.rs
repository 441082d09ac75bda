//! Rule application, composite and adaptive integration, and the reference
//! Simpson oracle used by the tests.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::bounds::{bound_level1, bound_level2, bound_level3, ErrorCertificate, Level};
use crate::error::{QuadError, Result};
use crate::geometry::{Interval, NormRegime, Partition};
use crate::rules::QuadratureRule;
use crate::seminorm::{grid_point, seminorm, seminorm_profile};
use crate::space::{Element, SpaceError, VectorFunction};
use crate::sum::{ordered_sum, NeumaierSum, VectorSum};

/// Default panel count of [`oracle_integral`] in tests and self-checks.
pub const ORACLE_RESOLUTION: usize = 65536;

#[derive(Debug, Clone, PartialEq)]
pub struct PanelResult {
    pub interval: Interval,
    pub approximation: Element,
    pub certificate: ErrorCertificate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub approximation: Element,
    pub certificate: ErrorCertificate,
    /// Panels in left-to-right order.
    pub panels: Vec<PanelResult>,
    /// Number of `f` evaluations spent on approximations.
    pub evaluations: usize,
    /// False when adaptive refinement stopped before reaching `tol`.
    pub converged: bool,
}

fn checked_eval<F: VectorFunction + ?Sized>(f: &F, t: f64) -> Result<Element> {
    let v = f.eval(t);
    if v.kind() != f.space() {
        return Err(SpaceError::Mismatch {
            left: f.space(),
            right: v.kind(),
        }
        .into());
    }
    if !v.is_finite() {
        return Err(QuadError::NonFinite { t });
    }
    Ok(v)
}

/// `(b - a) Σ p_i f(x_i)`.
pub fn apply_rule<F: VectorFunction + ?Sized>(
    f: &F,
    rule: &QuadratureRule,
    interval: Interval,
) -> Result<Element> {
    let space = f.space();
    let mut acc = VectorSum::zeros(space.real_dim());
    for (p, x) in rule.weights().iter().zip(rule.nodes_on(&interval)) {
        acc.add_scaled(*p, &checked_eval(f, x)?.components());
    }
    let len = interval.length();
    let values = acc.values().into_iter().map(|v| len * v).collect();
    Ok(Element::from_components(space, values)?)
}

/// One certificate for `rule` on `interval` at the requested level.
pub fn certify<F: VectorFunction + ?Sized>(
    f: &F,
    rule: &QuadratureRule,
    interval: Interval,
    regime: NormRegime,
    level: Level,
    resolution: usize,
) -> Result<ErrorCertificate> {
    match level {
        Level::One => bound_level1(f, rule, interval, resolution),
        Level::Two => {
            let profile = seminorm_profile(f, rule, interval, regime, resolution)?;
            bound_level2(&profile, rule, interval)
        }
        Level::Three => {
            let global = seminorm(f, interval, regime, resolution)?;
            bound_level3(&global, rule, interval)
        }
    }
}

fn panel<F: VectorFunction + ?Sized>(
    f: &F,
    rule: &QuadratureRule,
    interval: Interval,
    regime: NormRegime,
    level: Level,
    resolution: usize,
) -> Result<PanelResult> {
    Ok(PanelResult {
        interval,
        approximation: apply_rule(f, rule, interval)?,
        certificate: certify(f, rule, interval, regime, level, resolution)?,
    })
}

/// Folds panels (already in left-to-right order) into a result.
fn assemble<F: VectorFunction + ?Sized>(
    f: &F,
    rule: &QuadratureRule,
    whole: Interval,
    regime: NormRegime,
    level: Level,
    panels: Vec<PanelResult>,
    converged: bool,
) -> Result<QuadratureResult> {
    let space = f.space();
    let approximation =
        crate::space::linear_combination(space, panels.iter().map(|p| (1.0, &p.approximation)))?;
    let contributions: Vec<f64> = panels.iter().map(|p| p.certificate.bound).collect();
    let certificate = ErrorCertificate {
        bound: ordered_sum(contributions.iter().copied()),
        level,
        regime: (level != Level::One).then_some(regime),
        segment_contributions: contributions,
        certified: panels.iter().all(|p| p.certificate.certified),
        rule_name: rule.label(),
        interval: whole,
    };
    Ok(QuadratureResult {
        approximation,
        certificate,
        evaluations: panels.len() * rule.len(),
        panels,
        converged,
    })
}

/// Applies `rule` on every panel of `partition`.
///
/// With `threads > 1` panels are evaluated on a dedicated rayon pool; the
/// reduction is still a left-to-right fold, so results do not depend on
/// `threads`.
pub fn integrate_composite<F: VectorFunction + ?Sized>(
    f: &F,
    rule: &QuadratureRule,
    partition: &Partition,
    regime: NormRegime,
    level: Level,
    resolution: usize,
    threads: usize,
) -> Result<QuadratureResult> {
    let intervals = partition.panels();
    let panels: Vec<PanelResult> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| QuadError::ThreadPool(e.to_string()))?;
        pool.install(|| {
            intervals
                .par_iter()
                .map(|iv| panel(f, rule, *iv, regime, level, resolution))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        intervals
            .iter()
            .map(|iv| panel(f, rule, *iv, regime, level, resolution))
            .collect::<Result<Vec<_>>>()?
    };
    assemble(f, rule, partition.interval(), regime, level, panels, true)
}

/// Heap entry: larger bound first, then the left-most interval.
struct Pending {
    interval: Interval,
    certificate: ErrorCertificate,
}

impl Pending {
    fn key(&self) -> (f64, f64) {
        (self.certificate.bound, self.interval.a())
    }
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        let (b1, a1) = self.key();
        let (b2, a2) = other.key();
        b1.total_cmp(&b2).then_with(|| a2.total_cmp(&a1))
    }
}

/// Worst-first bisection driven by per-panel level-2 certificates.
///
/// Stops once the ordered sum of panel bounds is `<= tol`, or with
/// `converged = false` when `max_panels` is reached or the worst panel can
/// no longer be split in floating point.
pub fn integrate_adaptive<F: VectorFunction + ?Sized>(
    f: &F,
    rule: &QuadratureRule,
    interval: Interval,
    regime: NormRegime,
    tol: f64,
    max_panels: usize,
    resolution: usize,
) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(QuadError::InvalidTolerance(tol));
    }
    if max_panels == 0 {
        return Err(QuadError::InvalidMaxPanels);
    }
    let level = Level::Two;
    let make = |iv: Interval| -> Result<Pending> {
        Ok(Pending {
            interval: iv,
            certificate: certify(f, rule, iv, regime, level, resolution)?,
        })
    };
    let mut heap = BinaryHeap::new();
    let first = make(interval)?;
    let mut running = NeumaierSum::new();
    running.add(first.certificate.bound);
    heap.push(first);

    let exact_total = |heap: &BinaryHeap<Pending>| {
        let mut items: Vec<&Pending> = heap.iter().collect();
        items.sort_by(|x, y| x.interval.a().total_cmp(&y.interval.a()));
        ordered_sum(items.iter().map(|p| p.certificate.bound))
    };

    let converged = loop {
        if running.value() <= tol && exact_total(&heap) <= tol {
            break true;
        }
        if heap.len() >= max_panels {
            break false;
        }
        let worst = heap.pop().expect("heap is never empty");
        let (left, right) = worst.interval.bisect();
        if left.length() == 0.0 || right.length() == 0.0 {
            heap.push(worst);
            break false;
        }
        let (left, right) = (make(left)?, make(right)?);
        running.add(-worst.certificate.bound);
        running.add(left.certificate.bound);
        running.add(right.certificate.bound);
        heap.push(left);
        heap.push(right);
    };

    let mut pending = heap.into_vec();
    pending.sort_by(|x, y| x.interval.a().total_cmp(&y.interval.a()));
    let panels = pending
        .into_iter()
        .map(|p| {
            Ok(PanelResult {
                interval: p.interval,
                approximation: apply_rule(f, rule, p.interval)?,
                certificate: p.certificate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(f, rule, interval, regime, level, panels, converged)
}

/// Classic composite Simpson on `resolution` (even) subintervals, applied to
/// each real coordinate of `g`. Test oracle only.
pub fn oracle_components<G>(interval: &Interval, resolution: usize, dim: usize, mut g: G) -> Result<Vec<f64>>
where
    G: FnMut(f64) -> Result<Vec<f64>>,
{
    if resolution < 2 || resolution % 2 != 0 {
        return Err(QuadError::OddResolution(resolution));
    }
    if interval.is_degenerate() {
        return Ok(vec![0.0; dim]);
    }
    let mut ends = VectorSum::zeros(dim);
    let mut odd = VectorSum::zeros(dim);
    let mut even = VectorSum::zeros(dim);
    for k in 0..=resolution {
        let v = g(grid_point(interval, k, resolution))?;
        if v.len() != dim {
            return Err(QuadError::NonFinite { t: grid_point(interval, k, resolution) });
        }
        let acc = if k == 0 || k == resolution {
            &mut ends
        } else if k % 2 == 1 {
            &mut odd
        } else {
            &mut even
        };
        acc.add_scaled(1.0, &v);
    }
    let h = interval.length() / resolution as f64;
    let (e, o, m) = (ends.values(), odd.values(), even.values());
    Ok((0..dim)
        .map(|i| h / 3.0 * (e[i] + 4.0 * o[i] + 2.0 * m[i]))
        .collect())
}

/// Reference value of `∫_a^b f` by composite Simpson; never used by
/// certificates.
pub fn oracle_integral<F: VectorFunction + ?Sized>(
    f: &F,
    interval: Interval,
    resolution: usize,
) -> Result<Element> {
    let space = f.space();
    let c = oracle_components(&interval, resolution, space.real_dim(), |t| {
        Ok(checked_eval(f, t)?.components())
    })?;
    Ok(Element::from_components(space, c)?)
}
