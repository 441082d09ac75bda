//! Derivative seminorms `‖|f'|‖_{[α,β],p}`.
//!
//! L1/Lp values come from composite Simpson on a fixed number of panels,
//! L∞ values from equispaced sampling or from the function's envelope.
//! Only envelope values (and the exact zero of a degenerate interval) are
//! certified: finite sampling cannot bound an essential supremum from
//! above. A norm with kinks (e.g. `|f'|` crossing zero) is resolved by
//! raising the resolution; kinks are not detected.

use serde::{Deserialize, Serialize};

use crate::error::{QuadError, Result};
use crate::geometry::{Interval, NormRegime};
use crate::rules::QuadratureRule;
use crate::space::VectorFunction;
use crate::sum::NeumaierSum;

/// Default number of Simpson panels / sampling subintervals.
pub const DEFAULT_RESOLUTION: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormEstimate {
    pub value: f64,
    pub regime: NormRegime,
    pub interval: Interval,
    pub certified: bool,
    pub resolution: usize,
}

/// Per-segment estimates over `[a, x_1], ..., [x_n, b]` plus one over `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormProfile {
    pub segments: Vec<SeminormEstimate>,
    pub global: SeminormEstimate,
}

impl SeminormProfile {
    pub fn regime(&self) -> NormRegime {
        self.global.regime
    }

    pub fn certified(&self) -> bool {
        self.global.certified && self.segments.iter().all(|s| s.certified)
    }
}

/// Point at `k / r` of the way through `[α, β]`; `k = r` lands exactly on `β`.
///
/// Grids at resolution `2r` contain the grid at `r` bit for bit.
#[inline]
pub(crate) fn grid_point(interval: &Interval, k: usize, r: usize) -> f64 {
    if k == r {
        interval.b()
    } else {
        interval.at_relative(k as f64 / r as f64)
    }
}

/// Composite Simpson with `r` panels, each using its endpoints and midpoint.
pub(crate) fn simpson_panels<G>(interval: &Interval, r: usize, mut g: G) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    if interval.is_degenerate() {
        return Ok(0.0);
    }
    let mut ends = NeumaierSum::new();
    let mut interior = NeumaierSum::new();
    let mut mids = NeumaierSum::new();
    for k in 0..=r {
        let v = g(grid_point(interval, k, r))?;
        if k == 0 || k == r {
            ends.add(v);
        } else {
            interior.add(v);
        }
    }
    for k in 0..r {
        mids.add(g(grid_point(interval, 2 * k + 1, 2 * r))?);
    }
    let h = interval.length() / r as f64;
    Ok(h / 6.0 * (ends.value() + 2.0 * interior.value() + 4.0 * mids.value()))
}

pub(crate) fn derivative_norm<F: VectorFunction + ?Sized>(f: &F, t: f64) -> Result<f64> {
    let d = f.derivative(t).ok_or(QuadError::NoDerivative)?;
    let n = d.norm();
    if !n.is_finite() {
        return Err(QuadError::NonFinite { t });
    }
    Ok(n)
}

pub fn seminorm<F: VectorFunction + ?Sized>(
    f: &F,
    interval: Interval,
    regime: NormRegime,
    resolution: usize,
) -> Result<SeminormEstimate> {
    if resolution < 2 {
        return Err(QuadError::ResolutionTooSmall(resolution));
    }
    let estimate = |value: f64, certified: bool| SeminormEstimate {
        value,
        regime,
        interval,
        certified,
        resolution,
    };
    if interval.is_degenerate() {
        return Ok(estimate(0.0, true));
    }
    match regime {
        NormRegime::Linf => {
            if let Some(env) = f.derivative_norm_envelope(&interval) {
                if !(env >= 0.0) || !env.is_finite() {
                    return Err(QuadError::NonFinite { t: interval.a() });
                }
                return Ok(estimate(env, true));
            }
            let mut max = 0.0f64;
            for k in 0..=resolution {
                max = max.max(derivative_norm(f, grid_point(&interval, k, resolution))?);
            }
            Ok(estimate(max, false))
        }
        NormRegime::L1 => {
            let integral = simpson_panels(&interval, resolution, |t| derivative_norm(f, t))?;
            Ok(estimate(integral.max(0.0), false))
        }
        NormRegime::Lp(h) => {
            let p = h.p();
            let integral =
                simpson_panels(&interval, resolution, |t| Ok(derivative_norm(f, t)?.powf(p)))?;
            Ok(estimate(integral.max(0.0).powf(1.0 / p), false))
        }
    }
}

pub fn seminorm_profile<F: VectorFunction + ?Sized>(
    f: &F,
    rule: &QuadratureRule,
    interval: Interval,
    regime: NormRegime,
    resolution: usize,
) -> Result<SeminormProfile> {
    let segments = rule
        .segments_on(&interval)
        .into_iter()
        .map(|seg| seminorm(f, seg, regime, resolution))
        .collect::<Result<Vec<_>>>()?;
    let global = seminorm(f, interval, regime, resolution)?;
    Ok(SeminormProfile { segments, global })
}
