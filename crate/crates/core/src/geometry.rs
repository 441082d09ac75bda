//! Intervals, partitions, norm regimes and the distance-moment kernel
//! `mu_p(a, c, b)`.
//!
//! `mu_p(a, c, b)` is `∫_a^b |t - c|^p dt` for finite `p >= 1` and
//! `max_{t in [a,b]} |t - c|` for `p = ∞`. Every error certificate in the
//! crate is a sum of these geometric factors times a derivative seminorm.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QuadError, Result};

/// Closed interval `[a, b]` with finite endpoints and `a <= b`.
///
/// `a == b` is allowed; every integral and bound over it is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a > b {
            return Err(QuadError::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        self.a <= t && t <= self.b
    }

    /// Point at relative position `u in [0, 1]`. The endpoints map exactly
    /// onto `a` and `b`, and the result never leaves the interval.
    pub fn at_relative(&self, u: f64) -> f64 {
        if u <= 0.0 {
            self.a
        } else if u >= 1.0 {
            self.b
        } else {
            (self.a + u * self.length()).clamp(self.a, self.b)
        }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.midpoint().clamp(self.a, self.b);
        (Interval { a: self.a, b: m }, Interval { a: m, b: self.b })
    }
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = QuadError;

    fn try_from((a, b): (f64, f64)) -> Result<Self> {
        Interval::new(a, b)
    }
}

impl From<Interval> for (f64, f64) {
    fn from(iv: Interval) -> Self {
        (iv.a, iv.b)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Ordered breakpoints `t_0 = a <= t_1 <= ... <= t_m = b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Partition {
    breakpoints: Vec<f64>,
}

impl Partition {
    pub fn new(breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(QuadError::InvalidPartition(
                "need at least two breakpoints".into(),
            ));
        }
        if let Some(t) = breakpoints.iter().find(|t| !t.is_finite()) {
            return Err(QuadError::InvalidPartition(format!(
                "non-finite breakpoint {t}"
            )));
        }
        if let Some(i) = breakpoints.windows(2).position(|w| w[1] < w[0]) {
            return Err(QuadError::InvalidPartition(format!(
                "breakpoints decrease at index {}",
                i + 1
            )));
        }
        Ok(Self { breakpoints })
    }

    pub fn single(interval: Interval) -> Self {
        Self {
            breakpoints: vec![interval.a, interval.b],
        }
    }

    pub fn interval(&self) -> Interval {
        Interval {
            a: self.breakpoints[0],
            b: *self.breakpoints.last().expect("at least two breakpoints"),
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn num_panels(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Segment lengths `h_i = t_{i+1} - t_i`.
    pub fn lengths(&self) -> Vec<f64> {
        self.breakpoints.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn panels(&self) -> Vec<Interval> {
        self.breakpoints
            .windows(2)
            .map(|w| Interval { a: w[0], b: w[1] })
            .collect()
    }
}

impl TryFrom<Vec<f64>> for Partition {
    type Error = QuadError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<f64> {
    fn from(p: Partition) -> Self {
        p.breakpoints
    }
}

/// `m` equal panels over `interval`; the last breakpoint is exactly `b`.
pub fn uniform_partition(interval: Interval, m: usize) -> Result<Partition> {
    if m == 0 {
        return Err(QuadError::ZeroPanels);
    }
    let breakpoints = (0..=m)
        .map(|k| {
            if k == m {
                interval.b
            } else {
                interval.at_relative(k as f64 / m as f64)
            }
        })
        .collect();
    Ok(Partition { breakpoints })
}

/// Hölder exponent `q = p / (p - 1)`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(QuadError::InvalidConjugate(p));
    }
    Ok(p / (p - 1.0))
}

/// A Hölder pair `1/p + 1/q = 1` with `p, q > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderPair {
    p: f64,
    q: f64,
}

impl HolderPair {
    pub fn new(p: f64) -> Result<Self> {
        Ok(Self {
            p,
            q: conjugate_exponent(p)?,
        })
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Which derivative seminorm a certificate consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NormRegime {
    L1,
    Lp(HolderPair),
    Linf,
}

impl NormRegime {
    pub fn lp(p: f64) -> Result<Self> {
        Ok(NormRegime::Lp(HolderPair::new(p)?))
    }

    /// The exponent of the derivative seminorm (`p`).
    pub fn seminorm_exponent(&self) -> Exponent {
        match self {
            NormRegime::L1 => Exponent::Finite(1.0),
            NormRegime::Lp(h) => Exponent::Finite(h.p),
            NormRegime::Linf => Exponent::Infinity,
        }
    }

    /// Power of `(b - a)` carried by the level-3 geometry factor.
    pub fn length_power(&self) -> f64 {
        match self {
            NormRegime::L1 => 1.0,
            NormRegime::Lp(h) => 1.0 + 1.0 / h.q,
            NormRegime::Linf => 2.0,
        }
    }
}

impl fmt::Display for NormRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormRegime::L1 => write!(f, "l1"),
            NormRegime::Lp(h) => write!(f, "lp:{}", h.p),
            NormRegime::Linf => write!(f, "linf"),
        }
    }
}

impl FromStr for NormRegime {
    type Err = QuadError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "l1" => Ok(NormRegime::L1),
            "linf" | "l_inf" | "inf" => Ok(NormRegime::Linf),
            other => {
                let p = other
                    .strip_prefix("lp:")
                    .or_else(|| other.strip_prefix('l'))
                    .and_then(|rest| rest.parse::<f64>().ok())
                    .ok_or_else(|| QuadError::RegimeMismatch {
                        expected: "l1 | lp:P | linf".into(),
                        found: s.to_string(),
                    })?;
                if p == 1.0 {
                    Ok(NormRegime::L1)
                } else {
                    NormRegime::lp(p)
                }
            }
        }
    }
}

impl TryFrom<String> for NormRegime {
    type Error = QuadError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<NormRegime> for String {
    fn from(r: NormRegime) -> Self {
        r.to_string()
    }
}

/// Exponent of `mu`: a finite `p >= 1` or the sup-norm marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

/// `mu_p(a, c, b)`: `∫_a^b |t - c|^p dt` for finite `p`, `max |t - c|` for `∞`.
///
/// The boundary cases `c = a` and `c = b` take the middle branch. The outer
/// branches evaluate `(near + span)^(p+1) - near^(p+1)` without cancellation
/// when `c` sits far from a short interval.
pub fn mu(exponent: Exponent, a: f64, c: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(QuadError::InvalidInterval { a, b });
    }
    if let Exponent::Finite(p) = exponent {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(QuadError::InvalidExponent(p));
        }
    }
    if a == b {
        return Ok(0.0);
    }
    let value = match exponent {
        Exponent::Infinity => {
            if c < a {
                b - c
            } else if c <= b {
                (c - a).max(b - c)
            } else {
                c - a
            }
        }
        Exponent::Finite(p) => {
            let e = p + 1.0;
            if c < a {
                outer_moment(a - c, b - a, e)
            } else if c <= b {
                ((c - a).powf(e) + (b - c).powf(e)) / e
            } else {
                outer_moment(c - b, b - a, e)
            }
        }
    };
    Ok(value)
}

/// `((near + span)^e - near^e) / e` for `near > 0`, `span >= 0`.
fn outer_moment(near: f64, span: f64, e: f64) -> f64 {
    if span >= near {
        ((near + span).powf(e) - near.powf(e)) / e
    } else {
        near.powf(e) * (e * (span / near).ln_1p()).exp_m1() / e
    }
}

/// Natural log of `mu_q(a, c, b)` for finite `q`; `-inf` when the value is 0.
///
/// Used instead of [`mu`] once `q` is large enough for `(b - a)^(q+1)` to
/// overflow or underflow.
pub fn ln_mu(q: f64, a: f64, c: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(QuadError::InvalidInterval { a, b });
    }
    if !(q >= 1.0) || !q.is_finite() {
        return Err(QuadError::InvalidExponent(q));
    }
    if a == b {
        return Ok(f64::NEG_INFINITY);
    }
    let e = q + 1.0;
    let ln_moment = if c < a || c > b {
        let near = if c < a { a - c } else { c - b };
        let far = near + (b - a);
        // ln(far^e - near^e) = e ln(far) + ln(1 - (near/far)^e)
        e * far.ln() + (-(e * (near.ln() - far.ln())).exp_m1()).ln()
    } else {
        log_sum_exp(e * (c - a).ln(), e * (b - c).ln())
    };
    Ok(ln_moment - e.ln())
}

/// `ln(exp(x) + exp(y))` without overflow; `-inf` inputs are allowed.
pub fn log_sum_exp(x: f64, y: f64) -> f64 {
    let hi = x.max(y);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((x - hi).exp() + (y - hi).exp()).ln()
}

/// Above this conjugate exponent, q-th powers go through log space.
pub const LOG_SPACE_Q: f64 = 30.0;

/// `mu_q(a, c, b)^(1/q)`.
pub fn mu_root(q: f64, a: f64, c: f64, b: f64) -> Result<f64> {
    if q > LOG_SPACE_Q {
        Ok((ln_mu(q, a, c, b)? / q).exp())
    } else {
        Ok(mu(Exponent::Finite(q), a, c, b)?.powf(1.0 / q))
    }
}
