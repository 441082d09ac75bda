//! Finite-dimensional normed spaces and the integrand abstraction.
//!
//! Every finite-dimensional real normed space has the Radon-Nikodym
//! property, so absolutely continuous integrands are differentiable almost
//! everywhere and the error representation holds without further
//! assumptions. Infinite-dimensional spaces are not modelled.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Interval;
use crate::sum::VectorSum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("space mismatch: {left} vs {right}")]
    Mismatch { left: SpaceKind, right: SpaceKind },

    #[error("space {space} needs {expected} real components, got {got}")]
    ComponentCount {
        space: SpaceKind,
        expected: usize,
        got: usize,
    },

    #[error("unknown space label `{0}`")]
    UnknownLabel(String),
}

/// The concrete normed space an [`Element`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SpaceKind {
    /// ℝ with the absolute value.
    Scalar,
    /// ℝ^d with the Euclidean norm.
    Euclidean(usize),
    /// ℝ^d with the max norm.
    MaxNorm(usize),
    /// ℂ^d with the Euclidean (modulus-based) norm.
    Complex(usize),
    /// Real `rows x cols` matrices with the Frobenius norm.
    Matrix { rows: usize, cols: usize },
}

impl SpaceKind {
    /// Number of real coordinates.
    pub fn real_dim(&self) -> usize {
        match *self {
            SpaceKind::Scalar => 1,
            SpaceKind::Euclidean(d) | SpaceKind::MaxNorm(d) => d,
            SpaceKind::Complex(d) => 2 * d,
            SpaceKind::Matrix { rows, cols } => rows * cols,
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SpaceKind::Scalar => write!(f, "scalar"),
            SpaceKind::Euclidean(d) => write!(f, "R{d}"),
            SpaceKind::MaxNorm(d) => write!(f, "R{d}max"),
            SpaceKind::Complex(d) => write!(f, "C{d}"),
            SpaceKind::Matrix { rows, cols } => write!(f, "M{rows}x{cols}"),
        }
    }
}

impl FromStr for SpaceKind {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, SpaceError> {
        let bad = || SpaceError::UnknownLabel(s.to_string());
        let dim = |digits: &str| -> Result<usize, SpaceError> {
            match digits.parse::<usize>() {
                Ok(d) if d > 0 => Ok(d),
                _ => Err(bad()),
            }
        };
        if s == "scalar" || s == "R" {
            return Ok(SpaceKind::Scalar);
        }
        if let Some(rest) = s.strip_prefix('R') {
            return match rest.strip_suffix("max") {
                Some(d) => Ok(SpaceKind::MaxNorm(dim(d)?)),
                None => Ok(SpaceKind::Euclidean(dim(rest)?)),
            };
        }
        if let Some(rest) = s.strip_prefix('C') {
            return Ok(SpaceKind::Complex(dim(rest)?));
        }
        if let Some(rest) = s.strip_prefix('M') {
            let (r, c) = rest.split_once('x').ok_or_else(bad)?;
            return Ok(SpaceKind::Matrix {
                rows: dim(r)?,
                cols: dim(c)?,
            });
        }
        Err(bad())
    }
}

impl TryFrom<String> for SpaceKind {
    type Error = SpaceError;

    fn try_from(s: String) -> Result<Self, SpaceError> {
        s.parse()
    }
}

impl From<SpaceKind> for String {
    fn from(k: SpaceKind) -> Self {
        k.to_string()
    }
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|row| row.iter().copied()).collect(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

/// A value in one of the supported normed spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Scalar(f64),
    Euclidean(Vec<f64>),
    MaxNorm(Vec<f64>),
    Complex(Vec<Complex64>),
    Matrix(Matrix),
}

impl Element {
    pub fn kind(&self) -> SpaceKind {
        match self {
            Element::Scalar(_) => SpaceKind::Scalar,
            Element::Euclidean(v) => SpaceKind::Euclidean(v.len()),
            Element::MaxNorm(v) => SpaceKind::MaxNorm(v.len()),
            Element::Complex(v) => SpaceKind::Complex(v.len()),
            Element::Matrix(m) => SpaceKind::Matrix {
                rows: m.rows,
                cols: m.cols,
            },
        }
    }

    pub fn zero(kind: SpaceKind) -> Self {
        match kind {
            SpaceKind::Scalar => Element::Scalar(0.0),
            SpaceKind::Euclidean(d) => Element::Euclidean(vec![0.0; d]),
            SpaceKind::MaxNorm(d) => Element::MaxNorm(vec![0.0; d]),
            SpaceKind::Complex(d) => Element::Complex(vec![Complex64::new(0.0, 0.0); d]),
            SpaceKind::Matrix { rows, cols } => Element::Matrix(Matrix::zeros(rows, cols)),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            Element::Scalar(x) => x.abs(),
            Element::Euclidean(v) => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Element::MaxNorm(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Element::Complex(v) => v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            Element::Matrix(m) => m.data.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }

    /// Real coordinates: complex entries as `(re, im)` pairs, matrices row-major.
    pub fn components(&self) -> Vec<f64> {
        match self {
            Element::Scalar(x) => vec![*x],
            Element::Euclidean(v) | Element::MaxNorm(v) => v.clone(),
            Element::Complex(v) => v.iter().flat_map(|z| [z.re, z.im]).collect(),
            Element::Matrix(m) => m.data.clone(),
        }
    }

    pub fn from_components(kind: SpaceKind, c: Vec<f64>) -> Result<Self, SpaceError> {
        if c.len() != kind.real_dim() {
            return Err(SpaceError::ComponentCount {
                space: kind,
                expected: kind.real_dim(),
                got: c.len(),
            });
        }
        Ok(match kind {
            SpaceKind::Scalar => Element::Scalar(c[0]),
            SpaceKind::Euclidean(_) => Element::Euclidean(c),
            SpaceKind::MaxNorm(_) => Element::MaxNorm(c),
            SpaceKind::Complex(_) => Element::Complex(
                c.chunks_exact(2)
                    .map(|p| Complex64::new(p[0], p[1]))
                    .collect(),
            ),
            SpaceKind::Matrix { rows, cols } => Element::Matrix(Matrix {
                rows,
                cols,
                data: c,
            }),
        })
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|x| x.is_finite())
    }

    pub fn scale(&self, lambda: f64) -> Element {
        let kind = self.kind();
        let c = self.components().into_iter().map(|x| lambda * x).collect();
        Element::from_components(kind, c).expect("same shape")
    }

    pub fn add(&self, other: &Element) -> Result<Element, SpaceError> {
        linear_combination(self.kind(), [(1.0, self), (1.0, other)])
    }

    pub fn sub(&self, other: &Element) -> Result<Element, SpaceError> {
        linear_combination(self.kind(), [(1.0, self), (-1.0, other)])
    }
}

/// `Σ λ_k x_k`, accumulated left to right with compensation.
///
/// An empty list yields the zero of `space`.
pub fn linear_combination<'a, I>(space: SpaceKind, terms: I) -> Result<Element, SpaceError>
where
    I: IntoIterator<Item = (f64, &'a Element)>,
{
    let mut acc = VectorSum::zeros(space.real_dim());
    for (lambda, x) in terms {
        if x.kind() != space {
            return Err(SpaceError::Mismatch {
                left: space,
                right: x.kind(),
            });
        }
        acc.add_scaled(lambda, &x.components());
    }
    Element::from_components(space, acc.values())
}

/// How a function's derivative is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSource {
    Analytic,
    /// Central differences; estimates built on it are never certified.
    FiniteDifference,
    None,
}

/// An integrand `f: [a, b] -> X`.
///
/// Implementations must tolerate concurrent read-only calls; the engine may
/// evaluate panels in parallel.
pub trait VectorFunction: Send + Sync {
    fn space(&self) -> SpaceKind;

    fn eval(&self, t: f64) -> Element;

    /// `f'(t)`, if available.
    fn derivative(&self, _t: f64) -> Option<Element> {
        None
    }

    fn derivative_source(&self) -> DerivativeSource {
        DerivativeSource::None
    }

    /// A rigorous upper bound for `ess sup ‖f'(t)‖` on `interval`.
    fn derivative_norm_envelope(&self, _interval: &Interval) -> Option<f64> {
        None
    }
}

impl<F: VectorFunction + ?Sized> VectorFunction for &F {
    fn space(&self) -> SpaceKind {
        (**self).space()
    }
    fn eval(&self, t: f64) -> Element {
        (**self).eval(t)
    }
    fn derivative(&self, t: f64) -> Option<Element> {
        (**self).derivative(t)
    }
    fn derivative_source(&self) -> DerivativeSource {
        (**self).derivative_source()
    }
    fn derivative_norm_envelope(&self, interval: &Interval) -> Option<f64> {
        (**self).derivative_norm_envelope(interval)
    }
}

impl<F: VectorFunction + ?Sized> VectorFunction for Box<F> {
    fn space(&self) -> SpaceKind {
        (**self).space()
    }
    fn eval(&self, t: f64) -> Element {
        (**self).eval(t)
    }
    fn derivative(&self, t: f64) -> Option<Element> {
        (**self).derivative(t)
    }
    fn derivative_source(&self) -> DerivativeSource {
        (**self).derivative_source()
    }
    fn derivative_norm_envelope(&self, interval: &Interval) -> Option<f64> {
        (**self).derivative_norm_envelope(interval)
    }
}

type EvalFn = Box<dyn Fn(f64) -> Element + Send + Sync>;
type EnvelopeFn = Box<dyn Fn(&Interval) -> f64 + Send + Sync>;

/// A [`VectorFunction`] assembled from closures.
///
/// ```
/// use certquad::space::{ClosureFunction, Element, SpaceKind, VectorFunction};
///
/// let f = ClosureFunction::new(SpaceKind::Scalar, |t| Element::Scalar(t * t))
///     .with_derivative(|t| Element::Scalar(2.0 * t))
///     .with_envelope(|iv| 2.0 * iv.a().abs().max(iv.b().abs()));
/// assert_eq!(f.eval(3.0), Element::Scalar(9.0));
/// ```
pub struct ClosureFunction {
    space: SpaceKind,
    f: EvalFn,
    df: Option<EvalFn>,
    envelope: Option<EnvelopeFn>,
}

impl ClosureFunction {
    pub fn new(space: SpaceKind, f: impl Fn(f64) -> Element + Send + Sync + 'static) -> Self {
        Self {
            space,
            f: Box::new(f),
            df: None,
            envelope: None,
        }
    }

    pub fn scalar(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(SpaceKind::Scalar, move |t| Element::Scalar(f(t)))
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> Element + Send + Sync + 'static) -> Self {
        self.df = Some(Box::new(df));
        self
    }

    pub fn with_scalar_derivative(self, df: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.with_derivative(move |t| Element::Scalar(df(t)))
    }

    pub fn with_envelope(mut self, env: impl Fn(&Interval) -> f64 + Send + Sync + 'static) -> Self {
        self.envelope = Some(Box::new(env));
        self
    }
}

impl VectorFunction for ClosureFunction {
    fn space(&self) -> SpaceKind {
        self.space
    }

    fn eval(&self, t: f64) -> Element {
        (self.f)(t)
    }

    fn derivative(&self, t: f64) -> Option<Element> {
        self.df.as_ref().map(|df| df(t))
    }

    fn derivative_source(&self) -> DerivativeSource {
        if self.df.is_some() {
            DerivativeSource::Analytic
        } else {
            DerivativeSource::None
        }
    }

    fn derivative_norm_envelope(&self, interval: &Interval) -> Option<f64> {
        self.envelope.as_ref().map(|env| env(interval))
    }
}

/// Supplies `f'` by central differences `(f(t+h) - f(t-h)) / 2h`.
///
/// The wrapped function is evaluated at `t ± step`, so it must be defined a
/// little beyond the integration interval. Any envelope of the inner
/// function is passed through unchanged.
pub struct FiniteDifference<F> {
    inner: F,
    step: f64,
}

impl<F: VectorFunction> FiniteDifference<F> {
    pub fn new(inner: F, step: f64) -> Self {
        assert!(step > 0.0 && step.is_finite(), "step must be positive");
        Self { inner, step }
    }
}

impl<F: VectorFunction> VectorFunction for FiniteDifference<F> {
    fn space(&self) -> SpaceKind {
        self.inner.space()
    }

    fn eval(&self, t: f64) -> Element {
        self.inner.eval(t)
    }

    fn derivative(&self, t: f64) -> Option<Element> {
        let h = self.step;
        let fwd = self.inner.eval(t + h);
        let bwd = self.inner.eval(t - h);
        let inv = 1.0 / (2.0 * h);
        linear_combination(self.inner.space(), [(inv, &fwd), (-inv, &bwd)]).ok()
    }

    fn derivative_source(&self) -> DerivativeSource {
        DerivativeSource::FiniteDifference
    }

    fn derivative_norm_envelope(&self, interval: &Interval) -> Option<f64> {
        self.inner.derivative_norm_envelope(interval)
    }
}
