//! Compiled test functions. Every entry carries an analytic derivative and
//! a rigorous envelope for `sup ‖f'‖` on any interval.

use certquad::space::{DerivativeSource, Matrix};
use certquad::{ClosureFunction, Element, Interval, SpaceKind, VectorFunction};
use num_complex::Complex64;

use crate::error::CliError;

/// The eight functions exercised by the acceptance grid.
pub const CORE_FUNCTIONS: [&str; 8] = [
    "const",
    "affine",
    "quadratic",
    "exp",
    "trig_circle",
    "poly_R3",
    "matrix_path",
    "abs_kink",
];

/// All registered names, in listing order.
pub const FUNCTION_NAMES: [&str; 9] = [
    "const",
    "affine",
    "quadratic",
    "exp",
    "trig_circle",
    "poly_R3",
    "matrix_path",
    "abs_kink",
    "complex_spiral",
];

/// Location of the kink of `abs_kink`.
pub const KINK: f64 = 1.0 / 3.0;

const SPIRAL_RATE: Complex64 = Complex64::new(-0.5, 2.0);

fn max_abs(iv: &Interval) -> f64 {
    iv.a().abs().max(iv.b().abs())
}

fn rotation(t: f64, scale: f64) -> Element {
    let (s, c) = t.sin_cos();
    Element::Matrix(Matrix::from_rows(&[&[scale * c, -scale * s], &[scale * s, scale * c]]))
}

/// Builds the named function in its native space.
pub fn native(name: &str) -> Result<ClosureFunction, CliError> {
    let f = match name {
        "const" => ClosureFunction::new(SpaceKind::Euclidean(3), |_| {
            Element::Euclidean(vec![1.0, -2.0, 0.5])
        })
        .with_derivative(|_| Element::Euclidean(vec![0.0; 3]))
        .with_envelope(|_| 0.0),
        "affine" => ClosureFunction::new(SpaceKind::Euclidean(2), |t| {
            Element::Euclidean(vec![1.0 + 2.0 * t, 3.0 - t])
        })
        .with_derivative(|_| Element::Euclidean(vec![2.0, -1.0]))
        .with_envelope(|_| 5f64.sqrt()),
        "quadratic" => ClosureFunction::scalar(|t| t * t)
            .with_scalar_derivative(|t| 2.0 * t)
            .with_envelope(|iv| 2.0 * max_abs(iv)),
        "exp" => ClosureFunction::scalar(f64::exp)
            .with_scalar_derivative(f64::exp)
            .with_envelope(|iv| iv.b().exp()),
        "trig_circle" => ClosureFunction::new(SpaceKind::Euclidean(2), |t| {
            Element::Euclidean(vec![t.cos(), t.sin()])
        })
        .with_derivative(|t| Element::Euclidean(vec![-t.sin(), t.cos()]))
        .with_envelope(|_| 1.0),
        "poly_R3" => ClosureFunction::new(SpaceKind::Euclidean(3), |t| {
            Element::Euclidean(vec![t, t * t / 2.0, t * t * t / 3.0])
        })
        .with_derivative(|t| Element::Euclidean(vec![1.0, t, t * t]))
        .with_envelope(|iv| {
            let m = max_abs(iv);
            (1.0 + m * m + m.powi(4)).sqrt()
        }),
        // (1 + t) R(t); R and R' are Frobenius-orthogonal with norm √2 each.
        "matrix_path" => ClosureFunction::new(SpaceKind::Matrix { rows: 2, cols: 2 }, |t| rotation(t, 1.0 + t))
            .with_derivative(|t| {
                let (s, c) = t.sin_cos();
                let k = 1.0 + t;
                Element::Matrix(Matrix::from_rows(&[
                    &[c - k * s, -s - k * c],
                    &[s + k * c, c - k * s],
                ]))
            })
            .with_envelope(|iv| {
                let k = (1.0 + iv.a()).abs().max((1.0 + iv.b()).abs());
                (2.0 * (1.0 + k * k)).sqrt()
            }),
        // derivative taken as +1 at the kink itself
        "abs_kink" => ClosureFunction::scalar(|t| (t - KINK).abs())
            .with_scalar_derivative(|t| if t >= KINK { 1.0 } else { -1.0 })
            .with_envelope(|_| 1.0),
        "complex_spiral" => ClosureFunction::new(SpaceKind::Complex(1), |t| {
            Element::Complex(vec![(SPIRAL_RATE * t).exp()])
        })
        .with_derivative(|t| Element::Complex(vec![SPIRAL_RATE * (SPIRAL_RATE * t).exp()]))
        .with_envelope(|iv| SPIRAL_RATE.norm() * (SPIRAL_RATE.re * iv.a()).exp()),
        other => return Err(CliError::UnknownFunction(other.to_string())),
    };
    Ok(f)
}

/// A Euclidean-valued function viewed in `ℝ^d` with the max norm.
///
/// The Euclidean envelope stays valid because `‖v‖_∞ <= ‖v‖_2`.
pub struct MaxNormView<F> {
    inner: F,
    dim: usize,
}

fn to_max(e: Element) -> Element {
    match e {
        Element::Euclidean(v) => Element::MaxNorm(v),
        other => other,
    }
}

impl<F: VectorFunction> VectorFunction for MaxNormView<F> {
    fn space(&self) -> SpaceKind {
        SpaceKind::MaxNorm(self.dim)
    }
    fn eval(&self, t: f64) -> Element {
        to_max(self.inner.eval(t))
    }
    fn derivative(&self, t: f64) -> Option<Element> {
        self.inner.derivative(t).map(to_max)
    }
    fn derivative_source(&self) -> DerivativeSource {
        self.inner.derivative_source()
    }
    fn derivative_norm_envelope(&self, interval: &Interval) -> Option<f64> {
        self.inner.derivative_norm_envelope(interval)
    }
}

/// Resolves `name` in the requested space (`None` = native).
pub fn lookup(name: &str, space: Option<SpaceKind>) -> Result<Box<dyn VectorFunction>, CliError> {
    let f = native(name)?;
    let native_space = f.space();
    match space {
        None => Ok(Box::new(f)),
        Some(s) if s == native_space => Ok(Box::new(f)),
        Some(SpaceKind::MaxNorm(d)) if native_space == SpaceKind::Euclidean(d) => {
            Ok(Box::new(MaxNormView { inner: f, dim: d }))
        }
        Some(s) => Err(CliError::SpaceMismatch {
            function: name.to_string(),
            native: native_space,
            requested: s,
        }),
    }
}
