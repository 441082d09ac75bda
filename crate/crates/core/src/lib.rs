//! Convex-combination quadrature for functions `f: [a, b] -> X` with values
//! in a finite-dimensional normed space, together with computable upper
//! bounds on the error.
//!
//! A rule is a set of relative nodes `0 <= u_1 <= ... <= u_n <= 1` and
//! positive weights summing to one; on `[a, b]` it approximates
//! `∫_a^b f` by `(b - a) Σ p_i f(a + u_i (b - a))`. The error is bounded
//! through the rule's Peano kernel at three levels of precision (see
//! [`bounds`]), using seminorms of `‖f'‖` from [`seminorm`].
//!
//! ```
//! use certquad::{apply_rule, certify, preset, ClosureFunction, Interval, Level, NormRegime};
//!
//! let f = ClosureFunction::scalar(f64::exp)
//!     .with_scalar_derivative(f64::exp)
//!     .with_envelope(|iv| iv.b().exp());
//! let rule = preset("qt", &[]).unwrap();
//! let iv = Interval::unit();
//! let q = apply_rule(&f, &rule, iv).unwrap();
//! let cert = certify(&f, &rule, iv, NormRegime::Linf, Level::Three, 64).unwrap();
//! assert!((q.norm() - (std::f64::consts::E - 1.0)).abs() <= cert.bound);
//! assert!(cert.certified);
//! ```

pub mod bounds;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod rules;
pub mod seminorm;
pub mod space;
pub mod sum;

pub use bounds::{
    bound_level1, bound_level2, bound_level3, closed_form_constant, geometry_factor, ErrorCertificate, Level,
};
pub use engine::{
    apply_rule, certify, integrate_adaptive, integrate_composite, oracle_integral, PanelResult, QuadratureResult,
    ORACLE_RESOLUTION,
};
pub use error::{QuadError, Result};
pub use geometry::{
    conjugate_exponent, mu, uniform_partition, Exponent, HolderPair, Interval, NormRegime, Partition,
};
pub use kernel::{identity_residual, PeanoKernel};
pub use rules::{make_rule, parse_rule_spec, preset, QuadratureRule};
pub use seminorm::{seminorm, seminorm_profile, SeminormEstimate, SeminormProfile, DEFAULT_RESOLUTION};
pub use space::{ClosureFunction, DerivativeSource, Element, SpaceKind, VectorFunction};
