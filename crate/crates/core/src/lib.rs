//! Weighted-L² polynomial approximation toolkit.
//!
//! The pipeline runs from a weight density `a` on the line to a verdict on
//! whether polynomials are dense in `L²(a)`:
//!
//! 1. [`measure`] defines the weight and its base measure.
//! 2. [`laplace`] probes `M(s; a) = ∫ e^{sx} a(x) dx`, estimates the half-width
//!    of the neighbourhood of `0` where it is finite, and computes moments.
//! 3. [`orthopoly`] builds the orthonormal polynomials of `a` with the
//!    Stieltjes recurrence.
//! 4. [`projection`] expands functions in that basis and tracks Parseval
//!    residuals.
//! 5. [`conditions`] audits the hypotheses (positivity, finiteness of the
//!    Laplace transform, tail decay) and emits one certification record.
//!
//! [`quadrature`] is the integration engine underneath all of it and
//! [`experiment`] drives the command-line runner.

pub mod conditions;
pub mod error;
pub mod experiment;
pub mod laplace;
pub mod measure;
pub mod orthopoly;
pub mod projection;
pub mod quadrature;

pub use error::{Error, Result};
pub use measure::{BaseMeasure, Family, WeightDensity};
pub use quadrature::{IntegralOutcome, Interval, QuadraturePlan, Verdict};
