//! Exact polynomials and homogeneous rational first integrals of the dual
//! billiards on `γ = {wt = z²}`: the integral catalog, exact invariance
//! verification, restriction to tangent lines, the `ρ ↔ 4 − ρ` swap, and
//! the projective equivalences between complex-conjugate configurations.
//!
//! Equality of rational functions is always decided by cross-multiplication.

pub mod catalog;
pub mod poly;
mod rational;
pub mod verify;

pub use catalog::{catalog_factors, catalog_integral, classpqr_factors, classpqr_integral, exotic_coefficients};
pub use poly::{Poly, RatFn, UniPoly};
pub use rational::{FactoredRational, HomRational};
pub use verify::{
    equivalence_pullback_check, restrict_to_line, swap_check, verify_invariance, Counterexample, EquivalenceCase,
    EquivalenceReport, InvarianceReport,
};

use thiserror::Error;

use crate::dualbilliard::DualError;
use crate::exactnum::NumError;

/// Errors raised by integral computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegralError {
    /// No catalog integral is known for the spec.
    #[error("no catalog integral for spec {0}")]
    UnknownSpec(String),
    /// `ρ` is not in the admissible residue set.
    #[error("rho = {0} is not an admissible residue")]
    RhoNotInM(String),
    /// Numerator and denominator are not homogeneous of one common degree.
    #[error("numerator and denominator are not homogeneous of equal degree")]
    NotHomogeneous,
    /// Zero denominator.
    #[error("zero denominator")]
    ZeroDenominator,
    /// The line lies in the zero or polar locus, or is vertical.
    #[error("line lies in the zero or polar locus of R or is not a graph over z")]
    LineInLocus,
    /// Dual billiard failure.
    #[error(transparent)]
    Dual(#[from] DualError),
    /// Scalar arithmetic failure.
    #[error(transparent)]
    Num(#[from] NumError),
}
