//! Exact scalar arithmetic over ℚ and a single quadratic extension ℚ(√d),
//! with an explicitly separated high-precision floating fallback.
//!
//! Every geometric constant in the crate — residues `ρ`, the coefficients
//! `c_j`, the cube root of unity `ε ∈ ℚ(√−3)`, `i ∈ ℚ(√−1)` — is a
//! [`Scalar`]. Only one radicand is in play per computation; combining two
//! different quadratic fields is a [`NumError::MixedField`] error.

pub mod approx;
mod scalar;
mod serde_impl;

pub use approx::{precision_bits, Approx, Real, DEFAULT_EPSILON, DEFAULT_PRECISION_BITS};
pub use scalar::{
    int_sqrt_exact, parse_rational, rational_sqrt_exact, rational_to_string, scalar_arith,
    square_free_decompose, ArithOp, Quad, Rational, Scalar,
};

use thiserror::Error;

/// Errors raised by scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    /// Division by an exact zero.
    #[error("division by zero")]
    DivisionByZero,
    /// Operands from incompatible fields (two radicands, or exact with approximate).
    #[error("incompatible fields: {left} and {right}")]
    MixedField {
        /// Field of the left operand.
        left: String,
        /// Field of the right operand.
        right: String,
    },
    /// The operation is only defined for exact values.
    #[error("operation not supported for approximate values")]
    ApproxNotSupported,
    /// An order comparison was requested on a non-real value.
    #[error("value is not real")]
    NotReal,
    /// The result does not lie in ℚ or the current quadratic field.
    #[error("not representable exactly: {0}")]
    NotRepresentable(String),
    /// Malformed numeric text.
    #[error("cannot parse number: {0}")]
    Parse(String),
}
