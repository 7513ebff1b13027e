//! Exact verification of rationally integrable dual billiards on conics and
//! of their dual projective billiards.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactnum`] — exact scalars over ℚ and ℚ(√d), plus a high-precision
//!   approximate fallback;
//! * [`projcore`] — projective points and lines, polarity, Möbius maps and
//!   the involution family `η_ρ`;
//! * [`conicpencil`] — conics, tangency, pencils and their involutions,
//!   space-form transversals and caustic checks;
//! * [`dualbilliard`] — the catalog of dual billiard structures on the conic
//!   `{w = z²}`, their involutions `σ_P` and residue calculus;
//! * [`integrals`] — sparse polynomials, homogeneous rational first integrals,
//!   invariance checks and projective equivalences;
//! * [`quasihomog`] — quasihomogeneous polynomials, root divisors, the set `ℳ`
//!   of admissible residues and primitive invariant polynomials;
//! * [`hessianlab`] — Hessians of plane curves and the residue identities they
//!   satisfy;
//! * [`projbilliard`] — projective billiards on the parabola `{x₂ = x₁²}`,
//!   reflection, flow simulation and their integrals;
//! * [`sampling`] — deterministic seeded sampling of rational test points.
//!
//! ```
//! use conic_billiards::dualbilliard::{residue_report, BilliardSpec};
//! use conic_billiards::exactnum::Scalar;
//!
//! let report = residue_report(&BilliardSpec::B1).unwrap();
//! assert_eq!(report.total, Scalar::int(4));
//! ```

#![warn(missing_docs)]

pub mod conicpencil;
pub mod dualbilliard;
pub mod exactnum;
pub mod hessianlab;
pub mod integrals;
pub mod projbilliard;
pub mod projcore;
pub mod quasihomog;
pub mod sampling;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/involutions.md")]
    mod involutions {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/quasihomogeneous.md")]
    mod quasihomogeneous {}
    #[doc = include_str!("../../../book/src/hessian.md")]
    mod hessian {}
    #[doc = include_str!("../../../book/src/projective-billiards.md")]
    mod projective_billiards {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
