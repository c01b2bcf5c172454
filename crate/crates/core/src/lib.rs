//! Exact computations with super coinvariant algebras of the complex
//! reflection groups `G(m,p,n)`.
//!
//! Everything is computed over the rationals with arbitrary-precision
//! arithmetic. The crate is organised bottom-up:
//!
//! - [`qseries`]: q-integers, q-Stirling numbers and two-variable Hilbert series.
//! - [`superpoly`]: polynomials in commuting `x` and anticommuting `θ` variables,
//!   plus a normal-ordered algebra of differential operators.
//! - [`linalg`]: sparse exact row reduction, kernels and subspaces.
//! - [`groups`]: invariant data attached to `G(m,p,n)`.
//! - [`artin`] and [`groebner`]: monomial bases of the classical coinvariant ring.
//! - [`harmonics`]: harmonic differential forms, closures and exactness checks.
//! - [`verify`]: named verification suites producing structured reports.

pub mod artin;
pub mod error;
pub mod groebner;
pub mod groups;
pub mod harmonics;
pub mod linalg;
pub mod qseries;
pub mod superpoly;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational scalar. Always stored reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Bumped whenever an algorithm change can alter stored results.
pub const ENGINE_VERSION: u32 = 1;
