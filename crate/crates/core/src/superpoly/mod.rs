//! Super-polynomials in commuting `x_1..x_n` and anticommuting
//! `θ_1..θ_n`, with the differential-operator calculus acting on them.
//!
//! All indices in the Rust API are 0-based; the text format is 1-based.

mod monomial;
mod operator;
mod poly;
pub mod text;

pub use monomial::{
    binomial, count_exponent_vectors, exponent_vectors, monomial_basis, SuperMonomial, ThetaSet,
};
pub use operator::{OpMonomial, Operator};
pub use poly::{falling, SuperPoly};
