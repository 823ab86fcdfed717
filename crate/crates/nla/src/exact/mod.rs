//! Exact scalar arithmetic and dense linear algebra over the Gaussian
//! rationals.
//!
//! Everything downstream (forms, series, normal forms) reduces to row
//! operations on matrices over Q(i), so this module is the only place that
//! touches numbers. [`Rational`] keeps values in machine words while they fit
//! and falls back to arbitrary precision when they do not, which is what makes
//! the larger acceptance sweeps affordable.

mod gaussian;
mod matrix;
mod rational;
mod subspace;

pub use gaussian::GaussianRational;
pub use matrix::{Matrix, MatrixError};
pub use rational::Rational;
pub use subspace::{Ambient, Subspace};
