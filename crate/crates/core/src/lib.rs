//! Refinements of the triangle and Cauchy-Schwarz inequalities, their
//! operator consequences (mixed Schwarz, numerical radius, geometric means),
//! and seeded harnesses that check every inequality chain numerically.

// `!(x >= y)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod linalg;
pub mod operator;
pub mod quadrature;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
