//! Numerics for Fourier multipliers on variable-exponent Lebesgue spaces.

// `!(x < y)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod catalog;
pub mod error;
pub mod estimate;
pub mod exponent;
pub mod expr;
pub mod grid;
pub mod oracle;
pub mod quad;
pub mod symbol;
pub mod transform;

pub use error::{Error, Result};
