//! Numerical laboratory for gradient blow-up and global existence of the
//! isentropic Euler system with pressure p = ρ^γ.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the common double-precision instantiations.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod burgers;
pub mod criteria;
pub mod error;
pub mod euler;
pub mod fields;
pub mod initial_data;
pub mod linalg;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid64 = fields::Grid<f64>;
pub type ScalarField64 = fields::ScalarField<f64>;
pub type VectorField64 = fields::VectorField<f64>;
pub type TensorField64 = fields::TensorField<f64>;
pub type FluidState64 = fields::FluidState<f64>;
pub type Grid32 = fields::Grid<f32>;
pub type FluidState32 = fields::FluidState<f32>;
