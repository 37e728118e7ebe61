//! Solving bilinear polynomial systems over prime fields.
//!
//! The crate implements y-XL, y-MXL and the hybrid y-HXL solver, the
//! closed-form degree bounds that drive them, empirical semiregularity
//! experiments and bit-complexity estimates.

pub mod analysis;
pub mod error;
pub mod field;
pub mod harness;
pub mod linalg;
pub mod macaulay;
pub mod polyring;
pub mod solvers;

pub use error::{Error, Result};
pub use field::FieldCtx;
