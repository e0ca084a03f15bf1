//! Exact Drazin, group and spectral-idempotent computations for square
//! matrices over Q(i), together with checkers and evaluators for the
//! generalized Jacobson transfer formulas.

pub mod arith;
pub mod drazin;
pub mod error;
pub mod generate;
pub mod jacobson;
pub mod verify;

pub use arith::{GaussianRational, Matrix};
pub use error::{Error, Result};
