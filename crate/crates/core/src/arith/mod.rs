//! Exact scalar and dense matrix arithmetic over the Gaussian rationals Q(i).

mod json;
mod matrix;
mod scalar;

pub use json::{matrix_from_json, matrix_to_json};
pub use matrix::{product, Matrix, Rref};
pub use scalar::GaussianRational;
