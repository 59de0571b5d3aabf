//! Weighted numerical radii of matrices with respect to a positive
//! semidefinite weight, and numerical checkers for the inequalities they satisfy.

pub mod ensemble;
pub mod error;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod radius;
pub mod scalar;
pub mod spectral;
pub mod suite;
pub mod weighted;

pub use error::{Error, Result};
pub use linalg::Tolerances;
pub use matrix::Matrix;
pub use radius::{ThetaOptimum, WeightPair};
pub use scalar::Real;
pub use weighted::Weight;

/// Complex scalar in double precision.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision complex matrix.
pub type ComplexMatrix = Matrix<f64>;
/// Single-precision complex matrix.
pub type ComplexMatrix32 = Matrix<f32>;
/// Double-precision weight.
pub type WeightF64 = Weight<f64>;
/// Single-precision weight.
pub type WeightF32 = Weight<f32>;
