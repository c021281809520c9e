//! Operator-algebraic models of two-dimensional integrable QFT at desk scale.
//!
//! The crate builds factorizing S-matrix models, the S-symmetric Fock space on a
//! rapidity grid with particle-number truncation, wedge-local fields, warped
//! convolutions on finite spectral representations, and the modular nuclearity
//! map, together with residual checks for the identities these objects satisfy.

pub mod error;
pub mod fock;
pub mod geometry;
pub mod linalg;
pub mod nuclearity;
pub mod quadrature;
pub mod singleparticle;
pub mod smatrix;
pub mod warp;
pub mod wedgefield;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense real matrix.
pub type RMatrix = nalgebra::DMatrix<f64>;
