//! Exactly solvable measurement models at desk scale.
//!
//! Each module pairs a closed-form result with a brute-force route that can
//! check it: the quantum domino chain, the X-Y chain detector, the particle
//! detector with its POVM, the radiating chain, BCS mean-field dynamics and
//! coherent-state classical projections.

pub mod classical;
pub mod dense;
pub mod detector;
pub mod error;
pub mod meanfield;
pub mod qdomino;
pub mod quadrature;
pub mod radiating;
pub mod specfun;
pub mod verify;
pub mod xychain;

pub use error::{Error, Result};
pub use num_complex::Complex64;
