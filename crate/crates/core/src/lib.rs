//! Exact quantum coordinate algebras of `GL(n)` and their convolution
//! models on double flag varieties over `F_q`.

pub mod cache;
pub mod cli;
pub mod convolution;
pub mod error;
pub mod flaggeo;
pub mod qalgebra;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
