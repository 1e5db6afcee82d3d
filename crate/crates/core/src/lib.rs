//! Global quantization calculus on discretized phase space.
//!
//! The crate builds τ-quantized, Weyl and anti-Wick operators as dense
//! matrices over periodic grids, carries out the exact asymptotic-expansion
//! calculus for polynomial symbols, evaluates weight-sequence machinery
//! (associated functions, ultrapolynomials), and checks the Gaussian
//! convolution / Laplace identity numerically.

pub mod config;
pub mod corpus;
pub mod defaults;
pub mod error;
pub mod expansion;
pub mod gaussconv;
mod fft;
pub mod grid;
pub mod quant;
pub mod stft;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;
