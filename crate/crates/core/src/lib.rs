//! Classical-quantum channel coding at desk scale.
//!
//! Random codebooks over a finite input alphabet are sent through a quantum
//! channel and decoded by a sequentially orthogonalized von Neumann
//! measurement built from typical subspaces. On top of that sit a two-stage
//! decoder for finite compound channels, a bisection cascade of two-outcome
//! measurements, and an embedding of classical memoryless channels.

pub mod cascade;
pub mod codec;
pub mod compound;
mod error;
pub mod harness;
pub mod linalg;
pub mod quantum;
pub mod rng;
pub mod simulator;
pub mod stats;
pub mod typicality;

pub use error::{check_dim, checked_pow, Error, Result};
pub use faer::complex_native::c64;

/// Dimension cap applied when nothing else is configured.
pub const DEFAULT_MAX_DIM: usize = 4096;
