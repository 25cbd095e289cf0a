//! Density matrices, entropies, channels and the projector lattice.

mod channel;
mod entropy;
mod operator;
mod subspace;

pub(crate) use channel::validate_prior;
pub use channel::{CqSource, QuantumChannel};
pub use entropy::{
    eta, holevo_of_outputs, holevo_quantity, mean_entropy, relative_entropy, shannon_entropy,
    von_neumann_entropy, RelativeEntropy,
};
pub(crate) use operator::same_dim;
pub use operator::{
    spectral_decomposition, tensor, tensor_power_of, tensor_states, DensityMatrix, HermitianOperator,
    SpectralDecomposition,
};
pub use subspace::{OperatorMap, Subspace};

/// Hermiticity tolerance (max absolute entry deviation).
pub const TAU_HERM: f64 = 1e-10;
/// Trace and positivity tolerance for density matrices.
pub const TAU_STATE: f64 = 1e-10;
/// Prior normalization tolerance.
pub const TAU_PRIOR: f64 = 1e-12;
/// Eigenvalues at or below this are outside the support.
pub const TAU_SUPPORT: f64 = 1e-12;
/// Column orthonormality tolerance for isometries.
pub const TAU_ORTHO: f64 = 1e-10;
/// Relative residual cut used when orthonormalizing spanning sets.
pub const TAU_RANK: f64 = 1e-10;
/// Distance below which a direction counts as lying in both ranges of a meet.
pub const TAU_MEET: f64 = 1e-6;

/// `apply_channel` under its conventional name.
pub fn apply_channel(ch: &QuantumChannel, rho: &DensityMatrix) -> crate::Result<DensityMatrix> {
    ch.apply(rho)
}
