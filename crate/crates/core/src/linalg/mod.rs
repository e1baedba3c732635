//! Dense complex linear algebra on multipartite spaces.

mod jacobi;
mod layout;
mod matrix;
pub mod ops;
pub mod random;
mod spectral;

pub use layout::{Subsystem, SystemLayout};
pub use matrix::{
    basis_vector, inner_product, tensor, tensor_vec, vector_norm, ComplexMatrix, C64,
};
pub use ops::{partial_trace, partial_transpose, permute_systems};
pub use random::{haar_unitary, haar_unitary_with, seeded_rng, StateRng};
pub use spectral::{
    eigh, eigvalsh, fidelity, fidelity_matrices, singular_values, sqrt_psd, trace_norm,
    HermitianEigen, HERMITIAN_TOL, PSD_CLAMP,
};
