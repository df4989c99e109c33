//! Dense complex linear algebra sized for desk-scale Hilbert spaces.
//!
//! Everything here is deliberately self-contained: matrices are row-major
//! `Vec<Complex64>` buffers, the Hermitian eigensolver is a cyclic complex
//! Jacobi iteration, and randomness flows through explicit counter-based
//! streams so every result is reproducible from a single `u64` seed.

pub mod eigh;
pub mod matrix;
pub mod random;
pub mod rank;
pub mod tensor;

pub use eigh::{eigh, eigh_values, unitary_exp, Sign, SpectralDecomposition};
pub use matrix::{c, commutator, pauli_x, pauli_y, pauli_z, ComplexMatrix};
pub use random::{
    ginibre, gue, haar_state_vector, haar_unitary, hermitian_with_multiplicities,
    random_hermitian, stream_from_seed, RngStream,
};
pub use rank::{
    commutation_map, generated_algebra_dim, nullspace_dim, nullspace_dim_with_scale,
    singular_values, span_intersection_dim, span_rank_complex, span_rank_real, spans_equal,
    RANK_TOL,
};
pub use tensor::{embed_at, kron, kron_all, kron_with_cap, partial_trace, DEFAULT_DIM_CAP};
