//! A desk-scale numerical laboratory for quantum observable algebras.
//!
//! The crate studies how much structure a Hamiltonian alone pins down: its
//! symmetry group (the commutant), the tensor product structures compatible
//! with its spectrum, and the entanglement signatures that tell two such
//! structures apart. The pieces:
//!
//! * [`numkernel`]: dense complex matrices, a Hermitian eigensolver, tensor
//!   products, partial traces, seeded random ensembles, and numeric ranks.
//! * [`spectrum`]: spectral clustering of Hamiltonians, commutant dimension
//!   counting, and sampling of commuting unitaries.
//! * [`tps`]: tensor product structures as tuples of factor dimensions plus a
//!   frame unitary, their observable subalgebras, the dimension ledger that
//!   compares the symmetry group against the structures it must label, and
//!   entropy-based nonequivalence certificates.
//! * [`entangle`]: density operators, von Neumann entropy profiles across a
//!   tensor product structure, mutual information, and time evolution.
//! * [`lab`]: configuration-driven experiments with reproducible on-disk
//!   records.
//!
//! All stochastic behavior is driven by explicit counter-based generators
//! seeded from a `u64`, so identical configurations produce byte-identical
//! numeric records.

pub mod entangle;
pub mod error;
pub mod lab;
pub mod numkernel;
pub mod spectrum;
pub mod tps;

pub use error::{Error, Result};
pub use numkernel::{ComplexMatrix, RngStream};
