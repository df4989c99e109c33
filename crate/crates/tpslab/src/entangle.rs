//! Density operators and the entanglement bookkeeping that makes structures
//! comparable: von Neumann entropy per factor, pairwise mutual information,
//! product residuals, and their behavior under time evolution.
//!
//! Entropy is always in natural units (nats). All quantities are computed in
//! the internal basis of the structure under scrutiny, i.e. after undoing its
//! frame; Frobenius norms and entropies are invariant under that rotation.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::eigh::eigh_values;
use crate::numkernel::matrix::ComplexMatrix;
use crate::numkernel::random::{haar_state_vector, RngStream};
use crate::numkernel::tensor::{kron_all, partial_trace};
use crate::spectrum::Hamiltonian;
use crate::tps::TensorProductStructure;

/// Eigenvalues at or below this are treated as exact zeros inside entropies.
pub const ENTROPY_EIGENVALUE_FLOOR: f64 = 1e-12;

/// Relative Hermiticity and trace tolerance for admission as a state.
const STATE_TOL: f64 = 1e-10;

/// Number of Haar-random probes in the canonical family.
pub const DEFAULT_HAAR_PROBES: usize = 8;

/// A validated density operator: Hermitian, unit trace, positive up to
/// round-off.
#[derive(Debug, Clone)]
pub struct DensityState {
    matrix: ComplexMatrix,
}

impl DensityState {
    /// Admits `matrix` after checking Hermiticity, unit trace, and spectrum
    /// bounded below by `-1e-10`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let scale = matrix.frobenius_norm().max(1.0);
        let residual = matrix.hermitian_residual();
        if residual > STATE_TOL * scale {
            return Err(Error::NotHermitian { residual, tol: STATE_TOL * scale });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidInput(format!(
                "density operator trace is {trace}, expected 1"
            )));
        }
        let min_eig = eigh_values(&matrix)?
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidInput(format!(
                "density operator has negative eigenvalue {min_eig}"
            )));
        }
        Ok(Self { matrix })
    }

    /// The pure state `|v><v|` after normalizing `v`.
    pub fn pure_state(v: &[Complex64]) -> Result<Self> {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::ZeroVector);
        }
        let n = v.len();
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj() / (norm * norm));
        Ok(Self { matrix })
    }

    /// The computational basis state `|k><k|`.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut v = vec![Complex64::ZERO; dim];
        v[k] = Complex64::ONE;
        Self::pure_state(&v)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Forward evolution `U(t) rho U(t)'` under a clustered Hamiltonian,
    /// reusing its cached decomposition.
    pub fn evolve(&self, h: &Hamiltonian, t: f64) -> DensityState {
        let u = h.evolution_operator(t);
        DensityState { matrix: self.matrix.conjugate_by(&u) }
    }
}

/// Tensor product of states, in the given factor order.
pub fn product_state(factors: &[DensityState]) -> Result<DensityState> {
    let refs: Vec<&ComplexMatrix> = factors.iter().map(|f| f.matrix()).collect();
    Ok(DensityState { matrix: kron_all(&refs)? })
}

/// Von Neumann entropy `-sum lambda ln lambda` in nats, flooring eigenvalues
/// at `1e-12` so exact zeros from pure marginals do not produce NaN.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let mut entropy = 0.0;
    for lambda in eigh_values(rho)? {
        if lambda > ENTROPY_EIGENVALUE_FLOOR {
            entropy -= lambda * lambda.ln();
        }
    }
    Ok(entropy)
}

/// Mutual information between a pair of factors.
#[derive(Debug, Clone, Serialize)]
pub struct MutualInformation {
    pub first: usize,
    pub second: usize,
    pub value: f64,
}

/// Per-factor entropies of a state relative to a structure, plus pairwise
/// mutual information.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyProfile {
    pub per_factor: Vec<f64>,
    pub pair_mutual_information: Vec<MutualInformation>,
}

impl EntropyProfile {
    /// Per-factor entropies sorted ascending: the relabeling-invariant
    /// fingerprint used by nonequivalence certificates.
    pub fn sorted_multiset(&self) -> Vec<f64> {
        let mut m = self.per_factor.clone();
        m.sort_by(f64::total_cmp);
        m
    }
}

/// The state rotated into the structure's internal basis.
fn internal_state(state: &DensityState, tps: &TensorProductStructure) -> Result<ComplexMatrix> {
    if state.dim() != tps.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} does not match structure dimension {}",
            state.dim(),
            tps.dim()
        )));
    }
    Ok(state.matrix().conjugate_by(&tps.frame().adjoint()))
}

/// Reduced state on the factors `keep` (ascending), relative to a structure.
pub fn reduced_state(
    state: &DensityState,
    tps: &TensorProductStructure,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let internal = internal_state(state, tps)?;
    partial_trace(&internal, tps.factor_dims(), keep)
}

/// Entropy profile of `state` as seen through `tps`: single-factor entropies
/// and, when there are at least two factors, mutual information for every
/// factor pair.
pub fn entropy_profile(
    state: &DensityState,
    tps: &TensorProductStructure,
) -> Result<EntropyProfile> {
    let internal = internal_state(state, tps)?;
    let dims = tps.factor_dims();
    let n = dims.len();

    let mut per_factor = Vec::with_capacity(n);
    for j in 0..n {
        let rho_j = partial_trace(&internal, dims, &[j])?;
        per_factor.push(von_neumann_entropy(&rho_j)?);
    }

    let mut pair_mutual_information = Vec::new();
    for j in 0..n {
        for k in (j + 1)..n {
            let rho_jk = partial_trace(&internal, dims, &[j, k])?;
            let s_jk = von_neumann_entropy(&rho_jk)?;
            pair_mutual_information.push(MutualInformation {
                first: j,
                second: k,
                value: per_factor[j] + per_factor[k] - s_jk,
            });
        }
    }

    Ok(EntropyProfile { per_factor, pair_mutual_information })
}

/// Frobenius distance between the state (in the structure's internal basis)
/// and the tensor product of its own single-factor marginals: zero exactly
/// for product states.
pub fn product_residual(state: &DensityState, tps: &TensorProductStructure) -> Result<f64> {
    let internal = internal_state(state, tps)?;
    let dims = tps.factor_dims();
    let marginals: Vec<ComplexMatrix> = (0..dims.len())
        .map(|j| partial_trace(&internal, dims, &[j]))
        .collect::<Result<_>>()?;
    let refs: Vec<&ComplexMatrix> = marginals.iter().collect();
    let reconstruction = kron_all(&refs)?;
    Ok((&internal - &reconstruction).frobenius_norm())
}

/// One sampled instant of an entropy trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub profile: EntropyProfile,
    pub product_residual: f64,
}

/// Evolves `initial` across `t_grid` and profiles each instant against the
/// structure.
pub fn entropy_trajectory(
    initial: &DensityState,
    h: &Hamiltonian,
    tps: &TensorProductStructure,
    t_grid: &[f64],
) -> Result<Vec<TrajectoryPoint>> {
    t_grid
        .iter()
        .map(|&t| {
            let state = initial.evolve(h, t);
            Ok(TrajectoryPoint {
                t,
                profile: entropy_profile(&state, tps)?,
                product_residual: product_residual(&state, tps)?,
            })
        })
        .collect()
}

/// Outcome of a separability persistence scan along a time grid.
#[derive(Debug, Clone, Serialize)]
pub struct SeparabilityReport {
    pub max_residual: f64,
    pub argmax_t: f64,
    pub tol: f64,
    /// True when the evolution kept the state a product at every grid time.
    pub persists: bool,
}

/// Default product-residual tolerance for a space of the given dimension.
pub fn default_separability_tol(dim: usize) -> f64 {
    1e-7 * dim as f64
}

/// Checks whether evolution under `h` keeps `initial` a product state across
/// `t_grid`. The initial state itself must be a product within `tol`.
pub fn separability_persistence(
    initial: &DensityState,
    h: &Hamiltonian,
    tps: &TensorProductStructure,
    t_grid: &[f64],
    tol: f64,
) -> Result<SeparabilityReport> {
    let initial_residual = product_residual(initial, tps)?;
    if initial_residual > tol {
        return Err(Error::NotProductState { residual: initial_residual, tol });
    }
    let mut max_residual = initial_residual;
    let mut argmax_t = t_grid.first().copied().unwrap_or(0.0);
    for &t in t_grid {
        let state = initial.evolve(h, t);
        let residual = product_residual(&state, tps)?;
        if residual > max_residual {
            max_residual = residual;
            argmax_t = t;
        }
    }
    Ok(SeparabilityReport { max_residual, argmax_t, tol, persists: max_residual <= tol })
}

/// The canonical probe family on a space: every computational basis state,
/// the uniform superposition, and `haar_count` seeded Haar-random pure
/// states. Random probes matter: special evolution times can map all basis
/// probes back to products while generic states stay entangled.
pub fn canonical_probe_family(
    dim: usize,
    haar_count: usize,
    rng: &mut RngStream,
) -> Result<Vec<DensityState>> {
    let mut probes = Vec::with_capacity(dim + 1 + haar_count);
    for k in 0..dim {
        probes.push(DensityState::basis_state(dim, k)?);
    }
    let uniform = vec![Complex64::ONE; dim];
    probes.push(DensityState::pure_state(&uniform)?);
    for _ in 0..haar_count {
        let v = haar_state_vector(dim, rng);
        probes.push(DensityState::pure_state(&v)?);
    }
    Ok(probes)
}
