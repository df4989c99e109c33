//! Spectral structure of a Hamiltonian: eigenvalue clustering, the commutant
//! (its group of spectrum-preserving symmetries), and sampling from it.
//!
//! The commutant of a Hamiltonian with eigenvalue multiplicities
//! `(m_1, .., m_r)` is the group of unitaries block diagonal in its eigenbasis,
//! with real dimension `sum m_i^2`; the maximal torus inside it (phases per
//! eigenvector line) has dimension `sum m_i`, the Hilbert space dimension.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::eigh::{eigh, exp_from_decomposition, Sign, SpectralDecomposition};
use crate::numkernel::matrix::{c, ComplexMatrix};
use crate::numkernel::random::{haar_unitary, RngStream};

/// Default clustering tolerance as a fraction of the spectral norm.
pub const DEFAULT_CLUSTER_TOL_FACTOR: f64 = 1e-8;

/// Factor above the clustering tolerance within which a gap is flagged as
/// ambiguous rather than silently resolved.
const AMBIGUITY_WINDOW: f64 = 10.0;

/// One eigenvalue cluster: a maximal run of near-equal eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Mean of the eigenvalues in the cluster.
    pub value: f64,
    /// Index of the first member in the sorted spectrum.
    pub start: usize,
    /// Number of eigenvalues in the cluster.
    pub multiplicity: usize,
}

impl Cluster {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.multiplicity
    }
}

/// Dimension counts attached to a clustered spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutantDescription {
    /// Cluster sizes in ascending eigenvalue order.
    pub multiplicities: Vec<usize>,
    /// Real dimension of the commutant group: `sum m_i^2`.
    pub dimension: usize,
    /// Real dimension of its maximal torus: `sum m_i`, the space dimension.
    pub torus_dimension: usize,
}

/// A Hamiltonian with its spectrum resolved into clusters.
///
/// Construction runs the eigensolver once; evolution operators and commutant
/// samples all reuse the cached decomposition. Eigenvectors are
/// re-orthonormalized within each cluster so block-structured sampling is
/// deterministic.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    matrix: ComplexMatrix,
    decomposition: SpectralDecomposition,
    clusters: Vec<Cluster>,
    cluster_tol: f64,
    ambiguity_witness: Option<f64>,
}

/// Clusters `matrix`'s spectrum with an explicit absolute tolerance:
/// consecutive eigenvalues whose gap is at most `cluster_tol` land in the
/// same cluster.
///
/// The result carries an `is_ambiguous` flag when the partition is fragile:
/// some gap falls within a factor of ten above the tolerance, or chained
/// merges stretched a cluster wider than the tolerance itself.
pub fn cluster_spectrum(matrix: &ComplexMatrix, cluster_tol: f64) -> Result<Hamiltonian> {
    if !cluster_tol.is_finite() || cluster_tol < 0.0 {
        return Err(Error::InvalidInput(format!(
            "cluster tolerance must be finite and nonnegative, got {cluster_tol}"
        )));
    }
    let decomposition = eigh(matrix)?;
    Ok(build(matrix.clone(), decomposition, cluster_tol))
}

/// Same as [`cluster_spectrum`] with the tolerance picked from the spectrum
/// itself: `1e-8` times the spectral norm.
pub fn cluster_spectrum_auto(matrix: &ComplexMatrix) -> Result<Hamiltonian> {
    let decomposition = eigh(matrix)?;
    let spectral_norm = decomposition
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, &x| m.max(x.abs()));
    let cluster_tol = DEFAULT_CLUSTER_TOL_FACTOR * spectral_norm;
    Ok(build(matrix.clone(), decomposition, cluster_tol))
}

fn build(
    matrix: ComplexMatrix,
    mut decomposition: SpectralDecomposition,
    cluster_tol: f64,
) -> Hamiltonian {
    let values = &decomposition.eigenvalues;
    let n = values.len();

    let mut clusters: Vec<Cluster> = Vec::new();
    let mut ambiguity_witness: Option<f64> = None;
    let mut start = 0;
    for i in 1..=n {
        let split = i == n || {
            let gap = values[i] - values[i - 1];
            if gap > cluster_tol && gap <= AMBIGUITY_WINDOW * cluster_tol {
                ambiguity_witness.get_or_insert(gap);
            }
            gap > cluster_tol
        };
        if split {
            let members = &values[start..i];
            let spread = members[members.len() - 1] - members[0];
            if spread > cluster_tol {
                // Chained sub-tolerance gaps merged a wider-than-tol cluster.
                ambiguity_witness.get_or_insert(spread);
            }
            let value = members.iter().sum::<f64>() / members.len() as f64;
            clusters.push(Cluster { value, start, multiplicity: i - start });
            start = i;
        }
    }

    for cluster in &clusters {
        if cluster.multiplicity > 1 {
            reorthonormalize_columns(&mut decomposition.eigenvectors, cluster.range());
        }
    }

    Hamiltonian { matrix, decomposition, clusters, cluster_tol, ambiguity_witness }
}

/// Modified Gram-Schmidt over a contiguous column range, in place.
fn reorthonormalize_columns(v: &mut ComplexMatrix, range: std::ops::Range<usize>) {
    let n = v.rows();
    for k in range.clone() {
        for j in range.start..k {
            let dot: num_complex::Complex64 =
                (0..n).map(|r| v.get(r, j).conj() * v.get(r, k)).sum();
            for r in 0..n {
                let val = v.get(r, k) - v.get(r, j) * dot;
                v.set(r, k, val);
            }
        }
        let norm = (0..n).map(|r| v.get(r, k).norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            for r in 0..n {
                let val = v.get(r, k) * inv;
                v.set(r, k, val);
            }
        }
    }
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        self.decomposition.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    /// Sorted eigenvalues, duplicates included.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.decomposition.eigenvalues
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    /// True when the clustering was fragile under the tolerance used; treat
    /// downstream dimension counts with suspicion.
    pub fn is_ambiguous(&self) -> bool {
        self.ambiguity_witness.is_some()
    }

    /// The gap or in-cluster spread that made the clustering fragile.
    pub fn ambiguity_witness(&self) -> Option<f64> {
        self.ambiguity_witness
    }

    /// Errors out when the clustering is ambiguous, for callers that refuse
    /// to report fragile dimension counts.
    pub fn require_unambiguous(&self) -> Result<()> {
        match self.ambiguity_witness {
            Some(gap) => Err(Error::AmbiguousClustering { gap, tol: self.cluster_tol }),
            None => Ok(()),
        }
    }

    /// Cluster sizes in ascending eigenvalue order.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.multiplicity).collect()
    }

    /// Representative (mean) eigenvalue per cluster.
    pub fn cluster_values(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.value).collect()
    }

    /// Commutant dimension counts implied by the clustering.
    pub fn commutant(&self) -> CommutantDescription {
        let multiplicities = self.multiplicities();
        let dimension = multiplicities.iter().map(|m| m * m).sum();
        let torus_dimension = multiplicities.iter().sum();
        CommutantDescription { multiplicities, dimension, torus_dimension }
    }

    /// Forward evolution operator `exp(-i H t)` from the cached decomposition.
    pub fn evolution_operator(&self, t: f64) -> ComplexMatrix {
        exp_from_decomposition(&self.decomposition, t, Sign::Plus)
    }

    /// A Haar-random element of the commutant: block-wise Haar unitaries in
    /// the eigenbasis, rotated back to the computational basis.
    ///
    /// The sample commutes with the clustered Hamiltonian exactly; against
    /// the original matrix the commutator is bounded by the in-cluster
    /// eigenvalue spread.
    pub fn sample_commuting_unitary(&self, rng: &mut RngStream) -> ComplexMatrix {
        let n = self.dim();
        let mut block = ComplexMatrix::zeros(n, n);
        for cluster in &self.clusters {
            let u = haar_unitary(cluster.multiplicity, rng);
            for i in 0..cluster.multiplicity {
                for j in 0..cluster.multiplicity {
                    block.set(cluster.start + i, cluster.start + j, u.get(i, j));
                }
            }
        }
        block.conjugate_by(&self.decomposition.eigenvectors)
    }

    /// The torus element `V diag(e^{i angle_k}) V'`, one angle per eigenvector
    /// line in ascending eigenvalue order.
    pub fn sample_torus_element(&self, angles: &[f64]) -> Result<ComplexMatrix> {
        let n = self.dim();
        if angles.len() != n {
            return Err(Error::AngleLengthMismatch { expected: n, got: angles.len() });
        }
        let phases = ComplexMatrix::diag(
            &angles.iter().map(|&a| c(a.cos(), a.sin())).collect::<Vec<_>>(),
        );
        Ok(phases.conjugate_by(&self.decomposition.eigenvectors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::matrix::{commutator, pauli_x, pauli_y, pauli_z};
    use crate::numkernel::rank::{commutation_map, nullspace_dim, RANK_TOL};
    use crate::numkernel::random::stream_from_seed;
    use crate::numkernel::tensor::{kron, kron_all};

    fn ising2() -> ComplexMatrix {
        kron(&pauli_x(), &pauli_x()).unwrap()
    }

    fn local2() -> ComplexMatrix {
        let i2 = ComplexMatrix::identity(2);
        &kron(&pauli_z(), &i2).unwrap() + &kron(&i2, &pauli_z()).unwrap()
    }

    #[test]
    fn local_field_multiplicities() {
        // diag(2, 0, 0, -2) sorted: (-2, 0, 0, 2) with multiplicities 1, 2, 1.
        let h = cluster_spectrum_auto(&local2()).unwrap();
        assert_eq!(h.multiplicities(), vec![1, 2, 1]);
        assert_eq!(h.cluster_values(), vec![-2.0, 0.0, 2.0]);
        let desc = h.commutant();
        assert_eq!(desc.dimension, 6);
        assert_eq!(desc.torus_dimension, 4);
        assert!(!h.is_ambiguous());
    }

    #[test]
    fn ising_multiplicities() {
        let h = cluster_spectrum_auto(&ising2()).unwrap();
        assert_eq!(h.multiplicities(), vec![2, 2]);
        assert_eq!(h.commutant().dimension, 8);
    }

    #[test]
    fn heisenberg_multiplicities() {
        // XX + YY + ZZ: singlet at -3, triplet at +1.
        let xx = kron(&pauli_x(), &pauli_x()).unwrap();
        let yy = kron(&pauli_y(), &pauli_y()).unwrap();
        let zz = kron(&pauli_z(), &pauli_z()).unwrap();
        let h = cluster_spectrum_auto(&(&(&xx + &yy) + &zz)).unwrap();
        assert_eq!(h.multiplicities(), vec![1, 3]);
        let values = h.cluster_values();
        assert!((values[0] + 3.0).abs() < 1e-12 && (values[1] - 1.0).abs() < 1e-12);
        assert_eq!(h.commutant().dimension, 10);
    }

    #[test]
    fn commutant_dimension_matches_nullspace_oracle() {
        let cases = [ising2(), local2(), ComplexMatrix::identity(4)];
        for m in &cases {
            let h = cluster_spectrum_auto(m).unwrap();
            let map = commutation_map(m).unwrap();
            assert_eq!(h.commutant().dimension, nullspace_dim(&map, RANK_TOL));
        }
    }

    #[test]
    fn nondegenerate_spectrum_hits_lower_bound() {
        let mut rng = stream_from_seed(31);
        let m = crate::numkernel::random::gue(6, &mut rng);
        let h = cluster_spectrum_auto(&m).unwrap();
        assert_eq!(h.multiplicities(), vec![1; 6]);
        assert_eq!(h.commutant().dimension, 6);
        assert_eq!(h.commutant().torus_dimension, 6);
    }

    #[test]
    fn identity_hits_upper_bound() {
        let h = cluster_spectrum_auto(&ComplexMatrix::identity(5)).unwrap();
        assert_eq!(h.multiplicities(), vec![5]);
        assert_eq!(h.commutant().dimension, 25);
    }

    #[test]
    fn gap_near_tolerance_is_flagged() {
        let m = ComplexMatrix::diag_real(&[0.0, 5e-8, 1.0]);
        let h = cluster_spectrum(&m, 1e-8).unwrap();
        assert_eq!(h.multiplicities(), vec![1, 1, 1]);
        assert!(h.is_ambiguous());
        assert!((h.ambiguity_witness().unwrap() - 5e-8).abs() < 1e-22);
        assert!(matches!(
            h.require_unambiguous(),
            Err(Error::AmbiguousClustering { .. })
        ));
        // The same gap well above the window is clean.
        let m2 = ComplexMatrix::diag_real(&[0.0, 5e-7, 1.0]);
        let h2 = cluster_spectrum(&m2, 1e-8).unwrap();
        assert!(!h2.is_ambiguous());
        assert!(h2.require_unambiguous().is_ok());
    }

    #[test]
    fn chained_merges_are_flagged() {
        // Gaps of 0.9 tol chain into a cluster of spread 1.8 tol.
        let m = ComplexMatrix::diag_real(&[0.0, 0.9e-8, 1.8e-8, 1.0]);
        let h = cluster_spectrum(&m, 1e-8).unwrap();
        assert_eq!(h.multiplicities(), vec![3, 1]);
        assert!(h.is_ambiguous());
    }

    #[test]
    fn rejects_negative_tolerance() {
        assert!(cluster_spectrum(&ComplexMatrix::identity(2), -1.0).is_err());
    }

    #[test]
    fn commuting_sample_is_unitary_and_commutes() {
        let h = cluster_spectrum_auto(&ising2()).unwrap();
        let mut rng = stream_from_seed(12);
        let s = h.sample_commuting_unitary(&mut rng);
        assert!(s.is_unitary(1e-10));
        let res = commutator(&s, h.matrix()).frobenius_norm();
        assert!(res <= 1e-10 * h.matrix().frobenius_norm(), "residual {res}");
        // Not the identity and not diagonal: a genuine sample.
        assert!((&s - &ComplexMatrix::identity(4)).frobenius_norm() > 0.1);
    }

    #[test]
    fn commuting_sample_is_seed_deterministic() {
        let h = cluster_spectrum_auto(&local2()).unwrap();
        let a = h.sample_commuting_unitary(&mut stream_from_seed(77));
        let b = h.sample_commuting_unitary(&mut stream_from_seed(77));
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn torus_element_commutes_and_checks_length() {
        let h = cluster_spectrum_auto(&local2()).unwrap();
        let angles = [0.3, 1.1, -0.4, 2.0];
        let u = h.sample_torus_element(&angles).unwrap();
        assert!(u.is_unitary(1e-10));
        assert!(commutator(&u, h.matrix()).frobenius_norm() < 1e-10);
        match h.sample_torus_element(&[0.1, 0.2]) {
            Err(Error::AngleLengthMismatch { expected: 4, got: 2 }) => {}
            other => panic!("expected AngleLengthMismatch, got {other:?}"),
        }
    }

    #[test]
    fn conjugation_preserves_clusters() {
        let mut rng = stream_from_seed(40);
        let s = crate::numkernel::random::haar_unitary(4, &mut rng);
        let h0 = cluster_spectrum_auto(&local2()).unwrap();
        let h1 = cluster_spectrum_auto(&local2().conjugate_by(&s)).unwrap();
        assert_eq!(h0.multiplicities(), h1.multiplicities());
        for (a, b) in h0.cluster_values().iter().zip(h1.cluster_values()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn evolution_operator_matches_direct_exponential() {
        use crate::numkernel::eigh::unitary_exp;
        let three = kron_all(&[&pauli_z(), &pauli_x(), &pauli_y()]).unwrap();
        let h = cluster_spectrum_auto(&three).unwrap();
        let a = h.evolution_operator(0.37);
        let b = unitary_exp(&three, 0.37, Sign::Plus).unwrap();
        assert!((&a - &b).frobenius_norm() < 1e-12);
    }
}
