//! Tensor product structures (TPS) as tuples of factor dimensions plus a
//! frame unitary, realized concretely as commuting observable subalgebras.
//!
//! A TPS with factors `(d_1, .., d_n)` on a space of dimension `prod d_j`
//! assigns to each factor the algebra of operators acting on it alone,
//! conjugated by the frame. Two structures count as equivalent when their
//! factor algebras agree as sets up to relabeling; local unitaries and factor
//! permutations never change the algebras, while generic symmetries of a
//! Hamiltonian do. Entropy profiles over a fixed probe family turn that
//! difference into a checkable certificate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entangle::{entropy_profile, DensityState};
use crate::error::{Error, Result};
use crate::numkernel::matrix::{c, commutator, ComplexMatrix};
use crate::numkernel::rank::{
    generated_algebra_dim, span_intersection_dim, span_rank_real, spans_equal, RANK_TOL,
};
use crate::numkernel::tensor::{embed_at, from_digits, kron_all, to_digits, DEFAULT_DIM_CAP};

/// Relative unitarity tolerance for frames and transforms.
pub const UNITARY_TOL: f64 = 1e-8;

/// Pairwise commutator norm allowed between algebras of distinct factors.
pub const COMMUTATOR_TOL: f64 = 1e-8;

/// Default entropy-multiset discrepancy above which two structures are
/// certified nonequivalent.
pub const CERT_THRESHOLD: f64 = 1e-6;

/// A tensor product structure: factor dimensions plus the frame unitary that
/// carries the computational factorization onto the space.
#[derive(Debug, Clone)]
pub struct TensorProductStructure {
    factor_dims: Vec<usize>,
    frame: ComplexMatrix,
}

/// The structure whose frame is the identity: factors are the computational
/// digit positions themselves.
pub fn standard_tps(factor_dims: &[usize]) -> Result<TensorProductStructure> {
    let dim = checked_product(factor_dims)?;
    TensorProductStructure::new(factor_dims.to_vec(), ComplexMatrix::identity(dim))
}

fn checked_product(factor_dims: &[usize]) -> Result<usize> {
    if factor_dims.is_empty() {
        return Err(Error::InvalidInput("a TPS needs at least one factor".into()));
    }
    let mut dim = 1usize;
    for &d in factor_dims {
        if d < 2 {
            return Err(Error::InvalidFactorDim { dim: d });
        }
        dim = dim
            .checked_mul(d)
            .filter(|&x| x <= DEFAULT_DIM_CAP)
            .ok_or(Error::DimensionOverflow { requested: usize::MAX, cap: DEFAULT_DIM_CAP })?;
    }
    Ok(dim)
}

impl TensorProductStructure {
    /// Validates that every factor dimension is at least two, the frame is
    /// square of the product dimension, and the frame is unitary.
    pub fn new(factor_dims: Vec<usize>, frame: ComplexMatrix) -> Result<Self> {
        let dim = checked_product(&factor_dims)?;
        if !frame.is_square() || frame.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "frame is {}x{} but the factor dimensions multiply to {dim}",
                frame.rows(),
                frame.cols()
            )));
        }
        let residual = frame.unitarity_residual();
        let tol = UNITARY_TOL * dim as f64;
        if residual > tol {
            return Err(Error::NotUnitary { residual, tol });
        }
        Ok(Self { factor_dims, frame })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn n_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn frame(&self) -> &ComplexMatrix {
        &self.frame
    }

    /// Hermitian spanning set of the observable algebra of factor `j`:
    /// the single-factor basis embedded alongside identities and conjugated
    /// by the frame.
    pub fn factor_algebra(&self, j: usize) -> Result<Vec<ComplexMatrix>> {
        if j >= self.n_factors() {
            return Err(Error::InvalidInput(format!(
                "factor index {j} out of range for {} factors",
                self.n_factors()
            )));
        }
        let identity_frame = is_identity(&self.frame);
        hermitian_basis(self.factor_dims[j])
            .into_iter()
            .map(|b| {
                let embedded = embed_at(&self.factor_dims, j, &b)?;
                Ok(if identity_frame { embedded } else { embedded.conjugate_by(&self.frame) })
            })
            .collect()
    }

    /// All factor algebras, in factor order.
    pub fn algebras(&self) -> Result<Vec<Vec<ComplexMatrix>>> {
        (0..self.n_factors()).map(|j| self.factor_algebra(j)).collect()
    }

    /// The same structure seen after the global unitary `s`: the frame
    /// becomes `s * frame`, so every factor algebra is conjugated by `s`.
    pub fn transform(&self, s: &ComplexMatrix) -> Result<TensorProductStructure> {
        if !s.is_square() || s.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "transform is {}x{} but the space has dimension {}",
                s.rows(),
                s.cols(),
                self.dim()
            )));
        }
        let residual = s.unitarity_residual();
        let tol = UNITARY_TOL * self.dim() as f64;
        if residual > tol {
            return Err(Error::NotUnitary { residual, tol });
        }
        TensorProductStructure::new(self.factor_dims.clone(), s * &self.frame)
    }

    /// The product of per-factor unitaries as a transform of the full space,
    /// in the frame of this structure. Applying it leaves every factor
    /// algebra invariant as a set.
    pub fn local_unitary(&self, blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        if blocks.len() != self.n_factors() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} local blocks, got {}",
                self.n_factors(),
                blocks.len()
            )));
        }
        for (j, b) in blocks.iter().enumerate() {
            if !b.is_square() || b.dim() != self.factor_dims[j] {
                return Err(Error::DimensionMismatch(format!(
                    "local block {j} is {}x{}, factor dimension is {}",
                    b.rows(),
                    b.cols(),
                    self.factor_dims[j]
                )));
            }
            let residual = b.unitarity_residual();
            let tol = UNITARY_TOL * b.dim() as f64;
            if residual > tol {
                return Err(Error::NotUnitary { residual, tol });
            }
        }
        let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
        let product = kron_all(&refs)?;
        Ok(if is_identity(&self.frame) { product } else { product.conjugate_by(&self.frame) })
    }

    /// The factor relabeling `perm` as a transform of the full space, in the
    /// frame of this structure. `perm[k]` names the factor whose digit moves
    /// to position `k`; it must preserve the dimension tuple.
    pub fn factor_permutation(&self, perm: &[usize]) -> Result<ComplexMatrix> {
        let p = factor_permutation_matrix(&self.factor_dims, perm)?;
        Ok(if is_identity(&self.frame) { p } else { p.conjugate_by(&self.frame) })
    }
}

fn is_identity(m: &ComplexMatrix) -> bool {
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { Complex64::ONE } else { Complex64::ZERO };
            if m.get(i, j) != want {
                return false;
            }
        }
    }
    true
}

/// Hermitian basis of the full d x d operator algebra: diagonal units, then
/// symmetric and antisymmetric off-diagonal pairs. Exactly `d*d` elements
/// whose complex span is everything and whose real span is the Hermitian
/// operators.
pub fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(d * d);
    for k in 0..d {
        basis.push(ComplexMatrix::from_fn(d, d, |i, j| {
            if i == k && j == k { Complex64::ONE } else { Complex64::ZERO }
        }));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            basis.push(ComplexMatrix::from_fn(d, d, |r, s| {
                if (r, s) == (i, j) || (r, s) == (j, i) { Complex64::ONE } else { Complex64::ZERO }
            }));
            basis.push(ComplexMatrix::from_fn(d, d, |r, s| {
                if (r, s) == (i, j) {
                    c(0.0, -1.0)
                } else if (r, s) == (j, i) {
                    c(0.0, 1.0)
                } else {
                    Complex64::ZERO
                }
            }));
        }
    }
    basis
}

/// The permutation of computational factors as a unitary on the full space.
/// Digit `k` of the image reads digit `perm[k]` of the argument; `perm` must
/// be a permutation of `0..n` with `dims[perm[k]] == dims[k]` so the
/// dimension tuple survives.
pub fn factor_permutation_matrix(dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    let n = dims.len();
    if perm.len() != n {
        return Err(Error::InvalidInput(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidInput(format!("not a permutation of 0..{n}: {perm:?}")));
        }
        seen[p] = true;
    }
    for k in 0..n {
        if dims[perm[k]] != dims[k] {
            return Err(Error::InvalidInput(format!(
                "permutation {perm:?} does not preserve the dimension tuple {dims:?}"
            )));
        }
    }
    let dim = checked_product(dims)?;
    let mut m = ComplexMatrix::zeros(dim, dim);
    let mut digits = vec![0usize; n];
    for col in 0..dim {
        to_digits(col, dims, &mut digits);
        let image: Vec<usize> = (0..n).map(|k| digits[perm[k]]).collect();
        let row = from_digits(&image, dims);
        m.set(row, col, Complex64::ONE);
    }
    Ok(m)
}

// -- Structural checks -------------------------------------------------------

/// Numeric verification that the factor algebras behave like a tensor
/// product structure.
#[derive(Debug, Clone, Serialize)]
pub struct TpsConditionsReport {
    /// Largest commutator norm between basis elements of distinct factors.
    pub max_pairwise_commutator: f64,
    /// Largest pairwise algebra intersection dimension (1 = scalars only).
    pub max_intersection_dim: usize,
    /// Dimension of the algebra generated by all factors together.
    pub generated_dim: usize,
    /// Full operator-space dimension the generated algebra must reach.
    pub expected_generated_dim: usize,
    pub commutator_tol: f64,
    pub passes: bool,
}

/// Checks the three defining conditions on the factor algebras: mutual
/// commutation, scalar pairwise intersections, and joint generation of the
/// full operator algebra. Cost grows steeply with dimension; intended for
/// desk-scale spaces.
pub fn check_tps_conditions(tps: &TensorProductStructure) -> Result<TpsConditionsReport> {
    let algebras = tps.algebras()?;
    let n = algebras.len();
    let dim = tps.dim();

    let mut max_comm = 0.0f64;
    let mut max_intersection = 1usize;
    for j in 0..n {
        for k in (j + 1)..n {
            for a in &algebras[j] {
                for b in &algebras[k] {
                    max_comm = max_comm.max(commutator(a, b).frobenius_norm());
                }
            }
            let inter = span_intersection_dim(&algebras[j], &algebras[k], RANK_TOL);
            max_intersection = max_intersection.max(inter);
        }
    }

    let generators: Vec<ComplexMatrix> = algebras.into_iter().flatten().collect();
    let generated_dim = generated_algebra_dim(&generators, RANK_TOL);
    let expected = dim * dim;

    Ok(TpsConditionsReport {
        max_pairwise_commutator: max_comm,
        max_intersection_dim: max_intersection,
        generated_dim,
        expected_generated_dim: expected,
        commutator_tol: COMMUTATOR_TOL,
        passes: max_comm <= COMMUTATOR_TOL && max_intersection == 1 && generated_dim == expected,
    })
}

/// Numeric dimension of the group generated by all single-factor unitaries:
/// the real span rank of the embedded anti-Hermitian generators. Agrees with
/// the `local_unitary_dim` ledger entry.
pub fn local_unitary_group_dimension(tps: &TensorProductStructure) -> Result<usize> {
    let mut generators = Vec::new();
    for algebra in tps.algebras()? {
        for b in algebra {
            generators.push(b.scale(c(0.0, 1.0)));
        }
    }
    Ok(span_rank_real(&generators, RANK_TOL))
}

// -- The dimension ledger -----------------------------------------------------

/// Closed-form dimension counts for a factor tuple: how big the group of
/// local unitaries is, how big the symmetry group of a Hamiltonian on the
/// same space can be, and the surplus of symmetry directions over the torus
/// that local phases provide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionLedger {
    pub factor_dims: Vec<usize>,
    pub n_factors: usize,
    /// Product of the factor dimensions.
    pub hilbert_dim: usize,
    /// Real dimension of the local unitary group: `sum d_j^2 - n + 1`.
    pub local_unitary_dim: usize,
    /// Real dimension of its maximal torus: `sum d_j - n + 1`.
    pub local_torus_dim: usize,
    /// Commutant dimension of a nondegenerate Hamiltonian: the product
    /// dimension itself.
    pub commutant_dim_nondegenerate: usize,
    /// Commutant dimension of a fully degenerate Hamiltonian: the squared
    /// product dimension.
    pub commutant_dim_max: usize,
    /// Symmetry directions beyond what local phases absorb:
    /// `commutant_dim_nondegenerate - local_torus_dim`. Strictly positive
    /// whenever there are at least two factors, which is what lets a
    /// Hamiltonian's own symmetries slide one structure onto nonequivalent
    /// ones.
    pub torus_surplus: usize,
}

/// Evaluates the ledger for a factor tuple. Fails on factors below two or
/// arithmetic overflow.
pub fn dimension_ledger(factor_dims: &[usize]) -> Result<DimensionLedger> {
    if factor_dims.is_empty() {
        return Err(Error::InvalidInput("a TPS needs at least one factor".into()));
    }
    let n = factor_dims.len();
    let mut hilbert_dim = 1usize;
    let mut sum_d = 0usize;
    let mut sum_d2 = 0usize;
    for &d in factor_dims {
        if d < 2 {
            return Err(Error::InvalidFactorDim { dim: d });
        }
        hilbert_dim = hilbert_dim
            .checked_mul(d)
            .ok_or_else(|| Error::InvalidInput("dimension product overflows".into()))?;
        sum_d += d;
        sum_d2 += d * d;
    }
    let commutant_dim_max = hilbert_dim
        .checked_mul(hilbert_dim)
        .ok_or_else(|| Error::InvalidInput("squared dimension overflows".into()))?;
    let local_unitary_dim = sum_d2 - n + 1;
    let local_torus_dim = sum_d - n + 1;
    Ok(DimensionLedger {
        factor_dims: factor_dims.to_vec(),
        n_factors: n,
        hilbert_dim,
        local_unitary_dim,
        local_torus_dim,
        commutant_dim_nondegenerate: hilbert_dim,
        commutant_dim_max,
        torus_surplus: hilbert_dim - local_torus_dim,
    })
}

/// All unordered factorizations of `total` into at least two factors, each
/// at least two, as nondecreasing tuples.
pub fn enumerate_factorizations(total: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, min_factor: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let mut d = min_factor;
        while d * d <= remaining {
            if remaining % d == 0 {
                prefix.push(d);
                prefix.push(remaining / d);
                out.push(prefix.clone());
                prefix.pop();
                rec(remaining / d, d, prefix, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    if total >= 4 {
        rec(total, 2, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

// -- Equivalence and certificates ---------------------------------------------

/// Whether two structures have the same factor algebras up to relabeling,
/// decided by span comparison of the vectorized bases.
pub fn algebra_sets_equal(
    a: &TensorProductStructure,
    b: &TensorProductStructure,
) -> Result<bool> {
    if a.dim() != b.dim() || a.n_factors() != b.n_factors() {
        return Ok(false);
    }
    let algs_a = a.algebras()?;
    let algs_b = b.algebras()?;
    let mut used = vec![false; algs_b.len()];
    for alg_a in &algs_a {
        let mut matched = false;
        for (k, alg_b) in algs_b.iter().enumerate() {
            if !used[k] && spans_equal(alg_a, alg_b, RANK_TOL) {
                used[k] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of an entropy-profile comparison between two structures over a
/// probe family.
#[derive(Debug, Clone, Serialize)]
pub struct NonequivalenceCertificate {
    /// True when the structures are provably nonequivalent.
    pub certified: bool,
    /// Largest per-position gap between sorted entropy multisets, maximized
    /// over probes.
    pub max_discrepancy: f64,
    /// Probe index achieving the maximum, when any probe was examined.
    pub witness_probe: Option<usize>,
    /// Discrepancy above which certification fires.
    pub threshold: f64,
    /// True when the factor dimension multisets already differ, which
    /// certifies nonequivalence without touching entropies.
    pub structural_mismatch: bool,
}

/// Compares the sorted single-factor entropy multisets of `a` and `b` on
/// every probe state. Entropy multisets are invariant under local unitaries
/// and factor relabeling, so any discrepancy above `threshold` certifies that
/// no such relabeling exists; agreement certifies nothing.
pub fn certify_nonequivalence(
    a: &TensorProductStructure,
    b: &TensorProductStructure,
    probes: &[DensityState],
    threshold: f64,
) -> Result<NonequivalenceCertificate> {
    let mut da = a.factor_dims().to_vec();
    let mut db = b.factor_dims().to_vec();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(NonequivalenceCertificate {
            certified: true,
            max_discrepancy: 0.0,
            witness_probe: None,
            threshold,
            structural_mismatch: true,
        });
    }
    let mut max_discrepancy = 0.0f64;
    let mut witness = None;
    for (idx, probe) in probes.iter().enumerate() {
        let ma = entropy_profile(probe, a)?.sorted_multiset();
        let mb = entropy_profile(probe, b)?.sorted_multiset();
        let gap = ma
            .iter()
            .zip(&mb)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        if gap > max_discrepancy {
            max_discrepancy = gap;
            witness = Some(idx);
        }
    }
    Ok(NonequivalenceCertificate {
        certified: max_discrepancy > threshold,
        max_discrepancy,
        witness_probe: witness,
        threshold,
        structural_mismatch: false,
    })
}

// -- Serialization -------------------------------------------------------------

#[derive(Serialize)]
struct TpsWireRef<'a> {
    factor_dims: &'a [usize],
    frame: &'a ComplexMatrix,
}

#[derive(Deserialize)]
struct TpsWire {
    factor_dims: Vec<usize>,
    frame: ComplexMatrix,
}

impl Serialize for TensorProductStructure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TpsWireRef { factor_dims: &self.factor_dims, frame: &self.frame }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TensorProductStructure {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let wire = TpsWire::deserialize(deserializer)?;
        TensorProductStructure::new(wire.factor_dims, wire.frame).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rank::span_rank_complex;
    use crate::numkernel::random::{haar_unitary, stream_from_seed};

    #[test]
    fn standard_tps_validates_dims() {
        assert!(standard_tps(&[2, 2]).is_ok());
        assert!(matches!(standard_tps(&[2, 1]), Err(Error::InvalidFactorDim { dim: 1 })));
        assert!(standard_tps(&[]).is_err());
    }

    #[test]
    fn constructor_rejects_bad_frames() {
        let not_unitary = ComplexMatrix::diag_real(&[1.0, 2.0, 1.0, 1.0]);
        assert!(matches!(
            TensorProductStructure::new(vec![2, 2], not_unitary),
            Err(Error::NotUnitary { .. })
        ));
        let wrong_size = ComplexMatrix::identity(3);
        assert!(TensorProductStructure::new(vec![2, 2], wrong_size).is_err());
    }

    #[test]
    fn hermitian_basis_spans_everything() {
        for d in [2usize, 3, 4] {
            let basis = hermitian_basis(d);
            assert_eq!(basis.len(), d * d);
            for b in &basis {
                assert!(b.hermitian_residual() < 1e-15);
            }
            assert_eq!(span_rank_complex(&basis, RANK_TOL), d * d);
        }
    }

    #[test]
    fn conditions_hold_for_standard_structures() {
        for dims in [vec![2, 2], vec![2, 3], vec![2, 2, 2]] {
            let tps = standard_tps(&dims).unwrap();
            let report = check_tps_conditions(&tps).unwrap();
            assert!(report.passes, "{dims:?}: {report:?}");
            assert!(report.max_pairwise_commutator < 1e-12);
            assert_eq!(report.max_intersection_dim, 1);
            assert_eq!(report.generated_dim, report.expected_generated_dim);
        }
    }

    #[test]
    fn conditions_hold_after_a_random_frame() {
        let mut rng = stream_from_seed(3);
        let frame = haar_unitary(4, &mut rng);
        let tps = TensorProductStructure::new(vec![2, 2], frame).unwrap();
        let report = check_tps_conditions(&tps).unwrap();
        assert!(report.passes, "{report:?}");
    }

    #[test]
    fn ledger_matches_hand_counts() {
        let l = dimension_ledger(&[2, 2]).unwrap();
        assert_eq!(
            (l.hilbert_dim, l.local_unitary_dim, l.local_torus_dim),
            (4, 7, 3)
        );
        assert_eq!((l.commutant_dim_nondegenerate, l.commutant_dim_max), (4, 16));
        assert_eq!(l.torus_surplus, 1);

        let l = dimension_ledger(&[2, 3]).unwrap();
        assert_eq!(
            (l.hilbert_dim, l.local_unitary_dim, l.local_torus_dim, l.torus_surplus),
            (6, 12, 4, 2)
        );

        let l = dimension_ledger(&[2, 2, 2]).unwrap();
        assert_eq!(
            (l.hilbert_dim, l.local_unitary_dim, l.local_torus_dim, l.torus_surplus),
            (8, 10, 4, 4)
        );
    }

    #[test]
    fn qubit_ledger_scales_linearly() {
        for n in 1..=12 {
            let l = dimension_ledger(&vec![2; n]).unwrap();
            assert_eq!(l.local_unitary_dim, 3 * n + 1);
            assert_eq!(l.commutant_dim_nondegenerate, 1 << n);
        }
    }

    #[test]
    fn numeric_group_dimension_matches_ledger() {
        for dims in [vec![2, 2], vec![2, 3], vec![2, 2, 2], vec![3, 3]] {
            let tps = standard_tps(&dims).unwrap();
            let numeric = local_unitary_group_dimension(&tps).unwrap();
            let ledger = dimension_ledger(&dims).unwrap();
            assert_eq!(numeric, ledger.local_unitary_dim, "{dims:?}");
        }
    }

    #[test]
    fn factorizations_of_twelve() {
        let fs = enumerate_factorizations(12);
        assert_eq!(fs, vec![vec![2, 2, 3], vec![2, 6], vec![3, 4]]);
        assert!(enumerate_factorizations(7).is_empty());
        assert_eq!(enumerate_factorizations(4), vec![vec![2, 2]]);
    }

    #[test]
    fn permutation_matrix_swaps_embedded_operators() {
        use crate::numkernel::matrix::pauli_z;
        let dims = [2usize, 2];
        let p = factor_permutation_matrix(&dims, &[1, 0]).unwrap();
        assert!(p.is_unitary(1e-12));
        let z_first = embed_at(&dims, 0, &pauli_z()).unwrap();
        let z_second = embed_at(&dims, 1, &pauli_z()).unwrap();
        let moved = z_second.conjugate_by(&p);
        assert!((&moved - &z_first).frobenius_norm() < 1e-12);
    }

    #[test]
    fn permutation_must_preserve_dims() {
        assert!(factor_permutation_matrix(&[2, 3], &[1, 0]).is_err());
        assert!(factor_permutation_matrix(&[2, 2], &[0, 0]).is_err());
        assert!(factor_permutation_matrix(&[2, 2, 2], &[2, 0, 1]).is_ok());
    }

    #[test]
    fn local_unitaries_and_permutations_preserve_algebras() {
        let tps = standard_tps(&[2, 2]).unwrap();
        let mut rng = stream_from_seed(21);
        let blocks = [haar_unitary(2, &mut rng), haar_unitary(2, &mut rng)];
        let lu = tps.local_unitary(&blocks).unwrap();
        let perm = tps.factor_permutation(&[1, 0]).unwrap();
        let moved = tps.transform(&(&lu * &perm)).unwrap();
        assert!(algebra_sets_equal(&tps, &moved).unwrap());
    }

    #[test]
    fn generic_rotation_changes_algebras() {
        let tps = standard_tps(&[2, 2]).unwrap();
        let mut rng = stream_from_seed(22);
        let s = haar_unitary(4, &mut rng);
        let moved = tps.transform(&s).unwrap();
        assert!(!algebra_sets_equal(&tps, &moved).unwrap());
    }

    #[test]
    fn tps_json_round_trip() {
        let mut rng = stream_from_seed(5);
        let tps =
            TensorProductStructure::new(vec![2, 2], haar_unitary(4, &mut rng)).unwrap();
        let json = serde_json::to_string(&tps).unwrap();
        let back: TensorProductStructure = serde_json::from_str(&json).unwrap();
        assert_eq!(back.factor_dims(), tps.factor_dims());
        assert!((back.frame() - tps.frame()).frobenius_norm() < 1e-15);
    }

    #[test]
    fn tps_json_rejects_non_unitary_frame() {
        let json = r#"{"factor_dims":[2],"frame":{"rows":2,"cols":2,"entries":[[2,0],[0,0],[0,0],[1,0]]}}"#;
        assert!(serde_json::from_str::<TensorProductStructure>(json).is_err());
    }
}
