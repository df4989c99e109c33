//! Numeric ranks: singular-value counts, nullspace dimensions, spans of
//! operator families, and the vectorized commutation map.

use num_complex::Complex64;

use super::eigh::eigh_values;
use super::matrix::ComplexMatrix;
use super::tensor::DEFAULT_DIM_CAP;
use crate::error::{Error, Result};

/// Default relative rank tolerance: singular values at or below this fraction
/// of the largest are treated as zero. Separates genuine nullspaces from
/// round-off at double precision for desk-scale dimensions.
pub const RANK_TOL: f64 = 1e-8;

/// Singular values of `a`, descending. A Hermitian input is diagonalized
/// directly (its singular values are the absolute eigenvalues), which keeps
/// tiny singular values accurate; anything else goes through the smaller
/// Gram matrix, whose squaring limits resolution to roughly the square root
/// of the eigensolver's.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.is_square() && a.is_hermitian() {
        let mut vals: Vec<f64> = eigh_values(a)
            .expect("hermiticity was just checked")
            .into_iter()
            .map(f64::abs)
            .collect();
        vals.sort_by(|x, y| y.total_cmp(x));
        return vals;
    }
    let gram = if a.rows() <= a.cols() {
        a * &a.adjoint()
    } else {
        &a.adjoint() * a
    };
    let mut vals: Vec<f64> = eigh_values(&gram)
        .expect("Gram matrix is Hermitian by construction")
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    vals.reverse();
    vals
}

/// Number of singular values at or below `tol` times the largest singular
/// value; for the all-zero matrix every singular value counts as zero. The
/// nullspace dimension of a rows x cols matrix is `cols - rank`.
pub fn nullspace_dim(a: &ComplexMatrix, tol: f64) -> usize {
    nullspace_dim_with_scale(a, tol, 0.0)
}

/// Nullspace dimension judged against an externally supplied magnitude:
/// singular values at or below `tol * max(scale, largest)` count as zero.
/// Plain [`nullspace_dim`] measures size against the matrix itself, which
/// misreads an all-round-off matrix (such as the commutation map of a
/// near-scalar Hamiltonian) as high rank; passing the source data's entry
/// scale restores the intended cutoff.
pub fn nullspace_dim_with_scale(a: &ComplexMatrix, tol: f64, scale: f64) -> usize {
    let svals = singular_values(a);
    let largest = svals.first().copied().unwrap_or(0.0).max(scale);
    let rank = if largest <= 0.0 {
        0
    } else {
        svals.iter().filter(|&&s| s > tol * largest).count()
    };
    a.cols() - rank
}

/// The commutation map of `h` as a dim^2 x dim^2 matrix acting on row-major
/// vectorized operators: `M vec(S) = vec(SH - HS)`.
///
/// For Hermitian `h` its nullspace dimension equals the squared-multiplicity
/// sum of the spectrum, which is the oracle used against the analytic
/// commutant dimension.
pub fn commutation_map(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "commutation map needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let d = h.dim();
    let d2 = d.checked_mul(d).unwrap_or(usize::MAX);
    if d2 > DEFAULT_DIM_CAP {
        return Err(Error::DimensionOverflow { requested: d2, cap: DEFAULT_DIM_CAP });
    }
    // (SH - HS)[i,j] = sum_l S[i,l] H[l,j] - sum_k H[i,k] S[k,j]:
    // the coefficient of S[k,l] is delta_{ik} H[l,j] - delta_{jl} H[i,k].
    let mut m = ComplexMatrix::zeros(d2, d2);
    for i in 0..d {
        for j in 0..d {
            let row = i * d + j;
            for l in 0..d {
                let cur = m.get(row, i * d + l);
                m.set(row, i * d + l, cur + h.get(l, j));
            }
            for k in 0..d {
                let cur = m.get(row, k * d + j);
                m.set(row, k * d + j, cur - h.get(i, k));
            }
        }
    }
    Ok(m)
}

// -- Span ranks via modified Gram-Schmidt -----------------------------------

fn dot_complex(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn dot_real(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Incremental orthonormal span with a relative acceptance threshold,
/// generic over the scalar field (complex span vs. real span of the same
/// complex-stored vectors).
struct SpanBuilder {
    basis: Vec<Vec<Complex64>>,
    tol: f64,
    real_scalars: bool,
}

impl SpanBuilder {
    fn new(tol: f64, real_scalars: bool) -> Self {
        Self { basis: Vec::new(), tol, real_scalars }
    }

    fn project_out(&self, v: &mut [Complex64]) {
        for q in &self.basis {
            if self.real_scalars {
                let d = dot_real(q, v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= y * d;
                }
            } else {
                let d = dot_complex(q, v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= y * d;
                }
            }
        }
    }

    /// Returns true if `v` contributed a new direction.
    fn absorb(&mut self, mut v: Vec<Complex64>) -> bool {
        let original = norm(&v);
        if original <= 0.0 {
            return false;
        }
        self.project_out(&mut v);
        let mut residual = norm(&v);
        // Re-orthogonalize once when cancellation was heavy ("twice is
        // enough" criterion), so near-dependent vectors are judged fairly.
        if residual < 0.5 * original && residual > 0.0 {
            self.project_out(&mut v);
            residual = norm(&v);
        }
        if residual <= self.tol * original {
            return false;
        }
        let inv = 1.0 / residual;
        for x in v.iter_mut() {
            *x *= inv;
        }
        self.basis.push(v);
        true
    }

    fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Dimension of the complex linear span of a family of operators, each
/// treated as a vector of its entries.
pub fn span_rank_complex(mats: &[ComplexMatrix], tol: f64) -> usize {
    let mut span = SpanBuilder::new(tol, false);
    for m in mats {
        span.absorb(m.entries().to_vec());
    }
    span.rank()
}

/// Dimension of the *real* linear span, the right notion for Lie-algebra
/// generators such as anti-Hermitian operators.
pub fn span_rank_real(mats: &[ComplexMatrix], tol: f64) -> usize {
    let mut span = SpanBuilder::new(tol, true);
    for m in mats {
        span.absorb(m.entries().to_vec());
    }
    span.rank()
}

/// Whether two operator families have identical complex spans.
pub fn spans_equal(a: &[ComplexMatrix], b: &[ComplexMatrix], tol: f64) -> bool {
    let ra = span_rank_complex(a, tol);
    let rb = span_rank_complex(b, tol);
    if ra != rb {
        return false;
    }
    let joint: Vec<ComplexMatrix> = a.iter().chain(b).cloned().collect();
    span_rank_complex(&joint, tol) == ra
}

/// Dimension of the complex span of `a` intersected with that of `b`,
/// computed from the rank of the stacked vectorized bases.
pub fn span_intersection_dim(a: &[ComplexMatrix], b: &[ComplexMatrix], tol: f64) -> usize {
    let ra = span_rank_complex(a, tol);
    let rb = span_rank_complex(b, tol);
    let joint: Vec<ComplexMatrix> = a.iter().chain(b).cloned().collect();
    ra + rb - span_rank_complex(&joint, tol)
}

/// Dimension of the unital algebra generated by `generators`: the span of
/// all products, grown breadth-first with span pruning until it closes.
/// Stops early once the full operator space is reached.
pub fn generated_algebra_dim(generators: &[ComplexMatrix], tol: f64) -> usize {
    if generators.is_empty() {
        return 0;
    }
    let dim = generators[0].dim();
    let full = dim * dim;

    let mut span = SpanBuilder::new(tol, false);
    let mut frontier: Vec<ComplexMatrix> = Vec::new();

    let identity = ComplexMatrix::identity(dim);
    if span.absorb(identity.entries().to_vec()) {
        frontier.push(identity);
    }
    for g in generators {
        if span.absorb(g.entries().to_vec()) {
            frontier.push(g.clone());
        }
    }

    while !frontier.is_empty() && span.rank() < full {
        let mut next = Vec::new();
        'words: for b in &frontier {
            for g in generators {
                let prod = g * b;
                if span.absorb(prod.entries().to_vec()) {
                    next.push(prod);
                    if span.rank() == full {
                        break 'words;
                    }
                }
            }
        }
        frontier = next;
    }
    span.rank()
}
