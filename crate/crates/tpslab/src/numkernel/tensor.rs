//! Kronecker products, factor embeddings, and partial traces over
//! multi-factor index spaces.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Cap on the dimension of any constructed matrix. Commutation-map matrices
/// are dim^2 x dim^2, so this keeps the whole toolkit at desk scale.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Kronecker product with an explicit dimension cap.
pub fn kron_with_cap(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows()).unwrap_or(usize::MAX);
    let cols = a.cols().checked_mul(b.cols()).unwrap_or(usize::MAX);
    if rows > cap || cols > cap {
        return Err(Error::DimensionOverflow { requested: rows.max(cols), cap });
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.get(i, j);
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product `A (x) B`; block (i, j) of the result is `A[i,j] * B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_cap(a, b, DEFAULT_DIM_CAP)
}

/// Kronecker product of a whole factor list.
pub fn kron_all(factors: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let mut iter = factors.iter();
    let first = iter.next().ok_or(Error::InvalidInput("empty factor list".into()))?;
    let mut acc = (*first).clone();
    for f in iter {
        acc = kron(&acc, f)?;
    }
    Ok(acc)
}

/// Embeds `op` as `I (x) .. (x) op (x) .. (x) I` at factor position `pos`.
pub fn embed_at(dims: &[usize], pos: usize, op: &ComplexMatrix) -> Result<ComplexMatrix> {
    assert!(pos < dims.len(), "factor index out of range");
    assert_eq!(op.rows(), dims[pos], "operator does not fit its factor");
    let left: usize = dims[..pos].iter().product();
    let right: usize = dims[pos + 1..].iter().product();
    let l = ComplexMatrix::identity(left.max(1));
    let r = ComplexMatrix::identity(right.max(1));
    kron(&kron(&l, op)?, &r)
}

/// Decomposes `index` into mixed-radix digits over `dims` (factor 1 is the
/// most significant digit, matching the kron ordering).
pub fn to_digits(index: usize, dims: &[usize], out: &mut [usize]) {
    let mut rem = index;
    for (k, &d) in dims.iter().enumerate().rev() {
        out[k] = rem % d;
        rem /= d;
    }
}

/// Recomposes mixed-radix digits into a flat index.
pub fn from_digits(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Partial trace of `rho` over the factors *not* in `keep`.
///
/// `dims` lists the factor dimensions whose product must equal the dimension
/// of `rho`; `keep` is a nonempty set of factor indices. The kept factors
/// appear in the result in ascending index order. Trace and Hermiticity are
/// preserved up to round-off.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let total: usize = dims.iter().product();
    if !rho.is_square() || rho.rows() != total {
        return Err(Error::DimensionMismatch(format!(
            "rho is {}x{} but the factor dimensions multiply to {}",
            rho.rows(),
            rho.cols(),
            total
        )));
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "keep set references factor {} but there are only {}",
            keep.iter().max().unwrap(),
            dims.len()
        )));
    }

    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let keep_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let keep_total: usize = keep_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product::<usize>().max(1);

    let n = dims.len();
    let mut row_digits = vec![0usize; n];
    let mut col_digits = vec![0usize; n];
    let mut a_digits = vec![0usize; keep.len()];
    let mut b_digits = vec![0usize; keep.len()];
    let mut e_digits = vec![0usize; traced.len()];

    let mut out = ComplexMatrix::zeros(keep_total, keep_total);
    for a in 0..keep_total {
        to_digits(a, &keep_dims, &mut a_digits);
        for b in 0..keep_total {
            to_digits(b, &keep_dims, &mut b_digits);
            let mut acc = Complex64::ZERO;
            for e in 0..traced_total {
                to_digits(e, &traced_dims, &mut e_digits);
                for (slot, &f) in keep.iter().enumerate() {
                    row_digits[f] = a_digits[slot];
                    col_digits[f] = b_digits[slot];
                }
                for (slot, &f) in traced.iter().enumerate() {
                    row_digits[f] = e_digits[slot];
                    col_digits[f] = e_digits[slot];
                }
                acc += rho.get(from_digits(&row_digits, dims), from_digits(&col_digits, dims));
            }
            out.set(a, b, acc);
        }
    }
    Ok(out)
}
