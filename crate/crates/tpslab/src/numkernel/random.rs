//! Seeded random sampling: Haar unitaries, Gaussian ensembles, random pure
//! states.
//!
//! All randomness flows through an explicit counter-based stream seeded from
//! a 64-bit integer; there is no global RNG anywhere in the crate.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use super::matrix::{c, ComplexMatrix};
use crate::error::{Error, Result};

/// The crate-wide random stream. ChaCha is a counter-based generator, so a
/// stream is fully reproducible from its 64-bit seed across platforms.
pub type RngStream = ChaCha12Rng;

/// Creates a stream from a 64-bit seed.
pub fn stream_from_seed(seed: u64) -> RngStream {
    ChaCha12Rng::seed_from_u64(seed)
}

fn standard_normal(rng: &mut RngStream) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex standard Gaussian entry (Ginibre normalization).
fn complex_gaussian(rng: &mut RngStream) -> Complex64 {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    c(standard_normal(rng) * inv_sqrt2, standard_normal(rng) * inv_sqrt2)
}

/// Matrix of iid complex Gaussians.
pub fn ginibre(dim: usize, rng: &mut RngStream) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng))
}

/// GUE sample: `(G + G')/2` for a Ginibre matrix `G`. Eigenvalues are
/// distinct with probability one.
pub fn gue(dim: usize, rng: &mut RngStream) -> ComplexMatrix {
    ginibre(dim, rng).hermitian_part()
}

/// Random Hermitian matrix (alias for the GUE sample, used by tests).
pub fn random_hermitian(dim: usize, rng: &mut RngStream) -> ComplexMatrix {
    gue(dim, rng)
}

/// Haar-distributed unitary on `dim` dimensions.
///
/// Samples a complex Gaussian matrix, takes its QR factorization, and
/// multiplies Q by the phases of R's diagonal so that the triangular factor
/// has positive real diagonal. Without that phase correction the result is
/// *not* Haar distributed.
pub fn haar_unitary(dim: usize, rng: &mut RngStream) -> ComplexMatrix {
    assert!(dim >= 1, "haar_unitary requires dim >= 1");
    let g = ginibre(dim, rng);
    let (q, r) = householder_qr(&g);
    let phases: Vec<Complex64> = (0..dim)
        .map(|i| {
            let rii = r.get(i, i);
            let m = rii.norm();
            if m > 0.0 {
                rii / m
            } else {
                Complex64::ONE
            }
        })
        .collect();
    // Column i of Q picks up the phase of R[i,i].
    ComplexMatrix::from_fn(dim, dim, |i, j| q.get(i, j) * phases[j])
}

/// Random pure-state amplitude vector, uniform on the unit sphere.
pub fn haar_state_vector(dim: usize, rng: &mut RngStream) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Hermitian matrix with planted eigenvalue multiplicities: eigenvalues are
/// well separated across clusters and exactly repeated within one, conjugated
/// by a Haar unitary.
pub fn hermitian_with_multiplicities(multiplicities: &[usize], rng: &mut RngStream) -> Result<ComplexMatrix> {
    if multiplicities.is_empty() || multiplicities.contains(&0) {
        return Err(Error::InvalidInput("multiplicities must be positive".into()));
    }
    let dim: usize = multiplicities.iter().sum();
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut level = 0.0;
    for &m in multiplicities {
        // Gaps of at least 0.5 keep clusters unambiguous at any sane tolerance.
        level += 0.5 + rng.random::<f64>();
        for _ in 0..m {
            eigenvalues.push(level);
        }
    }
    let u = haar_unitary(dim, rng);
    let lambda = ComplexMatrix::diag_real(&eigenvalues);
    Ok(lambda.conjugate_by(&u))
}

/// Householder QR of a square complex matrix. Returns (Q, R) with Q unitary
/// and R upper triangular.
pub fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    assert!(a.is_square());
    let n = a.dim();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);

    for k in 0..n {
        // Build the reflector annihilating column k below the diagonal.
        let mut x = vec![Complex64::ZERO; n - k];
        for i in k..n {
            x[i - k] = r.get(i, k);
        }
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::ONE };
        let beta = -phase * norm_x;
        let mut v = x;
        v[0] -= beta;
        let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sqr == 0.0 {
            continue;
        }
        let tau = 2.0 / v_norm_sqr;

        // R <- H R on rows k..n.
        for j in k..n {
            let dot: Complex64 = (k..n).map(|i| v[i - k].conj() * r.get(i, j)).sum();
            let f = dot * tau;
            for i in k..n {
                let cur = r.get(i, j);
                r.set(i, j, cur - v[i - k] * f);
            }
        }
        // Q <- Q H (accumulate reflectors on the right).
        for i in 0..n {
            let dot: Complex64 = (k..n).map(|j| q.get(i, j) * v[j - k]).sum();
            let f = dot * tau;
            for j in k..n {
                let cur = q.get(i, j);
                q.set(i, j, cur - f * v[j - k].conj());
            }
        }
    }
    // Clean up the strictly-lower part of R.
    for i in 1..n {
        for j in 0..i {
            r.set(i, j, Complex64::ZERO);
        }
    }
    (q, r)
}
