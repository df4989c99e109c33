//! Named Hamiltonians used across experiments and the command line.

use crate::error::{Error, Result};
use crate::numkernel::matrix::{pauli_x, pauli_y, pauli_z, ComplexMatrix};
use crate::numkernel::random::{gue, RngStream};
use crate::numkernel::tensor::kron;

/// Two-site transverse coupling `X (x) X`: doubly degenerate pair of levels.
pub fn ising2() -> ComplexMatrix {
    kron(&pauli_x(), &pauli_x()).expect("2x2 kron is in range")
}

/// Noninteracting field `Z (x) 1 + 1 (x) Z`: spectrum (-2, 0, 0, 2).
pub fn local2() -> ComplexMatrix {
    let i2 = ComplexMatrix::identity(2);
    &kron(&pauli_z(), &i2).expect("in range") + &kron(&i2, &pauli_z()).expect("in range")
}

/// Exchange coupling `XX + YY + ZZ`: singlet at -3, triplet at 1.
pub fn heisenberg2() -> ComplexMatrix {
    let xx = kron(&pauli_x(), &pauli_x()).expect("in range");
    let yy = kron(&pauli_y(), &pauli_y()).expect("in range");
    let zz = kron(&pauli_z(), &pauli_z()).expect("in range");
    &(&xx + &yy) + &zz
}

/// Resolves a preset name. `gue(N)` draws an N-dimensional Gaussian unitary
/// ensemble sample from the provided stream; the fixed names consume no
/// randomness.
pub fn preset_matrix(name: &str, rng: &mut RngStream) -> Result<ComplexMatrix> {
    match name {
        "ising2" => Ok(ising2()),
        "local2" => Ok(local2()),
        "heisenberg2" => Ok(heisenberg2()),
        _ => {
            if let Some(inner) = name.strip_prefix("gue(").and_then(|s| s.strip_suffix(')')) {
                let n: usize = inner.parse().map_err(|_| {
                    Error::InvalidInput(format!("bad gue dimension in preset '{name}'"))
                })?;
                if n < 2 {
                    return Err(Error::InvalidInput(format!(
                        "gue preset needs dimension >= 2, got {n}"
                    )));
                }
                Ok(gue(n, rng))
            } else {
                Err(Error::InvalidInput(format!(
                    "unknown preset '{name}'; expected ising2, local2, heisenberg2, or gue(N)"
                )))
            }
        }
    }
}

/// Natural factor dimensions for the fixed presets; `gue(N)` has none.
pub fn preset_factor_dims(name: &str) -> Option<Vec<usize>> {
    match name {
        "ising2" | "local2" | "heisenberg2" => Some(vec![2, 2]),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::random::stream_from_seed;
    use crate::spectrum::cluster_spectrum_auto;

    #[test]
    fn preset_spectra() {
        let mut rng = stream_from_seed(1);
        let cases: [(&str, Vec<usize>); 3] =
            [("ising2", vec![2, 2]), ("local2", vec![1, 2, 1]), ("heisenberg2", vec![1, 3])];
        for (name, mults) in cases {
            let m = preset_matrix(name, &mut rng).unwrap();
            let h = cluster_spectrum_auto(&m).unwrap();
            assert_eq!(h.multiplicities(), mults, "{name}");
        }
    }

    #[test]
    fn gue_preset_parses_and_draws() {
        let mut rng = stream_from_seed(2);
        let m = preset_matrix("gue(5)", &mut rng).unwrap();
        assert_eq!(m.dim(), 5);
        assert!(m.hermitian_residual() < 1e-14);
        assert!(preset_matrix("gue(1)", &mut rng).is_err());
        assert!(preset_matrix("gue(x)", &mut rng).is_err());
        assert!(preset_matrix("nonsense", &mut rng).is_err());
    }
}
