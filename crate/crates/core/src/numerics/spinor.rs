//! Complex matrix model of the Clifford algebra.
//!
//! Generators are Jordan-Wigner Pauli strings on `ceil(n/2)` qubits:
//! `e_{2k+1} -> Z..Z X I..I`, `e_{2k+2} -> Z..Z Y I..I` (Pauli in slot `k`).
//! They square to one and anticommute, so products of matrices give an
//! independent check of the blade-table multiplication. Every nonempty blade
//! maps to a non-identity Pauli string up to phase, hence to a traceless
//! matrix, which makes the even part recoverable through the trace form.

use num_complex::Complex64;

use super::clifford::CliffordElement;
use super::matrix::{complex_identity, ComplexMatrix};
use crate::error::{Error, Result};

fn pauli(kind: char) -> ComplexMatrix {
    let (o, z, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
    let entries = match kind {
        'X' => [z, o, o, z],
        'Y' => [z, -i, i, z],
        'Z' => [o, z, z, -o],
        _ => [o, z, z, o],
    };
    ComplexMatrix::from_row_slice(2, 2, &entries)
}

fn pauli_string(kinds: &[char]) -> ComplexMatrix {
    kinds.iter().fold(complex_identity(1), |acc, &k| acc.kronecker(&pauli(k)))
}

/// Number of qubits used for `n` generators.
pub fn spinor_qubits(n: usize) -> usize {
    n.div_ceil(2)
}

/// Matrix of the generator `e_{i+1}` (0-based `i`).
pub fn spinor_generator(n: usize, i: usize) -> ComplexMatrix {
    let m = spinor_qubits(n);
    let slot = i / 2;
    let kinds: Vec<char> = (0..m)
        .map(|s| {
            if s < slot {
                'Z'
            } else if s == slot {
                if i % 2 == 0 {
                    'X'
                } else {
                    'Y'
                }
            } else {
                'I'
            }
        })
        .collect();
    pauli_string(&kinds)
}

fn blade_matrix(n: usize, gens: &[ComplexMatrix], mask: usize) -> ComplexMatrix {
    let dim = 1 << spinor_qubits(n);
    (0..n).filter(|i| mask >> i & 1 == 1).fold(complex_identity(dim), |acc, i| acc * &gens[i])
}

/// Image of `x` in the matrix model.
pub fn spinor_matrix(x: &CliffordElement) -> ComplexMatrix {
    let n = x.n();
    let gens: Vec<_> = (0..n).map(|i| spinor_generator(n, i)).collect();
    let dim = 1 << spinor_qubits(n);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (mask, &c) in x.coeffs().iter().enumerate() {
        if c != 0.0 {
            out += blade_matrix(n, &gens, mask) * Complex64::new(c, 0.0);
        }
    }
    out
}

/// Recovers an even element from its matrix via the trace form: distinct
/// even blades have orthogonal images.
pub fn even_from_spinor_matrix(n: usize, m: &ComplexMatrix) -> Result<CliffordElement> {
    let dim = 1 << spinor_qubits(n);
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::Dimension { expected: dim, actual: m.nrows() });
    }
    let gens: Vec<_> = (0..n).map(|i| spinor_generator(n, i)).collect();
    let mut coeffs = vec![0.0; 1 << n];
    for (mask, c) in coeffs.iter_mut().enumerate() {
        if mask.count_ones() % 2 == 0 {
            let b = blade_matrix(n, &gens, mask);
            *c = (b.adjoint() * m).trace().re / dim as f64;
        }
    }
    CliffordElement::from_coeffs(n, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_square_to_one_and_anticommute() {
        for n in 1..=7 {
            let gens: Vec<_> = (0..n).map(|i| spinor_generator(n, i)).collect();
            let id = complex_identity(1 << spinor_qubits(n));
            for i in 0..n {
                assert!((&gens[i] * &gens[i] - &id).norm() < 1e-15);
                for j in (i + 1)..n {
                    assert!((&gens[i] * &gens[j] + &gens[j] * &gens[i]).norm() < 1e-15, "n={n} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn model_is_multiplicative_and_even_part_roundtrips() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 2..=7 {
            for _ in 0..5 {
                let even = |rng: &mut ChaCha8Rng| {
                    let c = (0..1usize << n).map(|m| if m.count_ones() % 2 == 0 { rng.random_range(-1.0..1.0) } else { 0.0 }).collect();
                    CliffordElement::from_coeffs(n, c).unwrap()
                };
                let (x, y) = (even(&mut rng), even(&mut rng));
                let prod = spinor_matrix(&x) * spinor_matrix(&y);
                assert!((prod.clone() - spinor_matrix(&(&x * &y))).norm() < 1e-12);
                assert!(even_from_spinor_matrix(n, &prod).unwrap().max_abs_diff(&(&x * &y)) < 1e-12);
            }
        }
    }
}
