//! Cartan subalgebra and Coxeter element of `SU(n)`.
//!
//! The Weyl group acts on the trace-zero diagonal subalgebra by permuting
//! coordinates. A Coxeter element (the `n`-cycle) has no fixed vector there,
//! so `w - 1` is invertible and every `xi` is a difference `w xi' - xi'`.
//! Exponentiating gives `a exp(t xi') a^{-1} exp(-t xi') = exp(t xi)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, GroupElement};
use crate::numerics::{balance_angles, diag_phases, principal_angle, ComplexMatrix};

const TRACE_TOL: f64 = 1e-12;

/// `diag(i xi_1, ..., i xi_n)` with `sum xi_j = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanVector {
    xi: Vec<f64>,
}

impl CartanVector {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::Validation("empty Cartan vector".into()));
        }
        if xi.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation("non-finite Cartan coordinate".into()));
        }
        let scale = xi.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        let total: f64 = xi.iter().sum();
        if total.abs() > TRACE_TOL * scale {
            return Err(Error::Validation(format!("Cartan coordinates sum to {total:e}, not 0")));
        }
        Ok(CartanVector { xi })
    }

    pub fn zero(n: usize) -> Self {
        CartanVector { xi: vec![0.0; n] }
    }

    /// Trace-zero logarithm of a diagonal matrix with the given phases: the
    /// principal angles, shifted by multiples of `2 pi` to sum to zero.
    pub fn log_of_phases(angles: &[f64]) -> Result<Self> {
        let principal: Vec<f64> = angles.iter().map(|&a| principal_angle(Complex64::from_polar(1.0, a))).collect();
        let balanced = balance_angles(&principal);
        // remove rounding left in the sum
        let mean = balanced.iter().sum::<f64>() / balanced.len() as f64;
        Self::new(balanced.iter().map(|x| x - mean).collect())
    }

    pub fn n(&self) -> usize {
        self.xi.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.xi
    }

    pub fn norm(&self) -> f64 {
        self.xi.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        CartanVector { xi: self.xi.iter().map(|x| s * x).collect() }
    }

    pub fn add(&self, other: &CartanVector) -> Result<Self> {
        self.check_dim(other.n())?;
        Ok(CartanVector { xi: self.xi.iter().zip(&other.xi).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &CartanVector) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// `exp(t xi) = diag(e^{i t xi_j})`.
    pub fn exp(&self, t: f64) -> ComplexMatrix {
        diag_phases(&self.xi.iter().map(|x| t * x).collect::<Vec<_>>())
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::Dimension { expected: self.n(), actual: n });
        }
        Ok(())
    }
}

/// The Coxeter element `w` as the cycle `j -> j + 1 (mod n)` together with a
/// representative `a` in the normalizer of the diagonal torus.
#[derive(Debug, Clone)]
pub struct CoxeterRealization {
    /// `perm[j]` is the image of coordinate `j` (0-based).
    pub perm: Vec<usize>,
    pub rep: GroupElement,
}

/// Permutation matrix `P[perm(j), j] = 1` with its first row multiplied by
/// `(-1)^{n-1}`, the sign of the cycle, so that the determinant is one.
pub fn coxeter_element(n: usize) -> Result<CoxeterRealization> {
    if n < 2 {
        return Err(Error::Validation(format!("Coxeter element needs n >= 2, got {n}")));
    }
    let perm: Vec<usize> = (0..n).map(|j| (j + 1) % n).collect();
    let mut m = ComplexMatrix::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = Complex64::new(1.0, 0.0);
    }
    if n % 2 == 0 {
        let mut row = m.row_mut(0);
        row *= Complex64::new(-1.0, 0.0);
    }
    let rep = GroupElement::unitary(&GroupDescriptor::su(n)?, m)?;
    Ok(CoxeterRealization { perm, rep })
}

impl CoxeterRealization {
    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// `w . xi = a xi a^{-1}`: coordinate `j` moves to `perm[j]`.
    pub fn act(&self, xi: &CartanVector) -> Result<CartanVector> {
        xi.check_dim(self.n())?;
        let mut out = vec![0.0; self.n()];
        for (j, &i) in self.perm.iter().enumerate() {
            out[i] = xi.xi[j];
        }
        Ok(CartanVector { xi: out })
    }

    /// Matrix of `w - 1` on the trace-zero subspace in the basis
    /// `f_j = e_j - e_n`, `j < n`. A trace-zero vector has coordinates equal
    /// to its first `n - 1` entries in this basis.
    pub fn restricted_minus_one(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n - 1, n - 1);
        for j in 0..n - 1 {
            let mut f = vec![0.0; n];
            f[j] = 1.0;
            f[n - 1] = -1.0;
            let wf = self.act(&CartanVector { xi: f.clone() }).expect("same dimension");
            for i in 0..n - 1 {
                m[(i, j)] = wf.xi[i] - f[i];
            }
        }
        m
    }

    /// Matrix of `w` on the trace-zero subspace in the same basis.
    pub fn restricted_action(&self) -> DMatrix<f64> {
        self.restricted_minus_one() + DMatrix::identity(self.n() - 1, self.n() - 1)
    }
}

/// `xi'` with `w . xi' - xi' = xi`.
pub fn coxeter_solve(w: &CoxeterRealization, xi: &CartanVector) -> Result<CartanVector> {
    xi.check_dim(w.n())?;
    let n = w.n();
    let rhs = DVector::from_column_slice(&xi.xi[..n - 1]);
    let sol = w
        .restricted_minus_one()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Validation("w - 1 is singular on the trace-zero subspace".into()))?;
    let mut out: Vec<f64> = sol.iter().copied().collect();
    out.push(-sol.iter().sum::<f64>());
    Ok(CartanVector { xi: out })
}

/// `|w . xi' - xi' - xi|`.
pub fn coxeter_residual(w: &CoxeterRealization, xi: &CartanVector, xi_prime: &CartanVector) -> Result<f64> {
    Ok(w.act(xi_prime)?.sub(xi_prime)?.sub(xi)?.norm())
}

/// `|a exp(t xi') a^{-1} exp(-t xi') - exp(t xi)|_F` with `xi'` solved from `xi`.
pub fn commutation_identity_check(w: &CoxeterRealization, xi: &CartanVector, t: f64) -> Result<f64> {
    let xi_prime = coxeter_solve(w, xi)?;
    let a = w.rep.as_unitary().expect("SU payload");
    let lhs = a * xi_prime.exp(t) * a.adjoint() * xi_prime.exp(-t);
    Ok((lhs - xi.exp(t)).norm())
}

/// `min |lambda - 1|` over the eigenvalues of `w` on the trace-zero subspace.
pub fn unit_eigenvalue_margin(w: &CoxeterRealization) -> f64 {
    w.restricted_action()
        .complex_eigenvalues()
        .iter()
        .map(|l| (l - Complex64::new(1.0, 0.0)).norm())
        .fold(f64::INFINITY, f64::min)
}
