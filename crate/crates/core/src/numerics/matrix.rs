use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::MEMBERSHIP_TOL;
use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Eigenvalue angles closer than this are treated as one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Angles within this distance of `-pi` are moved onto the `+pi` side of the cut.
const BRANCH_CUT_TOL: f64 = 1e-12;

pub fn complex_identity(n: usize) -> ComplexMatrix {
    DMatrix::identity(n, n)
}

/// `diag(e^{i angles})`.
pub fn diag_phases(angles: &[f64]) -> ComplexMatrix {
    let d = DVector::from_iterator(angles.len(), angles.iter().map(|&a| Complex64::from_polar(1.0, a)));
    DMatrix::from_diagonal(&d)
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).norm()
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && frobenius_distance(&(m.adjoint() * m), &complex_identity(m.nrows())) <= tol
}

pub fn is_skew_hermitian(x: &ComplexMatrix, tol: f64) -> bool {
    x.is_square() && (x + x.adjoint()).norm() <= tol * x.norm().max(1.0)
}

/// Argument on the principal branch `(-pi, pi]`.
pub fn principal_angle(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI + BRANCH_CUT_TOL {
        PI
    } else {
        a
    }
}

/// Shifts principal angles by multiples of `2 pi` so that they sum to zero.
///
/// The angles of a determinant-one diagonal matrix sum to `2 pi m` for some
/// integer `m`. When `m > 0` the `m` largest angles are lowered by `2 pi`
/// (ties go to the later index); when `m < 0` the `|m|` smallest are raised
/// (ties go to the earlier index). The result is a logarithm in the trace-zero
/// Cartan subalgebra.
pub fn balance_angles(angles: &[f64]) -> Vec<f64> {
    let mut out = angles.to_vec();
    let total: f64 = angles.iter().sum();
    let m = (total / (2.0 * PI)).round() as i64;
    if m == 0 {
        return out;
    }
    let mut order: Vec<usize> = (0..angles.len()).collect();
    if m > 0 {
        // descending angle, later index first on ties
        order.sort_by(|&i, &j| angles[j].total_cmp(&angles[i]).then(j.cmp(&i)));
        for &i in order.iter().take(m as usize) {
            out[i] -= 2.0 * PI;
        }
    } else {
        order.sort_by(|&i, &j| angles[i].total_cmp(&angles[j]).then(i.cmp(&j)));
        for &i in order.iter().take((-m) as usize) {
            out[i] += 2.0 * PI;
        }
    }
    out
}

/// Spectral decomposition `m = vectors * diag(e^{i angles}) * vectors^*` of a
/// unitary matrix.
#[derive(Debug, Clone)]
pub struct UnitaryEig {
    pub vectors: ComplexMatrix,
    /// Principal angles in `(-pi, pi]`, sorted descending.
    pub angles: Vec<f64>,
}

impl UnitaryEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.vectors * diag_phases(&self.angles) * self.vectors.adjoint()
    }

    /// Half-open index ranges of angle clusters (consecutive gaps <= [`CLUSTER_TOL`]).
    pub fn clusters(&self) -> Vec<std::ops::Range<usize>> {
        angle_clusters(&self.angles)
    }
}

fn angle_clusters(sorted_desc: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted_desc.len() {
        if i == sorted_desc.len() || sorted_desc[i - 1] - sorted_desc[i] > CLUSTER_TOL {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Eigendecomposition of a unitary (or real orthogonal) matrix.
///
/// `u = e^{i psi} m` is mapped to the Hermitian matrix
/// `K = i (1 - u)(1 + u)^{-1}`, whose eigenvalue `tan(alpha / 2)` is monotone
/// in the eigenvalue angle `alpha` of `u`, so the eigenvectors of `K` are
/// eigenvectors of `m` and nearby angles stay together. The rotation `psi` is
/// taken from `2 pi k / (2n + 1)` to keep `-1` far from the spectrum of `u`.
/// Angles are read off as Rayleigh quotients, vectors within an angle cluster
/// are re-orthonormalized, and each column is phase fixed so that its first
/// nonzero entry is real positive.
pub fn unitary_eig(m: &ComplexMatrix) -> Result<UnitaryEig> {
    if !is_unitary(m, MEMBERSHIP_TOL) {
        return Err(Error::Validation("unitary_eig: input is not unitary".into()));
    }
    let n = m.nrows();
    let id = complex_identity(n);
    let shifts = 2 * n + 1;
    let (u, _) = (0..shifts)
        .map(|k| {
            let u = m * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / shifts as f64);
            let gap = (&id + &u).singular_values().min();
            (u, gap)
        })
        .fold(None, |best: Option<(ComplexMatrix, f64)>, cur| match best {
            Some(b) if b.1 >= cur.1 => Some(b),
            _ => Some(cur),
        })
        .expect("at least one shift");
    let inv = (&id + &u)
        .try_inverse()
        .ok_or_else(|| Error::Validation("unitary_eig: Cayley transform is singular".into()))?;
    let k = (&id - &u) * inv * Complex64::i();
    let k = (&k + k.adjoint()) * Complex64::from(0.5);
    let q = k.symmetric_eigen().eigenvectors;

    let raw: Vec<f64> = (0..n).map(|i| principal_angle(q.column(i).dotc(&(m * q.column(i))))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].total_cmp(&raw[i]));

    let angles: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &q.column(src));
    }
    for cluster in angle_clusters(&angles) {
        orthonormalize_columns(&mut vectors, cluster);
    }
    for j in 0..n {
        fix_column_phase(&mut vectors, j);
    }
    Ok(UnitaryEig { vectors, angles })
}

/// Modified Gram-Schmidt over a contiguous block of columns, against all
/// earlier columns of the block.
fn orthonormalize_columns(v: &mut ComplexMatrix, cols: std::ops::Range<usize>) {
    for j in cols.clone() {
        for i in cols.start..j {
            let proj: Complex64 = v.column(i).dotc(&v.column(j));
            let ci = v.column(i).clone_owned();
            let mut cj = v.column_mut(j);
            cj -= ci * proj;
        }
        let norm = v.column(j).norm();
        if norm > 0.0 {
            let mut cj = v.column_mut(j);
            cj /= Complex64::from(norm);
        }
    }
}

fn fix_column_phase(v: &mut ComplexMatrix, j: usize) {
    let pivot = v.column(j).iter().copied().find(|z| z.norm() > 1e-12);
    if let Some(z) = pivot {
        let phase = z.conj() / z.norm();
        let mut col = v.column_mut(j);
        col *= phase;
    }
}

/// Matrix exponential of a skew-Hermitian matrix.
///
/// `i x` is Hermitian, so `x = -i V diag(lambda) V^*` and
/// `exp(x) = V diag(e^{-i lambda}) V^*`.
pub fn exp_skew(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !is_skew_hermitian(x, MEMBERSHIP_TOL) {
        return Err(Error::Validation("exp_skew: input is not skew-Hermitian".into()));
    }
    let n = x.nrows();
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    let mut h = x * Complex64::i();
    // symmetrize away rounding so the Hermitian solver sees an exact input
    h = (&h + h.adjoint()) * Complex64::from(0.5);
    let eig = h.symmetric_eigen();
    let phases: Vec<f64> = eig.eigenvalues.iter().map(|&l| -l).collect();
    Ok(&eig.eigenvectors * diag_phases(&phases) * eig.eigenvectors.adjoint())
}
