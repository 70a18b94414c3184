//! Conjugation into the standard maximal torus and square roots.
//!
//! Standard tori: diagonal matrices in `SU(n)`; `diag(e^{i theta}, e^{-i theta})`
//! in the `2n x 2n` model of `Sp(n)`; block-diagonal plane rotations
//! `R(theta_1) + ... + R(theta_m) (+ 1)` in `SO(n)`.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use super::center::CenterElement;
use super::descriptor::{Family, GroupDescriptor};
use super::element::{symplectic_j, GroupElement, Payload, RealMatrix};
use crate::error::{Error, Result};
use crate::numerics::{balance_angles, diag_phases, principal_angle, unitary_eig, ComplexMatrix, CLUSTER_TOL};

/// `c = g * t * g^{-1}` with `t` in the standard torus described by `angles`.
#[derive(Debug, Clone)]
pub struct TorusConjugation {
    pub g: GroupElement,
    pub angles: Vec<f64>,
}

impl TorusConjugation {
    /// The torus element `g^{-1} c g` rebuilt from the angles.
    pub fn torus_element(&self) -> GroupElement {
        let d = self.g.descriptor();
        GroupElement::from_parts_unchecked(d.clone(), torus_payload(d, &self.angles))
    }
}

/// Torus element with the given coordinates.
pub fn torus_payload(d: &GroupDescriptor, angles: &[f64]) -> Payload {
    match d.family() {
        Family::SU => Payload::Unitary(diag_phases(angles)),
        Family::Sp => {
            let mut all = angles.to_vec();
            all.extend(angles.iter().map(|a| -a));
            Payload::Unitary(diag_phases(&all))
        }
        Family::SO => Payload::Orthogonal(rotation_blocks(d.n(), angles)),
        Family::Spin => unreachable!("Spin has no matrix torus model here"),
    }
}

fn rotation_blocks(n: usize, angles: &[f64]) -> RealMatrix {
    let mut m = RealMatrix::identity(n, n);
    for (k, &t) in angles.iter().enumerate() {
        let (s, c) = t.sin_cos();
        m[(2 * k, 2 * k)] = c;
        m[(2 * k, 2 * k + 1)] = -s;
        m[(2 * k + 1, 2 * k)] = s;
        m[(2 * k + 1, 2 * k + 1)] = c;
    }
    m
}

/// Finds `g` with `g^{-1} c g` in the standard torus. `g` lies in the same
/// group as `c` (determinant one, quaternionic, or special orthogonal).
pub fn conjugate_to_torus(c: &GroupElement) -> Result<TorusConjugation> {
    let d = c.descriptor();
    match c.payload() {
        Payload::Unitary(m) if d.family() == Family::SU => {
            let eig = unitary_eig(m)?;
            let mut v = eig.vectors;
            let det = v.clone().determinant();
            let fix = det.conj() / det.norm();
            let mut col = v.column_mut(0);
            col *= fix;
            Ok(TorusConjugation { g: GroupElement::from_parts_unchecked(d.clone(), Payload::Unitary(v)), angles: eig.angles })
        }
        Payload::Unitary(m) => {
            let (frame, angles) = symplectic_eig(m, d.n())?;
            Ok(TorusConjugation { g: GroupElement::from_parts_unchecked(d.clone(), Payload::Unitary(frame)), angles })
        }
        Payload::Orthogonal(r) => {
            let (q, angles) = rotation_form(r)?;
            Ok(TorusConjugation { g: GroupElement::from_parts_unchecked(d.clone(), Payload::Orthogonal(q)), angles })
        }
        Payload::Spin(_) => Err(Error::Unsupported(
            "torus conjugation needs a matrix payload; project Spin elements to SO first".into(),
        )),
    }
}

/// A square root `r` with `r^2 = g`, built by halving torus coordinates.
///
/// In `SU(n)` the principal angles are first shifted to sum to zero so the
/// root has determinant one; in `Sp(n)` and `SO(n)` the paired torus
/// coordinates keep the root inside the group.
pub fn square_root(g: &GroupElement) -> Result<GroupElement> {
    let d = g.descriptor();
    if d.family() == Family::Spin {
        return Err(Error::Unsupported("square_root on Spin payloads: take the root in SO(n) and lift".into()));
    }
    let tc = conjugate_to_torus(g)?;
    let half: Vec<f64> = match d.family() {
        Family::SU => balance_angles(&tc.angles).iter().map(|a| a / 2.0).collect(),
        _ => tc.angles.iter().map(|a| a / 2.0).collect(),
    };
    let t = GroupElement::from_parts_unchecked(d.clone(), torus_payload(d, &half));
    tc.g.mul(&t)?.mul(&tc.g.inv())
}

/// For `k = zeta I` in `SU(n)` with `zeta = e^{2 pi i m / n}`, the diagonal
/// `q` with angles `pi m / n + pi eps_j`, `eps_1 = m mod 2`, `eps_{j>1} = 0`.
/// Then `q^2 = k` and `det q = 1`.
pub fn central_square_root_in_torus(k: &CenterElement) -> Result<GroupElement> {
    let d = k.element.descriptor();
    if d.family() != Family::SU {
        return Err(Error::Unsupported(format!("central torus square root is implemented for SU(n), got {d}")));
    }
    Ok(GroupElement::from_parts_unchecked(d.clone(), Payload::Unitary(diag_phases(&central_root_angles(d.n(), k.coords[0])))))
}

pub fn central_root_angles(n: usize, m: u64) -> Vec<f64> {
    let base = PI * m as f64 / n as f64;
    (0..n).map(|j| if j == 0 && m % 2 == 1 { base + PI } else { base }).collect()
}

/// `v -> J conj(v)`.
fn quaternionic_partner(j: &ComplexMatrix, v: &DVector<Complex64>) -> DVector<Complex64> {
    j * v.map(|z| z.conj())
}

/// Quaternionic Gram-Schmidt: orthonormal `v_1..v_n` with the `J conj(v_i)`
/// mutually orthonormal as well, assembled as `[v_1..v_n | J conj(v_1)..]`.
pub(crate) fn quaternionic_frame(n: usize, columns: &[DVector<Complex64>]) -> Result<ComplexMatrix> {
    let vs = quaternionic_orthonormalize(n, columns, &[]);
    if vs.len() != n {
        return Err(Error::Validation("columns do not span a quaternionic frame".into()));
    }
    Ok(assemble_frame(n, &vs))
}

fn quaternionic_orthonormalize(
    n: usize,
    columns: &[DVector<Complex64>],
    existing: &[DVector<Complex64>],
) -> Vec<DVector<Complex64>> {
    let j = symplectic_j(n);
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    for e in existing {
        basis.push(e.clone());
        basis.push(quaternionic_partner(&j, e));
    }
    let mut out = Vec::new();
    for col in columns {
        let mut u = col.clone();
        for _ in 0..2 {
            for b in &basis {
                let p = b.dotc(&u);
                u -= b * p;
            }
        }
        let norm = u.norm();
        if norm < 1e-6 {
            continue;
        }
        u /= Complex64::from(norm);
        let w = quaternionic_partner(&j, &u);
        basis.push(u.clone());
        basis.push(w);
        out.push(u);
    }
    out
}

fn assemble_frame(n: usize, vs: &[DVector<Complex64>]) -> ComplexMatrix {
    let j = symplectic_j(n);
    let mut frame = ComplexMatrix::zeros(2 * n, 2 * n);
    for (i, v) in vs.iter().enumerate() {
        frame.set_column(i, v);
        frame.set_column(n + i, &quaternionic_partner(&j, v));
    }
    frame
}

/// Decomposes `m` in `Sp(n)` as `F diag(e^{i theta}, e^{-i theta}) F^*` with
/// `F` in `Sp(n)`.
///
/// Eigenvectors with angle in `(0, pi)` are used directly; their partners
/// `J conj(v)` are eigenvectors for the conjugate eigenvalue. The clusters at
/// `+1` and `-1` are self-conjugate and are split by quaternionic
/// Gram-Schmidt.
fn symplectic_eig(m: &ComplexMatrix, n: usize) -> Result<(ComplexMatrix, Vec<f64>)> {
    let eig = unitary_eig(m)?;
    let col = |i: usize| eig.vectors.column(i).clone_owned();
    let mut vs: Vec<(f64, DVector<Complex64>)> = Vec::new();
    let mut near_zero = Vec::new();
    let mut near_pi = Vec::new();
    for (i, &a) in eig.angles.iter().enumerate() {
        if a.abs() <= CLUSTER_TOL {
            near_zero.push(col(i));
        } else if a.abs() >= PI - CLUSTER_TOL {
            near_pi.push(col(i));
        } else if a > 0.0 {
            vs.push((a, col(i)));
        }
    }
    let generic: Vec<DVector<Complex64>> = vs.iter().map(|(_, v)| v.clone()).collect();
    let mut existing = generic.clone();
    for group in [near_zero, near_pi] {
        let extra = quaternionic_orthonormalize(n, &group, &existing);
        for v in extra {
            let rayleigh = v.dotc(&(m * &v));
            vs.push((principal_angle(rayleigh), v.clone()));
            existing.push(v);
        }
    }
    if vs.len() != n {
        return Err(Error::Validation(format!(
            "symplectic eigenbasis has {} vectors, expected {n}; input is not in Sp({n})",
            vs.len()
        )));
    }
    vs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let angles: Vec<f64> = vs.iter().map(|(a, _)| *a).collect();
    let frame = assemble_frame(n, &vs.into_iter().map(|(_, v)| v).collect::<Vec<_>>());
    Ok((frame, angles))
}

/// Orthonormal real basis of the span of a conjugation-invariant set of
/// complex vectors: pivoted Gram-Schmidt over their real and imaginary parts.
fn real_basis(vectors: &[DVector<Complex64>]) -> Result<Vec<Vec<f64>>> {
    let mut pool: Vec<DVector<f64>> = vectors.iter().flat_map(|v| [v.map(|z| z.re), v.map(|z| z.im)]).collect();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    while basis.len() < vectors.len() {
        let (best, norm) = pool
            .iter()
            .enumerate()
            .map(|(i, u)| (i, u.norm()))
            .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if norm < 1e-3 {
            return Err(Error::Validation("real eigenspace basis has the wrong dimension".into()));
        }
        let b = pool.swap_remove(best) / norm;
        for u in pool.iter_mut() {
            let p = b.dot(u);
            *u -= &b * p;
        }
        basis.push(b);
    }
    Ok(basis.into_iter().map(|b| b.iter().copied().collect()).collect())
}

/// Real normal form `r = q R(theta) q^T` with `q` in `SO(n)`, one angle per
/// coordinate plane `(2k, 2k+1)`, and a trailing fixed axis for odd `n`.
///
/// An eigenvector `v = x + i y` for `e^{i theta}`, `0 < theta < pi`, spans
/// the invariant plane `(sqrt 2 x, -sqrt 2 y)`. The eigenspaces for `+1` and
/// `-1` are real; real bases come from the real and imaginary parts of their
/// complex eigenvectors.
fn rotation_form(r: &RealMatrix) -> Result<(RealMatrix, Vec<f64>)> {
    let n = r.nrows();
    let eig = unitary_eig(&r.map(|x| Complex64::new(x, 0.0)))?;

    // (angle, first axis, second axis) for each rotation plane
    let mut planes: Vec<(f64, Vec<f64>, Vec<f64>)> = Vec::new();
    let mut minus_complex = Vec::new();
    let mut plus_complex = Vec::new();
    for (i, &a) in eig.angles.iter().enumerate() {
        let v = eig.vectors.column(i);
        if a.abs() <= CLUSTER_TOL {
            plus_complex.push(v.clone_owned());
        } else if a.abs() >= PI - CLUSTER_TOL {
            minus_complex.push(v.clone_owned());
        } else if a > 0.0 {
            let s2 = std::f64::consts::SQRT_2;
            planes.push((a, v.iter().map(|z| s2 * z.re).collect(), v.iter().map(|z| -s2 * z.im).collect()));
        }
    }
    let minus = real_basis(&minus_complex)?;
    let plus = real_basis(&plus_complex)?;
    if minus.len() % 2 == 1 {
        return Err(Error::Validation("odd multiplicity of eigenvalue -1; not in SO(n)".into()));
    }
    for pair in minus.chunks(2) {
        planes.push((PI, pair[0].clone(), pair[1].clone()));
    }
    let mut fixed = plus.into_iter();
    while planes.len() < n / 2 {
        let (a, b) = (fixed.next(), fixed.next());
        match (a, b) {
            (Some(a), Some(b)) => planes.push((0.0, a, b)),
            _ => return Err(Error::Validation("inconsistent eigenspace dimensions".into())),
        }
    }
    let last = fixed.next();

    let assemble = |planes: &[(f64, Vec<f64>, Vec<f64>)], last: &Option<Vec<f64>>| {
        let mut m = RealMatrix::zeros(n, n);
        for (k, (_, u, w)) in planes.iter().enumerate() {
            m.set_column(2 * k, &DVector::from_column_slice(u));
            m.set_column(2 * k + 1, &DVector::from_column_slice(w));
        }
        if let Some(v) = last {
            m.set_column(n - 1, &DVector::from_column_slice(v));
        }
        m
    };
    let mut last = last;
    if assemble(&planes, &last).determinant() < 0.0 {
        if let Some(v) = last.as_mut() {
            v.iter_mut().for_each(|x| *x = -*x);
        } else {
            let p = &mut planes[0];
            p.2.iter_mut().for_each(|x| *x = -*x);
            p.0 = -p.0;
        }
    }
    // swapping whole planes is an even permutation of columns
    planes.sort_by(|a, b| b.0.total_cmp(&a.0));
    let frame = assemble(&planes, &last);

    // refine angles from the conjugated matrix
    let block = frame.transpose() * r * &frame;
    let angles = (0..n / 2)
        .map(|k| {
            let (a, b) = (2 * k, 2 * k + 1);
            (0.5 * (block[(b, a)] - block[(a, b)])).atan2(0.5 * (block[(a, a)] + block[(b, b)]))
        })
        .collect();
    Ok((frame, angles))
}
