use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::descriptor::{Family, GroupDescriptor};
use crate::error::{Error, Result};
use crate::numerics::{complex_identity, is_unitary, CliffordElement, ComplexMatrix, MEMBERSHIP_TOL};

pub type RealMatrix = DMatrix<f64>;

/// Concrete data of a group element.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    /// `SU(n)`, and `Sp(n)` embedded as quaternionic-unitary `2n x 2n` matrices.
    Unitary(ComplexMatrix),
    /// `SO(n)`.
    Orthogonal(RealMatrix),
    /// Even unit-norm element of the Clifford algebra.
    Spin(CliffordElement),
}

impl Payload {
    fn mul(&self, other: &Payload) -> Payload {
        match (self, other) {
            (Payload::Unitary(a), Payload::Unitary(b)) => Payload::Unitary(a * b),
            (Payload::Orthogonal(a), Payload::Orthogonal(b)) => Payload::Orthogonal(a * b),
            (Payload::Spin(a), Payload::Spin(b)) => Payload::Spin(a * b),
            _ => unreachable!("payload kinds are fixed by the descriptor"),
        }
    }

    fn inv(&self) -> Payload {
        match self {
            Payload::Unitary(a) => Payload::Unitary(a.adjoint()),
            Payload::Orthogonal(a) => Payload::Orthogonal(a.transpose()),
            Payload::Spin(a) => Payload::Spin(a.reverse()),
        }
    }

    /// Frobenius distance for matrices, Euclidean coefficient distance for Spin.
    pub fn distance(&self, other: &Payload) -> f64 {
        match (self, other) {
            (Payload::Unitary(a), Payload::Unitary(b)) => (a - b).norm(),
            (Payload::Orthogonal(a), Payload::Orthogonal(b)) => (a - b).norm(),
            (Payload::Spin(a), Payload::Spin(b)) => a.distance(b),
            _ => f64::INFINITY,
        }
    }

    /// Entries flattened for ordering: real parts, then imaginary parts.
    fn flattened(&self) -> Vec<f64> {
        match self {
            Payload::Unitary(m) => {
                let mut v: Vec<f64> = m.iter().map(|z| z.re).collect();
                v.extend(m.iter().map(|z| z.im));
                v
            }
            Payload::Orthogonal(m) => m.iter().copied().collect(),
            Payload::Spin(x) => x.coeffs().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    descriptor: GroupDescriptor,
    payload: Payload,
}

/// `J = [[0, -I], [I, 0]]`, defining the quaternionic structure on `C^{2n}`.
pub fn symplectic_j(n: usize) -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = Complex64::new(-1.0, 0.0);
        j[(n + i, i)] = Complex64::new(1.0, 0.0);
    }
    j
}

fn complex_det(m: &ComplexMatrix) -> Complex64 {
    m.clone().determinant()
}

pub(crate) fn validate_payload(d: &GroupDescriptor, payload: &Payload, tol: f64) -> Result<()> {
    let fail = |msg: String| Err(Error::Validation(format!("{d}: {msg}")));
    match (d.family(), payload) {
        (Family::SU, Payload::Unitary(m)) | (Family::Sp, Payload::Unitary(m)) => {
            let dim = d.matrix_dim();
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::Dimension { expected: dim, actual: m.nrows() });
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return fail("non-finite entry".into());
            }
            if !is_unitary(m, tol) {
                return fail("matrix is not unitary".into());
            }
            if d.family() == Family::SU {
                let det = complex_det(m);
                if (det - Complex64::new(1.0, 0.0)).norm() > tol {
                    return fail(format!("determinant {det} is not 1"));
                }
            } else {
                let j = symplectic_j(d.n());
                let conj = m.map(|z| z.conj());
                if (&j * conj * j.adjoint() - m).norm() > tol {
                    return fail("matrix does not commute with the quaternionic structure".into());
                }
            }
            Ok(())
        }
        (Family::SO, Payload::Orthogonal(m)) => {
            if m.nrows() != d.n() || m.ncols() != d.n() {
                return Err(Error::Dimension { expected: d.n(), actual: m.nrows() });
            }
            if m.iter().any(|x| !x.is_finite()) {
                return fail("non-finite entry".into());
            }
            if (m.transpose() * m - RealMatrix::identity(d.n(), d.n())).norm() > tol {
                return fail("matrix is not orthogonal".into());
            }
            if (m.determinant() - 1.0).abs() > tol {
                return fail("determinant is not 1".into());
            }
            Ok(())
        }
        (Family::Spin, Payload::Spin(x)) => {
            if x.n() != d.n() {
                return Err(Error::Dimension { expected: d.n(), actual: x.n() });
            }
            if x.odd_part_norm() > tol {
                return fail("Spin element has odd-grade components".into());
            }
            let one = CliffordElement::one(d.n())?;
            if (x * &x.reverse()).distance(&one) > tol {
                return fail("x * reverse(x) != 1".into());
            }
            Ok(())
        }
        _ => fail("payload kind does not match the group family".into()),
    }
}

impl GroupElement {
    /// Validated constructor; membership checked at `1e-10`.
    pub fn new(descriptor: GroupDescriptor, payload: Payload) -> Result<Self> {
        Self::with_tolerance(descriptor, payload, MEMBERSHIP_TOL)
    }

    pub fn with_tolerance(descriptor: GroupDescriptor, payload: Payload, tol: f64) -> Result<Self> {
        validate_payload(&descriptor, &payload, tol)?;
        Ok(GroupElement { descriptor, payload })
    }

    pub(crate) fn from_parts_unchecked(descriptor: GroupDescriptor, payload: Payload) -> Self {
        GroupElement { descriptor, payload }
    }

    pub fn identity(d: &GroupDescriptor) -> Self {
        let payload = match d.family() {
            Family::SU | Family::Sp => Payload::Unitary(complex_identity(d.matrix_dim())),
            Family::SO => Payload::Orthogonal(RealMatrix::identity(d.n(), d.n())),
            Family::Spin => Payload::Spin(CliffordElement::one(d.n()).expect("n checked by descriptor")),
        };
        GroupElement { descriptor: d.clone(), payload }
    }

    pub fn unitary(d: &GroupDescriptor, m: ComplexMatrix) -> Result<Self> {
        Self::new(d.clone(), Payload::Unitary(m))
    }

    pub fn orthogonal(d: &GroupDescriptor, m: RealMatrix) -> Result<Self> {
        Self::new(d.clone(), Payload::Orthogonal(m))
    }

    pub fn spin(d: &GroupDescriptor, x: CliffordElement) -> Result<Self> {
        Self::new(d.clone(), Payload::Spin(x))
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn into_payload(self) -> Payload {
        self.payload
    }

    pub fn as_unitary(&self) -> Option<&ComplexMatrix> {
        match &self.payload {
            Payload::Unitary(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_orthogonal(&self) -> Option<&RealMatrix> {
        match &self.payload {
            Payload::Orthogonal(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_spin(&self) -> Option<&CliffordElement> {
        match &self.payload {
            Payload::Spin(x) => Some(x),
            _ => None,
        }
    }

    /// The same payload reinterpreted in another descriptor with the same
    /// payload kind (e.g. a cover representative viewed in a quotient).
    pub(crate) fn reinterpret(&self, d: &GroupDescriptor) -> GroupElement {
        GroupElement { descriptor: d.clone(), payload: self.payload.clone() }
    }

    fn check_same(&self, other: &GroupElement) -> Result<()> {
        if self.descriptor != other.descriptor {
            return Err(Error::DescriptorMismatch {
                left: self.descriptor.to_string(),
                right: other.descriptor.to_string(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check_same(other)?;
        Ok(GroupElement { descriptor: self.descriptor.clone(), payload: self.payload.mul(&other.payload) })
    }

    pub fn inv(&self) -> GroupElement {
        GroupElement { descriptor: self.descriptor.clone(), payload: self.payload.inv() }
    }

    /// `g self g^{-1}`.
    pub fn conjugate_by(&self, g: &GroupElement) -> Result<GroupElement> {
        g.mul(self)?.mul(&g.inv())
    }

    /// `self * self`.
    pub fn square(&self) -> GroupElement {
        GroupElement { descriptor: self.descriptor.clone(), payload: self.payload.mul(&self.payload) }
    }

    /// Distance in `G`: the minimum payload distance over all representatives
    /// `gamma * other`, `gamma` in the quotient subgroup.
    pub fn distance(&self, other: &GroupElement) -> Result<f64> {
        self.check_same(other)?;
        if self.descriptor.family() == Family::SO {
            return Ok(self.payload.distance(&other.payload));
        }
        Ok(self
            .representatives()
            .iter()
            .map(|r| r.distance(&other.payload))
            .fold(f64::INFINITY, f64::min))
    }

    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        self.distance(other).map(|d| d <= tol).unwrap_or(false)
    }

    /// All cover payloads `gamma * self` representing the same element of `G`.
    pub fn representatives(&self) -> Vec<Payload> {
        if self.descriptor.family() == Family::SO {
            return vec![self.payload.clone()];
        }
        let cover = self.descriptor.cover();
        self.descriptor
            .quotient()
            .ambient_elements()
            .map(|coords| center_payload(&cover, coords).mul(&self.payload))
            .collect()
    }

    /// Canonical representative of the coset: the `gamma * g` whose flattened
    /// entries, rounded to a `1e-8` grid, are lexicographically smallest.
    pub fn canonical(&self) -> GroupElement {
        let best = self
            .representatives()
            .into_iter()
            .min_by(|a, b| lex_grid_cmp(&a.flattened(), &b.flattened()))
            .expect("quotient contains the identity");
        GroupElement { descriptor: self.descriptor.clone(), payload: best }
    }
}

fn lex_grid_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let gx = (x * 1e8).round() as i64;
        let gy = (y * 1e8).round() as i64;
        match gx.cmp(&gy) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Payload of the central element with the given coordinates in the center
/// of a simply connected group; see [`super::center_group`] for the model.
pub(crate) fn center_payload(cover: &GroupDescriptor, coords: &[u64]) -> Payload {
    let n = cover.n();
    match cover.family() {
        Family::SU => {
            let zeta = Complex64::from_polar(1.0, 2.0 * PI * coords[0] as f64 / n as f64);
            Payload::Unitary(complex_identity(n) * zeta)
        }
        Family::Sp => {
            let s = if coords[0] == 0 { 1.0 } else { -1.0 };
            Payload::Unitary(complex_identity(2 * n) * Complex64::new(s, 0.0))
        }
        Family::Spin | Family::SO => {
            let one = CliffordElement::one(n).expect("n checked by descriptor");
            let omega = CliffordElement::leading_blade(n, n).expect("n checked by descriptor");
            let x = if n % 2 == 1 {
                if coords[0] == 0 {
                    one
                } else {
                    -&one
                }
            } else if n % 4 == 2 {
                (0..coords[0]).fold(one, |acc, _| &acc * &omega)
            } else {
                let sign = if coords[0] == 0 { one.clone() } else { -&one };
                if coords[1] == 0 {
                    sign
                } else {
                    &sign * &omega
                }
            };
            Payload::Spin(x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn su2_hand_product() {
        let d = GroupDescriptor::su(2).unwrap();
        let a = GroupElement::unitary(&d, dmatrix![c(0.0, 1.0), c(0.0, 0.0); c(0.0, 0.0), c(0.0, -1.0)]).unwrap();
        let b = GroupElement::unitary(&d, dmatrix![c(0.0, 0.0), c(1.0, 0.0); c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let expected = dmatrix![c(0.0, 0.0), c(0.0, 1.0); c(0.0, 1.0), c(0.0, 0.0)];
        assert!((a.mul(&b).unwrap().as_unitary().unwrap() - expected).norm() < 1e-15);
        assert!(a.mul(&a.inv()).unwrap().approx_eq(&GroupElement::identity(&d), 1e-15));
    }

    #[test]
    fn spin3_bivector_squares_to_minus_one() {
        let d = GroupDescriptor::spin(3).unwrap();
        let b = CliffordElement::blade(3, 0b011, 1.0).unwrap();
        let x = GroupElement::spin(&d, b).unwrap();
        let sq = x.mul(&x).unwrap();
        assert_eq!(sq.as_spin().unwrap(), &CliffordElement::scalar(3, -1.0).unwrap());
    }

    #[test]
    fn descriptor_mismatch_is_an_error() {
        let a = GroupElement::identity(&GroupDescriptor::su(2).unwrap());
        let b = GroupElement::identity(&GroupDescriptor::su(3).unwrap());
        assert!(matches!(a.mul(&b), Err(Error::DescriptorMismatch { .. })));
    }

    #[test]
    fn membership_validation() {
        let su2 = GroupDescriptor::su(2).unwrap();
        assert!(GroupElement::unitary(&su2, complex_identity(2) * c(0.0, 1.0)).is_err()); // det -1
        let so3 = GroupDescriptor::so(3).unwrap();
        assert!(GroupElement::orthogonal(&so3, RealMatrix::from_diagonal_element(3, 3, -1.0)).is_err());
        let spin3 = GroupDescriptor::spin(3).unwrap();
        assert!(GroupElement::spin(&spin3, CliffordElement::generator(3, 1).unwrap()).is_err());
        assert!(GroupElement::new(so3, Payload::Unitary(complex_identity(3))).is_err());
        let sp1 = GroupDescriptor::sp(1).unwrap();
        assert!(GroupElement::unitary(&sp1, crate::numerics::diag_phases(&[0.3, 0.3])).is_err());
        assert!(GroupElement::unitary(&sp1, crate::numerics::diag_phases(&[0.3, -0.3])).is_ok());
    }

    #[test]
    fn quotient_equality_ignores_center() {
        let psu = GroupDescriptor::psu(3).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let g = GroupElement::unitary(&psu, crate::numerics::diag_phases(&[0.4, -0.1, -0.3])).unwrap();
        let h = GroupElement::unitary(&psu, g.as_unitary().unwrap() * w).unwrap();
        assert!(g.approx_eq(&h, 1e-12));
        assert!(g.canonical().payload().distance(h.canonical().payload()) < 1e-12);
    }
}
