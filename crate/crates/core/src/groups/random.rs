//! Seedable random group elements.
//!
//! `SU(n)` and `SO(n)`: Gaussian matrix, QR, phase fix from the diagonal of
//! `R`, determinant correction. `Sp(n)`: quaternionic Gram-Schmidt of a
//! quaternionic Gaussian matrix. `Spin(n)`: product of `2n` random unit
//! vectors in the Clifford algebra.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::descriptor::{Family, GroupDescriptor};
use super::element::{GroupElement, Payload, RealMatrix};
use super::torus::quaternionic_frame;
use crate::numerics::{CliffordElement, ComplexMatrix};

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed element of `U(n)`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| complex_normal(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Haar-distributed element of `SU(n)`.
pub fn haar_special_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let q = haar_unitary(n, rng);
    let det = q.clone().determinant();
    let fix = Complex64::from_polar(1.0, -det.arg() / n as f64);
    q * fix
}

pub fn haar_orthogonal_special<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    let g = RealMatrix::from_fn(n, n, |_, _| normal(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    if q.determinant() < 0.0 {
        let mut col = q.column_mut(0);
        col *= -1.0;
    }
    q
}

/// Haar-distributed element of `Sp(n)` in the `2n x 2n` unitary model.
pub fn haar_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let columns: Vec<_> = (0..n)
        .map(|_| nalgebra::DVector::from_fn(2 * n, |_, _| complex_normal(rng)))
        .collect();
    quaternionic_frame(n, &columns).expect("Gaussian columns are quaternionically independent")
}

pub fn random_spin<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CliffordElement {
    let mut x = CliffordElement::one(n).expect("n checked by caller");
    for _ in 0..2 * n {
        let v: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        let u = CliffordElement::vector(&v.iter().map(|c| c / norm).collect::<Vec<_>>()).expect("n checked by caller");
        x = &x * &u;
    }
    // clear rounding on odd blades, renormalize
    let even: Vec<f64> = x.coeffs().iter().enumerate().map(|(m, &c)| if m.count_ones() % 2 == 0 { c } else { 0.0 }).collect();
    let norm = even.iter().map(|c| c * c).sum::<f64>().sqrt();
    CliffordElement::from_coeffs(n, even.iter().map(|c| c / norm).collect()).expect("finite coefficients")
}

/// A random element of `d`; for central quotients, a random cover
/// representative.
pub fn random_element<R: Rng + ?Sized>(d: &GroupDescriptor, rng: &mut R) -> GroupElement {
    let payload = match d.family() {
        Family::SU => Payload::Unitary(haar_special_unitary(d.n(), rng)),
        Family::SO => Payload::Orthogonal(haar_orthogonal_special(d.n(), rng)),
        Family::Sp => Payload::Unitary(haar_symplectic(d.n(), rng)),
        Family::Spin => Payload::Spin(random_spin(d.n(), rng)),
    };
    GroupElement::new(d.clone(), payload).expect("sampler produces group members")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::center::enumerate_center;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_members_for_every_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ds = [
            GroupDescriptor::su(2).unwrap(),
            GroupDescriptor::su(5).unwrap(),
            GroupDescriptor::so(3).unwrap(),
            GroupDescriptor::so(7).unwrap(),
            GroupDescriptor::sp(1).unwrap(),
            GroupDescriptor::sp(3).unwrap(),
            GroupDescriptor::spin(3).unwrap(),
            GroupDescriptor::spin(7).unwrap(),
        ];
        for d in &ds {
            for _ in 0..20 {
                let g = random_element(d, &mut rng);
                assert!(GroupElement::new(d.clone(), g.payload().clone()).is_ok(), "{d}");
            }
        }
    }

    #[test]
    fn center_commutes_with_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ds = [
            GroupDescriptor::su(2).unwrap(),
            GroupDescriptor::su(3).unwrap(),
            GroupDescriptor::sp(2).unwrap(),
            GroupDescriptor::spin(3).unwrap(),
            GroupDescriptor::spin(4).unwrap(),
            GroupDescriptor::spin(6).unwrap(),
        ];
        for d in &ds {
            let (_, center) = enumerate_center(d).unwrap();
            for _ in 0..50 {
                let g = random_element(d, &mut rng);
                for z in &center {
                    let lhs = z.element.mul(&g).unwrap();
                    let rhs = g.mul(&z.element).unwrap();
                    assert!(lhs.distance(&rhs).unwrap() <= 1e-10, "{d}");
                }
            }
        }
    }

    #[test]
    fn same_seed_same_sample() {
        let d = GroupDescriptor::su(3).unwrap();
        let a = random_element(&d, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_element(&d, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }
}
