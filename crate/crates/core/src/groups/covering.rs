//! The covering map `rho: G~ -> G` and lifts through it.

use super::descriptor::{Family, GroupDescriptor};
use super::element::{GroupElement, Payload, RealMatrix};
use super::torus::conjugate_to_torus;
use crate::error::{Error, Result};
use crate::numerics::{CliffordElement, MEMBERSHIP_TOL};

/// Matrix of `v -> x v x^{-1}` on grade-one blades: entry `(i, j)` is the
/// `e_i` coefficient of `x e_j x^{-1}`.
pub fn spin_to_rotation(x: &CliffordElement) -> RealMatrix {
    let n = x.n();
    let xinv = x.reverse();
    let mut r = RealMatrix::zeros(n, n);
    for j in 0..n {
        let ej = CliffordElement::generator(n, j + 1).expect("index in range");
        let image = &(x * &ej) * &xinv;
        for i in 0..n {
            r[(i, j)] = image.coeff(1 << i);
        }
    }
    r
}

/// A plane rotation in coordinates `(p, q)`: `e_p -> cos t e_p + sin t e_q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneRotation {
    pub p: usize,
    pub q: usize,
    pub angle: f64,
}

impl PlaneRotation {
    pub fn matrix(&self, n: usize) -> RealMatrix {
        let mut m = RealMatrix::identity(n, n);
        let (s, c) = self.angle.sin_cos();
        m[(self.p, self.p)] = c;
        m[(self.q, self.p)] = s;
        m[(self.p, self.q)] = -s;
        m[(self.q, self.q)] = c;
        m
    }

    /// `cos(t/2) - sin(t/2) e_p e_q`, which acts on vectors as this rotation.
    pub fn spin_lift(&self, n: usize) -> CliffordElement {
        let (s, c) = (0.5 * self.angle).sin_cos();
        let mask = (1 << self.p) | (1 << self.q);
        let mut coeffs = vec![0.0; 1 << n];
        coeffs[0] = c;
        coeffs[mask] = -s;
        CliffordElement::from_coeffs(n, coeffs).expect("finite coefficients")
    }
}

/// Factors `r = G_1 G_2 ... G_m` into plane rotations.
///
/// Below-diagonal entries are eliminated column by column, left to right,
/// each by a rotation in the plane of the pivot row and the target row with
/// the pivot kept nonnegative. For `r` in `SO(n)` the reduced matrix is the
/// identity, so `r` is the product of the inverse eliminations.
pub fn givens_factorization(r: &RealMatrix) -> Vec<PlaneRotation> {
    let n = r.nrows();
    let mut work = r.clone();
    let mut eliminations = Vec::new();
    for col in 0..n {
        for row in (col + 1)..n {
            let (a, b) = (work[(col, col)], work[(row, col)]);
            if b == 0.0 && a >= 0.0 {
                continue;
            }
            // rotation G with G (a, b) = (h, 0) in the (col, row) plane is the
            // plane rotation by -atan2(b, a)
            let angle = b.atan2(a);
            let g = PlaneRotation { p: col, q: row, angle: -angle };
            work = g.matrix(n) * work;
            eliminations.push(PlaneRotation { p: col, q: row, angle });
        }
    }
    // r = G_1^{-1} G_2^{-1} ... with G_k^{-1} the rotation by +angle
    eliminations
}

/// A preimage of `r` under `Spin(n) -> SO(n)`. The other preimage is its
/// negative.
pub fn lift_so_to_spin(r: &GroupElement) -> Result<GroupElement> {
    let d = r.descriptor();
    let m = r
        .as_orthogonal()
        .ok_or_else(|| Error::Validation(format!("lift_so_to_spin expects an SO(n) element, got {d}")))?;
    GroupElement::orthogonal(d, m.clone())?;
    let n = d.n();
    let spin = GroupDescriptor::spin(n)?;
    let factors = givens_factorization(m);
    let mut x = CliffordElement::one(n)?;
    for f in &factors {
        x = &x * &f.spin_lift(n);
    }
    GroupElement::new(spin, Payload::Spin(x))
}

/// `rho(x)` for `x` in the cover of `d`. Central quotients keep the cover
/// payload as representative; `Spin(n) -> SO(n)` is the vector action.
pub fn project_cover(x: &GroupElement, d: &GroupDescriptor) -> Result<GroupElement> {
    let cover = d.cover();
    if x.descriptor() != &cover {
        return Err(Error::DescriptorMismatch { left: x.descriptor().to_string(), right: cover.to_string() });
    }
    match d.family() {
        Family::SO => {
            let spin = x.as_spin().expect("Spin cover payload");
            GroupElement::with_tolerance(d.clone(), Payload::Orthogonal(spin_to_rotation(spin)), 10.0 * MEMBERSHIP_TOL)
        }
        _ => Ok(x.reinterpret(d)),
    }
}

/// A preimage in the universal cover of an element of `G`.
pub fn lift_to_cover(g: &GroupElement) -> Result<GroupElement> {
    let d = g.descriptor();
    match d.family() {
        Family::SO => lift_so_to_spin(g),
        _ => Ok(g.reinterpret(&d.cover())),
    }
}

/// Square root in `Spin(n)`, taken through `SO(n)`.
///
/// With `rho(y) = Q R(theta) Q^T`, the lift `Q~ t(theta) Q~^{-1}` of the
/// torus part equals `y` or `-y`; in the second case `theta_1` is shifted by
/// `2 pi`, which flips the sign of `t(theta)`. Halving `theta` then gives a
/// root of `y` itself.
pub fn spin_square_root(y: &GroupElement) -> Result<GroupElement> {
    let d = y.descriptor();
    let x = y
        .as_spin()
        .ok_or_else(|| Error::Validation(format!("spin_square_root expects a Spin(n) element, got {d}")))?;
    let n = d.n();
    let so = GroupDescriptor::so(n)?;
    let r = GroupElement::with_tolerance(so, Payload::Orthogonal(spin_to_rotation(x)), 10.0 * MEMBERSHIP_TOL)?;
    let tc = conjugate_to_torus(&r)?;
    let q = lift_so_to_spin(&tc.g)?;
    let q = q.as_spin().expect("Spin payload");
    let torus_lift = |angles: &[f64]| -> CliffordElement {
        let mut t = CliffordElement::one(n).expect("n checked by descriptor");
        for (k, &a) in angles.iter().enumerate() {
            t = &t * &PlaneRotation { p: 2 * k, q: 2 * k + 1, angle: a }.spin_lift(n);
        }
        t
    };
    let mut angles = tc.angles.clone();
    let rebuilt = &(q * &torus_lift(&angles)) * &q.reverse();
    if rebuilt.distance(x) > rebuilt.distance(&-x) {
        angles[0] += 2.0 * std::f64::consts::PI;
    }
    let half: Vec<f64> = angles.iter().map(|a| 0.5 * a).collect();
    let root = &(q * &torus_lift(&half)) * &q.reverse();
    GroupElement::new(d.clone(), Payload::Spin(root))
}
