//! Closed surfaces, their relation words, and points of the relation variety.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cartan::{coxeter_element, coxeter_solve, CartanVector};
use crate::error::{Error, Result};
use crate::groups::{
    conjugate_to_torus, random_element, spin_square_root, square_root, CenterElement, Family, GroupDescriptor,
    GroupElement, Payload,
};

/// Relation values within this distance of the identity are accepted.
pub const RELATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Orientable,
    Nonorientable,
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceKind::Orientable => "orientable",
            SurfaceKind::Nonorientable => "nonorientable",
        })
    }
}

/// A closed surface: orientable of genus `l`, or a connected sum of `k`
/// projective planes.
///
/// Generators: `a_1, b_1, ..., a_l, b_l`, followed by `c` when `k = 2l + 1`
/// or by `c_1, c_2` when `k = 2l + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfacePresentation {
    Orientable { genus: usize },
    Nonorientable { crosscaps: usize },
}

impl SurfacePresentation {
    pub fn orientable(genus: usize) -> Self {
        SurfacePresentation::Orientable { genus }
    }

    pub fn nonorientable(crosscaps: usize) -> Result<Self> {
        if crosscaps == 0 {
            return Err(Error::Validation("a nonorientable surface has at least one crosscap".into()));
        }
        Ok(SurfacePresentation::Nonorientable { crosscaps })
    }

    /// Parses `orientable:<genus>` or `nonorientable:<crosscaps>`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, num) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("surface '{s}': expected orientable:<genus> or nonorientable:<k>")))?;
        let num: usize = num.trim().parse().map_err(|_| Error::Parse(format!("surface '{s}': bad number")))?;
        match kind.trim() {
            "orientable" => Ok(Self::orientable(num)),
            "nonorientable" => Self::nonorientable(num).map_err(|e| Error::Parse(e.to_string())),
            other => Err(Error::Parse(format!("unknown surface kind '{other}'"))),
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        match self {
            SurfacePresentation::Orientable { .. } => SurfaceKind::Orientable,
            SurfacePresentation::Nonorientable { .. } => SurfaceKind::Nonorientable,
        }
    }

    /// Number of handles `l`.
    pub fn handles(&self) -> usize {
        match *self {
            SurfacePresentation::Orientable { genus } => genus,
            SurfacePresentation::Nonorientable { crosscaps } => (crosscaps - 1) / 2,
        }
    }

    /// Number of trailing squared generators: 0, 1 or 2.
    pub fn square_count(&self) -> usize {
        match *self {
            SurfacePresentation::Orientable { .. } => 0,
            SurfacePresentation::Nonorientable { crosscaps } => 2 - crosscaps % 2,
        }
    }

    /// Genus for orientable surfaces, crosscap number otherwise.
    pub fn index(&self) -> usize {
        match *self {
            SurfacePresentation::Orientable { genus } => genus,
            SurfacePresentation::Nonorientable { crosscaps } => crosscaps,
        }
    }

    pub fn generator_count(&self) -> usize {
        2 * self.handles() + self.square_count()
    }

    pub fn generator_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.generator_count());
        for i in 1..=self.handles() {
            names.push(format!("a{i}"));
            names.push(format!("b{i}"));
        }
        match self.square_count() {
            1 => names.push("c".into()),
            2 => {
                names.push("c1".into());
                names.push("c2".into());
            }
            _ => {}
        }
        names
    }
}

impl fmt::Display for SurfacePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind(), self.index())
    }
}

fn check_images(images: &[GroupElement], p: &SurfacePresentation) -> Result<()> {
    if images.len() != p.generator_count() {
        return Err(Error::Dimension { expected: p.generator_count(), actual: images.len() });
    }
    if let Some(first) = images.first() {
        for g in &images[1..] {
            if g.descriptor() != first.descriptor() {
                return Err(Error::DescriptorMismatch {
                    left: first.descriptor().to_string(),
                    right: g.descriptor().to_string(),
                });
            }
        }
    }
    Ok(())
}

/// `a_1 b_1 a_1^{-1} b_1^{-1} ... a_l b_l a_l^{-1} b_l^{-1}`.
pub fn commutator_product(d: &GroupDescriptor, handles: &[GroupElement]) -> Result<GroupElement> {
    let mut acc = GroupElement::identity(d);
    for pair in handles.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        acc = acc.mul(a)?.mul(b)?.mul(&a.inv())?.mul(&b.inv())?;
    }
    Ok(acc)
}

/// Value of the relation word: the commutator product, followed by `c^2` or
/// `c_1^2 c_2^2` in the nonorientable cases. Empty tuples (the sphere) need
/// the descriptor to return its identity, so it is passed explicitly.
pub fn evaluate_relation(d: &GroupDescriptor, images: &[GroupElement], p: &SurfacePresentation) -> Result<GroupElement> {
    check_images(images, p)?;
    if let Some(first) = images.first() {
        if first.descriptor() != d {
            return Err(Error::DescriptorMismatch { left: d.to_string(), right: first.descriptor().to_string() });
        }
    }
    let h = 2 * p.handles();
    let mut acc = commutator_product(d, &images[..h])?;
    for c in &images[h..] {
        acc = acc.mul(&c.square())?;
    }
    Ok(acc)
}

/// A point of `Hom(pi_1(Sigma), G)`.
#[derive(Debug, Clone)]
pub struct Representation {
    presentation: SurfacePresentation,
    descriptor: GroupDescriptor,
    images: Vec<GroupElement>,
    residual: f64,
}

impl Representation {
    /// Checks that the relation holds within [`RELATION_TOL`].
    pub fn new(presentation: SurfacePresentation, descriptor: GroupDescriptor, images: Vec<GroupElement>) -> Result<Self> {
        Self::with_tolerance(presentation, descriptor, images, RELATION_TOL)
    }

    pub fn with_tolerance(
        presentation: SurfacePresentation,
        descriptor: GroupDescriptor,
        images: Vec<GroupElement>,
        tol: f64,
    ) -> Result<Self> {
        let rep = Self::unchecked(presentation, descriptor, images)?;
        if rep.residual > tol {
            return Err(Error::RelationViolation { residual: rep.residual, tol });
        }
        Ok(rep)
    }

    /// Records the relation residual without rejecting violations.
    pub fn unchecked(presentation: SurfacePresentation, descriptor: GroupDescriptor, images: Vec<GroupElement>) -> Result<Self> {
        let value = evaluate_relation(&descriptor, &images, &presentation)?;
        let residual = value.distance(&GroupElement::identity(&descriptor))?;
        Ok(Representation { presentation, descriptor, images, residual })
    }

    /// The trivial representation.
    pub fn trivial(presentation: SurfacePresentation, descriptor: GroupDescriptor) -> Self {
        let images = vec![GroupElement::identity(&descriptor); presentation.generator_count()];
        Representation { presentation, descriptor, images, residual: 0.0 }
    }

    pub fn presentation(&self) -> &SurfacePresentation {
        &self.presentation
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    /// Distance of the relation value from the identity.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn relation_value(&self) -> GroupElement {
        evaluate_relation(&self.descriptor, &self.images, &self.presentation).expect("checked on construction")
    }
}

/// Conjugates every image by `g`.
pub fn conjugate_representation(rep: &Representation, g: &GroupElement) -> Result<Representation> {
    if g.descriptor() != rep.descriptor() {
        return Err(Error::DescriptorMismatch { left: rep.descriptor().to_string(), right: g.descriptor().to_string() });
    }
    let images = rep.images().iter().map(|x| x.conjugate_by(g)).collect::<Result<Vec<_>>>()?;
    Representation::unchecked(*rep.presentation(), rep.descriptor().clone(), images)
}

/// `(a, b)` with `a b a^{-1} b^{-1} = g` in `SU(n)`.
///
/// With `g = h exp(xi) h^{-1}`, take `a = h w h^{-1}` for the Coxeter
/// representative `w` and `b = h exp(xi') h^{-1}` with `w . xi' - xi' = xi`.
pub fn commutator_preimage(g: &GroupElement) -> Result<(GroupElement, GroupElement)> {
    let d = g.descriptor();
    if d.family() != Family::SU {
        return Err(Error::Unsupported(format!("commutator_preimage is implemented for SU(n), got {d}")));
    }
    let w = coxeter_element(d.n())?;
    let tc = conjugate_to_torus(g)?;
    let xi = CartanVector::log_of_phases(&tc.angles)?;
    let xi_prime = coxeter_solve(&w, &xi)?;
    let h = &tc.g;
    let rep = w.rep.reinterpret(d);
    let b = GroupElement::from_parts_unchecked(d.clone(), Payload::Unitary(xi_prime.exp(1.0)));
    Ok((rep.conjugate_by(h)?, b.conjugate_by(h)?))
}

/// A square root in a simply connected group.
pub fn root_in_cover(g: &GroupElement) -> Result<GroupElement> {
    match g.descriptor().family() {
        Family::Spin => spin_square_root(g),
        _ => square_root(g),
    }
}

/// A point of the fiber `{relation = k}` in the cover, with its residual.
#[derive(Debug, Clone)]
pub struct FiberSample {
    pub presentation: SurfacePresentation,
    pub k: CenterElement,
    pub images: Vec<GroupElement>,
    pub residual: f64,
}

/// Random point with relation value `k`: handles (and `c_1` in the even
/// case) are Haar random; the last generator is solved as a square root,
/// `c = sqrt(m^{-1} k)` or `c_2 = sqrt((m c_1^2)^{-1} k)` for the commutator
/// product `m`.
pub fn sample_fiber_nonorientable(p: &SurfacePresentation, k: &CenterElement, seed: u64) -> Result<FiberSample> {
    if p.kind() == SurfaceKind::Orientable {
        return Err(Error::Unsupported(
            "orientable fibers have no closed-form last-generator solve; use commutator_preimage".into(),
        ));
    }
    let cover = k.element.descriptor().clone();
    if !cover.is_simply_connected() {
        return Err(Error::Validation(format!("fiber sampling works in a simply connected group, got {cover}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let free = p.generator_count() - 1;
    let mut images: Vec<GroupElement> = (0..free).map(|_| random_element(&cover, &mut rng)).collect();
    let h = 2 * p.handles();
    let mut m = commutator_product(&cover, &images[..h])?;
    if p.square_count() == 2 {
        m = m.mul(&images[h].square())?;
    }
    let last = root_in_cover(&m.inv().mul(&k.element)?)?;
    images.push(last);
    let value = evaluate_relation(&cover, &images, p)?;
    let residual = value.distance(&k.element)?;
    Ok(FiberSample { presentation: *p, k: k.clone(), images, residual })
}

/// Random point of the orientable fiber `{prod [a_i, b_i] = k}` in `SU(n)`:
/// all handles but the last are Haar random, the last is a commutator
/// preimage of what remains.
pub fn sample_fiber_orientable(genus: usize, k: &CenterElement, seed: u64) -> Result<FiberSample> {
    let cover = k.element.descriptor().clone();
    if cover.family() != Family::SU || !cover.is_simply_connected() {
        return Err(Error::Unsupported(format!("orientable fiber sampling is implemented in SU(n), got {cover}")));
    }
    let p = SurfacePresentation::orientable(genus);
    if genus == 0 {
        let residual = GroupElement::identity(&cover).distance(&k.element)?;
        return Ok(FiberSample { presentation: p, k: k.clone(), images: Vec::new(), residual });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images: Vec<GroupElement> = (0..2 * genus - 2).map(|_| random_element(&cover, &mut rng)).collect();
    let m = commutator_product(&cover, &images)?;
    let (a, b) = commutator_preimage(&m.inv().mul(&k.element)?)?;
    images.push(a);
    images.push(b);
    let residual = evaluate_relation(&cover, &images, &p)?.distance(&k.element)?;
    Ok(FiberSample { presentation: p, k: k.clone(), images, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{enumerate_center, project_cover, RealMatrix};
    use crate::numerics::{complex_identity, frobenius_distance};
    use nalgebra::{dmatrix, DVector};
    use num_complex::Complex64;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn su2_pair() -> (GroupDescriptor, GroupElement, GroupElement) {
        let d = GroupDescriptor::su(2).unwrap();
        let a = GroupElement::unitary(&d, dmatrix![c(0.0, 1.0), c(0.0, 0.0); c(0.0, 0.0), c(0.0, -1.0)]).unwrap();
        let b = GroupElement::unitary(&d, dmatrix![c(0.0, 0.0), c(1.0, 0.0); c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        (d, a, b)
    }

    #[test]
    fn generator_signatures() {
        assert_eq!(SurfacePresentation::orientable(2).generator_names(), ["a1", "b1", "a2", "b2"]);
        assert_eq!(SurfacePresentation::nonorientable(1).unwrap().generator_names(), ["c"]);
        assert_eq!(SurfacePresentation::nonorientable(5).unwrap().generator_names(), ["a1", "b1", "a2", "b2", "c"]);
        assert_eq!(SurfacePresentation::nonorientable(4).unwrap().generator_names(), ["a1", "b1", "c1", "c2"]);
        assert_eq!(SurfacePresentation::nonorientable(2).unwrap().generator_count(), 2);
        assert!(SurfacePresentation::nonorientable(0).is_err());
        assert_eq!(SurfacePresentation::parse("nonorientable:6").unwrap().handles(), 2);
        assert!(SurfacePresentation::parse("torus:1").is_err());
    }

    #[test]
    fn identity_images_give_identity() {
        let d = GroupDescriptor::su(3).unwrap();
        for p in [
            SurfacePresentation::orientable(0),
            SurfacePresentation::orientable(3),
            SurfacePresentation::nonorientable(1).unwrap(),
            SurfacePresentation::nonorientable(6).unwrap(),
        ] {
            let images = vec![GroupElement::identity(&d); p.generator_count()];
            let v = evaluate_relation(&d, &images, &p).unwrap();
            assert!(v.approx_eq(&GroupElement::identity(&d), 0.0));
        }
    }

    #[test]
    fn su2_genus_one_commutator_is_minus_identity() {
        let (d, a, b) = su2_pair();
        let v = evaluate_relation(&d, &[a, b], &SurfacePresentation::orientable(1)).unwrap();
        let minus = complex_identity(2) * c(-1.0, 0.0);
        assert!(frobenius_distance(v.as_unitary().unwrap(), &minus) < 1e-15);
    }

    #[test]
    fn so3_involution_on_projective_plane() {
        let so3 = GroupDescriptor::so(3).unwrap();
        let c = GroupElement::orthogonal(&so3, RealMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -1.0, 1.0]))).unwrap();
        let rep = Representation::new(SurfacePresentation::nonorientable(1).unwrap(), so3, vec![c]).unwrap();
        assert_eq!(rep.residual(), 0.0);
    }

    #[test]
    fn length_and_descriptor_mismatch() {
        let (d, a, _) = su2_pair();
        assert!(matches!(
            evaluate_relation(&d, &[a.clone()], &SurfacePresentation::orientable(1)),
            Err(Error::Dimension { .. })
        ));
        let e3 = GroupElement::identity(&GroupDescriptor::su(3).unwrap());
        assert!(matches!(
            evaluate_relation(&d, &[a, e3], &SurfacePresentation::orientable(1)),
            Err(Error::DescriptorMismatch { .. })
        ));
    }

    #[test]
    fn representation_rejects_violation() {
        let (d, a, b) = su2_pair();
        let err = Representation::new(SurfacePresentation::orientable(1), d.clone(), vec![a.clone(), b.clone()]).unwrap_err();
        assert!(matches!(err, Error::RelationViolation { .. }));
        let loose = Representation::unchecked(SurfacePresentation::orientable(1), d, vec![a, b]).unwrap();
        assert!((loose.residual() - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn projected_pair_is_a_psu2_representation() {
        let (_, a, b) = su2_pair();
        let psu2 = GroupDescriptor::psu(2).unwrap();
        let images = vec![project_cover(&a, &psu2).unwrap(), project_cover(&b, &psu2).unwrap()];
        assert!(Representation::new(SurfacePresentation::orientable(1), psu2, images).is_ok());
    }

    #[test]
    fn conjugation_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = GroupDescriptor::su(3).unwrap();
        let p = SurfacePresentation::nonorientable(5).unwrap();
        for _ in 0..20 {
            let images: Vec<_> = (0..p.generator_count()).map(|_| random_element(&d, &mut rng)).collect();
            let rep = Representation::unchecked(p, d.clone(), images).unwrap();
            let g = random_element(&d, &mut rng);
            let conj = conjugate_representation(&rep, &g).unwrap();
            let expected = rep.relation_value().conjugate_by(&g).unwrap();
            assert!(conj.relation_value().distance(&expected).unwrap() <= 1e-10);
        }
        let (_, center) = enumerate_center(&d).unwrap();
        let images: Vec<_> = (0..p.generator_count()).map(|_| random_element(&d, &mut rng)).collect();
        let rep = Representation::unchecked(p, d.clone(), images).unwrap();
        let conj = conjugate_representation(&rep, &center[1].element).unwrap();
        for (x, y) in rep.images().iter().zip(conj.images()) {
            assert!(x.distance(y).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn commutator_preimage_of_identity_and_minus_identity() {
        let d = GroupDescriptor::su(2).unwrap();
        let (a, b) = commutator_preimage(&GroupElement::identity(&d)).unwrap();
        let w = coxeter_element(2).unwrap();
        assert!(a.distance(&w.rep).unwrap() < 1e-15);
        assert!(b.approx_eq(&GroupElement::identity(&d), 1e-15));

        let minus = GroupElement::unitary(&d, complex_identity(2) * c(-1.0, 0.0)).unwrap();
        let (a, b) = commutator_preimage(&minus).unwrap();
        let v = commutator_product(&d, &[a, b]).unwrap();
        assert!(v.distance(&minus).unwrap() <= 1e-12);
    }

    #[test]
    fn commutator_preimage_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 2..=5 {
            let d = GroupDescriptor::su(n).unwrap();
            for _ in 0..100 {
                let g = random_element(&d, &mut rng);
                let (a, b) = commutator_preimage(&g).unwrap();
                assert!(commutator_product(&d, &[a, b]).unwrap().distance(&g).unwrap() <= 1e-9, "n={n}");
            }
        }
        assert!(commutator_preimage(&GroupElement::identity(&GroupDescriptor::sp(2).unwrap())).is_err());
    }

    #[test]
    fn fiber_samples_land_in_fiber() {
        let su2 = GroupDescriptor::su(2).unwrap();
        let (_, center) = enumerate_center(&su2).unwrap();
        let rp2 = SurfacePresentation::nonorientable(1).unwrap();
        let s = sample_fiber_nonorientable(&rp2, &center[0], 0).unwrap();
        assert!(s.images[0].approx_eq(&GroupElement::identity(&su2), 1e-12));

        let p3 = SurfacePresentation::nonorientable(3).unwrap();
        for seed in 0..50 {
            let s = sample_fiber_nonorientable(&p3, &center[1], seed).unwrap();
            assert!(s.residual <= 1e-9, "seed {seed}");
        }
        let p2 = SurfacePresentation::nonorientable(2).unwrap();
        for seed in 0..50 {
            let s = sample_fiber_nonorientable(&p2, &center[0], seed).unwrap();
            assert!(s.residual <= 1e-9, "seed {seed}");
        }
        assert!(sample_fiber_nonorientable(&SurfacePresentation::orientable(2), &center[0], 0).is_err());
    }

    #[test]
    fn fiber_sampling_in_spin_and_sp() {
        for d in [GroupDescriptor::spin(3).unwrap(), GroupDescriptor::spin(6).unwrap(), GroupDescriptor::sp(2).unwrap()] {
            let (_, center) = enumerate_center(&d).unwrap();
            for k in &center {
                for crosscaps in [3, 6] {
                    let p = SurfacePresentation::nonorientable(crosscaps).unwrap();
                    for seed in 0..10 {
                        let s = sample_fiber_nonorientable(&p, k, seed).unwrap();
                        assert!(s.residual <= 1e-9, "{d} k={:?}", k.coords);
                    }
                }
            }
        }
    }

    #[test]
    fn orientable_fiber_samples() {
        for n in 2..=4 {
            let (_, center) = enumerate_center(&GroupDescriptor::su(n).unwrap()).unwrap();
            for k in &center {
                for genus in 1..=3 {
                    let s = sample_fiber_orientable(genus, k, genus as u64).unwrap();
                    assert_eq!(s.images.len(), 2 * genus);
                    assert!(s.residual < 1e-9, "n={n} genus={genus}: {}", s.residual);
                }
            }
            let s = sample_fiber_orientable(0, &center[0], 0).unwrap();
            assert!(s.images.is_empty() && s.residual == 0.0);
        }
        let (_, spin) = enumerate_center(&GroupDescriptor::spin(3).unwrap()).unwrap();
        assert!(matches!(sample_fiber_orientable(1, &spin[0], 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = GroupDescriptor::su(3).unwrap();
        let (_, center) = enumerate_center(&d).unwrap();
        let p = SurfacePresentation::nonorientable(5).unwrap();
        let a = sample_fiber_nonorientable(&p, &center[2], 44).unwrap();
        let b = sample_fiber_nonorientable(&p, &center[2], 44).unwrap();
        assert_eq!(a.images, b.images);
    }
}
