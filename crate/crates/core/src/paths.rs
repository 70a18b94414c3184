//! Closed-form paths inside a fiber of the nonorientable relation map.
//!
//! For a target `c` conjugated to the torus by `g`, write
//! `g^{-1} c g q^{-1} = exp(xi)` and solve `w . xi' - xi' = xi` for the
//! Coxeter element. Along a frame path `g~(t)` from the identity to `g`,
//!
//! ```text
//! a(t) = g~ a g~^{-1}, b(t) = g~ exp(-2 t xi') g~^{-1}, c(t) = g~ q exp(t xi) g~^{-1}
//! ```
//!
//! satisfy `[a(t), b(t)] c(t)^2 = q^2 = k` for every `t`. The even case runs
//! two such frames side by side, one without the central factor `q`.

use serde::{Deserialize, Serialize};

use crate::cartan::{coxeter_element, coxeter_solve, CartanVector, CoxeterRealization};
use crate::encoding::{encode_element, EncodedElement, GroupSpec, SurfaceSpec};
use crate::error::{Error, Result};
use crate::groups::{
    central_square_root_in_torus, conjugate_to_torus, CenterElement, Family, GroupDescriptor, GroupElement, Payload,
};
use crate::numerics::{balance_angles, complex_identity, diag_phases, unitary_eig, ComplexMatrix};
use crate::surfaces::{commutator_product, evaluate_relation, SurfacePresentation};

/// Default tolerance for the relation along a path.
pub const PATH_TOL: f64 = 1e-9;
/// Default tolerance for endpoint comparisons.
pub const ENDPOINT_TOL: f64 = 1e-10;

/// `g~(t) = V diag(e^{i t theta}) V^*` where `g = V diag(e^{i theta}) V^*`
/// with `theta` summing to zero, so every `g~(t)` has determinant one.
/// The endpoints are pinned to the identity and to `g` itself.
#[derive(Debug, Clone)]
pub struct FramePath {
    vectors: ComplexMatrix,
    angles: Vec<f64>,
    target: ComplexMatrix,
}

impl FramePath {
    pub fn new(g: &ComplexMatrix) -> Result<Self> {
        let eig = unitary_eig(g)?;
        Ok(FramePath { vectors: eig.vectors, angles: balance_angles(&eig.angles), target: g.clone() })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn at(&self, t: f64) -> ComplexMatrix {
        if t == 0.0 {
            return complex_identity(self.target.nrows());
        }
        if t == 1.0 {
            return self.target.clone();
        }
        let phases: Vec<f64> = self.angles.iter().map(|a| t * a).collect();
        &self.vectors * diag_phases(&phases) * self.vectors.adjoint()
    }
}

/// One frame: a handle `(a(t), b(t))` and a square root `c(t)`.
#[derive(Debug, Clone)]
pub struct FrameSegment {
    pub frame: FramePath,
    pub xi: CartanVector,
    pub xi_prime: CartanVector,
    /// Whether `c(t)` carries the central square root `q`.
    pub central: bool,
}

impl FrameSegment {
    fn solve(w: &CoxeterRealization, c: &GroupElement, q_angles: Option<&[f64]>) -> Result<Self> {
        let tc = conjugate_to_torus(c)?;
        let mut g = tc.g.as_unitary().expect("SU frame").clone();
        let mut angles = tc.angles.clone();
        if let Some(qa) = q_angles {
            (g, angles) = align_to(&g, &angles, qa);
        }
        let shifted: Vec<f64> = match q_angles {
            Some(qa) => angles.iter().zip(qa).map(|(a, b)| a - b).collect(),
            None => angles,
        };
        let xi = CartanVector::log_of_phases(&shifted)?;
        let xi_prime = coxeter_solve(w, &xi)?;
        let frame = FramePath::new(&g)?;
        Ok(FrameSegment { frame, xi, xi_prime, central: q_angles.is_some() })
    }
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * std::f64::consts::PI);
    d.min(2.0 * std::f64::consts::PI - d)
}

/// Reorders the torus coordinates of `g^{-1} c g` so that slot `j` holds the
/// remaining eigenvalue closest to `e^{i q_j}` (greedy in slot order). This
/// makes `xi` vanish when `c = q`. The sign of the permutation is absorbed
/// into the first column to keep `det g = 1`.
fn align_to(g: &ComplexMatrix, angles: &[f64], q_angles: &[f64]) -> (ComplexMatrix, Vec<f64>) {
    let n = angles.len();
    let mut free: Vec<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    for &qa in q_angles {
        let pos = (0..free.len())
            .min_by(|&i, &j| circular_gap(angles[free[i]], qa).total_cmp(&circular_gap(angles[free[j]], qa)))
            .expect("one slot per angle");
        order.push(free.remove(pos));
    }
    let mut out = ComplexMatrix::from_fn(n, n, |i, j| g[(i, order[j])]);
    let mut sign = 1.0;
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = order[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    if sign < 0.0 {
        let mut col = out.column_mut(0);
        col.neg_mut();
    }
    (out, order.iter().map(|&i| angles[i]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    Odd,
    Even,
}

/// A path `gamma: [0, 1] -> {relation = k}` in `SU(n)^{2l + s}`.
#[derive(Debug, Clone)]
pub struct RelationPath {
    presentation: SurfacePresentation,
    group: GroupDescriptor,
    k: CenterElement,
    kind: PathKind,
    coxeter: CoxeterRealization,
    q: ComplexMatrix,
    /// Odd: one segment. Even: the segment ending at `c1`, then the one
    /// ending at `c2`.
    segments: Vec<FrameSegment>,
    /// Sign of the `xi'` exponent in `b(t)`; `-1` for a valid path.
    b_sign: f64,
    start: Vec<GroupElement>,
    end: Vec<GroupElement>,
}

fn check_su(k: &CenterElement, targets: &[&GroupElement]) -> Result<GroupDescriptor> {
    let d = k.element.descriptor().clone();
    if d.family() != Family::SU || !d.is_simply_connected() {
        return Err(Error::Unsupported(format!("connecting paths are implemented in SU(n), got {d}")));
    }
    for c in targets {
        if c.descriptor() != &d {
            return Err(Error::DescriptorMismatch { left: d.to_string(), right: c.descriptor().to_string() });
        }
    }
    Ok(d)
}

/// Path from `(a, e, ..., e, q)` to a tuple ending in `c` on the surface
/// with `2l + 1` crosscaps.
pub fn connect_odd(k: &CenterElement, c: &GroupElement, l: usize) -> Result<RelationPath> {
    let d = check_su(k, &[c])?;
    if l == 0 {
        return Err(Error::Unsupported(
            "one crosscap leaves no handle to move along; the projective plane is covered by the involution counts"
                .into(),
        ));
    }
    let presentation = SurfacePresentation::nonorientable(2 * l + 1)?;
    let w = coxeter_element(d.n())?;
    let q = central_square_root_in_torus(k)?;
    let q_angles = crate::groups::central_root_angles(d.n(), k.coords[0]);
    let seg = FrameSegment::solve(&w, c, Some(&q_angles))?;
    RelationPath::assemble(presentation, d, k.clone(), PathKind::Odd, w, q, vec![seg])
}

/// Path from `(a, e, a, e, e, ..., e, e, q)` to a tuple ending in
/// `(c1, c2)` on the surface with `2l + 2` crosscaps.
pub fn connect_even(k: &CenterElement, c1: &GroupElement, c2: &GroupElement, l: usize) -> Result<RelationPath> {
    let d = check_su(k, &[c1, c2])?;
    if l < 2 {
        return Err(Error::Unsupported(format!(
            "the even construction uses two handles, got l = {l} ({} crosscaps)",
            2 * l + 2
        )));
    }
    let presentation = SurfacePresentation::nonorientable(2 * l + 2)?;
    let w = coxeter_element(d.n())?;
    let q = central_square_root_in_torus(k)?;
    let q_angles = crate::groups::central_root_angles(d.n(), k.coords[0]);
    let first = FrameSegment::solve(&w, c1, None)?;
    let second = FrameSegment::solve(&w, c2, Some(&q_angles))?;
    RelationPath::assemble(presentation, d, k.clone(), PathKind::Even, w, q, vec![first, second])
}

impl RelationPath {
    fn assemble(
        presentation: SurfacePresentation,
        group: GroupDescriptor,
        k: CenterElement,
        kind: PathKind,
        coxeter: CoxeterRealization,
        q: GroupElement,
        segments: Vec<FrameSegment>,
    ) -> Result<Self> {
        let q = q.as_unitary().expect("SU payload").clone();
        let mut p = RelationPath {
            presentation,
            group,
            k,
            kind,
            coxeter,
            q,
            segments,
            b_sign: -1.0,
            start: Vec::new(),
            end: Vec::new(),
        };
        p.start = p.at(0.0);
        p.end = p.at(1.0);
        Ok(p)
    }

    pub fn presentation(&self) -> &SurfacePresentation {
        &self.presentation
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn k(&self) -> &CenterElement {
        &self.k
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    pub fn segments(&self) -> &[FrameSegment] {
        &self.segments
    }

    pub fn q(&self) -> GroupElement {
        self.element(self.q.clone())
    }

    /// Declared `gamma(0)`.
    pub fn start(&self) -> &[GroupElement] {
        &self.start
    }

    /// Declared `gamma(1)`.
    pub fn end(&self) -> &[GroupElement] {
        &self.end
    }

    /// The same path with `b(t) = g~ exp(+2 t xi') g~^{-1}`, which leaves the
    /// fiber whenever `xi` is nonzero. Declared endpoints are kept.
    pub fn corrupted(&self) -> RelationPath {
        RelationPath { b_sign: -self.b_sign, ..self.clone() }
    }

    fn element(&self, m: ComplexMatrix) -> GroupElement {
        GroupElement::from_parts_unchecked(self.group.clone(), Payload::Unitary(m))
    }

    /// `(a(t), b(t), c(t))` of one segment.
    fn segment_at(&self, seg: &FrameSegment, t: f64) -> [ComplexMatrix; 3] {
        let g = seg.frame.at(t);
        let gi = g.adjoint();
        let a = self.coxeter.rep.as_unitary().expect("SU payload");
        let b = seg.xi_prime.exp(self.b_sign * 2.0 * t);
        let c = if seg.central { &self.q * seg.xi.exp(t) } else { seg.xi.exp(t) };
        [&g * a * &gi, &g * b * &gi, &g * c * &gi]
    }

    /// `gamma(t)` in presentation order.
    pub fn at(&self, t: f64) -> Vec<GroupElement> {
        let n = self.group.n();
        let count = self.presentation.generator_count();
        let mut out: Vec<ComplexMatrix> = vec![complex_identity(n); count];
        match self.kind {
            PathKind::Odd => {
                let [a, b, c] = self.segment_at(&self.segments[0], t);
                out[0] = a;
                out[1] = b;
                out[count - 1] = c;
            }
            PathKind::Even => {
                let [a1, b1, c1] = self.segment_at(&self.segments[0], t);
                let [a2, b2, c2] = self.segment_at(&self.segments[1], t);
                // the handle paired with c2 comes first, so the middle
                // [a1, b1] c1^2 collapses to the identity
                out[0] = a2;
                out[1] = b2;
                out[2] = a1;
                out[3] = b1;
                out[count - 2] = c1;
                out[count - 1] = c2;
            }
        }
        out.into_iter().map(|m| self.element(m)).collect()
    }

    /// `|relation(gamma(t)) - k|_F`.
    pub fn residual_at(&self, t: f64) -> Result<f64> {
        relation_residual(&self.group, &self.at(t), &self.presentation, &self.k)
    }
}

fn relation_residual(d: &GroupDescriptor, images: &[GroupElement], p: &SurfacePresentation, k: &CenterElement) -> Result<f64> {
    evaluate_relation(d, images, p)?.distance(&k.element)
}

fn tuple_distance(x: &[GroupElement], y: &[GroupElement]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (a, b) in x.iter().zip(y) {
        worst = worst.max(a.distance(b)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointResiduals {
    /// Relation residual at `t = 0` and `t = 1`.
    pub start_relation: f64,
    pub end_relation: f64,
    /// Largest coordinate distance between `gamma(t)` and the declared tuple.
    pub start_tuple: f64,
    pub end_tuple: f64,
    /// Start: distance of the last coordinates from `q` (and `e`). End:
    /// distance of the last coordinates from the requested targets.
    pub start_fiber: f64,
    pub end_fiber: f64,
}

impl EndpointResiduals {
    pub fn max(&self) -> f64 {
        [self.start_relation, self.end_relation, self.start_tuple, self.end_tuple, self.start_fiber, self.end_fiber]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    pub sample_count: usize,
    pub tol: f64,
    pub max_residual: f64,
    /// Residual at `t_i = i / (samples - 1)`.
    pub residuals: Vec<f64>,
    pub endpoint_residuals: EndpointResiduals,
    /// `|commutator product of the handles at t = 0 - e|_F`.
    pub start_handles: f64,
}

impl PathReport {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tol
            && self.endpoint_residuals.max() <= ENDPOINT_TOL.max(self.tol)
            && self.start_handles <= self.tol
    }
}

/// Samples the relation at `samples` equispaced times, compares the ends
/// against the declared endpoints and the requested fiber, and checks that
/// the handles at `t = 0` contribute nothing.
///
/// `targets` are the requested last coordinates (`[c]` or `[c1, c2]`).
pub fn validate_path(p: &RelationPath, targets: &[GroupElement], samples: usize, tol: f64) -> Result<PathReport> {
    if samples < 2 {
        return Err(Error::Validation(format!("need at least 2 samples, got {samples}")));
    }
    let s = p.presentation.square_count();
    if targets.len() != s {
        return Err(Error::Dimension { expected: s, actual: targets.len() });
    }
    let residuals = (0..samples)
        .map(|i| p.residual_at(i as f64 / (samples - 1) as f64))
        .collect::<Result<Vec<_>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);

    let g0 = p.at(0.0);
    let g1 = p.at(1.0);
    let count = g0.len();
    let mut start_last = vec![p.q()];
    if s == 2 {
        start_last.insert(0, GroupElement::identity(&p.group));
    }
    let endpoint_residuals = EndpointResiduals {
        start_relation: relation_residual(&p.group, &g0, &p.presentation, &p.k)?,
        end_relation: relation_residual(&p.group, &g1, &p.presentation, &p.k)?,
        start_tuple: tuple_distance(&g0, &p.start)?,
        end_tuple: tuple_distance(&g1, &p.end)?,
        start_fiber: tuple_distance(&g0[count - s..], &start_last)?,
        end_fiber: tuple_distance(&g1[count - s..], targets)?,
    };
    let h = 2 * p.presentation.handles();
    let start_handles = commutator_product(&p.group, &g0[..h])?.distance(&GroupElement::identity(&p.group))?;
    Ok(PathReport { sample_count: samples, tol, max_residual, residuals, endpoint_residuals, start_handles })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEndpoints {
    pub start: Vec<EncodedElement>,
    pub end: Vec<EncodedElement>,
}

/// Serializable summary of a validated path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathCertificate {
    pub group: GroupSpec,
    pub surface: SurfaceSpec,
    pub construction: PathKind,
    /// Center coordinates of `k`.
    pub k: Vec<u64>,
    pub endpoints: PathEndpoints,
    pub sample_count: usize,
    pub tol: f64,
    pub max_residual: f64,
    pub endpoint_residuals: EndpointResiduals,
    pub start_handles: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Vec<f64>>,
}

impl PathCertificate {
    pub fn new(p: &RelationPath, report: &PathReport, include_residuals: bool) -> Self {
        PathCertificate {
            group: GroupSpec::from_descriptor(&p.group),
            surface: SurfaceSpec::from_presentation(&p.presentation),
            construction: p.kind,
            k: p.k.coords.clone(),
            endpoints: PathEndpoints {
                start: p.start.iter().map(encode_element).collect(),
                end: p.end.iter().map(encode_element).collect(),
            },
            sample_count: report.sample_count,
            tol: report.tol,
            max_residual: report.max_residual,
            endpoint_residuals: report.endpoint_residuals.clone(),
            start_handles: report.start_handles,
            passed: report.passed(),
            residuals: include_residuals.then(|| report.residuals.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{enumerate_center, haar_special_unitary};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn su(n: usize) -> GroupDescriptor {
        GroupDescriptor::su(n).unwrap()
    }

    fn center(n: usize, m: u64) -> CenterElement {
        CenterElement::from_coords(&su(n), &[m]).unwrap()
    }

    fn random_su(n: usize, rng: &mut ChaCha8Rng) -> GroupElement {
        GroupElement::unitary(&su(n), haar_special_unitary(n, rng)).unwrap()
    }

    #[test]
    fn frame_path_has_determinant_one_and_hits_both_ends() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..=5 {
            let g = haar_special_unitary(n, &mut rng);
            let f = FramePath::new(&g).unwrap();
            assert!(f.angles().iter().sum::<f64>().abs() < 1e-12);
            for t in [0.1, 0.5, 0.9] {
                let m = f.at(t);
                assert!((m.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            }
            assert!((f.at(1.0 - 1e-12) - &g).norm() < 1e-9);
            assert!((f.at(1e-12) - complex_identity(n)).norm() < 1e-9);
        }
    }

    #[test]
    fn odd_path_through_central_target_keeps_relation_constant() {
        for n in 2..=4 {
            for m in 0..n as u64 {
                let k = center(n, m);
                let q = central_square_root_in_torus(&k).unwrap();
                let p = connect_odd(&k, &q, 1).unwrap();
                assert!(p.segments()[0].xi.norm() < 1e-12);
                assert!(p.segments()[0].xi_prime.norm() < 1e-12);
                let r = validate_path(&p, &[q.clone()], 11, PATH_TOL).unwrap();
                assert!(r.max_residual < 1e-12, "n={n} m={m}: {}", r.max_residual);
            }
        }
    }

    #[test]
    fn su2_odd_path_example() {
        let k = center(2, 1);
        let c = GroupElement::unitary(&su(2), diag_phases(&[1.0, -1.0])).unwrap();
        let p = connect_odd(&k, &c, 1).unwrap();
        let r = validate_path(&p, &[c], 101, PATH_TOL).unwrap();
        assert!(r.max_residual <= 1e-9, "{}", r.max_residual);
        assert!(r.endpoint_residuals.max() <= 1e-10, "{:?}", r.endpoint_residuals);
        // gamma(0) = (a, e, q): relation a e a^{-1} e q^2 = q^2 = k
        let q = p.q();
        assert!(q.square().distance(&k.element).unwrap() < 1e-14);
        assert!(p.start()[1].distance(&GroupElement::identity(&su(2))).unwrap() == 0.0);
        assert!(r.passed());
    }

    #[test]
    fn su3_odd_endpoints_land_on_q_and_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let k = center(3, 1);
        for l in 1..=3 {
            let c = random_su(3, &mut rng);
            let p = connect_odd(&k, &c, l).unwrap();
            let last = p.start().len() - 1;
            assert!(p.start()[last].distance(&p.q()).unwrap() <= 1e-10);
            assert!(p.end()[last].distance(&c).unwrap() <= 1e-10);
            for e in &p.start()[2..last] {
                assert!(e.distance(&GroupElement::identity(&su(3))).unwrap() == 0.0);
            }
            let r = validate_path(&p, &[c], 101, PATH_TOL).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn even_path_between_trivial_targets_is_constant_fiber() {
        for n in 2..=4 {
            for m in 0..n as u64 {
                let k = center(n, m);
                let e = GroupElement::identity(&su(n));
                let q = central_square_root_in_torus(&k).unwrap();
                let p = connect_even(&k, &e, &q, 2).unwrap();
                for seg in p.segments() {
                    assert!(seg.xi.norm() < 1e-12);
                }
                let r = validate_path(&p, &[e, q], 11, PATH_TOL).unwrap();
                assert!(r.max_residual < 1e-12);
            }
        }
    }

    #[test]
    fn su2_even_path_example() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = center(2, 0);
        for _ in 0..5 {
            let (c1, c2) = (random_su(2, &mut rng), random_su(2, &mut rng));
            let p = connect_even(&k, &c1, &c2, 2).unwrap();
            let r = validate_path(&p, &[c1, c2], 101, PATH_TOL).unwrap();
            assert!(r.max_residual <= 1e-9 && r.endpoint_residuals.max() <= 1e-10, "{r:?}");
            let count = p.start().len();
            let e = GroupElement::identity(&su(2));
            assert_eq!(p.start()[count - 2], e);
            assert_eq!(p.start()[count - 1], p.q());
            // handle pattern (a, e, a, e)
            assert_eq!(p.start()[0], p.start()[2]);
            assert_eq!(p.start()[1], e);
            assert_eq!(p.start()[3], e);
        }
    }

    #[test]
    fn corrupted_path_leaves_the_fiber() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 2..=4 {
            let k = center(n, 1);
            let c = random_su(n, &mut rng);
            let p = connect_odd(&k, &c, 1).unwrap();
            let bad = validate_path(&p.corrupted(), &[c.clone()], 101, PATH_TOL).unwrap();
            assert!(bad.max_residual > 1e-3, "n={n}: {}", bad.max_residual);
            assert!(!bad.passed());
            let c2 = random_su(n, &mut rng);
            let p = connect_even(&k, &c, &c2, 2).unwrap();
            let bad = validate_path(&p.corrupted(), &[c, c2], 101, PATH_TOL).unwrap();
            assert!(bad.max_residual > 1e-3);
        }
    }

    #[test]
    fn guards() {
        let k = center(2, 1);
        let c = GroupElement::identity(&su(2));
        assert!(matches!(connect_odd(&k, &c, 0), Err(Error::Unsupported(_))));
        assert!(matches!(connect_even(&k, &c, &c, 1), Err(Error::Unsupported(_))));
        let sp = GroupDescriptor::sp(1).unwrap();
        let (_, elems) = enumerate_center(&sp).unwrap();
        let c = GroupElement::identity(&sp);
        assert!(matches!(connect_odd(&elems[1], &c, 1), Err(Error::Unsupported(_))));
        let p = connect_odd(&k, &GroupElement::identity(&su(2)), 1).unwrap();
        assert!(validate_path(&p, &[GroupElement::identity(&su(2))], 1, PATH_TOL).is_err());
    }

    #[test]
    fn certificate_is_deterministic() {
        let build = || {
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            let k = center(3, 2);
            let c = random_su(3, &mut rng);
            let p = connect_odd(&k, &c, 2).unwrap();
            let r = validate_path(&p, &[c], 21, PATH_TOL).unwrap();
            serde_json::to_string(&PathCertificate::new(&p, &r, true)).unwrap()
        };
        let a = build();
        assert_eq!(a, build());
        let cert: PathCertificate = serde_json::from_str(&a).unwrap();
        assert_eq!(cert.residuals.as_ref().unwrap().len(), 21);
        assert_eq!(cert.k, vec![2]);
        assert!(cert.passed);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn relation_holds_at_arbitrary_times(seed in any::<u64>(), n in 2usize..=4, t in 0.0f64..=1.0, even in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (_, elems) = enumerate_center(&su(n)).unwrap();
            let k = &elems[(seed % n as u64) as usize];
            let p = if even {
                connect_even(k, &random_su(n, &mut rng), &random_su(n, &mut rng), 2).unwrap()
            } else {
                connect_odd(k, &random_su(n, &mut rng), 1).unwrap()
            };
            prop_assert!(p.residual_at(t).unwrap() <= 1e-9);
        }
    }
}
