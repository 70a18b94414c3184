//! The obstruction class of a representation and component-count
//! predictions.
//!
//! Lifting every generator image to the universal cover and evaluating the
//! relation word gives an element of the kernel `K` of the covering map.
//! Changing a lift by `k` in `K` leaves commutators alone and changes a
//! square `c^2` by `k^2`, so the value is well defined in `K` for orientable
//! surfaces and in `K / 2K` otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::components::enumerate_spin_square_classes;
use crate::error::{Error, Result};
use crate::groups::{covering_kernel, lift_to_cover, CoveringKernel, Family, GroupDescriptor, GroupElement};
use crate::numerics::FiniteAbelianGroup;
use crate::surfaces::{evaluate_relation, Representation, SurfaceKind, SurfacePresentation};

/// Lifted relation values must lie this close to a unique kernel element.
pub const KERNEL_MATCH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ObstructionClass {
    pub ambient_orders: Vec<u64>,
    pub residues: Vec<u64>,
    pub surface_kind: SurfaceKind,
}

impl ObstructionClass {
    pub fn ambient(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(self.ambient_orders.clone()).expect("orders are positive")
    }

    pub fn is_identity(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

/// The class together with the raw kernel value it was computed from.
#[derive(Debug, Clone)]
pub struct ObstructionDetail {
    pub class: ObstructionClass,
    /// Coordinates of the lifted relation value in `K`.
    pub kernel_value: Vec<u64>,
    /// Distance from the lifted relation value to that kernel element.
    pub match_distance: f64,
}

/// Preimages of the generator images in the universal cover.
pub fn lift_generators(rep: &Representation) -> Result<Vec<GroupElement>> {
    rep.images().iter().map(lift_to_cover).collect()
}

fn recognize(kernel: &CoveringKernel, value: &GroupElement) -> Result<(Vec<u64>, f64)> {
    let mut hits = Vec::new();
    let mut nearest = f64::INFINITY;
    for k in kernel.elements() {
        let dist = value.distance(&k.element)?;
        nearest = nearest.min(dist);
        if dist <= KERNEL_MATCH_TOL {
            hits.push((k, dist));
        }
    }
    match hits.as_slice() {
        [(k, dist)] => Ok((kernel.to_kernel_coords(&k.coords).expect("kernel element"), *dist)),
        [] => Err(Error::KernelRecognition(format!(
            "lifted relation value is {nearest:e} from the nearest element of the kernel (tolerance {KERNEL_MATCH_TOL:e})"
        ))),
        _ => Err(Error::KernelRecognition(format!("lifted relation value matches {} kernel elements", hits.len()))),
    }
}

/// The class of the relation value computed from the given lifts.
pub fn obstruction_from_lifts(rep: &Representation, lifts: &[GroupElement]) -> Result<ObstructionDetail> {
    let kernel = covering_kernel(rep.descriptor())?;
    let value = evaluate_relation(kernel.cover(), lifts, rep.presentation())?;
    let (kernel_value, match_distance) = recognize(&kernel, &value)?;
    let kind = rep.presentation().kind();
    let (ambient, residues) = match kind {
        SurfaceKind::Orientable => (kernel.group().clone(), kernel_value.clone()),
        SurfaceKind::Nonorientable => {
            let q = kernel.group().quotient_by_squares();
            let r = q.project(&kernel_value);
            (q.quotient().clone(), r)
        }
    };
    Ok(ObstructionDetail {
        class: ObstructionClass { ambient_orders: ambient.orders().to_vec(), residues, surface_kind: kind },
        kernel_value,
        match_distance,
    })
}

pub fn obstruction_detail(rep: &Representation) -> Result<ObstructionDetail> {
    obstruction_from_lifts(rep, &lift_generators(rep)?)
}

pub fn obstruction(rep: &Representation) -> Result<ObstructionClass> {
    Ok(obstruction_detail(rep)?.class)
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftIndependenceReport {
    pub trials: usize,
    pub reference: ObstructionClass,
    /// Distinct raw kernel values seen across trials.
    pub kernel_values_seen: Vec<Vec<u64>>,
    /// Trials whose class differed from the reference.
    pub mismatches: usize,
}

impl LiftIndependenceReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Multiplies every lift by an independent random kernel element in each
/// trial and compares the resulting classes.
pub fn obstruction_lift_independence_test(rep: &Representation, trials: usize, seed: u64) -> Result<LiftIndependenceReport> {
    let kernel = covering_kernel(rep.descriptor())?;
    let lifts = lift_generators(rep)?;
    let reference = obstruction_from_lifts(rep, &lifts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kernel_values_seen = vec![reference.kernel_value.clone()];
    let mut mismatches = 0;
    for _ in 0..trials {
        let shifted = lifts
            .iter()
            .map(|x| {
                let k = &kernel.elements()[rng.random_range(0..kernel.elements().len())];
                k.element.mul(x)
            })
            .collect::<Result<Vec<_>>>()?;
        let detail = obstruction_from_lifts(rep, &shifted)?;
        if detail.class != reference.class {
            mismatches += 1;
        }
        if !kernel_values_seen.contains(&detail.kernel_value) {
            kernel_values_seen.push(detail.kernel_value);
        }
    }
    Ok(LiftIndependenceReport { trials, reference: reference.class, kernel_values_seen, mismatches })
}

/// `H^2(Sigma; pi_1(G))`: `K` for orientable surfaces, `K / 2K` otherwise.
pub fn h2_coefficients(surface: &SurfacePresentation, g: &GroupDescriptor) -> Result<FiniteAbelianGroup> {
    let kernel = covering_kernel(g)?;
    Ok(match surface.kind() {
        SurfaceKind::Orientable => kernel.group().clone(),
        SurfaceKind::Nonorientable => kernel.group().quotient_by_squares().quotient().clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Prediction {
    /// Number of connected components of `Hom(pi_1(Sigma), G)`.
    Count { count: u64, rule: String },
    /// Surfaces with two or four crosscaps: no count is claimed.
    OpenCase { reason: String },
    /// The projective plane for groups outside the classified list.
    NotCovered { reason: String },
}

/// Number of components of `Hom(pi_1(Sigma), G)`.
///
/// Orientable genus `>= 1`: `|K|`; the sphere: 1. Nonorientable with `k`
/// crosscaps, `k` not in `{1, 2, 4}`: `|K / 2K|`. The projective plane is
/// answered by counting conjugacy classes of elements with `g^2 = e` for
/// `SU(n)`, `Sp(n)` and `Spin(n)`; two and four crosscaps are open.
pub fn predict_component_count(surface: &SurfacePresentation, g: &GroupDescriptor) -> Result<Prediction> {
    let kernel = covering_kernel(g)?;
    Ok(match *surface {
        SurfacePresentation::Orientable { genus: 0 } => {
            Prediction::Count { count: 1, rule: "the sphere has only the trivial representation".into() }
        }
        SurfacePresentation::Orientable { .. } => {
            Prediction::Count { count: kernel.order(), rule: "|pi_1(G)| for orientable genus >= 1".into() }
        }
        SurfacePresentation::Nonorientable { crosscaps: k } if k == 2 || k == 4 => Prediction::OpenCase {
            reason: format!("{k} crosscaps: the in-fiber path construction needs more handles than the surface has, and no count is known"),
        },
        SurfacePresentation::Nonorientable { crosscaps: 1 } => projective_plane_count(g)?,
        SurfacePresentation::Nonorientable { .. } => Prediction::Count {
            count: kernel.group().quotient_by_squares().quotient().order(),
            rule: "|pi_1(G) / 2 pi_1(G)| for nonorientable surfaces with k not in {1, 2, 4}".into(),
        },
    })
}

fn projective_plane_count(g: &GroupDescriptor) -> Result<Prediction> {
    if !g.is_simply_connected() {
        return Ok(Prediction::NotCovered {
            reason: format!("the projective plane is classified here only for SU(n), Sp(n) and Spin(n), not {g}"),
        });
    }
    let n = g.n();
    Ok(match g.family() {
        Family::SU => Prediction::Count {
            count: (n / 2 + 1) as u64,
            rule: "classes diag(-I_2j, I_n-2j), j = 0..[n/2]".into(),
        },
        Family::Sp => Prediction::Count { count: (n + 1) as u64, rule: "classes diag(-I_k, I_n-k) in both blocks, k = 0..n".into() },
        Family::Spin => {
            let report = enumerate_spin_square_classes(n)?;
            Prediction::Count {
                count: report.computed_count as u64,
                rule: format!(
                    "conjugacy classes of x with x^2 = 1, computed; the closed formula [n/2] + 1 gives {}",
                    report.formula_count
                ),
            }
        }
        Family::SO => unreachable!("SO(n) is not simply connected"),
    })
}
