//! Randomized consistency suite over every module, sized to run in seconds.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::{
    commutation_identity_check, coxeter_element, coxeter_residual, coxeter_solve, unit_eigenvalue_margin, CartanVector,
};
use crate::components::{classify_involution, enumerate_spin_square_classes, involutions_sp, involutions_su};
use crate::error::Result;
use crate::groups::{
    conjugate_to_torus, enumerate_center, lift_so_to_spin, project_cover, random_element, square_root, GroupDescriptor,
    GroupElement,
};
use crate::numerics::{even_from_spinor_matrix, spinor_matrix, CliffordElement};
use crate::obstruction::{obstruction, obstruction_lift_independence_test, predict_component_count, Prediction};
use crate::paths::{connect_even, connect_odd, validate_path, PATH_TOL};
use crate::surfaces::{
    commutator_preimage, conjugate_representation, sample_fiber_nonorientable, sample_fiber_orientable, Representation,
    SurfacePresentation,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestCheck {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// Largest error seen, or the number of mismatches for exact checks.
    pub worst: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<SelftestCheck>,
}

struct Tally {
    cases: usize,
    worst: f64,
    detail: String,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, worst: 0.0, detail: String::new() }
    }

    fn record(&mut self, err: f64) {
        self.cases += 1;
        if !(err <= self.worst) {
            self.worst = err;
        }
    }

    fn fail(&mut self, what: String) {
        self.cases += 1;
        self.worst += 1.0;
        if self.detail.is_empty() {
            self.detail = what;
        }
    }
}

fn run_check(name: &str, tol: f64, f: impl FnOnce(&mut Tally) -> Result<()>) -> SelftestCheck {
    let mut t = Tally::new();
    let outcome = f(&mut t);
    let (passed, detail) = match outcome {
        Ok(()) => (t.worst <= tol && t.detail.is_empty(), t.detail),
        Err(e) => (false, e.to_string()),
    };
    SelftestCheck { name: name.into(), passed, cases: t.cases, worst: t.worst, tol, detail }
}

fn random_even(n: usize, rng: &mut ChaCha8Rng) -> CliffordElement {
    let c = (0..1usize << n).map(|m| if m.count_ones() % 2 == 0 { rng.random_range(-1.0..1.0) } else { 0.0 }).collect();
    CliffordElement::from_coeffs(n, c).expect("length 2^n")
}

fn clifford_products(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    for n in 2..=6 {
        for _ in 0..4 {
            let (x, y) = (random_even(n, rng), random_even(n, rng));
            let table = &x * &y;
            t.record(table.max_abs_diff(&x.mul_by_word_reduction(&y)?));
            t.record(table.max_abs_diff(&even_from_spinor_matrix(n, &(spinor_matrix(&x) * spinor_matrix(&y)))?));
        }
    }
    Ok(())
}

fn groups_and_covers(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut groups = Vec::new();
    for n in 2..=5 {
        groups.push(GroupDescriptor::su(n)?);
        groups.push(GroupDescriptor::psu(n)?);
    }
    for n in 1..=3 {
        groups.push(GroupDescriptor::sp(n)?);
    }
    for n in 3..=6 {
        groups.push(GroupDescriptor::so(n)?);
        groups.push(GroupDescriptor::spin(n)?);
    }
    for d in &groups {
        let e = GroupElement::identity(d);
        for _ in 0..3 {
            let g = random_element(d, rng);
            let h = random_element(d, rng);
            t.record(g.mul(&g.inv())?.distance(&e)?);
            let lhs = g.mul(&h)?.inv();
            t.record(lhs.distance(&h.inv().mul(&g.inv())?)?);
        }
    }
    for n in 3..=6 {
        let so = GroupDescriptor::so(n)?;
        for _ in 0..3 {
            let r = random_element(&so, rng);
            let x = lift_so_to_spin(&r)?;
            t.record(project_cover(&x, &so)?.distance(&r)?);
        }
    }
    Ok(())
}

fn torus_and_roots(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut groups = Vec::new();
    for n in 2..=5 {
        groups.push(GroupDescriptor::su(n)?);
    }
    for n in 1..=3 {
        groups.push(GroupDescriptor::sp(n)?);
    }
    for n in 3..=6 {
        groups.push(GroupDescriptor::so(n)?);
    }
    for d in &groups {
        for _ in 0..3 {
            let c = random_element(d, rng);
            let tc = conjugate_to_torus(&c)?;
            t.record(tc.torus_element().conjugate_by(&tc.g)?.distance(&c)?);
            t.record(square_root(&c)?.square().distance(&c)?);
        }
    }
    Ok(())
}

fn coxeter(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    for n in 2..=6 {
        let w = coxeter_element(n)?;
        for _ in 0..10 {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
            let mean = v.iter().sum::<f64>() / n as f64;
            v.iter_mut().for_each(|x| *x -= mean);
            let xi = CartanVector::new(v)?;
            t.record(coxeter_residual(&w, &xi, &coxeter_solve(&w, &xi)?)?);
            t.record(commutation_identity_check(&w, &xi, rng.random_range(-2.0..2.0))?);
        }
    }
    for n in 2..=12 {
        t.record((unit_eigenvalue_margin(&coxeter_element(n)?) - 2.0 * (PI / n as f64).sin()).abs());
    }
    Ok(())
}

fn commutators(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    for n in 2..=5 {
        let d = GroupDescriptor::su(n)?;
        let (_, center) = enumerate_center(&d)?;
        let mut targets: Vec<GroupElement> = center.into_iter().map(|k| k.element).collect();
        targets.extend((0..5).map(|_| random_element(&d, rng)));
        for g in &targets {
            let (a, b) = commutator_preimage(g)?;
            t.record(a.mul(&b)?.mul(&a.inv())?.mul(&b.inv())?.distance(g)?);
        }
    }
    Ok(())
}

fn fibers(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    let covers = [GroupDescriptor::su(3)?, GroupDescriptor::spin(3)?, GroupDescriptor::sp(2)?, GroupDescriptor::spin(4)?];
    for d in &covers {
        let (_, center) = enumerate_center(d)?;
        for k in &center {
            for crosscaps in [1, 2, 3, 5, 6] {
                let p = SurfacePresentation::nonorientable(crosscaps)?;
                t.record(sample_fiber_nonorientable(&p, k, rng.random())?.residual);
            }
        }
    }
    let (_, center) = enumerate_center(&GroupDescriptor::su(3)?)?;
    for k in &center {
        for genus in 1..=3 {
            t.record(sample_fiber_orientable(genus, k, rng.random())?.residual);
        }
    }
    Ok(())
}

/// Obstruction classes of projected fiber samples must be the fiber label,
/// and stay put under lift changes and conjugation.
fn obstructions(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    let psu3 = GroupDescriptor::psu(3)?;
    let (_, su3_center) = enumerate_center(&psu3.cover())?;
    let so3 = GroupDescriptor::so(3)?;
    let (_, spin3_center) = enumerate_center(&so3.cover())?;
    let mut cases: Vec<(Representation, Vec<u64>)> = Vec::new();
    for k in &su3_center {
        let s = sample_fiber_orientable(2, k, rng.random())?;
        cases.push((project(&s.presentation, &psu3, &s.images)?, k.coords.clone()));
        // 3 is odd, so K / 2K is trivial
        let s = sample_fiber_nonorientable(&SurfacePresentation::nonorientable(5)?, k, rng.random())?;
        cases.push((project(&s.presentation, &psu3, &s.images)?, vec![]));
    }
    for k in &spin3_center {
        for crosscaps in [3, 6] {
            let s = sample_fiber_nonorientable(&SurfacePresentation::nonorientable(crosscaps)?, k, rng.random())?;
            cases.push((project(&s.presentation, &so3, &s.images)?, k.coords.clone()));
        }
    }
    for (rep, expected) in &cases {
        let class = obstruction(rep)?;
        if &class.residues != expected {
            t.fail(format!("{} on {}: class {:?}, expected {expected:?}", rep.descriptor(), rep.presentation(), class.residues));
        }
        let lifts = obstruction_lift_independence_test(rep, 10, rng.random())?;
        if !lifts.passed() {
            t.fail(format!("{} on {}: lift dependence", rep.descriptor(), rep.presentation()));
        }
        for _ in 0..5 {
            let g = random_element(rep.descriptor(), rng);
            if obstruction(&conjugate_representation(rep, &g)?)? != class {
                t.fail(format!("{} on {}: conjugation changed the class", rep.descriptor(), rep.presentation()));
            }
        }
        t.record(0.0);
    }
    Ok(())
}

fn project(p: &SurfacePresentation, d: &GroupDescriptor, cover_images: &[GroupElement]) -> Result<Representation> {
    let images = cover_images.iter().map(|x| project_cover(x, d)).collect::<Result<Vec<_>>>()?;
    Representation::new(*p, d.clone(), images)
}

fn paths(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    for n in 2..=4 {
        let d = GroupDescriptor::su(n)?;
        let (_, center) = enumerate_center(&d)?;
        for k in &center {
            for _ in 0..2 {
                let c = random_element(&d, rng);
                let p = connect_odd(k, &c, 1)?;
                let r = validate_path(&p, std::slice::from_ref(&c), 101, PATH_TOL)?;
                t.record(r.max_residual.max(r.endpoint_residuals.max()).max(r.start_handles));
                if validate_path(&p.corrupted(), &[c], 21, PATH_TOL)?.passed() {
                    t.fail(format!("SU({n}): corrupted odd path passed validation"));
                }
                let (c1, c2) = (random_element(&d, rng), random_element(&d, rng));
                let p = connect_even(k, &c1, &c2, 2)?;
                let r = validate_path(&p, &[c1, c2], 101, PATH_TOL)?;
                t.record(r.max_residual.max(r.endpoint_residuals.max()).max(r.start_handles));
            }
        }
    }
    Ok(())
}

fn involution_counts(t: &mut Tally) -> Result<()> {
    for n in 2..=8 {
        let classes = involutions_su(n)?;
        if classes.len() != n / 2 + 1 {
            t.fail(format!("SU({n}): {} classes", classes.len()));
        }
        for c in &classes {
            if classify_involution(&c.representative)? != c.index {
                t.fail(format!("SU({n}): class {} misclassified", c.index));
            }
        }
        t.record(0.0);
    }
    for n in 1..=4 {
        let classes = involutions_sp(n)?;
        if classes.len() != n + 1 {
            t.fail(format!("Sp({n}): {} classes", classes.len()));
        }
        for c in &classes {
            if classify_involution(&c.representative)? != c.index {
                t.fail(format!("Sp({n}): class {} misclassified", c.index));
            }
        }
        t.record(0.0);
    }
    Ok(())
}

fn spin_squares(t: &mut Tally) -> Result<()> {
    for n in 3..=7 {
        let r = enumerate_spin_square_classes(n)?;
        t.record(r.consistency_max_diff);
        for c in &r.candidates {
            if c.square_is_minus_identity != (c.j % 2 == 1) {
                t.fail(format!("Spin({n}): candidate j = {} has an unexpected square", c.j));
            }
        }
        for c in &r.classes {
            t.record(c.square_check);
        }
    }
    Ok(())
}

fn predictions(t: &mut Tally) -> Result<()> {
    let so3 = GroupDescriptor::so(3)?;
    let psu3 = GroupDescriptor::psu(3)?;
    let spots = [
        (SurfacePresentation::orientable(2), &so3, 2),
        (SurfacePresentation::nonorientable(5)?, &so3, 2),
        (SurfacePresentation::nonorientable(3)?, &psu3, 1),
        (SurfacePresentation::orientable(2), &psu3, 3),
    ];
    for (s, g, want) in spots {
        match predict_component_count(&s, g)? {
            Prediction::Count { count, .. } if count == want => t.record(0.0),
            other => t.fail(format!("{s} over {g}: {other:?}")),
        }
    }
    for crosscaps in [2, 4] {
        for g in [&so3, &psu3] {
            match predict_component_count(&SurfacePresentation::nonorientable(crosscaps)?, g)? {
                Prediction::OpenCase { .. } => t.record(0.0),
                other => t.fail(format!("{crosscaps} crosscaps over {g}: {other:?}")),
            }
        }
    }
    Ok(())
}

/// Runs every check with generators derived from `seed`.
pub fn run_selftest(seed: u64) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sub = || ChaCha8Rng::seed_from_u64(rng.random());
    let checks = vec![
        run_check("clifford_products", 1e-12, |t| clifford_products(t, &mut sub())),
        run_check("groups_and_covers", 1e-10, |t| groups_and_covers(t, &mut sub())),
        run_check("torus_and_roots", 1e-9, |t| torus_and_roots(t, &mut sub())),
        run_check("coxeter", 1e-9, |t| coxeter(t, &mut sub())),
        run_check("commutator_preimage", 1e-9, |t| commutators(t, &mut sub())),
        run_check("fiber_sampling", 1e-9, |t| fibers(t, &mut sub())),
        run_check("obstruction", 0.0, |t| obstructions(t, &mut sub())),
        run_check("paths", PATH_TOL, |t| paths(t, &mut sub())),
        run_check("involution_counts", 0.0, involution_counts),
        run_check("spin_squares", 1e-12, spin_squares),
        run_check("predictions", 0.0, predictions),
    ];
    SelftestReport { seed, passed: checks.iter().all(|c| c.passed), checks }
}
