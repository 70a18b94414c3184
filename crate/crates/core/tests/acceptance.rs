//! Acceptance run: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use flatmod::cartan::{
    commutation_identity_check, coxeter_element, coxeter_residual, coxeter_solve, unit_eigenvalue_margin, CartanVector,
};
use flatmod::components::{classify_involution, enumerate_spin_square_classes, involutions_sp, involutions_su};
use flatmod::groups::{enumerate_center, project_cover, random_element, CenterElement, GroupDescriptor, GroupElement, RealMatrix};
use flatmod::numerics::{complex_identity, ComplexMatrix, CliffordElement};
use flatmod::obstruction::{obstruction, obstruction_lift_independence_test, predict_component_count, Prediction};
use flatmod::paths::{connect_even, connect_odd, validate_path, PATH_TOL};
use flatmod::surfaces::{
    commutator_preimage, conjugate_representation, sample_fiber_nonorientable, sample_fiber_orientable, Representation,
    SurfacePresentation,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn signed_diag(signs: &[f64]) -> ComplexMatrix {
    let mut m = complex_identity(signs.len());
    for (i, s) in signs.iter().enumerate() {
        m[(i, i)] = c(*s, 0.0);
    }
    m
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for n in 2..=8 {
        let d = GroupDescriptor::su(n).map_err(|e| e.to_string())?;
        let classes = involutions_su(n).map_err(|e| e.to_string())?;
        ensure(classes.len() == n / 2 + 1, || format!("SU({n}): {} classes", classes.len()))?;
        for (j, class) in classes.iter().enumerate() {
            let signs: Vec<f64> = (0..n).map(|i| if i < 2 * j { -1.0 } else { 1.0 }).collect();
            let expected = signed_diag(&signs);
            let got = class.representative.as_unitary().unwrap();
            ensure((got - &expected).norm() == 0.0, || format!("SU({n}) class {j}: representative differs"))?;
            for _ in 0..3 {
                let g = random_element(&d, &mut rng);
                let x = class.representative.conjugate_by(&g).unwrap();
                ensure(classify_involution(&x).unwrap() == j, || format!("SU({n}) class {j}: conjugate misclassified"))?;
            }
        }
    }
    for n in 1..=4 {
        let d = GroupDescriptor::sp(n).map_err(|e| e.to_string())?;
        let classes = involutions_sp(n).map_err(|e| e.to_string())?;
        ensure(classes.len() == n + 1, || format!("Sp({n}): {} classes", classes.len()))?;
        for (k, class) in classes.iter().enumerate() {
            let signs: Vec<f64> = (0..2 * n).map(|i| if i % n < k { -1.0 } else { 1.0 }).collect();
            let got = class.representative.as_unitary().unwrap();
            ensure((got - signed_diag(&signs)).norm() == 0.0, || format!("Sp({n}) class {k}: representative differs"))?;
            for _ in 0..3 {
                let g = random_element(&d, &mut rng);
                let x = class.representative.conjugate_by(&g).unwrap();
                ensure(classify_involution(&x).unwrap() == k, || format!("Sp({n}) class {k}: conjugate misclassified"))?;
            }
        }
    }
    Ok("SU(2..8) -> [n/2]+1 classes, Sp(1..4) -> n+1 classes".into())
}

/// Image of `u` in `SO(3)` under `u -> (x -> u x u^*)` on traceless
/// Hermitian matrices: `R_ij = tr(s_i u s_j u^*) / 2` for the Pauli `s_i`.
fn su2_to_so3(u: &ComplexMatrix) -> RealMatrix {
    let s = [
        ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
    ];
    RealMatrix::from_fn(3, 3, |i, j| (&s[i] * u * &s[j] * u.adjoint()).trace().re / 2.0)
}

/// A representation of `surface` into `target` whose lift has relation value
/// `k`, together with the expected residues.
fn sampled_rep(surface: &SurfacePresentation, target: &GroupDescriptor, k: &CenterElement, seed: u64) -> Representation {
    let sample = match *surface {
        SurfacePresentation::Orientable { genus } => sample_fiber_orientable(genus, k, seed),
        _ => sample_fiber_nonorientable(surface, k, seed),
    }
    .unwrap();
    assert!(sample.residual < 1e-9);
    let images: Vec<GroupElement> = if target == &GroupDescriptor::so(3).unwrap() {
        sample
            .images
            .iter()
            .map(|x| GroupElement::orthogonal(target, su2_to_so3(x.as_unitary().unwrap())).unwrap())
            .collect()
    } else {
        sample.images.iter().map(|x| project_cover(x, target).unwrap()).collect()
    };
    Representation::new(*surface, target.clone(), images).unwrap()
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let so3 = GroupDescriptor::so(3).unwrap();
    let psu3 = GroupDescriptor::psu(3).unwrap();
    let surfaces = [
        SurfacePresentation::orientable(1),
        SurfacePresentation::orientable(2),
        SurfacePresentation::orientable(3),
        SurfacePresentation::nonorientable(3).unwrap(),
        SurfacePresentation::nonorientable(5).unwrap(),
        SurfacePresentation::nonorientable(6).unwrap(),
    ];
    let mut reps = 0;
    for (target, sampler) in [(&so3, GroupDescriptor::su(2).unwrap()), (&psu3, GroupDescriptor::su(3).unwrap())] {
        let (_, center) = enumerate_center(&sampler).unwrap();
        for surface in &surfaces {
            let mut classes_seen = BTreeSet::new();
            for i in 0..100 {
                let k = &center[i % center.len()];
                let rep = sampled_rep(surface, target, k, rng.random());
                let class = obstruction(&rep).map_err(|e| format!("{target} {surface}: {e}"))?;
                // the sampled fiber label is an independent prediction of the class
                let expected: Vec<u64> = match (surface.kind(), target.n()) {
                    (flatmod::surfaces::SurfaceKind::Nonorientable, 3) if target == &psu3 => vec![],
                    _ => k.coords.clone(),
                };
                ensure(class.residues == expected, || {
                    format!("{target} {surface}: class {:?}, fiber label {expected:?}", class.residues)
                })?;
                classes_seen.insert(class.residues.clone());
                let lifts = obstruction_lift_independence_test(&rep, 100, rng.random()).map_err(|e| e.to_string())?;
                ensure(lifts.passed(), || format!("{target} {surface}: {} lift mismatches", lifts.mismatches))?;
                for _ in 0..100 {
                    let g = random_element(target, &mut rng);
                    let moved = obstruction(&conjugate_representation(&rep, &g).unwrap()).map_err(|e| e.to_string())?;
                    ensure(moved == class, || format!("{target} {surface}: conjugation changed the class"))?;
                }
                reps += 1;
            }
            let expected_classes = if surface.kind() == flatmod::surfaces::SurfaceKind::Nonorientable && target == &psu3 {
                1
            } else {
                center.len()
            };
            ensure(classes_seen.len() == expected_classes, || format!("{target} {surface}: classes seen {classes_seen:?}"))?;
        }
    }
    Ok(format!("{reps} representations, 100 lift changes and 100 conjugations each, classes unchanged"))
}

fn criterion_3() -> Outcome {
    let mut summary = Vec::new();
    for target in [GroupDescriptor::so(3).unwrap(), GroupDescriptor::psu(4).unwrap()] {
        let (_, center) = enumerate_center(&target.cover()).unwrap();
        for crosscaps in [3, 6] {
            let surface = SurfacePresentation::nonorientable(crosscaps).unwrap();
            let h2 = flatmod::obstruction::h2_coefficients(&surface, &target).unwrap();
            let mut realized = BTreeSet::new();
            for (i, k) in center.iter().enumerate() {
                let sample = sample_fiber_nonorientable(&surface, k, 300 + i as u64).map_err(|e| e.to_string())?;
                ensure(sample.residual < 1e-9, || format!("{target} k={crosscaps}: fiber residual {}", sample.residual))?;
                let images = sample.images.iter().map(|x| project_cover(x, &target).unwrap()).collect();
                let rep = Representation::new(surface, target.clone(), images).map_err(|e| e.to_string())?;
                let class = obstruction(&rep).map_err(|e| e.to_string())?;
                let expected: Vec<u64> = k.coords.iter().map(|x| x % 2).collect();
                ensure(class.residues == expected, || format!("{target} k={crosscaps}: {:?} vs {expected:?}", class.residues))?;
                realized.insert(class.residues);
            }
            ensure(realized.len() as u64 == h2.order(), || format!("{target} k={crosscaps}: realized {realized:?} of {h2}"))?;
            summary.push(format!("{target} k={crosscaps}: {}/{}", realized.len(), h2.order()));
        }
    }
    Ok(summary.join(", "))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut worst, mut worst_end, mut paths) = (0.0f64, 0.0f64, 0);
    for n in 2..=4 {
        let d = GroupDescriptor::su(n).unwrap();
        let (_, center) = enumerate_center(&d).unwrap();
        for k in &center {
            for _ in 0..20 {
                let target = random_element(&d, &mut rng);
                let p = connect_odd(k, &target, 1).map_err(|e| e.to_string())?;
                let r = validate_path(&p, &[target], 101, PATH_TOL).map_err(|e| e.to_string())?;
                worst = worst.max(r.max_residual).max(r.start_handles);
                worst_end = worst_end.max(r.endpoint_residuals.max());

                let (c1, c2) = (random_element(&d, &mut rng), random_element(&d, &mut rng));
                let p = connect_even(k, &c1, &c2, 2).map_err(|e| e.to_string())?;
                let r = validate_path(&p, &[c1, c2], 101, PATH_TOL).map_err(|e| e.to_string())?;
                worst = worst.max(r.max_residual).max(r.start_handles);
                worst_end = worst_end.max(r.endpoint_residuals.max());
                paths += 2;
            }
        }
    }
    ensure(worst <= 1e-9 && worst_end <= 1e-10, || format!("max residual {worst:.2e}, endpoints {worst_end:.2e}"))?;
    Ok(format!("{paths} paths, max residual {worst:.2e}, endpoint residual {worst_end:.2e}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut solve, mut ident) = (0.0f64, 0.0f64);
    for n in 2..=6 {
        let w = coxeter_element(n).unwrap();
        for _ in 0..100 {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
            let mean = v.iter().sum::<f64>() / n as f64;
            v.iter_mut().for_each(|x| *x -= mean);
            let xi = CartanVector::new(v).unwrap();
            let t = rng.random_range(-1.0..1.0);
            solve = solve.max(coxeter_residual(&w, &xi, &coxeter_solve(&w, &xi).unwrap()).unwrap());
            ident = ident.max(commutation_identity_check(&w, &xi, t).unwrap());
        }
    }
    let mut margin = 0.0f64;
    for n in 2..=12 {
        let w = coxeter_element(n).unwrap();
        margin = margin.max((unit_eigenvalue_margin(&w) - 2.0 * (PI / n as f64).sin()).abs());
    }
    ensure(solve <= 1e-10 && ident <= 1e-9 && margin <= 1e-10, || {
        format!("solve {solve:.2e}, identity {ident:.2e}, margin {margin:.2e}")
    })?;
    Ok(format!("solve {solve:.2e}, identity {ident:.2e}, margin error {margin:.2e}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut worst, mut count) = (0.0f64, 0);
    for n in 2..=5 {
        let d = GroupDescriptor::su(n).unwrap();
        let (_, center) = enumerate_center(&d).unwrap();
        let mut targets: Vec<GroupElement> = center.into_iter().map(|k| k.element).collect();
        while targets.len() < 125 {
            targets.push(random_element(&d, &mut rng));
        }
        for g in &targets {
            let (a, b) = commutator_preimage(g).map_err(|e| e.to_string())?;
            // evaluate the commutator on raw matrices
            let (a, b, g) = (a.as_unitary().unwrap(), b.as_unitary().unwrap(), g.as_unitary().unwrap());
            let r = (a * b * a.adjoint() * b.adjoint() - g).norm();
            worst = worst.max(r);
            count += 1;
        }
    }
    ensure(worst <= 1e-9, || format!("max residual {worst:.2e}"))?;
    Ok(format!("{count} targets, max residual {worst:.2e}"))
}

fn criterion_7() -> Outcome {
    let so3 = GroupDescriptor::so(3).unwrap();
    let psu3 = GroupDescriptor::psu(3).unwrap();
    let spots = [
        (SurfacePresentation::orientable(2), &so3, 2),
        (SurfacePresentation::nonorientable(5).unwrap(), &so3, 2),
        (SurfacePresentation::nonorientable(3).unwrap(), &psu3, 1),
        (SurfacePresentation::orientable(2), &psu3, 3),
    ];
    for (s, g, want) in &spots {
        match predict_component_count(s, g).map_err(|e| e.to_string())? {
            Prediction::Count { count, .. } if count == *want => {}
            other => return Err(format!("{s} over {g}: {other:?}, expected {want}")),
        }
    }
    let groups = [
        so3.clone(),
        psu3.clone(),
        GroupDescriptor::su(4).unwrap(),
        GroupDescriptor::psu(4).unwrap(),
        GroupDescriptor::spin(5).unwrap(),
        GroupDescriptor::sp(2).unwrap(),
        GroupDescriptor::so(6).unwrap(),
    ];
    for g in &groups {
        for crosscaps in [2, 4] {
            let s = SurfacePresentation::nonorientable(crosscaps).unwrap();
            match predict_component_count(&s, g).map_err(|e| e.to_string())? {
                Prediction::OpenCase { .. } => {}
                other => return Err(format!("{s} over {g}: {other:?}, expected an open case")),
            }
        }
    }
    Ok("4 spot values match; 2 and 4 crosscaps flagged open for 7 groups".into())
}

fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    let mut worst = 0.0f64;
    for n in 3..=7 {
        let r = enumerate_spin_square_classes(n).map_err(|e| e.to_string())?;
        ensure(r.candidates.len() == n / 2 + 1, || format!("Spin({n}): {} candidates", r.candidates.len()))?;
        let odd: Vec<usize> = r.candidates.iter().map(|c| c.j).filter(|j| j % 2 == 1).collect();
        ensure(r.candidates_squaring_to_minus_one == odd, || {
            format!("Spin({n}): flagged {:?}, odd j {odd:?}", r.candidates_squaring_to_minus_one)
        })?;
        // recompute each square independently from the stored element
        for cand in &r.candidates {
            let x = CliffordElement::from_blade_map(n, &cand.element).unwrap();
            let square = CliffordElement::from_blade_map(n, &cand.square).unwrap();
            let expected = CliffordElement::scalar(n, if cand.j % 2 == 0 { 1.0 } else { -1.0 }).unwrap();
            worst = worst.max(x.mul_by_word_reduction(&x).unwrap().max_abs_diff(&square));
            ensure(square.max_abs_diff(&expected) < 1e-12, || format!("Spin({n}) j={}: square {:?}", cand.j, cand.square))?;
        }
        worst = worst.max(r.consistency_max_diff);
        ensure(r.computed_count == r.classes.len(), || format!("Spin({n}): inconsistent count"))?;
        ensure(r.discrepancy_flag == (r.computed_count != r.formula_count), || format!("Spin({n}): flag inconsistent"))?;
        lines.push(format!("n={n}: computed {} vs formula {}", r.computed_count, r.formula_count));
    }
    ensure(worst <= 1e-12, || format!("consistency {worst:.2e}"))?;
    Ok(format!("{}; consistency {worst:.2e}", lines.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 involution counts", criterion_1, Duration::from_secs(1)),
        ("2 obstruction well-definedness", criterion_2, Duration::from_secs(60)),
        ("3 surjectivity onto K/2K", criterion_3, Duration::from_secs(30)),
        ("4 path validity", criterion_4, Duration::from_secs(60)),
        ("5 Coxeter machinery", criterion_5, Duration::from_secs(60)),
        ("6 commutator preimages", criterion_6, Duration::from_secs(60)),
        ("7 component-count predictions", criterion_7, Duration::from_secs(60)),
        ("8 Spin square classes", criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = if elapsed > budget { format!(" (over the {}s budget)", budget.as_secs()) } else { String::new() };
        match outcome {
            Ok(msg) => println!("PASS  criterion {name}: {msg} [{:.2}s{over}]", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
