//! Conjugacy classes of elements of order dividing two, i.e. the points of
//! `Hom(Z/2, G) / G`, for `SU(n)`, `Sp(n)` and `Spin(n)`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{lift_so_to_spin, random_spin, Family, GroupDescriptor, GroupElement, RealMatrix};
use crate::numerics::{
    complex_identity, even_from_spinor_matrix, spinor_matrix, unitary_eig, CliffordElement, ComplexMatrix,
};

/// Inputs with `|g^2 - e|` above this are not treated as involutions.
pub const INVOLUTION_TOL: f64 = 1e-8;

/// Random conjugators tried before two Spin elements with equal invariants
/// are reported as not shown conjugate.
pub const SPIN_SEARCH_TRIALS: usize = 10_000;

const SPIN_SEARCH_SEED: u64 = 0x5350_494e;

/// Conjugation invariants used to tell classes apart.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvolutionSignature {
    /// Multiplicities of the eigenvalues `-1` and `+1`.
    Eigenvalues { minus_one: usize, plus_one: usize },
    /// Scalar and top-blade coefficients and the norm of each grade.
    Spin { scalar: f64, pseudoscalar: f64, grade_norms: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct InvolutionClass {
    pub family: Family,
    pub index: usize,
    pub representative: GroupElement,
    pub signature: InvolutionSignature,
}

fn check_square(g: &GroupElement) -> Result<f64> {
    let dev = g.square().distance(&GroupElement::identity(g.descriptor()))?;
    if dev > INVOLUTION_TOL {
        return Err(Error::Validation(format!("{}: g^2 differs from e by {dev:e}", g.descriptor())));
    }
    Ok(dev)
}

fn minus_one_multiplicity(m: &ComplexMatrix) -> Result<usize> {
    Ok(unitary_eig(m)?.angles.iter().filter(|a| a.abs() > std::f64::consts::FRAC_PI_2).count())
}

fn signed_diagonal(signs: &[f64]) -> ComplexMatrix {
    let mut m = complex_identity(signs.len());
    for (i, &s) in signs.iter().enumerate() {
        m[(i, i)] = Complex64::new(s, 0.0);
    }
    m
}

/// `diag(-I_{2j}, I_{n-2j})`, `j = 0..=n/2`.
pub fn involutions_su(n: usize) -> Result<Vec<InvolutionClass>> {
    let d = GroupDescriptor::su(n)?;
    (0..=n / 2)
        .map(|j| {
            let signs: Vec<f64> = (0..n).map(|i| if i < 2 * j { -1.0 } else { 1.0 }).collect();
            let representative = GroupElement::unitary(&d, signed_diagonal(&signs))?;
            Ok(InvolutionClass {
                family: Family::SU,
                index: j,
                representative,
                signature: InvolutionSignature::Eigenvalues { minus_one: 2 * j, plus_one: n - 2 * j },
            })
        })
        .collect()
}

/// `diag(-I_k, I_{n-k})` in both quaternionic blocks, `k = 0..=n`.
pub fn involutions_sp(n: usize) -> Result<Vec<InvolutionClass>> {
    let d = GroupDescriptor::sp(n)?;
    (0..=n)
        .map(|k| {
            let signs: Vec<f64> = (0..2 * n).map(|i| if i % n < k { -1.0 } else { 1.0 }).collect();
            let representative = GroupElement::unitary(&d, signed_diagonal(&signs))?;
            Ok(InvolutionClass {
                family: Family::Sp,
                index: k,
                representative,
                signature: InvolutionSignature::Eigenvalues { minus_one: 2 * k, plus_one: 2 * (n - k) },
            })
        })
        .collect()
}

/// Index of the class of an involution of `SU(n)` or `Sp(n)`: half the
/// multiplicity of the eigenvalue `-1`.
pub fn classify_involution(g: &GroupElement) -> Result<usize> {
    let d = g.descriptor();
    if !d.is_simply_connected() || !matches!(d.family(), Family::SU | Family::Sp) {
        return Err(Error::Unsupported(format!("involution classification by eigenvalues needs SU(n) or Sp(n), got {d}")));
    }
    check_square(g)?;
    let minus = minus_one_multiplicity(g.as_unitary().expect("matrix payload"))?;
    if minus % 2 == 1 {
        return Err(Error::Validation(format!("{d}: odd multiplicity {minus} of eigenvalue -1")));
    }
    Ok(minus / 2)
}

/// One of the elements `(-1)^j e_1 e_2 ... e_{2j}` together with its square.
#[derive(Debug, Clone, Serialize)]
pub struct SpinCandidate {
    pub j: usize,
    pub element: std::collections::BTreeMap<String, f64>,
    /// Square from the blade table.
    pub square: std::collections::BTreeMap<String, f64>,
    pub square_is_identity: bool,
    pub square_is_minus_identity: bool,
    /// Largest coefficient difference between the blade-table square and the
    /// square computed in the spinor matrix model.
    pub dense_check_diff: f64,
    /// The same difference against word-reduction multiplication.
    pub word_check_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpinClass {
    pub index: usize,
    pub representative: std::collections::BTreeMap<String, f64>,
    /// Half the number of `-1` eigenvalues of the image in `SO(n)`.
    pub rotation_index: usize,
    pub signature: InvolutionSignature,
    /// `|x^2 - 1|`.
    pub square_check: f64,
    /// Other lifts found conjugate to this representative, with the
    /// conjugator used.
    pub merged: Vec<MergedLift>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MergedLift {
    pub element: std::collections::BTreeMap<String, f64>,
    pub conjugator: std::collections::BTreeMap<String, f64>,
}

/// Square classes of `Spin(n)` compared with the closed formula `[n/2] + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct SpinSquareReport {
    pub family: String,
    pub n: usize,
    pub candidates: Vec<SpinCandidate>,
    /// Indices `j` of candidates whose square is `-1`.
    pub candidates_squaring_to_minus_one: Vec<usize>,
    pub classes: Vec<SpinClass>,
    /// Pairs of lifts with equal invariants that no conjugator was found for.
    pub undecided_pairs: usize,
    pub formula_count: usize,
    pub computed_count: usize,
    pub discrepancy_flag: bool,
    /// Largest dense-vs-table difference over all candidates.
    pub consistency_max_diff: f64,
}

fn spin_signature(x: &CliffordElement) -> InvolutionSignature {
    let n = x.n();
    InvolutionSignature::Spin {
        scalar: x.scalar_part(),
        pseudoscalar: if n % 2 == 0 { x.pseudoscalar_part() } else { 0.0 },
        grade_norms: x.grade_norms(),
    }
}

fn signatures_match(a: &InvolutionSignature, b: &InvolutionSignature) -> bool {
    match (a, b) {
        (
            InvolutionSignature::Spin { scalar: s1, pseudoscalar: p1, grade_norms: g1 },
            InvolutionSignature::Spin { scalar: s2, pseudoscalar: p2, grade_norms: g2 },
        ) => {
            (s1 - s2).abs() < 1e-9 && (p1 - p2).abs() < 1e-9 && g1.iter().zip(g2).all(|(x, y)| (x - y).abs() < 1e-9)
        }
        _ => a == b,
    }
}

/// Looks for `y` with `y x y^{-1} = z`: first the bivectors `e_p e_q` and
/// their pairwise products, then random elements.
fn find_conjugator(x: &CliffordElement, z: &CliffordElement, trials: usize) -> Option<CliffordElement> {
    let n = x.n();
    let conjugates = |y: &CliffordElement| (&(y * x) * &y.reverse()).distance(z) < 1e-10;
    let mut bivectors = Vec::new();
    for p in 0..n {
        for q in (p + 1)..n {
            bivectors.push(CliffordElement::blade(n, (1 << p) | (1 << q), 1.0).expect("valid blade"));
        }
    }
    for b in &bivectors {
        if conjugates(b) {
            return Some(b.clone());
        }
    }
    for b in &bivectors {
        for c in &bivectors {
            let y = b * c;
            if y.norm_squared() > 0.5 && conjugates(&y) {
                return Some(y);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPIN_SEARCH_SEED);
    (0..trials).map(|_| random_spin(n, &mut rng)).find(conjugates)
}

/// Builds the candidates `(-1)^j e_1 ... e_{2j}`, squares them two ways, and
/// classifies the elements with `x^2 = 1` up to conjugacy.
///
/// Every `x` with `x^2 = 1` maps to an involution of `SO(n)`, which is
/// conjugate to `diag(-I_{2j}, I)`; so `x` is conjugate to one of the two
/// lifts of that matrix. The lifts are computed, those squaring to `1` kept,
/// and merged when a conjugator is found. Lifts with different invariants are
/// never conjugate.
pub fn enumerate_spin_square_classes(n: usize) -> Result<SpinSquareReport> {
    let spin = GroupDescriptor::spin(n)?;
    let so = GroupDescriptor::so(n)?;
    let one = CliffordElement::one(n)?;
    let minus_one = CliffordElement::scalar(n, -1.0)?;

    let mut candidates = Vec::new();
    for j in 0..=n / 2 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let x = CliffordElement::leading_blade(n, 2 * j)?.scale(sign);
        let square = &x * &x;
        let dense = even_from_spinor_matrix(n, &(spinor_matrix(&x) * spinor_matrix(&x)))?;
        let word = x.mul_by_word_reduction(&x)?;
        candidates.push(SpinCandidate {
            j,
            element: x.to_blade_map(),
            square: square.to_blade_map(),
            square_is_identity: square.max_abs_diff(&one) < 1e-12,
            square_is_minus_identity: square.max_abs_diff(&minus_one) < 1e-12,
            dense_check_diff: square.max_abs_diff(&dense),
            word_check_diff: square.max_abs_diff(&word),
        });
    }

    let mut lifts: Vec<(usize, CliffordElement)> = Vec::new();
    for j in 0..=n / 2 {
        let diag: Vec<f64> = (0..n).map(|i| if i < 2 * j { -1.0 } else { 1.0 }).collect();
        let r = GroupElement::orthogonal(&so, RealMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)))?;
        let x = lift_so_to_spin(&r)?;
        let x = x.as_spin().expect("Spin payload").clone();
        for y in [x.clone(), -&x] {
            if (&y * &y).max_abs_diff(&one) < 1e-12 {
                lifts.push((j, y));
            }
        }
    }

    let mut classes: Vec<SpinClass> = Vec::new();
    let mut undecided_pairs = 0;
    for (j, x) in lifts {
        let sig = spin_signature(&x);
        let mut merged = false;
        for class in classes.iter_mut() {
            if class.rotation_index != j || !signatures_match(&class.signature, &sig) {
                continue;
            }
            let rep = CliffordElement::from_blade_map(n, &class.representative)?;
            match find_conjugator(&rep, &x, SPIN_SEARCH_TRIALS) {
                Some(y) => {
                    class.merged.push(MergedLift { element: x.to_blade_map(), conjugator: y.to_blade_map() });
                    merged = true;
                    break;
                }
                None => undecided_pairs += 1,
            }
        }
        if !merged {
            let element = GroupElement::spin(&spin, x.clone())?;
            let square_check = element.square().distance(&GroupElement::identity(&spin))?;
            classes.push(SpinClass {
                index: classes.len(),
                representative: x.to_blade_map(),
                rotation_index: j,
                signature: sig,
                square_check,
                merged: Vec::new(),
            });
        }
    }

    let candidates_squaring_to_minus_one = candidates.iter().filter(|c| c.square_is_minus_identity).map(|c| c.j).collect();
    let consistency_max_diff = candidates.iter().map(|c| c.dense_check_diff.max(c.word_check_diff)).fold(0.0, f64::max);
    let formula_count = n / 2 + 1;
    let computed_count = classes.len();
    Ok(SpinSquareReport {
        family: "Spin".into(),
        n,
        candidates,
        candidates_squaring_to_minus_one,
        classes,
        undecided_pairs,
        formula_count,
        computed_count,
        discrepancy_flag: formula_count != computed_count,
        consistency_max_diff,
    })
}
