//! Real Clifford algebra `Cl(n, 0)` with `e_i^2 = +1`, `n <= 7`.
//!
//! Blades are indexed by bitmask: bit `i - 1` set means `e_i` is a factor, and
//! a blade's factors are always written in increasing index order. So index
//! `0b011` is `e_1 e_2` and the coefficient vector has length `2^n`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_GENERATORS: usize = 7;

#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement {
    n: usize,
    coeffs: Vec<f64>,
}

/// Sign of `e_A e_B` after reordering into canonical form, for all blade pairs.
struct BladeTable {
    dim: usize,
    signs: Vec<i8>,
}

impl BladeTable {
    fn build(n: usize) -> Self {
        let dim = 1usize << n;
        let mut signs = vec![0i8; dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                signs[a * dim + b] = reorder_sign(a, b);
            }
        }
        BladeTable { dim, signs }
    }

    fn get(n: usize) -> &'static BladeTable {
        static TABLES: [OnceLock<BladeTable>; MAX_GENERATORS + 1] = [const { OnceLock::new() }; MAX_GENERATORS + 1];
        TABLES[n].get_or_init(|| BladeTable::build(n))
    }

    #[inline]
    fn sign(&self, a: usize, b: usize) -> f64 {
        self.signs[a * self.dim + b] as f64
    }
}

/// Counts transpositions needed to move every factor of `b` past the larger
/// factors of `a`; repeated generators square to `+1`.
fn reorder_sign(a: usize, b: usize) -> i8 {
    let mut swaps = 0u32;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `"134"` for `e_1 e_3 e_4`; the scalar blade is `""`.
pub fn blade_key(mask: usize) -> String {
    (0..MAX_GENERATORS)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| char::from(b'1' + i as u8))
        .collect()
}

pub fn parse_blade_key(key: &str, n: usize) -> Result<usize> {
    let mut mask = 0usize;
    let mut last = 0u32;
    for ch in key.chars() {
        let d = ch
            .to_digit(10)
            .filter(|&d| d >= 1 && d as usize <= n)
            .ok_or_else(|| Error::Parse(format!("bad blade key {key:?} for n = {n}")))?;
        if d <= last {
            return Err(Error::Parse(format!("blade key {key:?} must list indices in increasing order")));
        }
        last = d;
        mask |= 1 << (d - 1);
    }
    Ok(mask)
}

impl CliffordElement {
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GENERATORS {
            return Err(Error::Validation(format!("Clifford generator count {n} outside 1..={MAX_GENERATORS}")));
        }
        Ok(CliffordElement { n, coeffs: vec![0.0; 1 << n] })
    }

    pub fn scalar(n: usize, value: f64) -> Result<Self> {
        let mut x = Self::zero(n)?;
        x.coeffs[0] = value;
        Ok(x)
    }

    pub fn one(n: usize) -> Result<Self> {
        Self::scalar(n, 1.0)
    }

    pub fn blade(n: usize, mask: usize, coeff: f64) -> Result<Self> {
        let mut x = Self::zero(n)?;
        if mask >= x.coeffs.len() {
            return Err(Error::Validation(format!("blade mask {mask:#b} out of range for n = {n}")));
        }
        x.coeffs[mask] = coeff;
        Ok(x)
    }

    /// Generator `e_i`, 1-based.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Validation(format!("generator index {i} outside 1..={n}")));
        }
        Self::blade(n, 1 << (i - 1), 1.0)
    }

    /// Product `e_1 e_2 ... e_m`.
    pub fn leading_blade(n: usize, m: usize) -> Result<Self> {
        if m > n {
            return Err(Error::Validation(format!("cannot take {m} generators out of {n}")));
        }
        Self::blade(n, (1 << m) - 1, 1.0)
    }

    pub fn vector(v: &[f64]) -> Result<Self> {
        let mut x = Self::zero(v.len())?;
        for (i, &c) in v.iter().enumerate() {
            x.coeffs[1 << i] = c;
        }
        Ok(x)
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        let x = Self::zero(n)?;
        if coeffs.len() != x.coeffs.len() {
            return Err(Error::Dimension { expected: x.coeffs.len(), actual: coeffs.len() });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Validation("non-finite Clifford coefficient".into()));
        }
        Ok(CliffordElement { n, coeffs })
    }

    pub fn from_blade_map(n: usize, map: &BTreeMap<String, f64>) -> Result<Self> {
        let mut x = Self::zero(n)?;
        for (key, &c) in map {
            let mask = parse_blade_key(key, n)?;
            x.coeffs[mask] += c;
        }
        Ok(x)
    }

    /// Nonzero coefficients keyed by [`blade_key`].
    pub fn to_blade_map(&self) -> BTreeMap<String, f64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(m, &c)| (blade_key(m), c))
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Coefficient of `e_1 ... e_n`.
    pub fn pseudoscalar_part(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, actual: other.n });
        }
        Ok(())
    }

    /// Geometric product via the cached blade sign table.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let table = BladeTable::get(self.n);
        let mut out = vec![0.0; self.coeffs.len()];
        for (a, &x) in self.coeffs.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (b, &y) in other.coeffs.iter().enumerate() {
                if y != 0.0 {
                    out[a ^ b] += table.sign(a, b) * x * y;
                }
            }
        }
        Ok(CliffordElement { n: self.n, coeffs: out })
    }

    /// Geometric product by explicit word reduction: each blade pair is
    /// written out as a generator word and bubble-sorted, cancelling adjacent
    /// equal generators. Shares no code with [`CliffordElement::mul`].
    pub fn mul_by_word_reduction(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = vec![0.0; self.coeffs.len()];
        for (a, &x) in self.coeffs.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (b, &y) in other.coeffs.iter().enumerate() {
                if y == 0.0 {
                    continue;
                }
                let mut word: Vec<usize> = (0..self.n).filter(|i| a >> i & 1 == 1).collect();
                word.extend((0..self.n).filter(|i| b >> i & 1 == 1));
                let (sign, reduced) = reduce_word(word);
                let mask = reduced.iter().fold(0usize, |m, &i| m | 1 << i);
                out[mask] += sign * x * y;
            }
        }
        Ok(CliffordElement { n: self.n, coeffs: out })
    }

    pub fn scale(&self, s: f64) -> Self {
        CliffordElement { n: self.n, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Reversion: reverses generator order in every blade.
    pub fn reverse(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| {
                let r = m.count_ones();
                if (r * r.saturating_sub(1) / 2) % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        CliffordElement { n: self.n, coeffs }
    }

    pub fn grade_projection(&self, grade: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| if m.count_ones() == grade { c } else { 0.0 })
            .collect();
        CliffordElement { n: self.n, coeffs }
    }

    /// Euclidean norm of each grade component, grades `0..=n`.
    pub fn grade_norms(&self) -> Vec<f64> {
        let mut sq = vec![0.0; self.n + 1];
        for (m, &c) in self.coeffs.iter().enumerate() {
            sq[m.count_ones() as usize] += c * c;
        }
        sq.into_iter().map(f64::sqrt).collect()
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    /// Largest coefficient magnitude on odd-grade blades.
    pub fn odd_part_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(m, _)| m.count_ones() % 2 == 1)
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max)
    }
}

fn reduce_word(mut word: Vec<usize>) -> (f64, Vec<usize>) {
    let mut sign = 1.0;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < word.len() {
            if word[i] == word[i + 1] {
                word.drain(i..i + 2);
                changed = true;
            } else if word[i] > word[i + 1] {
                word.swap(i, i + 1);
                sign = -sign;
                changed = true;
                i += 1;
            } else {
                i += 1;
            }
        }
        if !changed {
            return (sign, word);
        }
    }
}

impl Add for &CliffordElement {
    type Output = CliffordElement;
    fn add(self, rhs: Self) -> CliffordElement {
        assert_eq!(self.n, rhs.n, "Clifford generator count mismatch");
        CliffordElement { n: self.n, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CliffordElement {
    type Output = CliffordElement;
    fn sub(self, rhs: Self) -> CliffordElement {
        assert_eq!(self.n, rhs.n, "Clifford generator count mismatch");
        CliffordElement { n: self.n, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        self.scale(-1.0)
    }
}

impl Mul for &CliffordElement {
    type Output = CliffordElement;
    fn mul(self, rhs: Self) -> CliffordElement {
        CliffordElement::mul(self, rhs).expect("Clifford generator count mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> CliffordElement {
        CliffordElement::generator(n, i).unwrap()
    }

    #[test]
    fn generator_product_is_bivector() {
        let p = &e(3, 1) * &e(3, 2);
        assert_eq!(p, CliffordElement::blade(3, 0b011, 1.0).unwrap());
        assert_eq!(p.to_blade_map().get("12"), Some(&1.0));
    }

    #[test]
    fn bivector_squares_to_minus_one() {
        let b = &e(4, 1) * &e(4, 2);
        assert_eq!(&b * &b, CliffordElement::scalar(4, -1.0).unwrap());
    }

    #[test]
    fn generators_square_to_plus_one_and_anticommute() {
        for i in 1..=5 {
            assert_eq!(&e(5, i) * &e(5, i), CliffordElement::one(5).unwrap());
            for j in (i + 1)..=5 {
                assert_eq!(&e(5, i) * &e(5, j), -&(&e(5, j) * &e(5, i)));
            }
        }
    }

    #[test]
    fn mismatched_generator_counts_error() {
        let err = CliffordElement::one(3).unwrap().mul(&CliffordElement::one(4).unwrap());
        assert_eq!(err, Err(Error::Dimension { expected: 3, actual: 4 }));
    }

    #[test]
    fn out_of_range_n_rejected() {
        assert!(CliffordElement::zero(0).is_err());
        assert!(CliffordElement::zero(8).is_err());
    }

    #[test]
    fn blade_keys_roundtrip() {
        for m in 0..128 {
            assert_eq!(parse_blade_key(&blade_key(m), 7).unwrap(), m);
        }
        assert!(parse_blade_key("21", 3).is_err());
        assert!(parse_blade_key("4", 3).is_err());
    }

    #[test]
    fn reverse_of_bivector_negates() {
        let b = &e(3, 1) * &e(3, 2);
        assert_eq!(b.reverse(), -&b);
        let tri = CliffordElement::blade(3, 0b111, 2.0).unwrap();
        assert_eq!(tri.reverse(), tri.scale(-1.0));
    }

    fn element(n: usize) -> impl Strategy<Value = CliffordElement> {
        prop::collection::vec(-1.0f64..1.0, 1 << n).prop_map(move |c| CliffordElement::from_coeffs(n, c).unwrap())
    }

    fn triple() -> impl Strategy<Value = (CliffordElement, CliffordElement, CliffordElement)> {
        (1usize..=5).prop_flat_map(|n| (element(n), element(n), element(n)))
    }

    proptest! {
        #[test]
        fn product_is_associative((x, y, z) in triple()) {
            let left = &(&x * &y) * &z;
            let right = &x * &(&y * &z);
            prop_assert!(left.max_abs_diff(&right) <= 1e-12);
        }

        #[test]
        fn one_is_identity((x, _, _) in triple()) {
            let one = CliffordElement::one(x.n()).unwrap();
            prop_assert_eq!(&one * &x, x.clone());
            prop_assert_eq!(&x * &one, x);
        }

        #[test]
        fn table_matches_word_reduction((x, y, _) in triple()) {
            let a = x.mul(&y).unwrap();
            let b = x.mul_by_word_reduction(&y).unwrap();
            prop_assert!(a.max_abs_diff(&b) <= 1e-12);
        }
    }
}
