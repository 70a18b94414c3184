use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z/d_1 x ... x Z/d_m`; elements are residue vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.iter().any(|&d| d == 0) {
            return Err(Error::Validation("cyclic factor of order 0".into()));
        }
        Ok(FiniteAbelianGroup { orders })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: Vec::new() }
    }

    pub fn cyclic(d: u64) -> Self {
        FiniteAbelianGroup { orders: vec![d] }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn identity(&self) -> Vec<u64> {
        vec![0; self.orders.len()]
    }

    pub fn contains(&self, r: &[u64]) -> bool {
        r.len() == self.orders.len() && r.iter().zip(&self.orders).all(|(x, d)| x < d)
    }

    pub fn reduce(&self, r: &[i64]) -> Vec<u64> {
        r.iter().zip(&self.orders).map(|(&x, &d)| x.rem_euclid(d as i64) as u64).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(x, d)| (d - x) % d).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(x, d)| (x * (k % d)) % d).collect()
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.orders).map(|(&x, &d)| d / gcd(x, d)).fold(1, lcm)
    }

    /// All elements in mixed-radix order, last coordinate fastest.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.orders {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |r| {
                        let mut v = prefix.clone();
                        v.push(r);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// `K -> K/2K`. Each factor `Z/d` maps onto `Z/gcd(2, d)`; factors that
    /// become trivial are dropped from the quotient.
    pub fn quotient_by_squares(&self) -> SquareQuotient {
        let mut kept = Vec::new();
        let mut orders = Vec::new();
        for (i, &d) in self.orders.iter().enumerate() {
            let q = gcd(2, d);
            if q > 1 {
                kept.push(i);
                orders.push(q);
            }
        }
        SquareQuotient { source: self.clone(), quotient: FiniteAbelianGroup { orders }, kept }
    }

    pub fn subgroup_generated_by(&self, gens: &[Vec<u64>]) -> Result<Subgroup> {
        for g in gens {
            if !self.contains(g) {
                return Err(Error::Validation(format!("{g:?} is not an element of Z/{:?}", self.orders)));
            }
        }
        let mut elems = vec![self.identity()];
        let mut frontier = elems.clone();
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if !elems.contains(&y) {
                    elems.push(y.clone());
                    frontier.push(y);
                }
            }
        }
        Subgroup::from_elements(self.clone(), elems)
    }
}

impl std::fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.orders.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// The quotient `K/2K` together with its projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareQuotient {
    source: FiniteAbelianGroup,
    quotient: FiniteAbelianGroup,
    kept: Vec<usize>,
}

impl SquareQuotient {
    pub fn quotient(&self) -> &FiniteAbelianGroup {
        &self.quotient
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn project(&self, k: &[u64]) -> Vec<u64> {
        self.kept.iter().zip(&self.quotient.orders).map(|(&i, &q)| k[i] % q).collect()
    }
}

/// A subgroup of a finite abelian group, with an abstract model
/// `Z/d_1 x ... x Z/d_m` and coordinate maps both ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    ambient: FiniteAbelianGroup,
    abstract_group: FiniteAbelianGroup,
    generators: Vec<Vec<u64>>,
    /// `(abstract coords, ambient coords)` for every element.
    table: Vec<(Vec<u64>, Vec<u64>)>,
}

impl Subgroup {
    /// Decomposes a subgroup given by its full element list. Generators are
    /// chosen greedily by maximal order among elements whose cyclic span meets
    /// the span so far trivially; the result is verified by counting.
    pub fn from_elements(ambient: FiniteAbelianGroup, mut elems: Vec<Vec<u64>>) -> Result<Self> {
        elems.sort();
        elems.dedup();
        for x in &elems {
            for y in &elems {
                if !elems.contains(&ambient.add(x, y)) {
                    return Err(Error::Validation("element list is not closed under addition".into()));
                }
            }
        }
        let mut generators: Vec<Vec<u64>> = Vec::new();
        let mut orders: Vec<u64> = Vec::new();
        let mut span = vec![ambient.identity()];
        while span.len() < elems.len() {
            let best = elems
                .iter()
                .filter(|x| {
                    let ord = ambient.element_order(x);
                    (1..ord).all(|m| !span.contains(&ambient.scale(x, m)))
                })
                .max_by(|a, b| ambient.element_order(a).cmp(&ambient.element_order(b)).then(b.cmp(a)))
                .cloned()
                .ok_or_else(|| Error::Validation("could not find a complement generator".into()))?;
            let ord = ambient.element_order(&best);
            let mut next = Vec::with_capacity(span.len() * ord as usize);
            for s in &span {
                for m in 0..ord {
                    next.push(ambient.add(s, &ambient.scale(&best, m)));
                }
            }
            next.sort();
            next.dedup();
            if next.len() != span.len() * ord as usize {
                return Err(Error::Validation("greedy subgroup decomposition failed".into()));
            }
            span = next;
            generators.push(best);
            orders.push(ord);
        }
        let abstract_group = FiniteAbelianGroup { orders };
        let table = abstract_group
            .elements()
            .into_iter()
            .map(|a| {
                let amb = a.iter().zip(&generators).fold(ambient.identity(), |acc, (&c, g)| ambient.add(&acc, &ambient.scale(g, c)));
                (a, amb)
            })
            .collect();
        Ok(Subgroup { ambient, abstract_group, generators, table })
    }

    pub fn ambient(&self) -> &FiniteAbelianGroup {
        &self.ambient
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.abstract_group
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn ambient_elements(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.table.iter().map(|(_, amb)| amb)
    }

    pub fn contains_ambient(&self, amb: &[u64]) -> bool {
        self.table.iter().any(|(_, x)| x == amb)
    }

    pub fn to_abstract(&self, amb: &[u64]) -> Option<Vec<u64>> {
        self.table.iter().find(|(_, x)| x == amb).map(|(a, _)| a.clone())
    }

    pub fn to_ambient(&self, abs: &[u64]) -> Option<Vec<u64>> {
        self.table.iter().find(|(a, _)| a == abs).map(|(_, x)| x.clone())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
