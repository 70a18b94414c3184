use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{FiniteAbelianGroup, Subgroup, MAX_GENERATORS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SU,
    SO,
    Spin,
    Sp,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::SU => "SU",
            Family::SO => "SO",
            Family::Spin => "Spin",
            Family::Sp => "Sp",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "su" => Ok(Family::SU),
            "so" => Ok(Family::SO),
            "spin" => Ok(Family::Spin),
            "sp" => Ok(Family::Sp),
            other => Err(Error::Parse(format!("unknown group family {other:?}"))),
        }
    }
}

/// A compact group `G = G~ / Gamma` where `G~` is one of `SU(n)`, `Spin(n)`,
/// `Sp(n)` and `Gamma` is a subgroup of its center. `SO(n)` is its own family
/// with orthogonal-matrix elements; its `Gamma` is `{+1, -1}` in `Spin(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescriptor {
    family: Family,
    n: usize,
    quotient: Subgroup,
}

impl GroupDescriptor {
    pub fn new(family: Family, n: usize, quotient_generators: &[Vec<u64>]) -> Result<Self> {
        check_rank(family, n)?;
        let center = center_group(family.simply_connected_family(), n);
        match family {
            Family::SO => {
                if !quotient_generators.is_empty() {
                    return Err(Error::Unsupported("quotients of SO(n) are not modelled".into()));
                }
                let quotient = center.subgroup_generated_by(&[spin_minus_one_coords(n)])?;
                Ok(GroupDescriptor { family, n, quotient })
            }
            _ => {
                let quotient = center.subgroup_generated_by(quotient_generators)?;
                Ok(GroupDescriptor { family, n, quotient })
            }
        }
    }

    pub fn su(n: usize) -> Result<Self> {
        Self::new(Family::SU, n, &[])
    }

    pub fn so(n: usize) -> Result<Self> {
        Self::new(Family::SO, n, &[])
    }

    pub fn spin(n: usize) -> Result<Self> {
        Self::new(Family::Spin, n, &[])
    }

    pub fn sp(n: usize) -> Result<Self> {
        Self::new(Family::Sp, n, &[])
    }

    /// `PSU(n) = SU(n) / Z/n`.
    pub fn psu(n: usize) -> Result<Self> {
        Self::new(Family::SU, n, &[vec![1]])
    }

    /// Quotient of a simply connected group by its whole center.
    pub fn adjoint_form(family: Family, n: usize) -> Result<Self> {
        if family == Family::SO {
            return Err(Error::Unsupported("adjoint form requested for SO".into()));
        }
        let center = center_group(family, n);
        let gens: Vec<Vec<u64>> = (0..center.rank())
            .map(|i| {
                let mut g = center.identity();
                g[i] = 1;
                g
            })
            .collect();
        Self::new(family, n, &gens)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The central subgroup `Gamma` of the cover, in center coordinates.
    pub fn quotient(&self) -> &Subgroup {
        &self.quotient
    }

    pub fn is_simply_connected(&self) -> bool {
        self.family != Family::SO && self.quotient.order() == 1
    }

    /// Descriptor of the universal cover `G~`.
    pub fn cover(&self) -> GroupDescriptor {
        GroupDescriptor {
            family: self.family.simply_connected_family(),
            n: self.n,
            quotient: trivial_subgroup_of(center_group(self.family.simply_connected_family(), self.n)),
        }
    }

    /// Matrix size of the element payload (0 for Spin).
    pub fn matrix_dim(&self) -> usize {
        match self.family {
            Family::SU | Family::SO => self.n,
            Family::Sp => 2 * self.n,
            Family::Spin => 0,
        }
    }
}

impl Family {
    pub fn simply_connected_family(self) -> Family {
        match self {
            Family::SO => Family::Spin,
            f => f,
        }
    }
}

fn trivial_subgroup_of(g: FiniteAbelianGroup) -> Subgroup {
    g.subgroup_generated_by(&[]).expect("trivial subgroup always exists")
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family.name(), self.n)?;
        if self.family != Family::SO && self.quotient.order() > 1 {
            write!(f, "/{}", self.quotient.group())?;
        }
        Ok(())
    }
}

fn check_rank(family: Family, n: usize) -> Result<()> {
    let ok = match family {
        Family::SU => n >= 2,
        Family::SO | Family::Spin => (3..=MAX_GENERATORS).contains(&n),
        Family::Sp => n >= 1,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Validation(format!("rank parameter n = {n} not supported for {}", family.name())))
    }
}

/// Abstract model of the center of a simply connected group.
///
/// `SU(n)`: `Z/n`. `Sp(n)`: `Z/2`. `Spin(n)`: `Z/2` for odd `n`, `Z/4`
/// generated by `e_1...e_n` for `n = 2 mod 4`, and `Z/2 x Z/2` with
/// coordinates `(a, b) -> (-1)^a (e_1...e_n)^b` for `n = 0 mod 4`.
pub fn center_group(family: Family, n: usize) -> FiniteAbelianGroup {
    match family {
        Family::SU => FiniteAbelianGroup::cyclic(n as u64),
        Family::Sp => FiniteAbelianGroup::cyclic(2),
        Family::Spin | Family::SO => {
            if n % 2 == 1 {
                FiniteAbelianGroup::cyclic(2)
            } else if n % 4 == 2 {
                FiniteAbelianGroup::cyclic(4)
            } else {
                FiniteAbelianGroup::new(vec![2, 2]).expect("nonzero orders")
            }
        }
    }
}

/// Center coordinates of `-1` in `Spin(n)`.
pub fn spin_minus_one_coords(n: usize) -> Vec<u64> {
    if n % 2 == 1 {
        vec![1]
    } else if n % 4 == 2 {
        vec![2]
    } else {
        vec![1, 0]
    }
}
