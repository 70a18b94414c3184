use super::descriptor::{center_group, Family, GroupDescriptor};
use super::element::{center_payload, GroupElement};
use crate::error::{Error, Result};
use crate::numerics::{FiniteAbelianGroup, Subgroup};

/// A central element of a simply connected group with its coordinates in the
/// abstract model of the center.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterElement {
    pub element: GroupElement,
    pub coords: Vec<u64>,
}

impl CenterElement {
    /// Central element of the simply connected group `cover` at `coords`.
    pub fn from_coords(cover: &GroupDescriptor, coords: &[u64]) -> Result<Self> {
        if !cover.is_simply_connected() {
            return Err(Error::Validation(format!("{cover} is not simply connected")));
        }
        let center = center_group(cover.family(), cover.n());
        if !center.contains(coords) {
            return Err(Error::Validation(format!("{coords:?} is not an element of the center {center}")));
        }
        Ok(CenterElement {
            element: GroupElement::from_parts_unchecked(cover.clone(), center_payload(cover, coords)),
            coords: coords.to_vec(),
        })
    }
}

/// Center of a simply connected group as an abstract group plus its elements,
/// listed in the group's element order.
pub fn enumerate_center(d: &GroupDescriptor) -> Result<(FiniteAbelianGroup, Vec<CenterElement>)> {
    if d.family() == Family::SO {
        return Err(Error::Unsupported("SO(n) is not simply connected; enumerate the center of Spin(n)".into()));
    }
    if !d.is_simply_connected() {
        return Err(Error::Unsupported(format!("{d} is a proper quotient; enumerate the center of its cover")));
    }
    let group = center_group(d.family(), d.n());
    let elems = group.elements().iter().map(|c| CenterElement::from_coords(d, c)).collect::<Result<Vec<_>>>()?;
    Ok((group, elems))
}

/// `K = ker(rho: G~ -> G)` as a subgroup of the center of `G~`.
#[derive(Debug, Clone)]
pub struct CoveringKernel {
    cover: GroupDescriptor,
    subgroup: Subgroup,
    elements: Vec<CenterElement>,
}

impl CoveringKernel {
    pub fn cover(&self) -> &GroupDescriptor {
        &self.cover
    }

    /// Abstract model of `K`.
    pub fn group(&self) -> &FiniteAbelianGroup {
        self.subgroup.group()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Kernel elements with center coordinates.
    pub fn elements(&self) -> &[CenterElement] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.subgroup.order()
    }

    pub fn to_kernel_coords(&self, center_coords: &[u64]) -> Option<Vec<u64>> {
        self.subgroup.to_abstract(center_coords)
    }

    pub fn element_at(&self, kernel_coords: &[u64]) -> Option<&CenterElement> {
        let amb = self.subgroup.to_ambient(kernel_coords)?;
        self.elements.iter().find(|e| e.coords == amb)
    }
}

/// The kernel of the universal covering map of `d`. Simply connected inputs
/// give the trivial kernel.
pub fn covering_kernel(d: &GroupDescriptor) -> Result<CoveringKernel> {
    let cover = d.cover();
    let subgroup = d.quotient().clone();
    let elements = subgroup
        .ambient_elements()
        .map(|c| CenterElement::from_coords(&cover, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoveringKernel { cover, subgroup, elements })
}
