//! JSON forms of groups, elements and representations.
//!
//! Complex matrices are arrays of rows of `[re, im]` pairs, real matrices are
//! arrays of rows of numbers, Clifford elements are maps from blade keys
//! (`"1"`, `"12"`, `"134"`, `""` for the scalar) to coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Family, GroupDescriptor, GroupElement, Payload, RealMatrix};
use crate::numerics::{CliffordElement, ComplexMatrix};
use crate::surfaces::{Representation, SurfacePresentation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuotientSpec {
    /// `"trivial"` or `"center"`.
    Named(String),
    /// Generators as center coordinates.
    Generators(Vec<Vec<u64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: String,
    pub n: usize,
    #[serde(default = "trivial_quotient")]
    pub quotient: QuotientSpec,
}

fn trivial_quotient() -> QuotientSpec {
    QuotientSpec::Named("trivial".into())
}

impl GroupSpec {
    pub fn to_descriptor(&self) -> Result<GroupDescriptor> {
        let family = Family::parse(&self.family)?;
        match &self.quotient {
            QuotientSpec::Named(s) if s == "trivial" => GroupDescriptor::new(family, self.n, &[]),
            QuotientSpec::Named(s) if s == "center" => GroupDescriptor::adjoint_form(family, self.n),
            QuotientSpec::Named(s) => Err(Error::Parse(format!("quotient must be \"trivial\", \"center\" or a generator list, got {s:?}"))),
            QuotientSpec::Generators(gens) => GroupDescriptor::new(family, self.n, gens),
        }
    }

    pub fn from_descriptor(d: &GroupDescriptor) -> Self {
        let quotient = if d.family() == Family::SO || d.is_simply_connected() {
            trivial_quotient()
        } else if d.quotient().order() == crate::groups::center_group(d.family(), d.n()).order() {
            QuotientSpec::Named("center".into())
        } else {
            QuotientSpec::Generators(d.quotient().generators().to_vec())
        };
        GroupSpec { family: d.family().name().into(), n: d.n(), quotient }
    }
}

/// Parses `SU:3`, `SO:3`, `Spin:5`, `Sp:2`, `PSU:4` or `SU:4/center`.
pub fn parse_group(s: &str) -> Result<GroupDescriptor> {
    let (head, quotient) = match s.split_once('/') {
        Some((h, q)) => (h, Some(q)),
        None => (s, None),
    };
    let (fam, n) = head.split_once(':').ok_or_else(|| Error::Parse(format!("group '{s}': expected FAMILY:n")))?;
    let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("group '{s}': bad rank")))?;
    let (fam, center) = match fam.trim() {
        f if f.eq_ignore_ascii_case("psu") => ("SU", true),
        f => (f, false),
    };
    let quotient = match (quotient, center) {
        (None, false) => trivial_quotient(),
        (None, true) | (Some("center"), _) => QuotientSpec::Named("center".into()),
        (Some(q), _) => return Err(Error::Parse(format!("group '{s}': unknown quotient '{q}'"))),
    };
    GroupSpec { family: fam.into(), n, quotient }.to_descriptor().map_err(|e| match e {
        Error::Parse(m) => Error::Parse(m),
        other => Error::Parse(other.to_string()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EncodedElement {
    Complex(Vec<Vec<[f64; 2]>>),
    Real(Vec<Vec<f64>>),
    Clifford(BTreeMap<String, f64>),
}

pub fn encode_element(g: &GroupElement) -> EncodedElement {
    match g.payload() {
        Payload::Unitary(m) => EncodedElement::Complex(
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect(),
        ),
        Payload::Orthogonal(m) => {
            EncodedElement::Real((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect())
        }
        Payload::Spin(x) => EncodedElement::Clifford(x.to_blade_map()),
    }
}

fn square_rows<T: Copy>(rows: &[Vec<T>]) -> Result<usize> {
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Dimension { expected: n, actual: r.len() });
    }
    Ok(n)
}

/// Payload described by `e` for an element of `d`, without membership checks.
pub fn decode_payload(d: &GroupDescriptor, e: &EncodedElement) -> Result<Payload> {
    match (d.family(), e) {
        (Family::SU | Family::Sp, EncodedElement::Complex(rows)) => {
            let n = square_rows(rows)?;
            Ok(Payload::Unitary(ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]))))
        }
        // real entries are accepted for complex groups
        (Family::SU | Family::Sp, EncodedElement::Real(rows)) => {
            let n = square_rows(rows)?;
            Ok(Payload::Unitary(ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0))))
        }
        (Family::SO, EncodedElement::Real(rows)) => {
            let n = square_rows(rows)?;
            Ok(Payload::Orthogonal(RealMatrix::from_fn(n, n, |i, j| rows[i][j])))
        }
        (Family::Spin, EncodedElement::Clifford(map)) => Ok(Payload::Spin(CliffordElement::from_blade_map(d.n(), map)?)),
        // an empty matrix and an empty map look alike
        (Family::Spin, EncodedElement::Real(rows)) if rows.is_empty() => {
            Ok(Payload::Spin(CliffordElement::zero(d.n())?))
        }
        _ => Err(Error::Parse(format!("element encoding does not match the payload kind of {d}"))),
    }
}

pub fn decode_element(d: &GroupDescriptor, e: &EncodedElement) -> Result<GroupElement> {
    GroupElement::new(d.clone(), decode_payload(d, e)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub orientable: bool,
    pub genus_or_crosscaps: usize,
}

impl SurfaceSpec {
    pub fn to_presentation(&self) -> Result<SurfacePresentation> {
        if self.orientable {
            Ok(SurfacePresentation::orientable(self.genus_or_crosscaps))
        } else {
            SurfacePresentation::nonorientable(self.genus_or_crosscaps)
        }
    }

    pub fn from_presentation(p: &SurfacePresentation) -> Self {
        SurfaceSpec {
            orientable: matches!(p, SurfacePresentation::Orientable { .. }),
            genus_or_crosscaps: p.index(),
        }
    }
}

/// A representation on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationFile {
    pub group: GroupSpec,
    pub surface: SurfaceSpec,
    pub generators: Vec<EncodedElement>,
}

impl RepresentationFile {
    pub fn from_representation(rep: &Representation) -> Self {
        RepresentationFile {
            group: GroupSpec::from_descriptor(rep.descriptor()),
            surface: SurfaceSpec::from_presentation(rep.presentation()),
            generators: rep.images().iter().map(encode_element).collect(),
        }
    }

    /// Decodes the file. With `validate`, the relation must hold within
    /// `tol`; otherwise the residual is only recorded.
    pub fn to_representation(&self, validate: bool, tol: f64) -> Result<Representation> {
        let d = self.group.to_descriptor()?;
        let p = self.surface.to_presentation()?;
        let images = self.generators.iter().map(|e| decode_element(&d, e)).collect::<Result<Vec<_>>>()?;
        if validate {
            Representation::with_tolerance(p, d, images, tol)
        } else {
            Representation::unchecked(p, d, images)
        }
    }
}
