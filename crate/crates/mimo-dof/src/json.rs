//! JSON documents emitted by the CLI.
//!
//! Rationals are written as `"p/q"` strings (always with an explicit
//! denominator) so that regions survive a parse/serialize cycle byte for
//! byte.

use std::str::FromStr;

use mimo_dof_core::catalog::{CaseId, CaseTable, ClassifiedRegions};
use mimo_dof_core::region::{DofPoint, DofRegion, Halfspace, Rational, RegionError};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid rational {0:?}")]
    BadRational(String),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error("stored vertices do not match the halfspaces")]
    VertexMismatch,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, FormatError> {
    let bad = || FormatError::BadRational(s.to_string());
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer = BigInt::from_str(numer.trim()).map_err(|_| bad())?;
    let denom = BigInt::from_str(denom.trim()).map_err(|_| bad())?;
    if denom == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceJson {
    pub a1: String,
    pub a2: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionJson {
    pub halfspaces: Vec<HalfspaceJson>,
    pub vertices: Vec<[String; 2]>,
    pub tag: String,
}

impl RegionJson {
    pub fn from_region(r: &DofRegion) -> Self {
        Self {
            halfspaces: r
                .halfspaces()
                .iter()
                .map(|h| HalfspaceJson {
                    a1: format_rational(h.a1()),
                    a2: format_rational(h.a2()),
                    b: format_rational(h.b()),
                })
                .collect(),
            vertices: r.vertices().iter().map(point_json).collect(),
            tag: r.tag().unwrap_or_default().to_string(),
        }
    }

    /// Rebuilds the region from its halfspaces and checks the stored vertices.
    pub fn to_region(&self) -> Result<DofRegion, FormatError> {
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| {
                Ok(Halfspace::new(
                    parse_rational(&h.a1)?,
                    parse_rational(&h.a2)?,
                    parse_rational(&h.b)?,
                )?)
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        let mut region = DofRegion::from_halfspaces(halfspaces)?;
        let stored = self
            .vertices
            .iter()
            .map(|[a, b]| Ok(DofPoint::new(parse_rational(a)?, parse_rational(b)?)?))
            .collect::<Result<Vec<_>, FormatError>>()?;
        if stored != region.vertices() {
            return Err(FormatError::VertexMismatch);
        }
        if !self.tag.is_empty() {
            region = region.with_tag(self.tag.clone());
        }
        Ok(region)
    }
}

pub fn point_json(p: &DofPoint) -> [String; 2] {
    [format_rational(p.d1()), format_rational(p.d2())]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub channel: String,
    pub antennas: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelJson {
    pub table: String,
    pub case: String,
    pub swapped: bool,
    pub region_known: bool,
    pub csit_equal: bool,
    pub scheme: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub config: ConfigJson,
    pub label: LabelJson,
    pub no_csit: Option<RegionJson>,
    pub outer: RegionJson,
    pub inner: RegionJson,
    pub csit: RegionJson,
}

impl ClassificationJson {
    pub fn new(config: ConfigJson, r: &ClassifiedRegions) -> Self {
        let l = &r.label;
        Self {
            config,
            label: LabelJson {
                table: match l.table {
                    CaseTable::UnequalReceivers => "unequal-receivers",
                    CaseTable::EqualReceivers => "equal-receivers",
                }
                .to_string(),
                case: match l.case_id {
                    CaseId::I => "I",
                    CaseId::II => "II",
                    CaseId::III => "III",
                }
                .to_string(),
                swapped: l.swapped,
                region_known: l.region_known,
                csit_equal: l.csit_equal,
                scheme: l.scheme.as_str().to_string(),
            },
            no_csit: r.no_csit.as_ref().map(RegionJson::from_region),
            outer: RegionJson::from_region(&r.outer),
            inner: RegionJson::from_region(&r.inner),
            csit: RegionJson::from_region(&r.csit),
        }
    }
}

/// Output of the `region` command: one region, or inner/outer/CSIT bounds
/// when the no-CSIT region is not known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionOutput {
    Bounds {
        inner: RegionJson,
        outer: RegionJson,
        csit: RegionJson,
    },
    Single(RegionJson),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoCsitJson {
    pub exact: Option<RegionJson>,
    pub inner: RegionJson,
    pub outer: RegionJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonJson {
    pub config: ConfigJson,
    pub csit_region: RegionJson,
    pub no_csit_or_bounds: NoCsitJson,
    /// The no-CSIT region (or its outer bound) lies inside the CSIT region.
    pub subset: bool,
    /// Inclusion is strict.
    pub strict: bool,
    /// CSIT vertices outside the no-CSIT region (or its outer bound).
    pub vertices_lost: Vec<[String; 2]>,
}

impl ComparisonJson {
    pub fn new(config: ConfigJson, exact: Option<&DofRegion>, inner: &DofRegion, outer: &DofRegion, csit: &DofRegion) -> Self {
        let subset = outer.is_subset(csit);
        Self {
            config,
            csit_region: RegionJson::from_region(csit),
            no_csit_or_bounds: NoCsitJson {
                exact: exact.map(RegionJson::from_region),
                inner: RegionJson::from_region(inner),
                outer: RegionJson::from_region(outer),
            },
            subset,
            strict: subset && !outer.equals(csit),
            vertices_lost: csit
                .vertices()
                .iter()
                .filter(|v| !outer.contains(v))
                .map(point_json)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub config: ConfigJson,
    pub scheme: serde_json::Value,
    pub estimate: [f64; 2],
    pub ci: [f64; 2],
    pub region_tag: String,
    pub verdict: String,
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON documents serialize");
    s.push('\n');
    s
}
