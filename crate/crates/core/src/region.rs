//! Exact two-dimensional polytopes in the nonnegative quadrant.
//!
//! A [`DofRegion`] is the set `{ d >= 0 : a1*d1 + a2*d2 <= b for every halfspace }`.
//! All arithmetic is carried out over arbitrary-precision rationals, so vertex
//! sets, subset tests and facet slopes are exact.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational scalar used for all region math.
pub type Rational = num_rational::BigRational;

/// Builds the rational `numer / denom`.
///
/// Panics if `denom` is zero.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds the integer rational `value`.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegionError {
    #[error("halfspace has a zero normal vector")]
    ZeroNormal,
    #[error("a region needs at least one halfspace")]
    NoHalfspaces,
    #[error("halfspace bound is negative, the origin would be cut off")]
    InfeasibleBound,
    #[error("intersection with the nonnegative quadrant is unbounded")]
    UnboundedRegion,
    #[error("point has a negative coordinate")]
    NegativePoint,
}

/// The closed halfspace `a1*d1 + a2*d2 <= b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    a1: Rational,
    a2: Rational,
    b: Rational,
}

impl Halfspace {
    pub fn new(a1: Rational, a2: Rational, b: Rational) -> Result<Self, RegionError> {
        if a1.is_zero() && a2.is_zero() {
            return Err(RegionError::ZeroNormal);
        }
        Ok(Self { a1, a2, b })
    }

    /// `d1 / w1 + d2 / w2 <= 1`, the weighted-sum form every no-CSIT bound takes.
    pub fn weighted_sum(w1: u32, w2: u32) -> Self {
        assert!(w1 > 0 && w2 > 0, "weights must be positive");
        Self {
            a1: ratio(1, w1.into()),
            a2: ratio(1, w2.into()),
            b: int(1),
        }
    }

    /// `d1 <= bound`.
    pub fn d1_at_most(bound: u32) -> Self {
        Self {
            a1: int(1),
            a2: int(0),
            b: int(bound.into()),
        }
    }

    /// `d2 <= bound`.
    pub fn d2_at_most(bound: u32) -> Self {
        Self {
            a1: int(0),
            a2: int(1),
            b: int(bound.into()),
        }
    }

    /// `d1 + d2 <= bound`.
    pub fn sum_at_most(bound: u32) -> Self {
        Self {
            a1: int(1),
            a2: int(1),
            b: int(bound.into()),
        }
    }

    pub fn a1(&self) -> &Rational {
        &self.a1
    }

    pub fn a2(&self) -> &Rational {
        &self.a2
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// `a . p - b`; nonpositive iff `p` satisfies the halfspace.
    pub fn slack(&self, p: &DofPoint) -> Rational {
        &self.a1 * &p.d1 + &self.a2 * &p.d2 - &self.b
    }

    pub fn satisfied_by(&self, p: &DofPoint) -> bool {
        !self.slack(p).is_positive()
    }

    pub fn is_active_at(&self, p: &DofPoint) -> bool {
        self.slack(p).is_zero()
    }

    /// Same halfspace with the two coordinates exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            a1: self.a2.clone(),
            a2: self.a1.clone(),
            b: self.b.clone(),
        }
    }

    fn axis(first: bool) -> Self {
        let (a1, a2) = if first { (int(-1), int(0)) } else { (int(0), int(-1)) };
        Self { a1, a2, b: int(0) }
    }

    fn l1_norm(&self) -> Rational {
        self.a1.abs() + self.a2.abs()
    }

    /// Normal-direction half: 0 for angles in [0, pi), 1 for [pi, 2pi).
    fn half(&self) -> u8 {
        if self.a2.is_positive() || (self.a2.is_zero() && self.a1.is_positive()) {
            0
        } else {
            1
        }
    }

    /// Orders by the angle of the outward normal, then by normalized offset.
    fn angular_cmp(&self, other: &Self) -> Ordering {
        self.half()
            .cmp(&other.half())
            .then_with(|| {
                let cross = &self.a1 * &other.a2 - &self.a2 * &other.a1;
                // positive cross product means `other` is counterclockwise of `self`
                Rational::zero().cmp(&cross)
            })
            .then_with(|| (&self.b / self.l1_norm()).cmp(&(&other.b / other.l1_norm())))
            .then_with(|| self.a1.cmp(&other.a1))
            .then_with(|| self.a2.cmp(&other.a2))
            .then_with(|| self.b.cmp(&other.b))
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*d1 + ({})*d2 <= {}", self.a1, self.a2, self.b)
    }
}

/// A point `(d1, d2)` of the nonnegative quadrant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DofPoint {
    d1: Rational,
    d2: Rational,
}

impl DofPoint {
    pub fn new(d1: Rational, d2: Rational) -> Result<Self, RegionError> {
        if d1.is_negative() || d2.is_negative() {
            return Err(RegionError::NegativePoint);
        }
        Ok(Self { d1, d2 })
    }

    pub fn from_ints(d1: u32, d2: u32) -> Self {
        Self {
            d1: int(d1.into()),
            d2: int(d2.into()),
        }
    }

    pub fn origin() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn d1(&self) -> &Rational {
        &self.d1
    }

    pub fn d2(&self) -> &Rational {
        &self.d2
    }

    pub fn mirrored(&self) -> Self {
        Self {
            d1: self.d2.clone(),
            d2: self.d1.clone(),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.d1.to_f64().unwrap_or(f64::NAN),
            self.d2.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for DofPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

/// Bounded convex polytope `{ d >= 0 : every halfspace holds }`.
///
/// Halfspaces are kept irredundant and in angular order of their outward
/// normals; vertices are sorted lexicographically. `==` compares this
/// canonical form (the provenance tag is ignored); use [`DofRegion::equals`]
/// for geometric equality of differently scaled descriptions.
#[derive(Debug, Clone)]
pub struct DofRegion {
    halfspaces: Vec<Halfspace>,
    vertices: Vec<DofPoint>,
    tag: Option<String>,
}

impl PartialEq for DofRegion {
    fn eq(&self, other: &Self) -> bool {
        self.halfspaces == other.halfspaces && self.vertices == other.vertices
    }
}

impl Eq for DofRegion {}

impl DofRegion {
    /// Intersects `halfspaces` with the nonnegative quadrant.
    pub fn from_halfspaces(halfspaces: Vec<Halfspace>) -> Result<Self, RegionError> {
        if halfspaces.is_empty() {
            return Err(RegionError::NoHalfspaces);
        }
        if halfspaces.iter().any(|h| h.b.is_negative()) {
            return Err(RegionError::InfeasibleBound);
        }
        if !is_bounded(&halfspaces) {
            return Err(RegionError::UnboundedRegion);
        }
        let vertices = enumerate_vertices(&halfspaces);

        let mut kept = halfspaces;
        kept.sort_by(Halfspace::angular_cmp);
        let mut i = 0;
        while i < kept.len() {
            let mut trial = kept.clone();
            trial.remove(i);
            if !trial.is_empty() && is_bounded(&trial) && enumerate_vertices(&trial) == vertices {
                kept = trial;
            } else {
                i += 1;
            }
        }

        Ok(Self {
            halfspaces: kept,
            vertices,
            tag: None,
        })
    }

    /// Convex hull of `points` together with the origin.
    pub fn hull_of(points: &[DofPoint]) -> Result<Self, RegionError> {
        let mut pts: Vec<DofPoint> = points.to_vec();
        pts.push(DofPoint::origin());
        pts.sort();
        pts.dedup();

        let hull = convex_hull(&pts);
        let mut halfspaces = Vec::new();
        match hull.len() {
            1 => {
                halfspaces.push(Halfspace::d1_at_most(0));
                halfspaces.push(Halfspace::d2_at_most(0));
            }
            2 => {
                let (p, q) = (&hull[0], &hull[1]);
                let dx = &q.d1 - &p.d1;
                let dy = &q.d2 - &p.d2;
                // both sides of the supporting line, plus caps at the endpoints
                halfspaces.push(supporting(dy.clone(), -dx.clone(), p));
                halfspaces.push(supporting(-dy, dx.clone(), p));
                halfspaces.push(supporting(dx.clone(), &q.d2 - &p.d2, q));
                halfspaces.push(supporting(-dx, &p.d2 - &q.d2, p));
            }
            n => {
                for k in 0..n {
                    let p = &hull[k];
                    let q = &hull[(k + 1) % n];
                    // counterclockwise walk: the interior lies to the left
                    halfspaces.push(supporting(&q.d2 - &p.d2, &p.d1 - &q.d1, p));
                }
            }
        }
        Self::from_halfspaces(halfspaces)
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[DofPoint] {
        &self.vertices
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn contains(&self, p: &DofPoint) -> bool {
        !p.d1.is_negative()
            && !p.d2.is_negative()
            && self.halfspaces.iter().all(|h| h.satisfied_by(p))
    }

    /// `self ⊆ other`; by convexity it suffices to test the vertices of `self`.
    pub fn is_subset(&self, other: &DofRegion) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }

    /// Geometric equality (mutual inclusion).
    pub fn equals(&self, other: &DofRegion) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    /// `d(d2)/d(d1)` of the single non-axis facet, if there is exactly one
    /// and it is not vertical.
    pub fn boundary_slope(&self) -> Option<Rational> {
        match self.halfspaces.as_slice() {
            [h] if !h.a2.is_zero() => Some(-(&h.a1 / &h.a2)),
            _ => None,
        }
    }

    /// Region with `d1` and `d2` exchanged.
    pub fn mirrored(&self) -> Self {
        let halfspaces = self.halfspaces.iter().map(Halfspace::mirrored).collect();
        let mut region =
            Self::from_halfspaces(halfspaces).expect("mirror of a valid region is valid");
        region.tag = self.tag.clone();
        region
    }

    /// Largest `d1 + d2` over the region.
    pub fn max_sum(&self) -> Rational {
        self.vertices
            .iter()
            .map(|v| &v.d1 + &v.d2)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

fn supporting(a1: Rational, a2: Rational, through: &DofPoint) -> Halfspace {
    let b = &a1 * &through.d1 + &a2 * &through.d2;
    Halfspace { a1, a2, b }
}

fn with_axes(halfspaces: &[Halfspace]) -> Vec<Halfspace> {
    let mut all = Vec::with_capacity(halfspaces.len() + 2);
    all.push(Halfspace::axis(true));
    all.push(Halfspace::axis(false));
    all.extend_from_slice(halfspaces);
    all
}

/// The recession cone of a 2-D polyhedron is generated by rays lying on
/// constraint lines or the axes, so checking those candidates is enough.
fn is_bounded(halfspaces: &[Halfspace]) -> bool {
    let mut candidates = alloc::vec![(int(1), int(0)), (int(0), int(1))];
    for h in halfspaces {
        candidates.push((h.a2.clone(), -h.a1.clone()));
        candidates.push((-h.a2.clone(), h.a1.clone()));
    }
    !candidates.iter().any(|(x, y)| {
        !x.is_negative()
            && !y.is_negative()
            && !(x.is_zero() && y.is_zero())
            && halfspaces
                .iter()
                .all(|h| !(&h.a1 * x + &h.a2 * y).is_positive())
    })
}

fn enumerate_vertices(halfspaces: &[Halfspace]) -> Vec<DofPoint> {
    let lines = with_axes(halfspaces);
    let mut vertices = Vec::new();
    for (i, p) in lines.iter().enumerate() {
        for q in &lines[i + 1..] {
            let det = &p.a1 * &q.a2 - &p.a2 * &q.a1;
            if det.is_zero() {
                continue;
            }
            let d1 = (&p.b * &q.a2 - &q.b * &p.a2) / &det;
            let d2 = (&p.a1 * &q.b - &q.a1 * &p.b) / &det;
            let point = DofPoint { d1, d2 };
            if !point.d1.is_negative()
                && !point.d2.is_negative()
                && halfspaces.iter().all(|h| h.satisfied_by(&point))
            {
                vertices.push(point);
            }
        }
    }
    vertices.sort();
    vertices.dedup();
    vertices
}

fn cross(o: &DofPoint, a: &DofPoint, b: &DofPoint) -> Rational {
    (&a.d1 - &o.d1) * (&b.d2 - &o.d2) - (&a.d2 - &o.d2) * (&b.d1 - &o.d1)
}

/// Andrew's monotone chain on sorted, deduplicated points; counterclockwise,
/// collinear points dropped.
fn convex_hull(sorted: &[DofPoint]) -> Vec<DofPoint> {
    if sorted.len() < 3 {
        return sorted.to_vec();
    }
    let mut lower: Vec<DofPoint> = Vec::new();
    for p in sorted {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<DofPoint> = Vec::new();
    for p in sorted.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
