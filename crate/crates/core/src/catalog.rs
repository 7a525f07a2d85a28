//! DoF regions for the 2-user MIMO broadcast and interference channels,
//! with and without transmitter channel knowledge.
//!
//! Interference-channel results are stated for `rx1 <= rx2`; configurations
//! with `rx1 > rx2` are relabeled before classification and the resulting
//! regions mirrored back, so callers always see regions in their own user
//! order.

use alloc::vec;
use core::fmt;

use crate::region::{DofPoint, DofRegion, Halfspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("antenna counts must be at least 1")]
    ZeroAntennas,
}

/// One transmitter with `tx` antennas serving receivers with `rx1`, `rx2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BcConfig {
    tx: u32,
    rx1: u32,
    rx2: u32,
}

impl BcConfig {
    pub fn new(tx: u32, rx1: u32, rx2: u32) -> Result<Self, ConfigError> {
        if tx == 0 || rx1 == 0 || rx2 == 0 {
            return Err(ConfigError::ZeroAntennas);
        }
        Ok(Self { tx, rx1, rx2 })
    }

    pub fn tx(&self) -> u32 {
        self.tx
    }

    pub fn rx1(&self) -> u32 {
        self.rx1
    }

    pub fn rx2(&self) -> u32 {
        self.rx2
    }
}

impl fmt::Display for BcConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BC(M={}, N1={}, N2={})", self.tx, self.rx1, self.rx2)
    }
}

/// Two transmitter/receiver pairs; transmitter `i` has `tx_i` antennas and
/// receiver `j` has `rx_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IcConfig {
    tx1: u32,
    tx2: u32,
    rx1: u32,
    rx2: u32,
}

impl IcConfig {
    pub fn new(tx1: u32, tx2: u32, rx1: u32, rx2: u32) -> Result<Self, ConfigError> {
        if tx1 == 0 || tx2 == 0 || rx1 == 0 || rx2 == 0 {
            return Err(ConfigError::ZeroAntennas);
        }
        Ok(Self { tx1, tx2, rx1, rx2 })
    }

    pub fn tx1(&self) -> u32 {
        self.tx1
    }

    pub fn tx2(&self) -> u32 {
        self.tx2
    }

    pub fn rx1(&self) -> u32 {
        self.rx1
    }

    pub fn rx2(&self) -> u32 {
        self.rx2
    }

    /// The same network with the two users relabeled.
    pub fn swapped(&self) -> Self {
        Self {
            tx1: self.tx2,
            tx2: self.tx1,
            rx1: self.rx2,
            rx2: self.rx1,
        }
    }

    /// Relabels so that `rx1 <= rx2`; the flag records whether a swap happened.
    pub fn normalized(&self) -> (Self, bool) {
        if self.rx1 > self.rx2 {
            (self.swapped(), true)
        } else {
            (*self, false)
        }
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.tx1, self.tx2, self.rx1, self.rx2]
    }
}

impl fmt::Display for IcConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "IC(M1={}, M2={}, N1={}, N2={})",
            self.tx1, self.tx2, self.rx1, self.rx2
        )
    }
}

/// Which receiver-antenna regime the classification falls under (after
/// relabeling so that `rx1 <= rx2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTable {
    /// `rx1 < rx2`
    UnequalReceivers,
    /// `rx1 == rx2`
    EqualReceivers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    I,
    II,
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeName {
    ReceiverZeroForcing,
    TimeDivision,
    Unknown,
}

impl SchemeName {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeName::ReceiverZeroForcing => "receiver-zero-forcing",
            SchemeName::TimeDivision => "time-division",
            SchemeName::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseLabel {
    pub table: CaseTable,
    pub case_id: CaseId,
    pub swapped: bool,
    pub region_known: bool,
    pub csit_equal: bool,
    pub scheme: SchemeName,
}

/// Classification result. All regions are expressed in the caller's user
/// order. When the no-CSIT region is known, `inner`, `outer` and `no_csit`
/// coincide.
#[derive(Debug, Clone)]
pub struct ClassifiedRegions {
    pub label: CaseLabel,
    pub no_csit: Option<DofRegion>,
    pub outer: DofRegion,
    pub inner: DofRegion,
    pub csit: DofRegion,
}

fn region(halfspaces: alloc::vec::Vec<Halfspace>, tag: &str) -> DofRegion {
    DofRegion::from_halfspaces(halfspaces)
        .expect("catalog regions are bounded with nonnegative bounds")
        .with_tag(tag)
}

/// No-CSIT broadcast region: `d1/min(M,N1) + d2/min(M,N2) <= 1`.
pub fn bc_region(c: &BcConfig) -> DofRegion {
    region(
        vec![Halfspace::weighted_sum(c.tx.min(c.rx1), c.tx.min(c.rx2))],
        "bc-no-csit",
    )
}

/// Perfect-CSIT broadcast region.
pub fn bc_csit_region(c: &BcConfig) -> DofRegion {
    region(
        vec![
            Halfspace::d1_at_most(c.tx.min(c.rx1)),
            Halfspace::d2_at_most(c.tx.min(c.rx2)),
            Halfspace::sum_at_most(c.tx.min(c.rx1 + c.rx2)),
        ],
        "bc-csit",
    )
}

/// Perfect-CSIT interference-channel region.
pub fn ic_csit_region(c: &IcConfig) -> DofRegion {
    let sum = (c.tx1 + c.tx2)
        .min(c.rx1 + c.rx2)
        .min(c.tx1.max(c.rx2))
        .min(c.tx2.max(c.rx1));
    region(
        vec![
            Halfspace::d1_at_most(c.tx1.min(c.rx1)),
            Halfspace::d2_at_most(c.tx2.min(c.rx2)),
            Halfspace::sum_at_most(sum),
        ],
        "ic-csit",
    )
}

/// Outer bound on the no-CSIT interference region. Where the weighted-sum
/// bound does not apply (the interfering transmitter has no more antennas
/// than the smaller receiver) the exact zero-forcing region is returned.
pub fn ic_outer_bound(c: &IcConfig) -> DofRegion {
    let (n, swapped) = c.normalized();
    let bound = if n.rx1 < n.tx2 {
        region(
            vec![
                Halfspace::weighted_sum(n.rx1, n.tx2.min(n.rx2)),
                Halfspace::d1_at_most(n.tx1.min(n.rx1)),
                Halfspace::d2_at_most(n.tx2.min(n.rx2)),
            ],
            "ic-outer-bound",
        )
    } else {
        zero_forcing_region(&n, "ic-outer-bound")
    };
    mirror_if(bound, swapped)
}

/// `d1 <= min(M1,N1), d2 <= M2, d1 + d2 <= N1`, exact whenever the smaller
/// receiver can null every interfering stream.
fn zero_forcing_region(n: &IcConfig, tag: &str) -> DofRegion {
    region(
        vec![
            Halfspace::d1_at_most(n.tx1.min(n.rx1)),
            Halfspace::d2_at_most(n.tx2.min(n.rx2)),
            Halfspace::sum_at_most(n.rx1),
        ],
        tag,
    )
}

fn mirror_if(r: DofRegion, swapped: bool) -> DofRegion {
    if swapped {
        r.mirrored()
    } else {
        r
    }
}

/// Which case conditions hold for a normalized configuration. Exactly one
/// entry should be true; [`case_partition_check`] verifies this.
fn case_conditions(n: &IcConfig) -> (CaseTable, [(CaseId, bool); 3]) {
    if n.rx1 < n.rx2 {
        (
            CaseTable::UnequalReceivers,
            [
                (CaseId::I, n.tx2 <= n.rx1),
                (CaseId::II, n.rx1 < n.tx2 && n.rx1 <= n.tx1),
                (CaseId::III, n.rx1 < n.tx2 && n.tx1 < n.rx1),
            ],
        )
    } else {
        (
            CaseTable::EqualReceivers,
            [
                (CaseId::I, n.tx2 <= n.rx1 || n.tx1 <= n.rx1),
                (CaseId::II, n.rx1 < n.tx1 && n.rx1 < n.tx2),
                (CaseId::III, false),
            ],
        )
    }
}

pub fn ic_classify(c: &IcConfig) -> ClassifiedRegions {
    let (n, swapped) = c.normalized();
    let (table, conditions) = case_conditions(&n);
    let case_id = conditions
        .iter()
        .find(|(_, holds)| *holds)
        .map(|(id, _)| *id)
        .expect("case conditions cover every configuration");

    let table_name = match table {
        CaseTable::UnequalReceivers => "ic-unequal",
        CaseTable::EqualReceivers => "ic-equal",
    };
    let csit = ic_csit_region(c);

    let (no_csit, outer, inner, scheme) = match (table, case_id) {
        (CaseTable::UnequalReceivers, CaseId::III) => {
            let outer = ic_outer_bound(&n).with_tag(alloc::format!("{table_name}-case3-outer"));
            // time-division endpoints plus the zero-forcing corner (M1, N1 - M1)
            let inner = DofRegion::hull_of(&[
                DofPoint::from_ints(n.tx1, 0),
                DofPoint::from_ints(n.tx1, n.rx1 - n.tx1),
                DofPoint::from_ints(0, n.tx2.min(n.rx2)),
            ])
            .expect("hull of quadrant points is a valid region")
            .with_tag(alloc::format!("{table_name}-case3-inner"));
            (
                None,
                mirror_if(outer, swapped),
                mirror_if(inner, swapped),
                SchemeName::Unknown,
            )
        }
        (_, CaseId::I) => {
            let exact = zero_forcing_region(&n, &alloc::format!("{table_name}-case1"));
            let exact = mirror_if(exact, swapped);
            (
                Some(exact.clone()),
                exact.clone(),
                exact,
                SchemeName::ReceiverZeroForcing,
            )
        }
        (CaseTable::UnequalReceivers, _) => {
            let exact = region(
                vec![Halfspace::weighted_sum(n.rx1, n.tx2.min(n.rx2))],
                &alloc::format!("{table_name}-case2"),
            );
            let exact = mirror_if(exact, swapped);
            (Some(exact.clone()), exact.clone(), exact, SchemeName::TimeDivision)
        }
        (CaseTable::EqualReceivers, _) => {
            let exact = region(
                vec![Halfspace::sum_at_most(n.rx1)],
                &alloc::format!("{table_name}-case2"),
            );
            let exact = mirror_if(exact, swapped);
            (Some(exact.clone()), exact.clone(), exact, SchemeName::TimeDivision)
        }
    };

    let csit_equal = no_csit.as_ref().is_some_and(|r| r.equals(&csit));
    ClassifiedRegions {
        label: CaseLabel {
            table,
            case_id,
            swapped,
            region_known: no_csit.is_some(),
            csit_equal,
            scheme,
        },
        no_csit,
        outer,
        inner,
        csit,
    }
}

/// Exhaustively classifies every configuration in `[1, range]^4` and checks
/// that exactly one case applies and that the region invariants hold.
/// Returns the first offending configuration.
pub fn case_partition_check(range: u32) -> Result<(), IcConfig> {
    for tx1 in 1..=range {
        for tx2 in 1..=range {
            for rx1 in 1..=range {
                for rx2 in 1..=range {
                    let c = IcConfig { tx1, tx2, rx1, rx2 };
                    if !partition_holds(&c) {
                        return Err(c);
                    }
                }
            }
        }
    }
    Ok(())
}

fn partition_holds(c: &IcConfig) -> bool {
    let (n, _) = c.normalized();
    let (table, conditions) = case_conditions(&n);
    if conditions.iter().filter(|(_, holds)| *holds).count() != 1 {
        return false;
    }
    let r = ic_classify(c);
    let label = &r.label;
    let unknown_case = table == CaseTable::UnequalReceivers && label.case_id == CaseId::III;

    let known_consistent = match &r.no_csit {
        Some(exact) => exact.equals(&r.inner) && exact.equals(&r.outer),
        None => true,
    };
    let equal_collapse = table != CaseTable::EqualReceivers || r.inner.equals(&r.outer);

    label.region_known == !unknown_case
        && label.region_known == r.no_csit.is_some()
        && (!label.csit_equal || label.region_known)
        && known_consistent
        && equal_collapse
        && r.inner.is_subset(&r.outer)
        && r.outer.is_subset(&r.csit)
}
