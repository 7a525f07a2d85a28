//! Degrees-of-freedom regions of 2-user MIMO broadcast and interference
//! channels without transmitter channel knowledge, and the Monte Carlo rate
//! models used to check them numerically.
//!
//! - [`region`]: exact rational polytopes in the nonnegative quadrant.
//! - [`catalog`]: region constructors and the interference-channel case
//!   classifier.
//! - [`channel`], [`rates`], [`sim`]: seeded Rayleigh draws, per-draw
//!   achievable rates and averaged rate traces.
//! - [`slope`]: DoF estimates from traces and verdicts against regions.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;

pub mod catalog;
pub mod channel;
pub mod linalg;
pub mod rates;
pub mod region;
pub mod sim;
pub mod slope;
pub mod stats;

pub use catalog::{
    bc_csit_region, bc_region, case_partition_check, ic_classify, ic_csit_region, ic_outer_bound,
    BcConfig, CaseId, CaseLabel, CaseTable, ClassifiedRegions, ConfigError, IcConfig, SchemeName,
};
pub use region::{DofPoint, DofRegion, Halfspace, Rational, RegionError};
pub use sim::{simulate, tdm_rates, RateTrace, SchemeSpec, SimError, SnrGrid, Topology};
pub use slope::{fit_slope, verify_point, FitError, SlopeEstimate, Verdict};
