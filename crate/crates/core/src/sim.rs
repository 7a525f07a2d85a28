//! Monte Carlo rate traces over an SNR grid.
//!
//! Every trial draws one channel realization and evaluates it at every SNR
//! point, so all points share the same draws. Per-trial results are reduced
//! in trial order with compensated summation; any executor that produces the
//! per-trial rows for trials `0..n` (see [`trial_rates`] and
//! [`reduce_trials`]) therefore yields a bit-identical trace.

use alloc::vec::Vec;

use crate::catalog::{BcConfig, IcConfig};
use crate::channel::{bc_links, ic_links, ChannelDraw, Link, LinkDims};
use crate::linalg::CMatrix;
use crate::rates::{
    check_ia, check_zf, ia_power_scaling_rates, isotropic_bc_draw_rate, p2p_rate, selection_rows,
    zf_ic_rates, IaParams, RateError,
};
use crate::stats::Summary;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("SNR grid must be a nonempty, strictly ascending list of finite values")]
    BadGrid,
    #[error("at least one trial is required")]
    NoTrials,
    #[error("time fraction {0} is outside [0, 1]")]
    BadTau(f64),
    #[error("power exponent {0} must be finite and nonnegative")]
    BadExponent(f64),
    #[error("isotropic broadcast model needs N1, N2 <= M, got {0}")]
    IsotropicShape(BcConfig),
    #[error("antenna counts must be at least 1")]
    ZeroAntennas,
    #[error("traces are on different SNR grids")]
    GridMismatch,
    #[error(transparent)]
    Rate(#[from] RateError),
}

/// SNR points in dB, strictly ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrGrid {
    points_db: Vec<f64>,
}

impl SnrGrid {
    pub fn new(points_db: Vec<f64>) -> Result<Self, SimError> {
        let ascending = points_db.windows(2).all(|w| w[0] < w[1]);
        if points_db.is_empty() || !ascending || points_db.iter().any(|p| !p.is_finite()) {
            return Err(SimError::BadGrid);
        }
        Ok(Self { points_db })
    }

    /// `start, start + step, ...` up to and including `stop`.
    pub fn range(start: f64, stop: f64, step: f64) -> Result<Self, SimError> {
        if !(start.is_finite() && stop.is_finite() && step > 0.0 && start <= stop) {
            return Err(SimError::BadGrid);
        }
        let count = libm::floor((stop - start) / step + 1e-9) as usize + 1;
        Self::new((0..count).map(|k| start + k as f64 * step).collect())
    }

    pub fn points_db(&self) -> &[f64] {
        &self.points_db
    }

    pub fn powers(&self) -> Vec<f64> {
        self.points_db.iter().map(|&db| db_to_linear(db)).collect()
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

/// `log2` of the linear power at `db`.
pub fn db_to_log2_power(db: f64) -> f64 {
    db / 10.0 * core::f64::consts::LOG2_10
}

/// Network whose users are served one at a time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Topology {
    /// Rayleigh broadcast channel; user `j` is served over `Hj`.
    Bc(BcConfig),
    /// Rayleigh interference channel; user `j` is served over `Hjj`.
    Ic(IcConfig),
    /// Broadcast channel `Hj Q` with fixed orthonormal-row `Hj` and i.i.d.
    /// mixing matrix `Q`.
    IsotropicBc(BcConfig),
}

impl Topology {
    fn links(&self) -> Vec<LinkDims> {
        match self {
            Topology::Bc(c) => bc_links(c),
            Topology::Ic(c) => ic_links(c),
            Topology::IsotropicBc(c) => {
                let m = c.tx() as usize;
                alloc::vec![LinkDims::new(Link::Q, m, m)]
            }
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        match self {
            Topology::IsotropicBc(c) if c.rx1() > c.tx() || c.rx2() > c.tx() => {
                Err(SimError::IsotropicShape(*c))
            }
            _ => Ok(()),
        }
    }

    /// Single-user rates of both users at powers `(P, P^exponent)`.
    fn solo_rates(&self, draw: &ChannelDraw, power: f64, exponent: f64) -> Result<(f64, f64), RateError> {
        let power2 = libm::pow(power, exponent);
        match self {
            Topology::Bc(_) => Ok((
                p2p_rate(draw.get(Link::H1), power)?,
                p2p_rate(draw.get(Link::H2), power2)?,
            )),
            Topology::Ic(_) => Ok((
                p2p_rate(draw.get(Link::H11), power)?,
                p2p_rate(draw.get(Link::H22), power2)?,
            )),
            Topology::IsotropicBc(c) => {
                let m = c.tx() as usize;
                let q = draw.get(Link::Q);
                Ok((
                    isotropic_bc_draw_rate(&selection_rows(c.rx1() as usize, m), q, power)?,
                    isotropic_bc_draw_rate(&selection_rows(c.rx2() as usize, m), q, power2)?,
                ))
            }
        }
    }
}

/// A transmission scheme to simulate.
#[derive(Debug, Clone, PartialEq)]
pub enum SchemeSpec {
    /// One `rx x tx` link; user 2's rate is zero.
    PointToPoint { rx: u32, tx: u32 },
    /// Each user's single-user rate with the other silent; user 2 transmits
    /// at `P^user2_power_exponent`.
    SoloLinks {
        topology: Topology,
        user2_power_exponent: f64,
    },
    /// User 1 alone for a fraction `tau` of the time, user 2 alone otherwise.
    TimeDivision {
        topology: Topology,
        tau: f64,
        user2_power_exponent: f64,
    },
    ReceiverZf {
        config: IcConfig,
        streams1: u32,
        streams2: u32,
    },
    IaPowerScaling { config: IcConfig, params: IaParams },
}

impl SchemeSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            SchemeSpec::PointToPoint { .. } => "point-to-point",
            SchemeSpec::SoloLinks { .. } => "solo-links",
            SchemeSpec::TimeDivision { .. } => "time-division",
            SchemeSpec::ReceiverZf { .. } => "receiver-zero-forcing",
            SchemeSpec::IaPowerScaling { .. } => "ia-power-scaling",
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let check_exponent = |e: f64| {
            if e.is_finite() && e >= 0.0 {
                Ok(())
            } else {
                Err(SimError::BadExponent(e))
            }
        };
        match self {
            SchemeSpec::PointToPoint { rx, tx } => {
                if *rx == 0 || *tx == 0 {
                    return Err(SimError::ZeroAntennas);
                }
                Ok(())
            }
            SchemeSpec::SoloLinks {
                topology,
                user2_power_exponent,
            } => {
                topology.validate()?;
                check_exponent(*user2_power_exponent)
            }
            SchemeSpec::TimeDivision {
                topology,
                tau,
                user2_power_exponent,
            } => {
                if !(0.0..=1.0).contains(tau) {
                    return Err(SimError::BadTau(*tau));
                }
                topology.validate()?;
                check_exponent(*user2_power_exponent)
            }
            SchemeSpec::ReceiverZf {
                config,
                streams1,
                streams2,
            } => Ok(check_zf(config, *streams1, *streams2)?),
            SchemeSpec::IaPowerScaling { config, params } => {
                check_exponent(params.exponent)?;
                Ok(check_ia(config, params)?)
            }
        }
    }

    pub fn links(&self) -> Vec<LinkDims> {
        match self {
            SchemeSpec::PointToPoint { rx, tx } => {
                alloc::vec![LinkDims::new(Link::H, *rx as usize, *tx as usize)]
            }
            SchemeSpec::SoloLinks { topology, .. } | SchemeSpec::TimeDivision { topology, .. } => {
                topology.links()
            }
            SchemeSpec::ReceiverZf { config, .. } | SchemeSpec::IaPowerScaling { config, .. } => {
                ic_links(config)
            }
        }
    }

    /// Per-draw rates of both users at total power `power` per transmitter.
    pub fn draw_rates(&self, draw: &ChannelDraw, power: f64) -> Result<(f64, f64), RateError> {
        match self {
            SchemeSpec::PointToPoint { .. } => Ok((p2p_rate(draw.get(Link::H), power)?, 0.0)),
            SchemeSpec::SoloLinks {
                topology,
                user2_power_exponent,
            } => topology.solo_rates(draw, power, *user2_power_exponent),
            SchemeSpec::TimeDivision {
                topology,
                tau,
                user2_power_exponent,
            } => {
                let (r1, r2) = topology.solo_rates(draw, power, *user2_power_exponent)?;
                Ok((tau * r1, (1.0 - tau) * r2))
            }
            SchemeSpec::ReceiverZf {
                config,
                streams1,
                streams2,
            } => zf_ic_rates(draw, config, *streams1, *streams2, power),
            SchemeSpec::IaPowerScaling { config, params } => {
                ia_power_scaling_rates(draw, config, params, power)
            }
        }
    }
}

/// Per-user average rates over an SNR grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTrace {
    pub snr_db: Vec<f64>,
    pub rate1: Vec<f64>,
    pub stderr1: Vec<f64>,
    pub rate2: Vec<f64>,
    pub stderr2: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
}

impl RateTrace {
    pub fn len(&self) -> usize {
        self.snr_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snr_db.is_empty()
    }

    /// Rates and standard errors of user 1 or 2.
    pub fn user(&self, user: usize) -> (&[f64], &[f64]) {
        match user {
            1 => (&self.rate1, &self.stderr1),
            2 => (&self.rate2, &self.stderr2),
            _ => panic!("user must be 1 or 2"),
        }
    }

    /// Lengths agree and every value is finite with nonnegative rates.
    pub fn is_consistent(&self) -> bool {
        let n = self.snr_db.len();
        [&self.rate1, &self.stderr1, &self.rate2, &self.stderr2]
            .iter()
            .all(|v| v.len() == n && v.iter().all(|x| x.is_finite() && *x >= 0.0))
    }
}

/// Rates of every SNR point for one trial.
pub fn trial_rates(
    spec: &SchemeSpec,
    links: &[LinkDims],
    powers: &[f64],
    seed: u64,
    trial: u64,
) -> Result<Vec<(f64, f64)>, RateError> {
    let draw = ChannelDraw::generate(links, seed, trial);
    powers.iter().map(|&p| spec.draw_rates(&draw, p)).collect()
}

/// Reduces per-trial rows (indexed by trial) into a trace.
pub fn reduce_trials(grid: &SnrGrid, per_trial: &[Vec<(f64, f64)>], seed: u64) -> RateTrace {
    let points = grid.points_db().len();
    let mut trace = RateTrace {
        snr_db: grid.points_db().to_vec(),
        rate1: Vec::with_capacity(points),
        stderr1: Vec::with_capacity(points),
        rate2: Vec::with_capacity(points),
        stderr2: Vec::with_capacity(points),
        trials: per_trial.len() as u64,
        seed,
    };
    let mut column = Vec::with_capacity(per_trial.len());
    for k in 0..points {
        column.clear();
        column.extend(per_trial.iter().map(|row| row[k].0));
        let s1 = Summary::from_samples(&column);
        column.clear();
        column.extend(per_trial.iter().map(|row| row[k].1));
        let s2 = Summary::from_samples(&column);
        trace.rate1.push(s1.mean);
        trace.stderr1.push(s1.stderr);
        trace.rate2.push(s2.mean);
        trace.stderr2.push(s2.stderr);
    }
    trace
}

/// Sequential Monte Carlo run. Time division is evaluated as the
/// combination of the two single-user traces.
pub fn simulate(spec: &SchemeSpec, grid: &SnrGrid, trials: u64, seed: u64) -> Result<RateTrace, SimError> {
    run_with(spec, grid, trials, seed, |solo, links, powers| {
        (0..trials)
            .map(|trial| trial_rates(solo, links, powers, seed, trial))
            .collect::<Result<Vec<_>, _>>()
    })
}

/// Shared driver: validates, expands time division into its single-user
/// run, and delegates the per-trial evaluation to `evaluate`, which must
/// return rows for trials `0..trials` in order.
pub fn run_with<F>(
    spec: &SchemeSpec,
    grid: &SnrGrid,
    trials: u64,
    seed: u64,
    evaluate: F,
) -> Result<RateTrace, SimError>
where
    F: FnOnce(&SchemeSpec, &[LinkDims], &[f64]) -> Result<Vec<Vec<(f64, f64)>>, RateError>,
{
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    spec.validate()?;
    let (base, tau) = match spec {
        SchemeSpec::TimeDivision {
            topology,
            tau,
            user2_power_exponent,
        } => (
            SchemeSpec::SoloLinks {
                topology: *topology,
                user2_power_exponent: *user2_power_exponent,
            },
            Some(*tau),
        ),
        other => (other.clone(), None),
    };
    let links = base.links();
    let powers = grid.powers();
    let rows = evaluate(&base, &links, &powers)?;
    let trace = reduce_trials(grid, &rows, seed);
    match tau {
        Some(tau) => tdm_rates(&trace, &trace, tau),
        None => Ok(trace),
    }
}

/// Time division between two single-user traces: user 1's column of
/// `user1_solo` scaled by `tau`, user 2's column of `user2_solo` scaled by
/// `1 - tau`.
pub fn tdm_rates(user1_solo: &RateTrace, user2_solo: &RateTrace, tau: f64) -> Result<RateTrace, SimError> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(SimError::BadTau(tau));
    }
    if user1_solo.snr_db != user2_solo.snr_db {
        return Err(SimError::GridMismatch);
    }
    let rest = 1.0 - tau;
    let scale = |v: &[f64], s: f64| v.iter().map(|x| x * s).collect::<Vec<_>>();
    Ok(RateTrace {
        snr_db: user1_solo.snr_db.clone(),
        rate1: scale(&user1_solo.rate1, tau),
        stderr1: scale(&user1_solo.stderr1, tau),
        rate2: scale(&user2_solo.rate2, rest),
        stderr2: scale(&user2_solo.stderr2, rest),
        trials: user1_solo.trials.min(user2_solo.trials),
        seed: user1_solo.seed,
    })
}

/// Fixed `rows x cols` matrix with orthonormal rows used by the isotropic
/// broadcast model.
pub fn isotropic_fixed_channel(rows: usize, cols: usize) -> CMatrix {
    selection_rows(rows, cols)
}
