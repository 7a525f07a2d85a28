//! Per-draw achievable rates (bits per channel use) with perfect CSIR and
//! isotropic Gaussian inputs. Averaging over draws happens in [`crate::sim`].

use crate::catalog::IcConfig;
use crate::channel::{ChannelDraw, Link};
use crate::linalg::{complement_projector, has_orthonormal_rows, CMatrix, LinalgError};
use crate::stats::Summary;

/// Row-Gram tolerance for the fixed matrix of the isotropic broadcast model.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum RateError {
    #[error("zero forcing infeasible: receiver {receiver} has {antennas} antennas but needs {needed}")]
    InfeasibleZf {
        receiver: u8,
        antennas: u32,
        needed: u32,
    },
    #[error("transmitter {transmitter} has {antennas} antennas, cannot send {streams} streams")]
    TooManyStreams {
        transmitter: u8,
        antennas: u32,
        streams: u32,
    },
    #[error("interference alignment needs M1 = N1 = 1 and M2 <= N2 - 1, got {0:?}")]
    IaShape([u32; 4]),
    #[error("beam count {beams} exceeds the {antennas} antennas of transmitter 2")]
    TooManyBeams { beams: u32, antennas: u32 },
    #[error("fixed channel rows are not orthonormal")]
    NotOrthonormal,
    #[error("fixed channel has more rows ({rows}) than columns ({cols})")]
    TooManyRows { rows: usize, cols: usize },
    #[error("power must be positive and finite, got {0}")]
    BadPower(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn check_power(power: f64) -> Result<(), RateError> {
    if power > 0.0 && power.is_finite() {
        Ok(())
    } else {
        Err(RateError::BadPower(power))
    }
}

/// `log2 det(I + (P/m) H H^H)` for an `n x m` channel with isotropic input
/// of total power `P`.
pub fn p2p_rate(h: &CMatrix, power: f64) -> Result<f64, RateError> {
    check_power(power)?;
    if h.cols() == 0 || h.rows() == 0 {
        return Ok(0.0);
    }
    let per_antenna = power / h.cols() as f64;
    // the smaller Gram gives the same determinant
    let gram = if h.rows() <= h.cols() {
        h.gram()
    } else {
        h.adjoint().gram()
    };
    let rate = gram.scaled(per_antenna).log2_det_plus_identity()?;
    Ok(rate.max(0.0))
}

/// Receiver zero forcing on the interference channel.
///
/// Transmitter `i` sends `streams_i` isotropic streams on its first
/// `streams_i` antennas, each with power `P / streams_i`. Receiver `j`
/// projects onto the orthogonal complement of the interfering streams and
/// decodes from the projected signal.
pub fn zf_ic_rates(
    draw: &ChannelDraw,
    config: &IcConfig,
    streams1: u32,
    streams2: u32,
    power: f64,
) -> Result<(f64, f64), RateError> {
    check_zf(config, streams1, streams2)?;
    check_power(power)?;
    let r1 = zf_receiver_rate(
        draw.get(Link::H11),
        draw.get(Link::H12),
        streams1,
        streams2,
        power,
    )?;
    let r2 = zf_receiver_rate(
        draw.get(Link::H22),
        draw.get(Link::H21),
        streams2,
        streams1,
        power,
    )?;
    Ok((r1, r2))
}

/// Validates a zero-forcing stream split against the antenna counts.
pub fn check_zf(config: &IcConfig, streams1: u32, streams2: u32) -> Result<(), RateError> {
    for (transmitter, antennas, streams) in [(1, config.tx1(), streams1), (2, config.tx2(), streams2)] {
        if streams > antennas {
            return Err(RateError::TooManyStreams {
                transmitter,
                antennas,
                streams,
            });
        }
    }
    for (receiver, antennas, own, other) in [
        (1, config.rx1(), streams1, streams2),
        (2, config.rx2(), streams2, streams1),
    ] {
        if own > 0 && own + other > antennas {
            return Err(RateError::InfeasibleZf {
                receiver,
                antennas,
                needed: own + other,
            });
        }
    }
    Ok(())
}

fn zf_receiver_rate(
    direct: &CMatrix,
    cross: &CMatrix,
    own: u32,
    other: u32,
    power: f64,
) -> Result<f64, RateError> {
    if own == 0 {
        return Ok(0.0);
    }
    let signal = direct.leading_columns(own as usize);
    if other == 0 {
        return p2p_rate(&signal, power);
    }
    let projector = complement_projector(&cross.leading_columns(other as usize));
    let projected = projector.matmul(&signal);
    p2p_rate(&projected, power)
}

/// Parameters of the power-scaling alignment scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IaParams {
    /// Beams sent by transmitter 2 (one per antenna, at most `M2`).
    pub beams: u32,
    /// Each beam of transmitter 2 carries power `P^exponent`.
    pub exponent: f64,
}

impl IaParams {
    /// `M2` beams at power `sqrt(P)` each.
    pub fn standard(config: &IcConfig) -> Self {
        Self {
            beams: config.tx2(),
            exponent: 0.5,
        }
    }
}

/// Checks the alignment scheme's configuration shape.
pub fn check_ia(config: &IcConfig, params: &IaParams) -> Result<(), RateError> {
    if config.tx1() != 1 || config.rx1() != 1 || config.tx2() + 1 > config.rx2() {
        return Err(RateError::IaShape(config.as_array()));
    }
    if params.beams > config.tx2() {
        return Err(RateError::TooManyBeams {
            beams: params.beams,
            antennas: config.tx2(),
        });
    }
    Ok(())
}

/// Rates of the power-scaling alignment scheme on a `(1, M2, 1, N2)` network.
///
/// User 1 sends one stream at power `P`; user 2 sends `beams` streams at
/// power `P^exponent` each. Receiver 1 treats the interference as noise
/// using its exact per-draw power. Receiver 2 sees all `beams + 1` streams;
/// its rate is the better of treating user 1 as noise and jointly decoding
/// both messages (the latter only when user 1's rate is decodable there).
pub fn ia_power_scaling_rates(
    draw: &ChannelDraw,
    config: &IcConfig,
    params: &IaParams,
    power: f64,
) -> Result<(f64, f64), RateError> {
    check_ia(config, params)?;
    check_power(power)?;
    let beam_power = libm::pow(power, params.exponent);
    let beams = params.beams as usize;

    let h11 = draw.get(Link::H11)[(0, 0)];
    let interference = if beams == 0 {
        0.0
    } else {
        beam_power * draw.get(Link::H12).leading_columns(beams).frobenius_norm_sqr()
    };
    let rate1 = libm::log2(1.0 + power * h11.norm_sqr() / (1.0 + interference));

    if beams == 0 {
        return Ok((rate1, 0.0));
    }
    let h21 = draw.get(Link::H21);
    let k1 = h21.gram().scaled(power);
    let k2 = draw.get(Link::H22).leading_columns(beams).gram().scaled(beam_power);

    let log_total = k1.add(&k2).log2_det_plus_identity()?;
    let log_user1 = k1.log2_det_plus_identity()?;
    let log_user2 = k2.log2_det_plus_identity()?;

    let treat_as_noise = log_total - log_user1;
    let joint = if rate1 <= log_user1 {
        log_user2.min(log_total - rate1)
    } else {
        0.0
    };
    Ok((rate1, treat_as_noise.max(joint).max(0.0)))
}

/// `log2 det(I + (P/m) Hf Q Q^H Hf^H)` for one mixing-matrix draw.
pub fn isotropic_bc_draw_rate(hfixed: &CMatrix, q: &CMatrix, power: f64) -> Result<f64, RateError> {
    p2p_rate(&hfixed.matmul(q), power)
}

/// Validates the fixed matrix of the isotropic broadcast model.
pub fn check_isotropic(hfixed: &CMatrix) -> Result<(), RateError> {
    if hfixed.rows() > hfixed.cols() {
        return Err(RateError::TooManyRows {
            rows: hfixed.rows(),
            cols: hfixed.cols(),
        });
    }
    if !has_orthonormal_rows(hfixed, ORTHONORMAL_TOL) {
        return Err(RateError::NotOrthonormal);
    }
    Ok(())
}

/// Monte Carlo mean and standard error of the single-user rate through a
/// fixed semi-orthogonal matrix and an i.i.d. Gaussian `m x m` mixing
/// matrix, over `trials` draws.
pub fn isotropic_bc_rate(
    hfixed: &CMatrix,
    power: f64,
    trials: u64,
    seed: u64,
) -> Result<Summary, RateError> {
    check_isotropic(hfixed)?;
    check_power(power)?;
    let m = hfixed.cols();
    let dims = [crate::channel::LinkDims::new(Link::Q, m, m)];
    let mut samples = alloc::vec::Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let draw = ChannelDraw::generate(&dims, seed, trial);
        samples.push(isotropic_bc_draw_rate(hfixed, draw.get(Link::Q), power)?);
    }
    Ok(Summary::from_samples(&samples))
}

/// The first `rows` rows of the `cols x cols` identity.
pub fn selection_rows(rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, j| {
        if i == j {
            num_complex::Complex64::new(1.0, 0.0)
        } else {
            num_complex::Complex64::new(0.0, 0.0)
        }
    })
}
