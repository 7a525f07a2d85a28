//! I.i.d. Rayleigh channel draws, reproducible from `(seed, trial)`.
//!
//! Each trial gets its own ChaCha stream (`set_stream(trial)` on an RNG
//! seeded from `seed`), so a trial's matrices depend only on the pair and
//! not on how many other trials were drawn or in which order.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::catalog::{BcConfig, IcConfig};
use crate::linalg::CMatrix;

/// Identifies one matrix of a channel draw. `HJI` is the link from
/// transmitter `i` to receiver `j`, matching the `N_j x M_i` convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Link {
    /// Single point-to-point link.
    H,
    /// Broadcast link to receiver 1.
    H1,
    /// Broadcast link to receiver 2.
    H2,
    H11,
    H12,
    H21,
    H22,
    /// Square mixing matrix of the isotropic broadcast model.
    Q,
}

impl Link {
    pub fn as_str(&self) -> &'static str {
        match self {
            Link::H => "H",
            Link::H1 => "H1",
            Link::H2 => "H2",
            Link::H11 => "H11",
            Link::H12 => "H12",
            Link::H21 => "H21",
            Link::H22 => "H22",
            Link::Q => "Q",
        }
    }
}

/// Shape of one link: `rows` receive antennas by `cols` transmit antennas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkDims {
    pub link: Link,
    pub rows: usize,
    pub cols: usize,
}

impl LinkDims {
    pub fn new(link: Link, rows: usize, cols: usize) -> Self {
        Self { link, rows, cols }
    }
}

pub fn bc_links(c: &BcConfig) -> Vec<LinkDims> {
    let m = c.tx() as usize;
    alloc::vec![
        LinkDims::new(Link::H1, c.rx1() as usize, m),
        LinkDims::new(Link::H2, c.rx2() as usize, m),
    ]
}

pub fn ic_links(c: &IcConfig) -> Vec<LinkDims> {
    let (m1, m2) = (c.tx1() as usize, c.tx2() as usize);
    let (n1, n2) = (c.rx1() as usize, c.rx2() as usize);
    alloc::vec![
        LinkDims::new(Link::H11, n1, m1),
        LinkDims::new(Link::H12, n1, m2),
        LinkDims::new(Link::H21, n2, m1),
        LinkDims::new(Link::H22, n2, m2),
    ]
}

/// One realization of every link in a network.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    matrices: BTreeMap<Link, CMatrix>,
    seed: u64,
    trial: u64,
}

impl ChannelDraw {
    /// Draws every link with i.i.d. `CN(0, 1)` entries. Links are filled in
    /// `Link` order, row-major, so the result does not depend on the order
    /// of `links`.
    pub fn generate(links: &[LinkDims], seed: u64, trial: u64) -> Self {
        let mut rng = trial_rng(seed, trial);
        let mut sorted = links.to_vec();
        sorted.sort_by_key(|d| d.link);
        let mut matrices = BTreeMap::new();
        for d in sorted {
            let m = gaussian_matrix(d.rows, d.cols, &mut rng);
            matrices.insert(d.link, m);
        }
        Self {
            matrices,
            seed,
            trial,
        }
    }

    /// Assembles a draw from explicit matrices (useful for deterministic tests).
    pub fn from_matrices(matrices: impl IntoIterator<Item = (Link, CMatrix)>) -> Self {
        Self {
            matrices: matrices.into_iter().collect(),
            seed: 0,
            trial: 0,
        }
    }

    /// Panics if the link was not drawn.
    pub fn get(&self, link: Link) -> &CMatrix {
        self.matrices
            .get(&link)
            .unwrap_or_else(|| panic!("link {} missing from draw", link.as_str()))
    }

    pub fn try_get(&self, link: Link) -> Option<&CMatrix> {
        self.matrices.get(&link)
    }

    pub fn links(&self) -> impl Iterator<Item = (&Link, &CMatrix)> {
        self.matrices.iter()
    }

    /// `(seed, trial)` the draw was generated from.
    pub fn seed_path(&self) -> (u64, u64) {
        (self.seed, self.trial)
    }
}

/// RNG for trial `trial` under root `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Circularly symmetric complex Gaussian with unit variance.
pub fn complex_gaussian<R: rand_chacha::rand_core::RngCore>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: rand_chacha::rand_core::RngCore>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}
