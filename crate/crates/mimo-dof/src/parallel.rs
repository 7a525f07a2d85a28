//! Rayon-backed Monte Carlo runner.
//!
//! Trials are mapped in parallel and collected in trial order before the
//! compensated reduction, so the trace is bit-identical to
//! [`mimo_dof_core::simulate`] for any thread count.

use mimo_dof_core::sim::{run_with, trial_rates};
use mimo_dof_core::{RateTrace, SchemeSpec, SimError, SnrGrid};
use rayon::prelude::*;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "MIMO_DOF_THREADS";

pub fn simulate_parallel(
    spec: &SchemeSpec,
    grid: &SnrGrid,
    trials: u64,
    seed: u64,
) -> Result<RateTrace, SimError> {
    run_with(spec, grid, trials, seed, |solo, links, powers| {
        (0..trials)
            .into_par_iter()
            .map(|trial| trial_rates(solo, links, powers, seed, trial))
            .collect()
    })
}

/// Runs `f` on a pool sized by [`THREADS_ENV`] when set, else rayon's default.
pub fn with_thread_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}
