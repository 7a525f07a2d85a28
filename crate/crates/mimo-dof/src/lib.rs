//! Command-line front end, file formats and a parallel Monte Carlo runner
//! for [`mimo_dof_core`].

pub mod cli;
pub mod json;
pub mod parallel;
pub mod trace_csv;
