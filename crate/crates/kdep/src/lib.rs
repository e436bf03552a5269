//! Parallel drivers, file formats and the `kdep` command line for
//! `kdep-core`.
//!
//! The worker count comes from `--workers`, else the `KDEP_WORKERS`
//! environment variable, else the available parallelism. Results never
//! depend on it.

pub mod cli;
pub mod document;
pub mod parallel;
pub mod report;
pub mod tables;
