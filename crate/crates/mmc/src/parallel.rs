//! Benchmark suite on a worker pool.
//!
//! Movements run in any order; records are collected back in movement order
//! so the aggregate is identical to the sequential run.

use mmc_core::bench::{
    movement_pairs, run_pair, start_poses, target_grid, BenchSetup, BenchmarkResult, Mode,
};
use rayon::prelude::*;

use crate::Result;

/// Pool size used when `--jobs` is not given.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn run_benchmark_parallel(
    setup: &BenchSetup,
    mode: Mode,
    jobs: usize,
) -> Result<BenchmarkResult> {
    setup.configs(mode)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let grid = target_grid();
    let starts = start_poses(setup, &grid)?;
    let pairs = movement_pairs(grid.points.len());
    let records = pool.install(|| {
        pairs
            .par_iter()
            .enumerate()
            .map(|(id, pair)| run_pair(setup, mode, &grid, &starts, id, *pair))
            .collect::<mmc_core::Result<Vec<_>>>()
    })?;
    Ok(BenchmarkResult::aggregate(mode, setup.iterations, records))
}
