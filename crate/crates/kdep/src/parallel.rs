//! Thread-pool drivers for the shardable routines of `kdep-core`.
//!
//! Every driver splits work into units whose results are combined in a
//! fixed order, so output never depends on the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use kdep_core::matroid::{DependenceProfile, Matroid, MatroidError};
use kdep_core::montecarlo::{EmpiricalDistribution, MonteCarloError, SampleConfig, Sampler};
use kdep_core::search::{PartitionOutcome, PartitionRunner, ThresholdSearch};
use kdep_core::DependenceCount;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "KDEP_WORKERS";

/// Subset-rank ranges and sample ranges are cut into pieces of at least
/// this many items.
const MIN_CHUNK: u64 = 1 << 12;

/// `KDEP_WORKERS` if set to a positive integer, else the available
/// parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// A fixed-size worker pool.
pub struct Workers {
    pool: ThreadPool,
    count: usize,
}

impl Workers {
    pub fn new(count: usize) -> Workers {
        let count = count.max(1);
        let pool = ThreadPoolBuilder::new().num_threads(count).build().expect("thread pool");
        Workers { pool, count }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    fn chunks(&self, total: u64) -> Vec<std::ops::Range<u64>> {
        let pieces = (self.count as u64 * 8).max(1);
        let size = total.div_ceil(pieces).max(MIN_CHUNK);
        (0..total.div_ceil(size)).map(|i| i * size..((i + 1) * size).min(total)).collect()
    }

    /// `Matroid::dependence_profile_with_budget`, counting each `k` over
    /// colex-rank ranges in parallel.
    pub fn dependence_profile(&self, m: &Matroid, budget: u64) -> Result<DependenceProfile, MatroidError> {
        m.check_profile_budget(budget)?;
        let r = m.rank();
        let values = (0..=r)
            .map(|k| {
                let total = m.subset_count(r - k).expect("checked against the budget");
                let dependent: u64 = self
                    .pool
                    .install(|| self.chunks(total).into_par_iter().map(|range| m.count_dependent_in(r - k, range)).sum());
                DependenceCount::new(dependent, total)
            })
            .collect();
        Ok(DependenceProfile::from_counts(r, m.size(), values))
    }

    /// `montecarlo::estimate_distribution` over sample-index ranges.
    pub fn estimate_distribution(&self, config: &SampleConfig, budget: u64) -> Result<EmpiricalDistribution, MonteCarloError> {
        let sampler = Sampler::new(*config, budget)?;
        let parts: Vec<EmpiricalDistribution> =
            self.pool.install(|| self.chunks(config.trials).into_par_iter().map(|range| sampler.run(range)).collect());
        let mut dist = EmpiricalDistribution::new(sampler.subsets_per_sample());
        for part in &parts {
            dist.merge(part);
        }
        Ok(dist)
    }
}

impl PartitionRunner for Workers {
    /// Workers claim partitions in increasing order. Once partition `i` has
    /// a solution, partitions above `i` are cancelled or skipped; all
    /// partitions below `i` still run to completion, which is what
    /// `combine_outcomes` needs.
    fn run(&self, search: &ThresholdSearch<'_>) -> Vec<PartitionOutcome> {
        let n = search.partitions();
        let next = AtomicUsize::new(0);
        let best = AtomicUsize::new(usize::MAX);
        let results: Mutex<Vec<Option<PartitionOutcome>>> = Mutex::new(vec![None; n]);
        self.pool.scope(|scope| {
            for _ in 0..self.count.min(n) {
                scope.spawn(|_| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= n || i > best.load(Ordering::SeqCst) {
                        break;
                    }
                    let outcome = search.run_partition(i, &|| best.load(Ordering::Relaxed) < i);
                    if matches!(outcome, PartitionOutcome::Found(..)) {
                        best.fetch_min(i, Ordering::SeqCst);
                    }
                    results.lock().expect("results lock")[i] = Some(outcome);
                });
            }
        });
        let found = best.into_inner();
        let mut out = Vec::new();
        for (i, slot) in results.into_inner().expect("results lock").into_iter().enumerate() {
            if i > found {
                break;
            }
            out.push(slot.expect("every partition up to the first solution ran"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kdep_core::linalg::GfMatrix;
    use kdep_core::search::{search_ind, search_min_dependence, rational, SearchConfig, Sequential};
    use kdep_core::Field;

    #[test]
    fn parallel_search_matches_sequential() {
        let cfg = SearchConfig::default();
        for workers in [1, 3, 8] {
            let w = Workers::new(workers);
            for (q, r, k, s) in [(2, 3, 0, 6), (3, 2, 0, 5), (2, 3, 1, 8)] {
                let a = search_min_dependence(q, r, k, s, &cfg, &Sequential).unwrap();
                let b = search_min_dependence(q, r, k, s, &cfg, &w).unwrap();
                assert_eq!(a, b);
            }
            let a = search_ind(3, 3, 0, &rational(0, 1), &cfg, &Sequential).unwrap();
            assert_eq!(a, search_ind(3, 3, 0, &rational(0, 1), &cfg, &w).unwrap());
        }
    }

    #[test]
    fn parallel_profile_matches_sequential() {
        let f = Field::new(3).unwrap();
        let codes: Vec<u64> = (1..27).collect();
        let m = Matroid::from_matrix(GfMatrix::from_encoded_columns(&f, 3, &codes).unwrap()).unwrap();
        let seq = m.dependence_profile().unwrap();
        for workers in [1, 2, 5] {
            assert_eq!(Workers::new(workers).dependence_profile(&m, u64::MAX).unwrap(), seq);
        }
        assert!(matches!(Workers::new(2).dependence_profile(&m, 10), Err(MatroidError::BudgetExceeded { .. })));
    }

    #[test]
    fn parallel_sampling_matches_sequential() {
        let config = SampleConfig { q: 2, r: 3, s: 6, k: 1, trials: 20_000, seed: 42, workers: 1 };
        let seq = kdep_core::montecarlo::estimate_distribution(&config, 1 << 20).unwrap();
        for workers in [1, 4] {
            assert_eq!(Workers::new(workers).estimate_distribution(&config, 1 << 20).unwrap(), seq);
        }
    }
}
