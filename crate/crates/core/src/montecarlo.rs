//! Random matrices with i.i.d. uniform nonzero columns, their empirical
//! k-dependence distribution, and checks of the Markov-type bounds.
//!
//! Sample `i` of a run seeded with `seed` is drawn from
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `i`, so every
//! sample is reproducible on its own and runs can be split by index across
//! any number of workers.
//!
//! Samples need not have full rank. Their k-dependence is always measured
//! against the ambient dimension: the dependent fraction of the
//! `(r - k)`-subsets of columns, where `r` is the number of rows.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bounds::{self, BoundsError, MarkovBound};
use crate::field::{Field, FieldError};
use crate::linalg::GfMatrix;
use crate::matroid::{DependenceCount, Matroid};
use crate::subset;

/// Default cap on the number of subsets enumerated per sample.
pub const DEFAULT_SAMPLE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonteCarloError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("trials must be positive")]
    ZeroTrials,
    #[error("workers must be positive")]
    ZeroWorkers,
    #[error("k = {k} outside [0, {r}]")]
    KOutOfRange { k: usize, r: usize },
    #[error("r must be positive")]
    ZeroRows,
    #[error("s = {s} columns have no {m}-subsets")]
    TooFewColumns { s: usize, m: usize },
    #[error("q^r does not fit in 64 bits (q = {q}, r = {r})")]
    Overflow { q: u32, r: usize },
    #[error("{needed} subsets per sample exceed the budget of {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("enumerating all matrices needs {needed} > {limit}")]
    EnumerationLimit { needed: u128, limit: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub q: u32,
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SampleConfig {
    pub fn validate(&self) -> Result<(), MonteCarloError> {
        if self.trials == 0 {
            return Err(MonteCarloError::ZeroTrials);
        }
        if self.workers == 0 {
            return Err(MonteCarloError::ZeroWorkers);
        }
        check_shape(self.q, self.r, self.s, self.k)?;
        Ok(())
    }
}

fn check_shape(q: u32, r: usize, s: usize, k: usize) -> Result<Field, MonteCarloError> {
    let field = Field::new(q)?;
    if r == 0 {
        return Err(MonteCarloError::ZeroRows);
    }
    if k > r {
        return Err(MonteCarloError::KOutOfRange { k, r });
    }
    if s < r - k {
        return Err(MonteCarloError::TooFewColumns { s, m: r - k });
    }
    vector_count(q, r)?;
    Ok(field)
}

/// `q^r`, the number of vectors in `F_q^r`.
fn vector_count(q: u32, r: usize) -> Result<u64, MonteCarloError> {
    u32::try_from(r)
        .ok()
        .and_then(|e| u64::from(q).checked_pow(e))
        .ok_or(MonteCarloError::Overflow { q, r })
}

/// The generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// An `r x s` matrix whose columns are independent and uniform over the
/// `q^r - 1` nonzero vectors. Rank is not conditioned on.
///
/// Each column is the vector with integer code drawn uniformly from
/// `[1, q^r)`. Panics if `q^r` overflows `u64`.
pub fn sample_matrix<R: Rng + ?Sized>(field: &Field, r: usize, s: usize, rng: &mut R) -> GfMatrix {
    let n = vector_count(field.order(), r).expect("q^r fits in u64");
    let codes: Vec<u64> = (0..s).map(|_| rng.random_range(1..n)).collect();
    GfMatrix::from_encoded_columns(field, r, &codes).expect("codes below q^r")
}

/// A validated configuration ready to evaluate samples one index at a
/// time.
#[derive(Clone, Debug)]
pub struct Sampler {
    field: Field,
    config: SampleConfig,
    total: u64,
}

impl Sampler {
    pub fn new(config: SampleConfig, budget: u64) -> Result<Sampler, MonteCarloError> {
        config.validate()?;
        let field = Field::new(config.q)?;
        let m = config.r - config.k;
        let total = subset::binomial_u64(config.s, m)
            .filter(|&t| t <= budget)
            .ok_or(MonteCarloError::BudgetExceeded { needed: subset::binomial_u64(config.s, m).unwrap_or(u64::MAX), budget })?;
        Ok(Sampler { field, config, total })
    }

    pub fn config(&self) -> &SampleConfig {
        &self.config
    }

    /// `C(s, r - k)`, the denominator of every sample's k-dependence.
    pub fn subsets_per_sample(&self) -> u64 {
        self.total
    }

    pub fn matrix(&self, index: u64) -> GfMatrix {
        let c = &self.config;
        sample_matrix(&self.field, c.r, c.s, &mut sample_rng(c.seed, index))
    }

    /// Number of dependent `(r - k)`-subsets of sample `index`.
    pub fn dependent(&self, index: u64) -> u64 {
        count_against_rows(self.matrix(index), self.config.r - self.config.k, self.total)
    }

    /// The distribution over the samples with indices in `range`; the
    /// shardable unit of work.
    pub fn run(&self, range: Range<u64>) -> EmpiricalDistribution {
        let mut dist = EmpiricalDistribution::new(self.total);
        for i in range {
            dist.record(self.dependent(i));
        }
        dist
    }
}

fn count_against_rows(m: GfMatrix, subset_size: usize, total: u64) -> u64 {
    if m.cols() == 0 {
        // only the empty subset, which is independent
        return 0;
    }
    let matroid = Matroid::from_matrix(m).expect("nonempty ground set");
    matroid.count_dependent_in(subset_size, 0..total)
}

/// Sequential `estimate_distribution`; the companion crate runs the same
/// sample indices in parallel.
pub fn estimate_distribution(config: &SampleConfig, budget: u64) -> Result<EmpiricalDistribution, MonteCarloError> {
    let sampler = Sampler::new(*config, budget)?;
    Ok(sampler.run(0..config.trials))
}

/// The k-dependence of every one of the `(q^r - 1)^s` matrices with nonzero
/// columns, each counted once.
pub fn exhaustive_distribution(q: u32, r: usize, s: usize, k: usize, limit: u64) -> Result<EmpiricalDistribution, MonteCarloError> {
    let field = check_shape(q, r, s, k)?;
    let nonzero = vector_count(q, r)? - 1;
    let needed = (nonzero as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    if needed > limit as u128 {
        return Err(MonteCarloError::EnumerationLimit { needed, limit });
    }
    let m = r - k;
    let total = subset::binomial_u64(s, m).expect("small s");
    let mut dist = EmpiricalDistribution::new(total);
    let mut codes = alloc::vec![1u64; s];
    loop {
        let mat = GfMatrix::from_encoded_columns(&field, r, &codes).expect("codes below q^r");
        dist.record(count_against_rows(mat, m, total));
        // odometer over [1, q^r)^s
        let mut i = 0;
        while i < s && codes[i] == nonzero {
            codes[i] = 1;
            i += 1;
        }
        if i == s {
            break;
        }
        codes[i] += 1;
    }
    Ok(dist)
}

/// A multiset of sampled k-dependences `dependent / subsets`, all sharing
/// the denominator `subsets`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    subsets: u64,
    counts: BTreeMap<u64, u64>,
    trials: u64,
}

impl EmpiricalDistribution {
    pub fn new(subsets: u64) -> EmpiricalDistribution {
        EmpiricalDistribution { subsets, counts: BTreeMap::new(), trials: 0 }
    }

    pub fn record(&mut self, dependent: u64) {
        *self.counts.entry(dependent).or_insert(0) += 1;
        self.trials += 1;
    }

    /// Adds the samples of `other`; order of merging does not matter.
    pub fn merge(&mut self, other: &EmpiricalDistribution) {
        assert_eq!(self.subsets, other.subsets, "distributions over different subset counts");
        for (&d, &n) in &other.counts {
            *self.counts.entry(d).or_insert(0) += n;
        }
        self.trials += other.trials;
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn subsets(&self) -> u64 {
        self.subsets
    }

    /// `(k-dependence, multiplicity)` in increasing order of dependence.
    pub fn support(&self) -> impl Iterator<Item = (DependenceCount, u64)> + '_ {
        self.counts.iter().map(|(&d, &n)| (DependenceCount::new(d, self.subsets), n))
    }

    /// Exact sample mean. Zero when empty.
    pub fn mean(&self) -> BigRational {
        if self.trials == 0 {
            return BigRational::zero();
        }
        let sum: BigUint = self.counts.iter().map(|(&d, &n)| BigUint::from(d) * n).sum();
        BigRational::new(BigInt::from(sum), BigInt::from(self.trials) * BigInt::from(self.subsets))
    }

    /// Smallest sampled value `x` with `#{samples <= x} >= level * trials`.
    /// `None` when empty.
    pub fn quantile(&self, level: &BigRational) -> Option<BigRational> {
        let need = level * BigRational::from_integer(BigInt::from(self.trials));
        let mut seen = 0u64;
        for (&d, &n) in &self.counts {
            seen += n;
            if BigRational::from_integer(BigInt::from(seen)) >= need {
                return Some(ratio(d, self.subsets));
            }
        }
        self.counts.keys().next_back().map(|&d| ratio(d, self.subsets))
    }

    /// Number of samples with k-dependence strictly above `t`.
    pub fn tail_count(&self, t: &BigRational) -> u64 {
        self.counts.iter().filter(|(&d, _)| ratio(d, self.subsets) > *t).map(|(_, &n)| n).sum()
    }

    /// Fraction of samples with k-dependence strictly above `t`.
    pub fn tail(&self, t: &BigRational) -> BigRational {
        ratio(self.tail_count(t), self.trials.max(1))
    }
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// One row of [`check_markov`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovRow {
    pub p: BigRational,
    /// `(1 - pi) / p`.
    pub threshold: MarkovBound,
    /// Empirical `(1 - p)`-quantile of the k-dependence.
    pub quantile: BigRational,
    /// Samples with k-dependence above the threshold.
    pub tail_count: u64,
    pub tail: BigRational,
    /// `p (1 - p) / trials`, the binomial variance of `tail`.
    pub variance: BigRational,
    /// `tail <= p + 3 sigma`, decided in exact arithmetic.
    pub pass: bool,
}

impl MarkovRow {
    /// Whether the empirical quantile lies at or below the threshold.
    pub fn quantile_within(&self) -> bool {
        self.quantile <= self.threshold.value
    }
}

/// For each `p`, compares the empirical tail above `(1 - pi)/p` against
/// `p`, allowing three binomial standard deviations.
pub fn check_markov(config: &SampleConfig, dist: &EmpiricalDistribution, grid: &[BigRational]) -> Result<Vec<MarkovRow>, MonteCarloError> {
    let n = dist.trials();
    if n == 0 {
        return Err(MonteCarloError::ZeroTrials);
    }
    let nn = BigRational::from_integer(BigInt::from(n));
    grid.iter()
        .map(|p| {
            let threshold = bounds::markov_dependence_bound(config.q, config.r, config.k, p)?;
            let quantile = dist.quantile(&(BigRational::one() - p)).unwrap_or_else(BigRational::zero);
            let tail_count = dist.tail_count(&threshold.value);
            let tail = ratio(tail_count, n);
            let var = p * (BigRational::one() - p) / &nn;
            let excess = &tail - p;
            let pass = excess <= BigRational::zero() || &excess * &excess <= BigRational::from_integer(BigInt::from(9)) * &var;
            Ok(MarkovRow { p: p.clone(), threshold, quantile, tail_count, tail, variance: var, pass })
        })
        .collect()
}
