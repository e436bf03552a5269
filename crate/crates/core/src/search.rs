//! Exhaustive computation of `D_q(r, k, s)` and `Ind_q(r, k, d)`.
//!
//! Dependence is unchanged by scaling a column, so a matrix is determined
//! up to the quantities of interest by the multiset of projective points
//! its columns represent. Zero columns never help: replacing one by any
//! nonzero vector cannot create a dependent subset. The search therefore
//! ranges over multisets of projective points, written as nondecreasing
//! sequences of point indices and explored depth first in lexicographic
//! order.
//!
//! The primitive is a threshold query: the lexicographically least
//! full-rank `s`-multiset with at most `T` dependent `(r - k)`-subsets.
//! Dependent subsets of a partial multiset stay dependent in every
//! completion, so partial counts above `T` are pruned. `D` is the least
//! feasible `T` over `C(s, r - k)`; `Ind` is the last feasible `s` for
//! `T = floor(d * C(s, r - k))`.
//!
//! Work is split into one partition per first point. Partition outcomes do
//! not depend on how partitions are scheduled, and statistics are summed
//! over partitions up to the first successful one, so results and
//! statistics are identical under any number of workers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{Field, FieldError, DEFAULT_MAX_ORDER};
use crate::linalg::{projective_points, Echelon, GfMatrix, LinalgError, DEFAULT_ENUMERATION_LIMIT};
use crate::matroid::{DependenceCount, Matroid, MatroidError};
use crate::subset::{binomial_u64, next_colex, rank_u64, BinomialTable};
use crate::table::{Provenance, TableRow};

/// Default cap on search nodes per query.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000_000;

/// Default largest `s` tried by [`search_ind`].
pub const DEFAULT_MAX_SIZE: usize = 128;

/// Largest point-subset table precomputed for dependence lookups.
const DEPENDENCE_TABLE_LIMIT: u64 = 1 << 26;

/// Cancellation is polled every this many nodes.
const CANCEL_POLL: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("k = {k} outside [0, {r}]")]
    KOutOfRange { k: usize, r: usize },
    #[error("no full-rank {r} x {s} matrix exists")]
    NoFullRankMatrix { r: usize, s: usize },
    #[error("dependence threshold {0} outside [0, 1]")]
    DOutOfRange(BigRational),
    #[error("search exceeded the budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error("no size bound: every size up to {max_size} stays within the threshold")]
    SizeLimit { max_size: usize },
    #[error("Ind is unbounded for k = {k}, r = {r}, d = {d}")]
    Unbounded { r: usize, k: usize, d: BigRational },
    #[error("feasible at size {s} after an infeasible size {s_prev}")]
    MonotonicityViolated { s_prev: usize, s: usize },
    #[error("witness does not reproduce the searched value")]
    WitnessMismatch,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub max_size: usize,
    pub max_field_order: u32,
    pub enumeration_limit: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            max_size: DEFAULT_MAX_SIZE,
            max_field_order: DEFAULT_MAX_ORDER,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SearchStats {
    /// Search-tree nodes visited.
    pub nodes: u64,
    /// Complete multisets reaching the full-rank test.
    pub complete: u64,
    /// Branches cut by the threshold, rank or capacity tests.
    pub pruned: u64,
}

impl core::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, o: SearchStats) {
        self.nodes += o.nodes;
        self.complete += o.complete;
        self.pruned += o.pruned;
    }
}

/// Projective points of `F_q^r` together with a dependence oracle for
/// `m`-multisets of them.
pub struct PointSpace {
    field: Field,
    rows: usize,
    m: usize,
    points: GfMatrix,
    binom: BinomialTable,
    /// Bit `i` set iff the distinct point set of colex rank `i` is dependent.
    dependent: Option<Vec<u64>>,
}

impl PointSpace {
    pub fn new(field: &Field, rows: usize, m: usize, enumeration_limit: u64) -> Result<PointSpace, SearchError> {
        let pts = projective_points(field, rows, enumeration_limit)?;
        let cols: Vec<Vec<u32>> = pts.iter().map(|v| v.iter().map(|e| e.value()).collect()).collect();
        let points = GfMatrix::from_columns(field, rows, &cols)?;
        let n = points.cols();
        let binom = BinomialTable::new(n + 1, m);
        let dependent = binomial_u64(n, m).filter(|&t| t <= DEPENDENCE_TABLE_LIMIT).map(|total| {
            let mut bits = vec![0u64; total.div_ceil(64) as usize];
            let mut ech = Echelon::new(field, rows);
            let mut cur: Vec<usize> = (0..m).collect();
            for i in 0..total {
                if !ech.all_independent(&points, &cur) {
                    bits[(i / 64) as usize] |= 1 << (i % 64);
                }
                next_colex(n, &mut cur);
            }
            bits
        });
        Ok(PointSpace { field: field.clone(), rows, m, points, binom, dependent })
    }

    pub fn len(&self) -> usize {
        self.points.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.points.cols() == 0
    }

    pub fn points(&self) -> &GfMatrix {
        &self.points
    }

    /// `sorted` is a nondecreasing list of `m` point indices.
    fn multiset_dependent(&self, sorted: &[usize], ech: &mut Echelon) -> bool {
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return true;
        }
        match &self.dependent {
            Some(bits) => {
                let i = rank_u64(sorted, &self.binom);
                bits[(i / 64) as usize] >> (i % 64) & 1 == 1
            }
            None => !ech.all_independent(&self.points, sorted),
        }
    }

    /// Matrix whose columns are the listed points.
    pub fn matrix(&self, indices: &[usize]) -> GfMatrix {
        self.points.select_columns(indices).expect("point indices in range")
    }
}

/// Result of searching one partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionOutcome {
    Found(Vec<usize>, SearchStats),
    Exhausted(SearchStats),
    OverBudget(SearchStats),
    Cancelled,
}

/// One threshold query: the lexicographically least full-rank multiset of
/// `size` points with at most `threshold` dependent `m`-subsets.
pub struct ThresholdSearch<'a> {
    space: &'a PointSpace,
    size: usize,
    threshold: u64,
    node_budget: u64,
}

impl<'a> ThresholdSearch<'a> {
    pub fn new(space: &'a PointSpace, size: usize, threshold: u64, node_budget: u64) -> ThresholdSearch<'a> {
        ThresholdSearch { space, size, threshold, node_budget }
    }

    /// Partition `i` holds the multisets whose least point is `i`.
    pub fn partitions(&self) -> usize {
        if self.size == 0 { 1 } else { self.space.len() }
    }

    /// Searches partition `i`; `cancel` is polled periodically and may stop
    /// the search early.
    pub fn run_partition(&self, i: usize, cancel: &dyn Fn() -> bool) -> PartitionOutcome {
        let space = self.space;
        let mut dfs = Dfs {
            space,
            size: self.size,
            threshold: self.threshold,
            budget: self.node_budget,
            cancel,
            chosen: Vec::with_capacity(self.size),
            echelons: (0..=self.size).map(|_| Echelon::new(&space.field, space.rows)).collect(),
            cands: (0..=self.size).map(|_| Vec::new()).collect(),
            scratch: Echelon::new(&space.field, space.rows),
            subset: Vec::new(),
            pts: Vec::new(),
            stats: SearchStats::default(),
            stop: None,
        };
        if self.size == 0 {
            return if space.rows == 0 { PartitionOutcome::Found(Vec::new(), dfs.stats) } else { PartitionOutcome::Exhausted(dfs.stats) };
        }
        let root: Vec<(usize, u64)> = (0..space.len()).map(|c| (c, 0)).collect();
        dfs.stats.nodes += 1;
        let found = dfs.branch(0, 0, &root, i);
        match (found, dfs.stop) {
            (_, Some(Stop::Cancelled)) => PartitionOutcome::Cancelled,
            (_, Some(Stop::Budget)) => PartitionOutcome::OverBudget(dfs.stats),
            (true, None) => PartitionOutcome::Found(dfs.chosen.clone(), dfs.stats),
            (false, None) => PartitionOutcome::Exhausted(dfs.stats),
        }
    }
}

/// Runs the partitions of a threshold search and returns their outcomes in
/// partition order. Implementations may cancel partitions above one that
/// has already found a solution.
pub trait PartitionRunner {
    fn run(&self, search: &ThresholdSearch<'_>) -> Vec<PartitionOutcome>;
}

/// Runs partitions one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl PartitionRunner for Sequential {
    fn run(&self, search: &ThresholdSearch<'_>) -> Vec<PartitionOutcome> {
        let mut out = Vec::with_capacity(search.partitions());
        for i in 0..search.partitions() {
            let outcome = search.run_partition(i, &|| false);
            let found = matches!(outcome, PartitionOutcome::Found(..));
            out.push(outcome);
            if found {
                break;
            }
        }
        out
    }
}

/// Reduces partition outcomes to the first solution in partition order.
///
/// Statistics cover the partitions up to and including the successful one,
/// which every runner must have completed; the budget applies to their sum.
pub fn combine_outcomes(outcomes: Vec<PartitionOutcome>, budget: u64) -> Result<(Option<Vec<usize>>, SearchStats), SearchError> {
    let mut stats = SearchStats::default();
    for outcome in outcomes {
        match outcome {
            PartitionOutcome::Found(w, st) => {
                stats += st;
                return if stats.nodes > budget { Err(SearchError::BudgetExceeded { budget }) } else { Ok((Some(w), stats)) };
            }
            PartitionOutcome::Exhausted(st) => stats += st,
            PartitionOutcome::OverBudget(_) => return Err(SearchError::BudgetExceeded { budget }),
            PartitionOutcome::Cancelled => unreachable!("partition cancelled before any earlier solution"),
        }
    }
    if stats.nodes > budget {
        return Err(SearchError::BudgetExceeded { budget });
    }
    Ok((None, stats))
}

enum Stop {
    Budget,
    Cancelled,
}

struct Dfs<'a, 'c> {
    space: &'a PointSpace,
    size: usize,
    threshold: u64,
    budget: u64,
    cancel: &'c dyn Fn() -> bool,
    chosen: Vec<usize>,
    /// `echelons[t]` spans the first `t` chosen points.
    echelons: Vec<Echelon>,
    cands: Vec<Vec<(usize, u64)>>,
    scratch: Echelon,
    subset: Vec<usize>,
    pts: Vec<usize>,
    stats: SearchStats,
    stop: Option<Stop>,
}

impl Dfs<'_, '_> {
    /// Explores children of the node with `t = chosen.len()` points and
    /// `count` dependent subsets. `cands` lists usable next points (each at
    /// least the last chosen one) with the number of dependent subsets each
    /// would add. `only` restricts the first level to one partition.
    fn branch(&mut self, t: usize, count: u64, cands: &[(usize, u64)], only: usize) -> bool {
        let remaining = self.size - t;
        let m = self.space.m;
        let r = self.space.rows;
        for (idx, &(j, inc)) in cands.iter().enumerate() {
            if t == 0 && j != only {
                continue;
            }
            let new_count = count + inc;
            if new_count > self.threshold {
                self.stats.pruned += 1;
                continue;
            }
            self.stats.nodes += 1;
            if self.stats.nodes.is_multiple_of(CANCEL_POLL) && (self.cancel)() {
                self.stop = Some(Stop::Cancelled);
                return false;
            }
            if self.stats.nodes > self.budget {
                self.stop = Some(Stop::Budget);
                return false;
            }

            let (before, after) = self.echelons.split_at_mut(t + 1);
            let child_ech = &mut after[0];
            child_ech.clone_from(&before[t]);
            child_ech.insert_column(&self.space.points, j);
            let child_rank = child_ech.rank();

            if remaining == 1 {
                self.stats.complete += 1;
                if child_rank == r {
                    self.chosen.push(j);
                    return true;
                }
                continue;
            }
            if child_rank + remaining - 1 < r {
                self.stats.pruned += 1;
                continue;
            }

            // candidates for the child, with updated increments
            let mut child = core::mem::take(&mut self.cands[t + 1]);
            child.clear();
            let slack = self.threshold - new_count;
            for &(c, ic) in &cands[idx..] {
                let extra = self.extra_dependent(j, c, m);
                if ic + extra <= slack {
                    child.push((c, ic + extra));
                }
            }
            // With no slack left, the remaining points must be distinct,
            // differ from those chosen and add nothing.
            let capacity_ok = slack > 0
                || m < 2
                || self.size < m
                || child.iter().filter(|&&(c, _)| c != j).count() >= remaining - 1;
            if !capacity_ok {
                self.stats.pruned += 1;
                self.cands[t + 1] = child;
                continue;
            }
            self.chosen.push(j);
            let found = self.branch(t + 1, new_count, &child, only);
            self.cands[t + 1] = child;
            if found {
                return true;
            }
            self.chosen.pop();
            if self.stop.is_some() {
                return false;
            }
        }
        false
    }

    /// Number of `(m-2)`-subsets `S` of the chosen positions such that
    /// `S + {j, c}` is dependent: the extra dependent `m`-subsets that point
    /// `c` would contribute once `j` has been appended.
    fn extra_dependent(&mut self, j: usize, c: usize, m: usize) -> u64 {
        if m < 2 {
            return 0;
        }
        let t = self.chosen.len();
        let want = m - 2;
        if want > t {
            return 0;
        }
        self.subset.clear();
        self.subset.extend(0..want);
        let mut extra = 0;
        loop {
            self.pts.clear();
            self.pts.extend(self.subset.iter().map(|&p| self.chosen[p]));
            self.pts.push(j);
            self.pts.push(c);
            self.pts.sort_unstable();
            if self.space.multiset_dependent(&self.pts, &mut self.scratch) {
                extra += 1;
            }
            if !next_colex(t, &mut self.subset) {
                break;
            }
        }
        extra
    }
}

/// What a search result describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchValue {
    /// `D_q(r, k, s)`, as an exact count over `C(s, r - k)`.
    MinDependence { s: usize, value: DependenceCount },
    /// `Ind_q(r, k, d)`.
    MaxSize { d: BigRational, value: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub q: u32,
    pub r: usize,
    pub k: usize,
    pub value: SearchValue,
    /// Columns are canonical projective representatives.
    pub witness: GfMatrix,
    pub stats: SearchStats,
}

impl SearchResult {
    fn checked(q: u32, r: usize, k: usize, value: SearchValue, witness: GfMatrix, stats: SearchStats) -> Result<SearchResult, SearchError> {
        let result = SearchResult { q, r, k, value, witness, stats };
        if result.verify() {
            Ok(result)
        } else {
            Err(SearchError::WitnessMismatch)
        }
    }

    /// Re-derives the witness's k-dependence through the matroid layer and
    /// compares it with the recorded value.
    pub fn verify(&self) -> bool {
        let Ok(m) = Matroid::from_matrix(self.witness.clone()) else {
            return false;
        };
        if m.rank() != self.r || self.witness.rows() != self.r {
            return false;
        }
        let Ok(d) = m.k_dependence(self.k) else {
            return false;
        };
        match &self.value {
            SearchValue::MinDependence { s, value } => m.size() == *s && d == *value,
            SearchValue::MaxSize { d: bound, value } => m.size() == *value && d.ratio() <= *bound,
        }
    }

    pub fn to_row(&self) -> TableRow {
        let witness = self.witness.encoded_columns();
        let (q, r, k) = (self.q, self.r, self.k);
        match &self.value {
            SearchValue::MinDependence { s, value } => {
                TableRow::MinDependence { q, r, k, s: *s, value: value.ratio(), witness, provenance: Provenance::BruteForce }
            }
            SearchValue::MaxSize { d, value } => {
                TableRow::MaxSize { q, r, k, d: d.clone(), value: *value, witness, provenance: Provenance::BruteForce }
            }
        }
    }
}

fn setup(q: u32, r: usize, k: usize, cfg: &SearchConfig) -> Result<(Field, usize), SearchError> {
    let field = Field::with_max_order(q, cfg.max_field_order)?;
    if r == 0 {
        return Err(LinalgError::NoRows.into());
    }
    if k > r {
        return Err(SearchError::KOutOfRange { k, r });
    }
    Ok((field, r - k))
}

/// Runs one threshold query, charging its statistics to `stats`.
fn feasible<R: PartitionRunner>(
    space: &PointSpace,
    size: usize,
    threshold: u64,
    cfg: &SearchConfig,
    runner: &R,
    stats: &mut SearchStats,
) -> Result<Option<Vec<usize>>, SearchError> {
    let budget = cfg.node_budget.saturating_sub(stats.nodes);
    let search = ThresholdSearch::new(space, size, threshold, budget);
    let (found, st) = combine_outcomes(runner.run(&search), budget).map_err(|e| match e {
        SearchError::BudgetExceeded { .. } => SearchError::BudgetExceeded { budget: cfg.node_budget },
        e => e,
    })?;
    *stats += st;
    Ok(found)
}

/// Exact `D_q(r, k, s)` with the lexicographically least witness.
pub fn search_min_dependence<R: PartitionRunner>(q: u32, r: usize, k: usize, s: usize, cfg: &SearchConfig, runner: &R) -> Result<SearchResult, SearchError> {
    let (field, m) = setup(q, r, k, cfg)?;
    if s < r {
        return Err(SearchError::NoFullRankMatrix { r, s });
    }
    let space = PointSpace::new(&field, r, m, cfg.enumeration_limit)?;
    let total = binomial_u64(s, m).ok_or(SearchError::BudgetExceeded { budget: cfg.node_budget })?;
    let mut stats = SearchStats::default();
    for threshold in 0..=total {
        if let Some(w) = feasible(&space, s, threshold, cfg, runner, &mut stats)? {
            let value = SearchValue::MinDependence { s, value: DependenceCount::new(threshold, total) };
            return SearchResult::checked(q, r, k, value, space.matrix(&w), stats);
        }
    }
    // s >= r and the point set spans, so some multiset is full rank
    unreachable!("no full-rank multiset of size {s} >= r = {r}")
}

fn floor_threshold(d: &BigRational, total: u64) -> u64 {
    let scaled = d * BigRational::from_integer(BigInt::from(total));
    scaled.numer().div_floor(scaled.denom()).to_u64().unwrap_or(u64::MAX).min(total)
}

/// Exact `Ind_q(r, k, d)` with the lexicographically least witness at that
/// size.
///
/// Sizes are tried upward from `r`; the first infeasible size stops the
/// scan, and the next size is checked as well before returning.
pub fn search_ind<R: PartitionRunner>(q: u32, r: usize, k: usize, d: &BigRational, cfg: &SearchConfig, runner: &R) -> Result<SearchResult, SearchError> {
    let (field, m) = setup(q, r, k, cfg)?;
    if *d < BigRational::zero() || *d > BigRational::one() {
        return Err(SearchError::DOutOfRange(d.clone()));
    }
    // single points and the empty set are never dependent
    if m < 2 || *d == BigRational::one() {
        return Err(SearchError::Unbounded { r, k, d: d.clone() });
    }
    let space = PointSpace::new(&field, r, m, cfg.enumeration_limit)?;
    let mut stats = SearchStats::default();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for s in r..=cfg.max_size + 1 {
        let total = binomial_u64(s, m).ok_or(SearchError::BudgetExceeded { budget: cfg.node_budget })?;
        match feasible(&space, s, floor_threshold(d, total), cfg, runner, &mut stats)? {
            Some(w) => best = Some((s, w)),
            None => {
                let next_total = binomial_u64(s + 1, m).ok_or(SearchError::BudgetExceeded { budget: cfg.node_budget })?;
                if feasible(&space, s + 1, floor_threshold(d, next_total), cfg, runner, &mut stats)?.is_some() {
                    return Err(SearchError::MonotonicityViolated { s_prev: s, s: s + 1 });
                }
                let (size, w) = best.expect("size r is always feasible");
                let value = SearchValue::MaxSize { d: d.clone(), value: size };
                return SearchResult::checked(q, r, k, value, space.matrix(&w), stats);
            }
        }
    }
    Err(SearchError::SizeLimit { max_size: cfg.max_size })
}

/// `n` copies of every canonical projective point of `F_q^r`, each point's
/// copies adjacent, points in canonical order.
pub fn projective_multiset(q: u32, r: usize, n: usize, cfg: &SearchConfig) -> Result<GfMatrix, SearchError> {
    let field = Field::with_max_order(q, cfg.max_field_order)?;
    if r == 0 {
        return Err(LinalgError::NoRows.into());
    }
    let pts = projective_points(&field, r, cfg.enumeration_limit)?;
    if n == 0 || (pts.len() as u64).saturating_mul(n as u64) > cfg.enumeration_limit {
        return Err(SearchError::BudgetExceeded { budget: cfg.enumeration_limit });
    }
    let cols: Vec<Vec<u32>> = pts
        .iter()
        .flat_map(|v| core::iter::repeat_n(v.iter().map(|e| e.value()).collect::<Vec<u32>>(), n))
        .collect();
    Ok(GfMatrix::from_columns(&field, r, &cols)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalityRow {
    pub k: usize,
    pub construction: DependenceCount,
    pub minimum: SearchResult,
}

impl OptimalityRow {
    pub fn attained(&self) -> bool {
        match &self.minimum.value {
            SearchValue::MinDependence { value, .. } => *value == self.construction,
            SearchValue::MaxSize { .. } => false,
        }
    }
}

/// Compares the projective multiset with `n` copies of each point against
/// the exhaustive minimum at its size, for every `k`.
pub fn verify_projective_optimality<R: PartitionRunner>(q: u32, r: usize, n: usize, cfg: &SearchConfig, runner: &R) -> Result<Vec<OptimalityRow>, SearchError> {
    let construction = Matroid::from_matrix(projective_multiset(q, r, n, cfg)?)?;
    let s = construction.size();
    (0..=r)
        .map(|k| {
            let minimum = search_min_dependence(q, r, k, s, cfg, runner)?;
            Ok(OptimalityRow { k, construction: construction.k_dependence(k)?, minimum })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub q: u32,
    pub r: usize,
    pub k: usize,
    /// `D_q(r, k, s)` for `s = r..=s_max`.
    pub table: Vec<SearchResult>,
}

impl MonotonicityReport {
    pub fn values(&self) -> impl Iterator<Item = (usize, BigRational)> + '_ {
        self.table.iter().filter_map(|res| match &res.value {
            SearchValue::MinDependence { s, value } => Some((*s, value.ratio())),
            SearchValue::MaxSize { .. } => None,
        })
    }

    /// True iff `D(s) <= D(s + 1)` throughout the table.
    pub fn non_decreasing(&self) -> bool {
        let vals: Vec<BigRational> = self.values().map(|(_, v)| v).collect();
        vals.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Tabulates `D_q(r, k, s)` for `s = r..=s_max`.
pub fn verify_monotonicity<R: PartitionRunner>(q: u32, r: usize, k: usize, s_max: usize, cfg: &SearchConfig, runner: &R) -> Result<MonotonicityReport, SearchError> {
    let table = (r..=s_max).map(|s| search_min_dependence(q, r, k, s, cfg, runner)).collect::<Result<Vec<_>, _>>()?;
    Ok(MonotonicityReport { q, r, k, table })
}

/// Exact rational helper for callers building thresholds.
pub fn rational(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `d` as a count over `C(s, m)` when it is exactly representable.
pub fn exact_count(d: &BigRational, s: usize, m: usize) -> Option<u64> {
    let total = binomial_u64(s, m)?;
    let scaled = d * BigRational::from_integer(BigInt::from(total));
    scaled.is_integer().then(|| scaled.to_integer().to_u64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::encode_vector;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    fn d_value(res: &SearchResult) -> BigRational {
        match &res.value {
            SearchValue::MinDependence { value, .. } => value.ratio(),
            _ => panic!("not a D result"),
        }
    }

    fn ind_value(res: &SearchResult) -> usize {
        match &res.value {
            SearchValue::MaxSize { value, .. } => *value,
            _ => panic!("not an Ind result"),
        }
    }

    #[test]
    fn min_dependence_examples() {
        let res = search_min_dependence(2, 2, 0, 3, &cfg(), &Sequential).unwrap();
        assert_eq!(d_value(&res), rational(0, 1));
        assert_eq!(res.witness.encoded_columns(), vec![1, 2, 3]);
        assert_eq!(d_value(&search_min_dependence(2, 2, 0, 4, &cfg(), &Sequential).unwrap()), rational(1, 6));
        assert_eq!(d_value(&search_min_dependence(2, 2, 0, 5, &cfg(), &Sequential).unwrap()), rational(1, 5));
        assert_eq!(d_value(&search_min_dependence(2, 2, 0, 6, &cfg(), &Sequential).unwrap()), rational(1, 5));
        assert_eq!(
            search_min_dependence(2, 2, 0, 1, &cfg(), &Sequential),
            Err(SearchError::NoFullRankMatrix { r: 2, s: 1 })
        );
    }

    #[test]
    fn ind_examples() {
        let zero = rational(0, 1);
        let res = search_ind(2, 2, 0, &zero, &cfg(), &Sequential).unwrap();
        assert_eq!(ind_value(&res), 3);
        assert_eq!(res.witness.encoded_columns(), vec![1, 2, 3]);
        let res = search_ind(2, 3, 0, &zero, &cfg(), &Sequential).unwrap();
        assert_eq!(ind_value(&res), 4);
        assert_eq!(res.witness.encoded_columns(), vec![1, 2, 4, 7]);
        assert_eq!(ind_value(&search_ind(3, 2, 0, &zero, &cfg(), &Sequential).unwrap()), 4);
        assert!(matches!(search_ind(2, 3, 2, &zero, &cfg(), &Sequential), Err(SearchError::Unbounded { .. })));
        assert!(matches!(search_ind(2, 3, 0, &rational(1, 1), &cfg(), &Sequential), Err(SearchError::Unbounded { .. })));
        assert!(matches!(search_ind(2, 3, 0, &rational(3, 2), &cfg(), &Sequential), Err(SearchError::DOutOfRange(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let tight = SearchConfig { node_budget: 5, ..cfg() };
        assert!(matches!(search_ind(2, 3, 0, &rational(0, 1), &tight, &Sequential), Err(SearchError::BudgetExceeded { .. })));
    }

    #[test]
    fn projective_multiset_examples() {
        let m = projective_multiset(2, 2, 1, &cfg()).unwrap();
        assert_eq!(m.encoded_columns(), vec![1, 2, 3]);
        let m = projective_multiset(2, 2, 2, &cfg()).unwrap();
        assert_eq!(m.cols(), 6);
        let d = Matroid::from_matrix(m).unwrap().k_dependence(0).unwrap();
        assert_eq!(d, DependenceCount::new(3u32, 15u32));
        assert_eq!(projective_multiset(3, 2, 1, &cfg()).unwrap().cols(), 4);
        assert_eq!(projective_multiset(2, 3, 1, &cfg()).unwrap().cols(), 7);
        assert!(projective_multiset(2, 2, 0, &cfg()).is_err());
    }

    #[test]
    fn optimality_small() {
        for (q, r, n) in [(2, 2, 1), (2, 2, 2)] {
            for row in verify_projective_optimality(q, r, n, &cfg(), &Sequential).unwrap() {
                assert!(row.attained(), "q={q} r={r} n={n} k={}", row.k);
            }
        }
    }

    #[test]
    fn monotonicity_small() {
        let rep = verify_monotonicity(2, 2, 0, 6, &cfg(), &Sequential).unwrap();
        let vals: Vec<BigRational> = rep.values().map(|(_, v)| v).collect();
        assert_eq!(vals, vec![rational(0, 1), rational(0, 1), rational(1, 6), rational(1, 5), rational(1, 5)]);
        assert!(rep.non_decreasing());
        assert!(verify_monotonicity(2, 2, 0, 1, &cfg(), &Sequential).unwrap().table.is_empty());
    }

    /// Minimum over every r x s matrix (zero columns included), by direct
    /// enumeration of all column tuples.
    fn min_over_all_tuples(q: u32, r: usize, k: usize, s: usize) -> BigRational {
        let f = Field::new(q).unwrap();
        let space = (q as u64).pow(r as u32);
        let mut best: Option<BigRational> = None;
        let mut codes = vec![0u64; s];
        loop {
            let m = GfMatrix::from_encoded_columns(&f, r, &codes).unwrap();
            if m.rank() == r {
                let d = Matroid::from_matrix(m).unwrap().k_dependence(k).unwrap().ratio();
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
            let mut i = 0;
            while i < s {
                codes[i] += 1;
                if codes[i] < space {
                    break;
                }
                codes[i] = 0;
                i += 1;
            }
            if i == s {
                break;
            }
        }
        best.unwrap()
    }

    #[test]
    fn scaling_classes_lose_nothing() {
        for r in 2..=3 {
            for s in r..=5 {
                if r == 3 && s == 5 {
                    continue; // 2^15 tuples; exercised in the integration tests
                }
                for k in 0..=r {
                    let res = search_min_dependence(2, r, k, s, &cfg(), &Sequential).unwrap();
                    assert_eq!(d_value(&res), min_over_all_tuples(2, r, k, s), "r={r} s={s} k={k}");
                }
            }
        }
        assert_eq!(
            d_value(&search_min_dependence(3, 2, 0, 3, &cfg(), &Sequential).unwrap()),
            min_over_all_tuples(3, 2, 0, 3)
        );
    }

    #[test]
    fn witnesses_are_canonical_points() {
        let f = Field::new(3).unwrap();
        let res = search_min_dependence(3, 2, 0, 6, &cfg(), &Sequential).unwrap();
        assert!(res.verify());
        for j in 0..res.witness.cols() {
            let v = res.witness.column(j);
            assert_eq!(v.iter().find(|e| !e.is_zero()).map(|e| e.value()), Some(1));
            assert!(encode_vector(&f, v) > 0);
        }
    }

    #[test]
    fn ind_and_d_are_consistent() {
        // Ind_q(r,k,d) < s implies D_q(r,k,s') > d for every s' >= s
        let zero = rational(0, 1);
        let tenth = rational(1, 10);
        let cases = [(2u32, 2usize, 0usize, &zero, 3usize), (2, 2, 0, &tenth, 3), (2, 3, 0, &zero, 4), (2, 3, 0, &tenth, 4), (2, 3, 1, &zero, 7), (3, 2, 0, &zero, 4), (3, 2, 0, &tenth, 5)];
        for (q, r, k, d, expected) in cases {
            let d = d.clone();
            {
                let res = search_ind(q, r, k, &d, &cfg(), &Sequential).unwrap();
                let ind = ind_value(&res);
                assert_eq!(ind, expected, "Ind_{q}({r},{k},{d})");
                for s in ind + 1..=ind + 3 {
                    let dm = d_value(&search_min_dependence(q, r, k, s, &cfg(), &Sequential).unwrap());
                    assert!(dm > d, "q={q} r={r} k={k} d={d} s={s}");
                }
            }
        }
    }

    #[test]
    fn threshold_helpers() {
        assert_eq!(floor_threshold(&rational(1, 6), 10), 1);
        assert_eq!(floor_threshold(&rational(0, 1), 10), 0);
        assert_eq!(exact_count(&rational(1, 5), 6, 2), Some(3));
        assert_eq!(exact_count(&rational(1, 7), 6, 2), None);
    }
}
