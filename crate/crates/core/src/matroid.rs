//! Matroids given by a linear representation or an explicit basis family,
//! and their exact k-dependence profiles.
//!
//! The k-dependence `d(M, k)` is the fraction of `(r - k)`-element subsets of
//! the ground set that are dependent, `r` being the rank of `M`. Subsets are
//! subsets of column *indices*: repeated columns are distinct elements that
//! form a dependent pair.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{Echelon, GfMatrix, LinalgError};
use crate::subset::{self, binomial, BinomialTable};

/// Largest ground set on which the exchange axiom is checked by default.
pub const DEFAULT_EXCHANGE_CHECK_LIMIT: usize = 12;

/// Default cap on the total number of subsets examined by a profile.
pub const DEFAULT_PROFILE_BUDGET: u64 = 1_000_000_000;

/// Explicit basis families are stored as bitmasks.
pub const MAX_BASES_GROUND_SET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("the ground set is empty")]
    EmptyGroundSet,
    #[error("no bases given")]
    NoBases,
    #[error("basis {basis} has {found} elements, expected {expected}")]
    BasisSizeMismatch { basis: usize, expected: usize, found: usize },
    #[error("basis {basis} mentions element {element} outside [0, {s})")]
    ElementOutOfRange { basis: usize, element: usize, s: usize },
    #[error("basis {basis} repeats element {element}")]
    RepeatedElement { basis: usize, element: usize },
    #[error("exchange axiom fails: removing {element} from {first:?} admits no replacement from {second:?}")]
    ExchangeAxiomViolated { first: Vec<usize>, second: Vec<usize>, element: usize },
    #[error("ground set of {s} elements exceeds the exchange-check limit {limit}; mark the input trusted to skip validation")]
    ValidationLimit { s: usize, limit: usize },
    #[error("explicit basis families support at most {MAX_BASES_GROUND_SET} elements, got {0}")]
    GroundSetTooLarge(usize),
    #[error("k = {k} outside [0, {r}]")]
    KOutOfRange { k: usize, r: usize },
    #[error("subset size {m} exceeds the ground set size {s}")]
    SubsetTooLarge { m: usize, s: usize },
    #[error("enumerating subsets for k = {k} exceeds the budget of {budget} subsets")]
    BudgetExceeded { k: usize, budget: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Where independence judgments come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Linear(GfMatrix),
    Bases(BasisFamily),
}

/// A basis family over a ground set of at most 64 elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisFamily {
    masks: Vec<u64>,
}

impl BasisFamily {
    pub fn contains_independent(&self, mask: u64) -> bool {
        self.masks.iter().any(|&b| b & mask == mask)
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    s: usize,
    r: usize,
    source: Source,
}

/// Options for [`Matroid::from_bases_with`].
#[derive(Clone, Copy, Debug)]
pub struct BasesOptions {
    pub exchange_check_limit: usize,
    /// Skip the exchange-axiom check entirely.
    pub trusted: bool,
}

impl Default for BasesOptions {
    fn default() -> Self {
        BasesOptions { exchange_check_limit: DEFAULT_EXCHANGE_CHECK_LIMIT, trusted: false }
    }
}

impl Matroid {
    /// The column matroid of `m`. Its rank is the rank of the matrix, which
    /// need not equal the number of rows.
    pub fn from_matrix(m: GfMatrix) -> Result<Matroid, MatroidError> {
        if m.cols() == 0 {
            return Err(MatroidError::EmptyGroundSet);
        }
        Ok(Matroid { s: m.cols(), r: m.rank(), source: Source::Linear(m) })
    }

    pub fn from_bases(s: usize, r: usize, bases: &[Vec<usize>]) -> Result<Matroid, MatroidError> {
        Matroid::from_bases_with(s, r, bases, BasesOptions::default())
    }

    pub fn from_bases_with(s: usize, r: usize, bases: &[Vec<usize>], opts: BasesOptions) -> Result<Matroid, MatroidError> {
        if s > MAX_BASES_GROUND_SET {
            return Err(MatroidError::GroundSetTooLarge(s));
        }
        if bases.is_empty() {
            return Err(MatroidError::NoBases);
        }
        let mut masks = Vec::with_capacity(bases.len());
        for (i, b) in bases.iter().enumerate() {
            let mut mask = 0u64;
            for &e in b {
                if e >= s {
                    return Err(MatroidError::ElementOutOfRange { basis: i, element: e, s });
                }
                if mask >> e & 1 == 1 {
                    return Err(MatroidError::RepeatedElement { basis: i, element: e });
                }
                mask |= 1 << e;
            }
            if b.len() != r {
                return Err(MatroidError::BasisSizeMismatch { basis: i, expected: r, found: b.len() });
            }
            masks.push(mask);
        }
        masks.sort_unstable();
        masks.dedup();
        if !opts.trusted {
            if s > opts.exchange_check_limit {
                return Err(MatroidError::ValidationLimit { s, limit: opts.exchange_check_limit });
            }
            check_exchange(&masks)?;
        }
        Ok(Matroid { s, r, source: Source::Bases(BasisFamily { masks }) })
    }

    /// Ground set size `s(M)`.
    pub fn size(&self) -> usize {
        self.s
    }

    /// Rank `r(M)`.
    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn matrix(&self) -> Option<&GfMatrix> {
        match &self.source {
            Source::Linear(m) => Some(m),
            Source::Bases(_) => None,
        }
    }

    pub fn is_independent(&self, subset: &[usize]) -> Result<bool, MatroidError> {
        if let Some(&index) = subset.iter().find(|&&e| e >= self.s) {
            return Err(LinalgError::IndexOutOfRange { index, s: self.s }.into());
        }
        Ok(self.checker().is_independent(subset))
    }

    /// A reusable independence tester with its own scratch space.
    pub fn checker(&self) -> IndependenceChecker<'_> {
        let state = match &self.source {
            Source::Linear(m) => CheckerState::Linear(m, Echelon::new(m.field(), m.rows())),
            Source::Bases(b) => CheckerState::Bases(b),
        };
        IndependenceChecker { state }
    }

    /// All bases, as sorted index lists in colex order.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut checker = self.checker();
        let mut cur: Vec<usize> = (0..self.r).collect();
        loop {
            if checker.is_independent(&cur) {
                out.push(cur.clone());
            }
            if !subset::next_colex(self.s, &mut cur) {
                break;
            }
        }
        out
    }

    /// Number of `m`-subsets, if it fits in a `u64`.
    pub fn subset_count(&self, m: usize) -> Option<u64> {
        subset::binomial_u64(self.s, m)
    }

    /// Counts dependent `m`-subsets whose colex ranks lie in `range`.
    ///
    /// `m` is free here: callers evaluating random matrices against their
    /// ambient dimension pass `m = rows - k` rather than `rank - k`.
    pub fn count_dependent_in(&self, m: usize, range: Range<u64>) -> u64 {
        if range.is_empty() {
            return 0;
        }
        let table = BinomialTable::new(self.s + 1, m);
        let mut cur = Vec::new();
        subset::unrank_u64(self.s, m, range.start, &table, &mut cur);
        let mut checker = self.checker();
        let mut dependent = 0;
        for _ in range {
            dependent += !checker.is_independent(&cur) as u64;
            subset::next_colex(self.s, &mut cur);
        }
        dependent
    }

    /// Exact count of dependent `m`-subsets, enumerating at most `budget`.
    pub fn count_dependent(&self, m: usize, budget: u64) -> Result<DependenceCount, MatroidError> {
        if m > self.s {
            return Err(MatroidError::SubsetTooLarge { m, s: self.s });
        }
        let k = self.r.saturating_sub(m);
        let total = self.subset_count(m).filter(|&t| t <= budget).ok_or(MatroidError::BudgetExceeded { k, budget })?;
        Ok(DependenceCount::new(self.count_dependent_in(m, 0..total), total))
    }

    /// `d(M, k)` as an exact count.
    pub fn k_dependence(&self, k: usize) -> Result<DependenceCount, MatroidError> {
        if k > self.r {
            return Err(MatroidError::KOutOfRange { k, r: self.r });
        }
        self.count_dependent(self.r - k, u64::MAX).map_err(|e| match e {
            MatroidError::BudgetExceeded { budget, .. } => MatroidError::BudgetExceeded { k, budget },
            e => e,
        })
    }

    pub fn dependence_profile(&self) -> Result<DependenceProfile, MatroidError> {
        self.dependence_profile_with_budget(DEFAULT_PROFILE_BUDGET)
    }

    /// All `d(M, k)` for `k = 0..=r`, enumerating at most `budget` subsets
    /// in total.
    pub fn dependence_profile_with_budget(&self, budget: u64) -> Result<DependenceProfile, MatroidError> {
        self.check_profile_budget(budget)?;
        let values = (0..=self.r).map(|k| self.k_dependence(k)).collect::<Result<Vec<_>, _>>()?;
        Ok(DependenceProfile::from_counts(self.r, self.s, values))
    }

    /// Fails with the first `k` at which the running subset total passes
    /// `budget`.
    pub fn check_profile_budget(&self, budget: u64) -> Result<(), MatroidError> {
        let mut used = 0u64;
        for k in 0..=self.r {
            used = self
                .subset_count(self.r - k)
                .and_then(|n| used.checked_add(n))
                .filter(|&u| u <= budget)
                .ok_or(MatroidError::BudgetExceeded { k, budget })?;
        }
        Ok(())
    }
}

pub struct IndependenceChecker<'a> {
    state: CheckerState<'a>,
}

#[allow(clippy::large_enum_variant)]
enum CheckerState<'a> {
    Linear(&'a GfMatrix, Echelon),
    Bases(&'a BasisFamily),
}

impl IndependenceChecker<'_> {
    /// Indices must be valid; repeated indices are dependent.
    #[inline]
    pub fn is_independent(&mut self, subset: &[usize]) -> bool {
        match &mut self.state {
            CheckerState::Linear(m, ech) => ech.all_independent(m, subset),
            CheckerState::Bases(b) => {
                let mut mask = 0u64;
                for &e in subset {
                    if mask >> e & 1 == 1 {
                        return false;
                    }
                    mask |= 1 << e;
                }
                b.contains_independent(mask)
            }
        }
    }
}

fn check_exchange(masks: &[u64]) -> Result<(), MatroidError> {
    let to_list = |m: u64| (0..64).filter(|i| m >> i & 1 == 1).collect::<Vec<usize>>();
    for &b1 in masks {
        for &b2 in masks {
            let mut only_first = b1 & !b2;
            while only_first != 0 {
                let x = only_first.trailing_zeros();
                only_first &= only_first - 1;
                let without = b1 & !(1 << x);
                let mut candidates = b2 & !b1;
                let mut found = false;
                while candidates != 0 {
                    let y = candidates.trailing_zeros();
                    candidates &= candidates - 1;
                    if masks.binary_search(&(without | 1 << y)).is_ok() {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Err(MatroidError::ExchangeAxiomViolated {
                        first: to_list(b1),
                        second: to_list(b2),
                        element: x as usize,
                    });
                }
            }
        }
    }
    Ok(())
}

/// An exact proportion `dependent / total`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DependenceCount {
    pub dependent: BigUint,
    pub total: BigUint,
}

impl DependenceCount {
    pub fn new(dependent: impl Into<BigUint>, total: impl Into<BigUint>) -> DependenceCount {
        DependenceCount { dependent: dependent.into(), total: total.into() }
    }

    pub fn is_zero(&self) -> bool {
        self.dependent.is_zero()
    }

    /// Reduced rational value.
    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.dependent.clone()), BigInt::from(self.total.clone()))
    }

    pub fn to_f64(&self) -> f64 {
        self.ratio().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for DependenceCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.dependent, self.total)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProfileViolation {
    #[error("d(M,{k}) has {dependent} dependent subsets out of {total}")]
    NotAProportion { k: usize, dependent: BigUint, total: BigUint },
    #[error("total at k = {k} is {found}, expected C(s, r-k) = {expected}")]
    WrongTotal { k: usize, found: BigUint, expected: BigUint },
    #[error("d(M,{zero_at}) = 0 but d(M,{k}) > 0")]
    ZeroPropagation { zero_at: usize, k: usize },
    #[error("profile has {found} entries, expected r + 1 = {expected}")]
    WrongLength { found: usize, expected: usize },
}

/// `d(M, k)` for `k = 0..=r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceProfile {
    r: usize,
    s: usize,
    values: Vec<DependenceCount>,
}

impl DependenceProfile {
    pub fn from_counts(r: usize, s: usize, values: Vec<DependenceCount>) -> DependenceProfile {
        let profile = DependenceProfile { r, s, values };
        debug_assert_eq!(profile.check(), Ok(()));
        profile
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn size(&self) -> usize {
        self.s
    }

    pub fn values(&self) -> &[DependenceCount] {
        &self.values
    }

    pub fn get(&self, k: usize) -> Option<&DependenceCount> {
        self.values.get(k)
    }

    /// Checks bounds, totals and zero propagation.
    pub fn check(&self) -> Result<(), ProfileViolation> {
        if self.values.len() != self.r + 1 {
            return Err(ProfileViolation::WrongLength { found: self.values.len(), expected: self.r + 1 });
        }
        let mut zero_at = None;
        for (k, v) in self.values.iter().enumerate() {
            if v.dependent > v.total || v.total.is_zero() {
                return Err(ProfileViolation::NotAProportion {
                    k,
                    dependent: v.dependent.clone(),
                    total: v.total.clone(),
                });
            }
            let expected = binomial(self.s, self.r - k);
            if v.total != expected {
                return Err(ProfileViolation::WrongTotal { k, found: v.total.clone(), expected });
            }
            match zero_at {
                Some(z) if !v.is_zero() => return Err(ProfileViolation::ZeroPropagation { zero_at: z, k }),
                None if v.is_zero() => zero_at = Some(k),
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldElement};
    use alloc::vec;
    use proptest::prelude::*;

    fn matroid(q: u32, cols: &[&[u32]]) -> Matroid {
        let f = Field::new(q).unwrap();
        let cols: Vec<Vec<u32>> = cols.iter().map(|c| c.to_vec()).collect();
        Matroid::from_matrix(GfMatrix::from_columns(&f, cols[0].len(), &cols).unwrap()).unwrap()
    }

    /// Direct loop over every subset by bitmask, calling matrix rank on each.
    fn oracle_dependence(m: &GfMatrix, size: usize) -> (u64, u64) {
        let s = m.cols();
        let (mut dep, mut total) = (0, 0);
        for mask in 0u32..(1 << s) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let idx: Vec<usize> = (0..s).filter(|j| mask >> j & 1 == 1).collect();
            total += 1;
            if m.select_columns(&idx).unwrap().rank() < size {
                dep += 1;
            }
        }
        (dep, total)
    }

    #[test]
    fn from_matrix_examples() {
        let id = matroid(2, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!((id.rank(), id.size()), (3, 3));
        let m = matroid(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 0]]);
        assert_eq!((m.rank(), m.size()), (2, 4));
        let loopy = matroid(2, &[&[1, 0], &[0, 0]]);
        assert_eq!((loopy.rank(), loopy.size()), (1, 2));
        assert!(!loopy.is_independent(&[1]).unwrap());

        let f = Field::new(2).unwrap();
        let empty = GfMatrix::from_columns(&f, 2, &[]).unwrap();
        assert_eq!(Matroid::from_matrix(empty), Err(MatroidError::EmptyGroundSet));
    }

    #[test]
    fn k_dependence_examples() {
        let u24 = matroid(5, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]]);
        assert!(u24.k_dependence(0).unwrap().is_zero());

        let m = matroid(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 0]]);
        assert_eq!(m.k_dependence(0).unwrap(), DependenceCount::new(1u32, 6u32));
        assert_eq!(m.k_dependence(2).unwrap(), DependenceCount::new(0u32, 1u32));
        assert_eq!(m.k_dependence(3), Err(MatroidError::KOutOfRange { k: 3, r: 2 }));
    }

    #[test]
    fn profile_examples() {
        let id = matroid(2, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let p = id.dependence_profile().unwrap();
        assert_eq!(p.values().len(), 4);
        assert!(p.values().iter().all(DependenceCount::is_zero));

        let m = matroid(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 0]]);
        let p = m.dependence_profile().unwrap();
        let shown: Vec<_> = p.values().iter().map(|v| alloc::format!("{v}")).collect();
        assert_eq!(shown, vec!["1/6", "0/4", "0/1"]);

        let loopy = matroid(2, &[&[1, 0], &[0, 0]]);
        let p = loopy.dependence_profile().unwrap();
        assert_eq!(p.values(), &[DependenceCount::new(1u32, 2u32), DependenceCount::new(0u32, 1u32)]);
    }

    #[test]
    fn profile_budget() {
        let m = matroid(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 0]]);
        // totals are 6, 4, 1
        assert!(m.dependence_profile_with_budget(11).is_ok());
        assert_eq!(m.dependence_profile_with_budget(10), Err(MatroidError::BudgetExceeded { k: 2, budget: 10 }));
        assert_eq!(m.dependence_profile_with_budget(5), Err(MatroidError::BudgetExceeded { k: 0, budget: 5 }));
    }

    #[test]
    fn from_bases_examples() {
        let pairs: Vec<Vec<usize>> = vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]];
        let u24 = Matroid::from_bases(4, 2, &pairs).unwrap();
        assert!(u24.dependence_profile().unwrap().values()[0].is_zero());

        let parallel = Matroid::from_bases(3, 2, &[vec![0, 1], vec![0, 2]]).unwrap();
        assert!(!parallel.is_independent(&[1, 2]).unwrap());
        assert_eq!(parallel.k_dependence(0).unwrap(), DependenceCount::new(1u32, 3u32));

        // element 1 is a coloop and 0, 2 are parallel
        assert!(Matroid::from_bases(3, 2, &[vec![0, 1], vec![1, 2]]).is_ok());

        assert_eq!(
            Matroid::from_bases(4, 2, &[vec![0, 1], vec![2, 3]]),
            Err(MatroidError::ExchangeAxiomViolated { first: vec![0, 1], second: vec![2, 3], element: 0 })
        );
        assert!(matches!(
            Matroid::from_bases(3, 2, &[vec![0, 1], vec![2]]),
            Err(MatroidError::BasisSizeMismatch { basis: 1, expected: 2, found: 1 })
        ));
        assert!(matches!(Matroid::from_bases(3, 2, &[vec![0, 3]]), Err(MatroidError::ElementOutOfRange { .. })));
        assert!(matches!(Matroid::from_bases(3, 2, &[vec![1, 1]]), Err(MatroidError::RepeatedElement { .. })));
        assert_eq!(Matroid::from_bases(3, 2, &[]), Err(MatroidError::NoBases));
    }

    #[test]
    fn exchange_check_limit() {
        let bases: Vec<Vec<usize>> = vec![(0..3).collect()];
        assert_eq!(Matroid::from_bases(13, 3, &bases), Err(MatroidError::ValidationLimit { s: 13, limit: 12 }));
        let trusted = BasesOptions { trusted: true, ..Default::default() };
        assert!(Matroid::from_bases_with(13, 3, &bases, trusted).is_ok());
        assert!(Matroid::from_bases(65, 3, &bases).is_err());
    }

    /// Exhaustive exchange-axiom oracle written against index lists.
    fn oracle_exchange_ok(bases: &[Vec<usize>]) -> bool {
        let has = |b: &Vec<usize>| bases.iter().any(|c| {
            let mut c = c.clone();
            let mut b = b.clone();
            c.sort();
            b.sort();
            c == b
        });
        bases.iter().all(|b1| {
            bases.iter().all(|b2| {
                b1.iter().filter(|x| !b2.contains(x)).all(|&x| {
                    b2.iter().filter(|y| !b1.contains(y)).any(|&y| {
                        let mut swapped: Vec<usize> = b1.iter().copied().filter(|&e| e != x).collect();
                        swapped.push(y);
                        has(&swapped)
                    })
                })
            })
        })
    }

    #[test]
    fn exchange_check_matches_oracle_on_all_families_of_pairs_of_four() {
        let pairs: Vec<Vec<usize>> = vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]];
        for family in 1u32..64 {
            let bases: Vec<Vec<usize>> = (0..6).filter(|i| family >> i & 1 == 1).map(|i| pairs[i].clone()).collect();
            assert_eq!(Matroid::from_bases(4, 2, &bases).is_ok(), oracle_exchange_ok(&bases), "{bases:?}");
        }
    }

    #[test]
    fn bases_of_linear_matroid() {
        let m = matroid(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 0]]);
        assert_eq!(m.bases(), vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    fn arb_matrix(qs: Vec<u32>) -> impl Strategy<Value = GfMatrix> {
        (prop::sample::select(qs), 1usize..=3, 1usize..=8)
            .prop_flat_map(|(q, r, s)| (Just(q), Just(r), prop::collection::vec(prop::collection::vec(0..q, r), s)))
            .prop_map(|(q, r, cols)| GfMatrix::from_columns(&Field::new(q).unwrap(), r, &cols).unwrap())
    }

    proptest! {
        #[test]
        fn k_dependence_matches_direct_loop(m in arb_matrix(vec![2, 3])) {
            let matroid = Matroid::from_matrix(m.clone()).unwrap();
            for k in 0..=matroid.rank() {
                let (dep, total) = oracle_dependence(&m, matroid.rank() - k);
                prop_assert_eq!(matroid.k_dependence(k).unwrap(), DependenceCount::new(dep, total));
            }
        }

        #[test]
        fn profiles_satisfy_invariants(m in arb_matrix(vec![2, 3, 4, 5])) {
            let p = Matroid::from_matrix(m).unwrap().dependence_profile().unwrap();
            prop_assert_eq!(p.check(), Ok(()));
        }

        #[test]
        fn profile_invariant_under_permutation_and_scaling(m in arb_matrix(vec![2, 3, 4, 5]), seed in any::<u64>()) {
            let s = m.cols();
            let q = m.field().order() as u64;
            let mut perm: Vec<usize> = (0..s).rev().collect();
            perm.rotate_left((seed % s as u64) as usize);
            let mut other = m.select_columns(&perm).unwrap();
            for j in 0..s {
                let c = FieldElement(1 + ((seed >> (2 * j)) % (q - 1)) as u8);
                other = other.scale_column(j, c).unwrap();
            }
            let a = Matroid::from_matrix(m).unwrap().dependence_profile().unwrap();
            let b = Matroid::from_matrix(other).unwrap().dependence_profile().unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn bases_round_trip_preserves_profile(m in arb_matrix(vec![2, 3])) {
            let linear = Matroid::from_matrix(m).unwrap();
            let abstracted = Matroid::from_bases(linear.size(), linear.rank(), &linear.bases()).unwrap();
            prop_assert_eq!(linear.dependence_profile().unwrap(), abstracted.dependence_profile().unwrap());
        }

        #[test]
        fn sharded_counts_add_up(m in arb_matrix(vec![2, 3]), cut in any::<u64>()) {
            let matroid = Matroid::from_matrix(m).unwrap();
            let size = matroid.rank();
            let total = matroid.subset_count(size).unwrap();
            let mid = cut % (total + 1);
            let whole = matroid.count_dependent_in(size, 0..total);
            let split = matroid.count_dependent_in(size, 0..mid) + matroid.count_dependent_in(size, mid..total);
            prop_assert_eq!(whole, split);
        }
    }
}
