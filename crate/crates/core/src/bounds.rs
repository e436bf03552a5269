//! Closed-form representability bounds, the independence probability of
//! random nonzero vectors, Markov-type bounds for random matrices, and the
//! non-representability certifier.
//!
//! Conventions used throughout:
//!
//! * `Ind_q(r, k, d)` is the largest `s` for which some full-rank `r x s`
//!   matrix over `F_q` has k-dependence at most `d`, and `D_q(r, k, s)` the
//!   least k-dependence over full-rank `r x s` matrices.
//! * The independence probability of `r - k` uniform nonzero vectors of
//!   `F_q^r` is the product of `(q^r - q^i) / (q^r - 1)` over
//!   `i = 0..r-k-1`, one factor per drawn vector.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::field::prime_power;
use crate::matroid::{DependenceCount, DependenceProfile, Matroid, MatroidError};
use crate::table::{ExtremalTable, Provenance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("k = {k} outside [{min}, {max}] for r = {r}")]
    KOutOfRange { k: usize, r: usize, min: usize, max: usize },
    #[error("probability {0} outside (0, 1]")]
    POutOfRange(BigRational),
    #[error("dependence threshold {0} outside (0, 1]")]
    DOutOfRange(BigRational),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

fn check_q(q: u32) -> Result<(), BoundsError> {
    prime_power(q).map(|_| ()).ok_or(BoundsError::NotPrimePower(q))
}

fn check_k(r: usize, k: usize) -> Result<(), BoundsError> {
    if k > r {
        Err(BoundsError::KOutOfRange { k, r, min: 0, max: r })
    } else {
        Ok(())
    }
}

/// The closed-form branch of [`certify_profile`] requires `r - k >= 3`.
pub const CLOSED_FORM_MIN_CODIMENSION: usize = 3;

/// `q^{k+1} (r - k - 1)`, proposed as an upper bound on the size of any
/// k-independent rank-`r` matroid representable over `F_q`. Requires
/// `k <= r - 2`.
///
/// At `k = r - 2` the value is *not* an upper bound: every two distinct
/// projective points are independent, so `Ind_q(r, r-2, 0)` is
/// `(q^r - 1)/(q - 1) > q^{r-1}`. The certifier therefore only uses this
/// bound for `k <= r - 3`; see [`CLOSED_FORM_MIN_CODIMENSION`].
pub fn ind_upper_zero_dep(q: u32, r: usize, k: usize) -> Result<BigUint, BoundsError> {
    check_q(q)?;
    if k + 2 > r {
        return Err(BoundsError::KOutOfRange { k, r, min: 0, max: r.saturating_sub(2) });
    }
    Ok(Pow::pow(BigUint::from(q), k as u32 + 1) * BigUint::from(r - k - 1))
}

/// Probability that `r - k` independent uniform draws from the nonzero
/// vectors of `F_q^r` are linearly independent.
pub fn pi_independent(q: u32, r: usize, k: usize) -> Result<BigRational, BoundsError> {
    check_q(q)?;
    check_k(r, k)?;
    let qr: BigInt = Pow::pow(BigInt::from(q), r as u32);
    let denom = &qr - BigInt::one();
    let mut acc = BigRational::one();
    let mut qi = BigInt::one();
    for _ in 0..r - k {
        acc *= BigRational::new(&qr - &qi, denom.clone());
        qi *= q;
    }
    Ok(acc)
}

/// `1 - pi_independent(q, r, k)`: the mean k-dependence (measured against
/// `r`) of a random `r x s` matrix with nonzero columns, for any
/// `s >= r - k`, and hence an upper bound on `D_q(r, k, s)`.
pub fn mean_dependence(q: u32, r: usize, k: usize) -> Result<BigRational, BoundsError> {
    Ok(BigRational::one() - pi_independent(q, r, k)?)
}

/// A bound value that is kept unclamped; `vacuous` marks values `>= 1`,
/// which say nothing about a proportion or probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovBound {
    pub value: BigRational,
    pub vacuous: bool,
}

impl MarkovBound {
    fn new(value: BigRational) -> MarkovBound {
        let vacuous = value >= BigRational::one();
        MarkovBound { value, vacuous }
    }
}

fn in_unit_interval(x: &BigRational) -> bool {
    *x > BigRational::zero() && *x <= BigRational::one()
}

/// `(1 - pi) / p`: with probability at least `1 - p` a random `r x s`
/// matrix has k-dependence at most this value.
pub fn markov_dependence_bound(q: u32, r: usize, k: usize, p: &BigRational) -> Result<MarkovBound, BoundsError> {
    if !in_unit_interval(p) {
        return Err(BoundsError::POutOfRange(p.clone()));
    }
    Ok(MarkovBound::new(mean_dependence(q, r, k)? / p))
}

/// `(1 - pi) / d`: the probability that a random `r x s` matrix has
/// k-dependence above `d` is at most this value. Independent of `s`.
pub fn markov_probability_bound(q: u32, r: usize, k: usize, d: &BigRational) -> Result<MarkovBound, BoundsError> {
    if !in_unit_interval(d) {
        return Err(BoundsError::DOutOfRange(d.clone()));
    }
    Ok(MarkovBound::new(mean_dependence(q, r, k)? / d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    NotRepresentable,
    Inconclusive,
}

/// The inequality that fired.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trigger {
    /// `s(M) > Ind_q(r, k, d_bound) >= Ind_q(r, k, d(M,k))`, where
    /// `d_bound >= d(M,k)` and `ind` is either the closed form
    /// `q^{k+1}(r-k-1)` (with `d_bound = 0`) or a tabulated exact value.
    IndBound { k: usize, d: BigRational, d_bound: BigRational, ind: BigUint, s: usize },
    /// `d(M,k) < D_q(r, k, s(M))`, the right side read from a table.
    DTable { k: usize, d: BigRational, d_min: BigRational, s: usize },
}

impl Trigger {
    pub fn k(&self) -> usize {
        match *self {
            Trigger::IndBound { k, .. } | Trigger::DTable { k, .. } => k,
        }
    }
}

/// Outcome of [`certify_nonrepresentable`].
///
/// The underlying obstruction: if `s(M) > Ind_q(r(M), k, d(M,k))` or
/// `d(M,k) < D_q(r(M), k, s(M))` for some `k`, then `M` is not
/// representable over `F_q`. (It is sometimes written with non-strict
/// inequalities, `Ind_q(...) <= s(M)` and `D_q(...) <= d(M,k)`; those would
/// reject matroids attaining the extremal values, which are representable.)
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub q: u32,
    pub r: usize,
    pub s: usize,
    pub profile: DependenceProfile,
    pub verdict: Verdict,
    pub trigger: Option<(Trigger, Provenance)>,
}

impl Certificate {
    /// Recomputes the recorded comparison from the stored profile, the
    /// closed form and the given table. Inconclusive certificates always
    /// recheck.
    pub fn recheck(&self, table: Option<&ExtremalTable>) -> bool {
        let Some((trigger, provenance)) = &self.trigger else {
            return self.verdict == Verdict::Inconclusive;
        };
        let Some(d) = self.profile.get(trigger.k()).map(DependenceCount::ratio) else {
            return false;
        };
        match (trigger, provenance) {
            (Trigger::IndBound { k, d: d_rec, d_bound, ind, s }, Provenance::ClosedForm) => {
                *d_rec == d
                    && d.is_zero()
                    && d_bound.is_zero()
                    && k + CLOSED_FORM_MIN_CODIMENSION <= self.r
                    && ind_upper_zero_dep(self.q, self.r, *k).is_ok_and(|b| b == *ind)
                    && *s == self.s
                    && BigUint::from(*s) > *ind
            }
            (Trigger::IndBound { k, d: d_rec, d_bound, ind, s }, Provenance::BruteForce) => {
                *d_rec == d
                    && d <= *d_bound
                    && *s == self.s
                    && BigUint::from(*s) > *ind
                    && table.is_some_and(|t| {
                        t.max_sizes(self.q, self.r, *k).any(|(td, v)| td == d_bound && BigUint::from(v) == *ind)
                    })
            }
            (Trigger::DTable { k, d: d_rec, d_min, s }, Provenance::BruteForce) => {
                *d_rec == d
                    && d < *d_min
                    && *s == self.s
                    && table.and_then(|t| t.min_dependence(self.q, self.r, *k, *s)) == Some(d_min)
            }
            (Trigger::DTable { .. }, Provenance::ClosedForm) => false,
        }
    }
}

/// Looks for a representability obstruction over `F_q`, trying every `k`
/// in increasing order. The closed-form branch needs `d(M,k) = 0` and
/// `k <= r - 3`; the
/// table branches use whatever exact values `table` holds for this
/// `(q, r(M), k)`. Never claims representability.
pub fn certify_nonrepresentable(m: &Matroid, q: u32, table: Option<&ExtremalTable>) -> Result<Certificate, BoundsError> {
    check_q(q)?;
    let profile = m.dependence_profile()?;
    certify_profile(profile, q, table)
}

/// [`certify_nonrepresentable`] for an already computed profile.
pub fn certify_profile(profile: DependenceProfile, q: u32, table: Option<&ExtremalTable>) -> Result<Certificate, BoundsError> {
    check_q(q)?;
    let (r, s) = (profile.rank(), profile.size());
    let mut trigger = None;
    let ratios: Vec<BigRational> = profile.values().iter().map(DependenceCount::ratio).collect();
    'ks: for (k, d) in ratios.iter().enumerate() {
        if d.is_zero() && k + CLOSED_FORM_MIN_CODIMENSION <= r {
            let ind = ind_upper_zero_dep(q, r, k)?;
            if BigUint::from(s) > ind {
                trigger = Some((Trigger::IndBound { k, d: d.clone(), d_bound: BigRational::zero(), ind, s }, Provenance::ClosedForm));
                break 'ks;
            }
        }
        let Some(table) = table else { continue };
        // Ind is non-decreasing in d, so any tabulated d_bound >= d(M,k) works
        if let Some((d_bound, ind)) = table.max_sizes(q, r, k).filter(|(td, v)| *td >= d && *v < s).min_by_key(|(_, v)| *v) {
            trigger = Some((
                Trigger::IndBound { k, d: d.clone(), d_bound: d_bound.clone(), ind: BigUint::from(ind), s },
                Provenance::BruteForce,
            ));
            break 'ks;
        }
        if let Some(d_min) = table.min_dependence(q, r, k, s).filter(|dm| d < *dm) {
            trigger = Some((Trigger::DTable { k, d: d.clone(), d_min: d_min.clone(), s }, Provenance::BruteForce));
            break 'ks;
        }
    }
    let verdict = if trigger.is_some() { Verdict::NotRepresentable } else { Verdict::Inconclusive };
    Ok(Certificate { q, r, s, profile, verdict, trigger })
}
