//! Binomial coefficients and colexicographic ranking of `m`-subsets.
//!
//! In colex order `{c_1 < ... < c_m}` has rank `sum_i C(c_i, i)`; the
//! ranking does not depend on the size of the ambient set, which makes
//! contiguous rank ranges a natural unit of parallel work.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsetError {
    #[error("subset index {index} out of range [0, C({s}, {m}))")]
    IndexOutOfRange { s: usize, m: usize, index: BigUint },
    #[error("not a strictly increasing subset of [0, {s})")]
    NotASubset { s: usize },
}

/// `C(n, k)` as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(n, k)` if it fits in a `u64`.
pub fn binomial_u64(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Colex rank of a strictly increasing subset of `[0, s)`.
pub fn rank(s: usize, subset: &[usize]) -> Result<BigUint, SubsetError> {
    check_subset(s, subset)?;
    Ok(subset.iter().enumerate().map(|(i, &c)| binomial(c, i + 1)).sum())
}

/// The `m`-subset of `[0, s)` with colex rank `index`.
pub fn unrank(s: usize, m: usize, index: &BigUint) -> Result<Vec<usize>, SubsetError> {
    if *index >= binomial(s, m) {
        return Err(SubsetError::IndexOutOfRange { s, m, index: index.clone() });
    }
    let mut rest = index.clone();
    let mut out = Vec::with_capacity(m);
    let mut top = s;
    for i in (1..=m).rev() {
        // largest c with C(c, i) <= rest
        let mut c = top - 1;
        let mut b = binomial(c, i);
        while b > rest {
            c -= 1;
            b = binomial(c, i);
        }
        rest -= b;
        out.push(c);
        top = c;
    }
    out.reverse();
    Ok(out)
}

/// `u64` colex rank, for hot loops where `C(s, m)` is known to fit.
#[inline]
pub fn rank_u64(subset: &[usize], table: &BinomialTable) -> u64 {
    subset.iter().enumerate().map(|(i, &c)| table.get(c, i + 1)).sum()
}

/// `u64` unranking; `index < C(s, m)` must hold.
pub fn unrank_u64(s: usize, m: usize, mut index: u64, table: &BinomialTable, out: &mut Vec<usize>) {
    out.clear();
    out.resize(m, 0);
    let mut top = s;
    for i in (1..=m).rev() {
        let mut c = top - 1;
        while table.get(c, i) > index {
            c -= 1;
        }
        index -= table.get(c, i);
        out[i - 1] = c;
        top = c;
    }
}

/// Advances `subset` to its colex successor among subsets of `[0, s)`;
/// returns false when `subset` was the last one.
#[inline]
pub fn next_colex(s: usize, subset: &mut [usize]) -> bool {
    let m = subset.len();
    for i in 0..m {
        let limit = if i + 1 < m { subset[i + 1] } else { s };
        if subset[i] + 1 < limit {
            subset[i] += 1;
            for (j, x) in subset[..i].iter_mut().enumerate() {
                *x = j;
            }
            return true;
        }
    }
    false
}

fn check_subset(s: usize, subset: &[usize]) -> Result<(), SubsetError> {
    let increasing = subset.windows(2).all(|w| w[0] < w[1]);
    let in_range = subset.last().is_none_or(|&c| c < s);
    if increasing && in_range {
        Ok(())
    } else {
        Err(SubsetError::NotASubset { s })
    }
}

/// Pascal triangle of `u64` binomials `C(n, k)` for `n < rows`, `k <= cols`.
/// Entries that overflow saturate at `u64::MAX`.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    cols: usize,
    data: Vec<u64>,
}

impl BinomialTable {
    pub fn new(rows: usize, cols: usize) -> BinomialTable {
        let w = cols + 1;
        let mut data = alloc::vec![0u64; rows.max(1) * w];
        for n in 0..rows {
            data[n * w] = 1;
            for k in 1..=cols.min(n) {
                data[n * w + k] = data[(n - 1) * w + k - 1].saturating_add(if k < n { data[(n - 1) * w + k] } else { 0 });
            }
        }
        BinomialTable { cols, data }
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k > self.cols {
            return binomial(n, k).to_u64().unwrap_or(u64::MAX);
        }
        let w = self.cols + 1;
        if n * w >= self.data.len() {
            return binomial_u64(n, k).unwrap_or(u64::MAX);
        }
        self.data[n * w + k]
    }
}
