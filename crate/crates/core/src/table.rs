//! Exact extremal values found by exhaustive search, kept for reuse by the
//! certifier and for re-verification.

use alloc::vec::Vec;

use num_rational::BigRational;

/// How a recorded value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    ClosedForm,
    BruteForce,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::BruteForce => "brute-force",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableRow {
    /// `D_q(r, k, s) = value`: least k-dependence of a full-rank `r x s`
    /// matrix over `F_q`.
    MinDependence { q: u32, r: usize, k: usize, s: usize, value: BigRational, witness: Vec<u64>, provenance: Provenance },
    /// `Ind_q(r, k, d) = value`: largest `s` admitting a full-rank `r x s`
    /// matrix over `F_q` with k-dependence at most `d`.
    MaxSize { q: u32, r: usize, k: usize, d: BigRational, value: usize, witness: Vec<u64>, provenance: Provenance },
}

impl TableRow {
    /// `(q, r, k)` of the row.
    pub fn key(&self) -> (u32, usize, usize) {
        match *self {
            TableRow::MinDependence { q, r, k, .. } | TableRow::MaxSize { q, r, k, .. } => (q, r, k),
        }
    }

    pub fn witness(&self) -> &[u64] {
        match self {
            TableRow::MinDependence { witness, .. } | TableRow::MaxSize { witness, .. } => witness,
        }
    }
}

/// An ordered collection of [`TableRow`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtremalTable {
    rows: Vec<TableRow>,
}

impl ExtremalTable {
    pub fn new() -> ExtremalTable {
        ExtremalTable::default()
    }

    pub fn push(&mut self, row: TableRow) {
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Recorded `D_q(r, k, s)`, if any.
    pub fn min_dependence(&self, q: u32, r: usize, k: usize, s: usize) -> Option<&BigRational> {
        self.rows.iter().find_map(|row| match row {
            TableRow::MinDependence { q: q2, r: r2, k: k2, s: s2, value, .. } if (*q2, *r2, *k2, *s2) == (q, r, k, s) => {
                Some(value)
            }
            _ => None,
        })
    }

    /// Recorded `(d, Ind_q(r, k, d))` pairs for the given `(q, r, k)`.
    pub fn max_sizes(&self, q: u32, r: usize, k: usize) -> impl Iterator<Item = (&BigRational, usize)> {
        self.rows.iter().filter_map(move |row| match row {
            TableRow::MaxSize { q: q2, r: r2, k: k2, d, value, .. } if (*q2, *r2, *k2) == (q, r, k) => Some((d, *value)),
            _ => None,
        })
    }
}

impl FromIterator<TableRow> for ExtremalTable {
    fn from_iter<I: IntoIterator<Item = TableRow>>(iter: I) -> Self {
        ExtremalTable { rows: iter.into_iter().collect() }
    }
}

impl Extend<TableRow> for ExtremalTable {
    fn extend<I: IntoIterator<Item = TableRow>>(&mut self, iter: I) {
        self.rows.extend(iter);
    }
}
