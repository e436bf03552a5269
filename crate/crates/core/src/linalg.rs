//! Matrices over `F_q` and rank by incremental Gaussian elimination.
//!
//! Columns are the objects of interest (they are the matroid elements), so
//! storage is column-major and rank is computed by inserting columns one by
//! one into an [`Echelon`] basis. Over `F_2` with at most 64 rows, columns
//! are additionally packed into machine words.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::field::{Field, FieldElement};

/// Default cap on `q^r` for vector and point enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("a matrix needs at least one row")]
    NoRows,
    #[error("column {column} has {len} entries, expected {rows}")]
    DimensionMismatch { column: usize, len: usize, rows: usize },
    #[error("entry {value} at row {row}, column {column} is not in [0, {q})")]
    InvalidEntry { row: usize, column: usize, value: u32, q: u32 },
    #[error("column index {index} out of range for {s} columns")]
    IndexOutOfRange { index: usize, s: usize },
    #[error("q^r = {q}^{r} exceeds the enumeration limit {limit}")]
    Overflow { q: u32, r: usize, limit: u64 },
}

/// An `r x s` matrix over `F_q`.
#[derive(Clone, PartialEq, Eq)]
pub struct GfMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    packed: Option<Vec<u64>>,
}

impl GfMatrix {
    /// Builds a matrix from its columns given as raw element encodings.
    pub fn from_columns(field: &Field, rows: usize, columns: &[Vec<u32>]) -> Result<GfMatrix, LinalgError> {
        if rows == 0 {
            return Err(LinalgError::NoRows);
        }
        let mut entries = Vec::with_capacity(rows * columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch { column: j, len: col.len(), rows });
            }
            for (i, &value) in col.iter().enumerate() {
                let e = field.element(value).map_err(|_| LinalgError::InvalidEntry {
                    row: i,
                    column: j,
                    value,
                    q: field.order(),
                })?;
                entries.push(e);
            }
        }
        Ok(GfMatrix::from_entries(field.clone(), rows, columns.len(), entries))
    }

    /// Builds a matrix from its rows given as raw element encodings.
    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<GfMatrix, LinalgError> {
        let r = rows.len();
        if r == 0 {
            return Err(LinalgError::NoRows);
        }
        let s = rows[0].len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != s) {
            // report against the transposed view the caller wrote
            return Err(LinalgError::DimensionMismatch { column: i, len: row.len(), rows: s });
        }
        let columns: Vec<Vec<u32>> = (0..s).map(|j| rows.iter().map(|row| row[j]).collect()).collect();
        GfMatrix::from_columns(field, r, &columns)
    }

    /// Builds a matrix whose columns are the given vector encodings
    /// (see [`encode_vector`]).
    pub fn from_encoded_columns(field: &Field, rows: usize, codes: &[u64]) -> Result<GfMatrix, LinalgError> {
        if rows == 0 {
            return Err(LinalgError::NoRows);
        }
        let mut entries = Vec::with_capacity(rows * codes.len());
        for (j, &code) in codes.iter().enumerate() {
            let v = decode_vector(field, rows, code);
            if encode_vector(field, &v) != code {
                return Err(LinalgError::InvalidEntry {
                    row: rows,
                    column: j,
                    value: code.min(u32::MAX as u64) as u32,
                    q: field.order(),
                });
            }
            entries.extend(v);
        }
        Ok(GfMatrix::from_entries(field.clone(), rows, codes.len(), entries))
    }

    pub(crate) fn from_entries(field: Field, rows: usize, cols: usize, entries: Vec<FieldElement>) -> GfMatrix {
        debug_assert_eq!(entries.len(), rows * cols);
        let packed = (field.order() == 2 && rows <= 64).then(|| {
            entries
                .chunks(rows.max(1))
                .take(cols)
                .map(|col| col.iter().enumerate().fold(0u64, |acc, (i, e)| acc | ((e.0 as u64) << i)))
                .collect()
        });
        GfMatrix { field, rows, cols, entries, packed }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of rows `r`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns `s`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[FieldElement] {
        &self.entries[j * self.rows..(j + 1) * self.rows]
    }

    pub fn get(&self, row: usize, col: usize) -> FieldElement {
        self.entries[col * self.rows + row]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[FieldElement]> {
        (0..self.cols).map(move |j| self.column(j))
    }

    /// Integer encoding of column `j`, see [`encode_vector`].
    pub fn encoded_column(&self, j: usize) -> u64 {
        encode_vector(&self.field, self.column(j))
    }

    pub fn encoded_columns(&self) -> Vec<u64> {
        (0..self.cols).map(|j| self.encoded_column(j)).collect()
    }

    /// Rows as raw element values, for serialization.
    pub fn row_values(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).value()).collect())
            .collect()
    }

    /// The matrix made of the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<GfMatrix, LinalgError> {
        self.check_indices(cols)?;
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for &j in cols {
            entries.extend_from_slice(self.column(j));
        }
        Ok(GfMatrix::from_entries(self.field.clone(), self.rows, cols.len(), entries))
    }

    /// Copy of the matrix with column `j` multiplied by `factor`.
    pub fn scale_column(&self, j: usize, factor: FieldElement) -> Result<GfMatrix, LinalgError> {
        self.check_indices(&[j])?;
        let mut entries = self.entries.clone();
        for e in &mut entries[j * self.rows..(j + 1) * self.rows] {
            *e = self.field.mul(*e, factor);
        }
        Ok(GfMatrix::from_entries(self.field.clone(), self.rows, self.cols, entries))
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(&self.field, self.rows);
        for j in 0..self.cols {
            ech.insert_column(self, j);
            if ech.rank() == self.rows {
                break;
            }
        }
        ech.rank()
    }

    /// Rank of the submatrix formed by the selected columns.
    pub fn subset_rank(&self, cols: &[usize]) -> Result<usize, LinalgError> {
        self.check_indices(cols)?;
        let mut ech = Echelon::new(&self.field, self.rows);
        for &j in cols {
            ech.insert_column(self, j);
        }
        Ok(ech.rank())
    }

    /// True iff the selected columns are linearly independent. Repeated
    /// indices select the same column twice and are therefore dependent.
    pub fn is_independent(&self, cols: &[usize]) -> Result<bool, LinalgError> {
        self.check_indices(cols)?;
        let mut ech = Echelon::new(&self.field, self.rows);
        Ok(ech.all_independent(self, cols))
    }

    fn check_indices(&self, cols: &[usize]) -> Result<(), LinalgError> {
        match cols.iter().find(|&&j| j >= self.cols) {
            Some(&index) => Err(LinalgError::IndexOutOfRange { index, s: self.cols }),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfMatrix(F_{}, {}x{}, columns ", self.field.order(), self.rows, self.cols)?;
        f.debug_list().entries(self.encoded_columns()).finish()?;
        write!(f, ")")
    }
}

/// Row-echelon basis of a growing set of vectors in `F_q^r`.
///
/// Each stored vector is normalized to have a 1 at its pivot (its first
/// nonzero coordinate at insertion time) and a 0 at the pivots of all
/// vectors stored before it.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: usize,
    rank: usize,
    kind: Kind,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)] // kept inline for the binary fast path
enum Kind {
    /// Indexed by pivot bit; zero where no vector has that pivot.
    Binary { by_pivot: [u64; 64], used: u64 },
    General { basis: Vec<FieldElement>, pivots: Vec<usize>, scratch: Vec<FieldElement> },
}

impl Echelon {
    pub fn new(field: &Field, rows: usize) -> Echelon {
        let kind = if field.order() == 2 && rows <= 64 {
            Kind::Binary { by_pivot: [0; 64], used: 0 }
        } else {
            Kind::General { basis: Vec::with_capacity(rows * rows), pivots: Vec::with_capacity(rows), scratch: vec![FieldElement::ZERO; rows] }
        };
        Echelon { field: field.clone(), rows, rank: 0, kind }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn clear(&mut self) {
        self.rank = 0;
        match &mut self.kind {
            Kind::Binary { by_pivot, used } => {
                let mut u = *used;
                while u != 0 {
                    by_pivot[u.trailing_zeros() as usize] = 0;
                    u &= u - 1;
                }
                *used = 0;
            }
            Kind::General { basis, pivots, .. } => {
                basis.clear();
                pivots.clear();
            }
        }
    }

    /// Adds `v` to the span; returns false (leaving the basis unchanged)
    /// when `v` already lies in it.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        debug_assert_eq!(v.len(), self.rows);
        match &mut self.kind {
            Kind::Binary { by_pivot, used } => {
                let packed = v.iter().enumerate().fold(0u64, |acc, (i, e)| acc | ((e.0 as u64) << i));
                let ok = insert_binary(by_pivot, used, packed);
                self.rank += ok as usize;
                ok
            }
            Kind::General { .. } => self.insert_general(v),
        }
    }

    /// Inserts column `j` of `m`; `m` must be over the same field and have
    /// `rows` rows.
    #[inline]
    pub fn insert_column(&mut self, m: &GfMatrix, j: usize) -> bool {
        match (&mut self.kind, &m.packed) {
            (Kind::Binary { by_pivot, used }, Some(packed)) => {
                let ok = insert_binary(by_pivot, used, packed[j]);
                self.rank += ok as usize;
                ok
            }
            _ => self.insert(m.column(j)),
        }
    }

    /// Inserts the listed columns, stopping at the first dependent one.
    pub fn all_independent(&mut self, m: &GfMatrix, cols: &[usize]) -> bool {
        self.clear();
        cols.iter().all(|&j| self.insert_column(m, j))
    }

    fn insert_general(&mut self, v: &[FieldElement]) -> bool {
        let field = &self.field;
        let rows = self.rows;
        let Kind::General { basis, pivots, scratch } = &mut self.kind else {
            unreachable!()
        };
        scratch.copy_from_slice(v);
        for (b, &piv) in basis.chunks_exact(rows).zip(pivots.iter()) {
            let c = scratch[piv];
            if c.is_zero() {
                continue;
            }
            let neg_c = field.neg(c);
            let row = field.mul_row(neg_c);
            for (x, &y) in scratch.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = FieldElement(field.add_row(*x)[row[y.0 as usize] as usize]);
                }
            }
        }
        let Some(piv) = scratch.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let scale = field.inv_nonzero(scratch[piv]);
        for x in scratch.iter_mut() {
            *x = field.mul(*x, scale);
        }
        basis.extend_from_slice(scratch);
        pivots.push(piv);
        self.rank += 1;
        true
    }
}

#[inline]
fn insert_binary(by_pivot: &mut [u64; 64], used: &mut u64, mut v: u64) -> bool {
    while v != 0 {
        let bit = v.trailing_zeros() as usize;
        let b = by_pivot[bit];
        if b == 0 {
            by_pivot[bit] = v;
            *used |= 1 << bit;
            return true;
        }
        v ^= b;
    }
    false
}

/// Encodes `v` as `v_0 + v_1 q + ... + v_{r-1} q^{r-1}`.
///
/// Ordering vectors by this integer is the canonical order used for point
/// enumeration, witnesses and tie-breaking.
pub fn encode_vector(field: &Field, v: &[FieldElement]) -> u64 {
    let q = field.order() as u64;
    v.iter().rev().fold(0u64, |acc, e| acc * q + e.0 as u64)
}

/// Inverse of [`encode_vector`] for `code < q^rows`.
pub fn decode_vector(field: &Field, rows: usize, mut code: u64) -> Vec<FieldElement> {
    let q = field.order() as u64;
    (0..rows)
        .map(|_| {
            let e = FieldElement((code % q) as u8);
            code /= q;
            e
        })
        .collect()
}

fn space_size(field: &Field, rows: usize, limit: u64) -> Result<u64, LinalgError> {
    let q = field.order();
    let overflow = LinalgError::Overflow { q, r: rows, limit };
    let exp = u32::try_from(rows).map_err(|_| overflow.clone())?;
    (q as u64).checked_pow(exp).filter(|&n| n <= limit).ok_or(overflow)
}

/// All `q^r - 1` nonzero vectors of `F_q^r`, by increasing encoding.
pub fn nonzero_vectors(field: &Field, rows: usize, limit: u64) -> Result<Vec<Vec<FieldElement>>, LinalgError> {
    let n = space_size(field, rows, limit)?;
    Ok((1..n).map(|code| decode_vector(field, rows, code)).collect())
}

/// Canonical representatives of the `(q^r - 1)/(q - 1)` points of the
/// projective space over `F_q^r`: the nonzero vectors whose first nonzero
/// coordinate is 1, by increasing encoding.
pub fn projective_points(field: &Field, rows: usize, limit: u64) -> Result<Vec<Vec<FieldElement>>, LinalgError> {
    let n = space_size(field, rows, limit)?;
    Ok((1..n)
        .map(|code| decode_vector(field, rows, code))
        .filter(|v| v.iter().find(|e| !e.is_zero()) == Some(&FieldElement::ONE))
        .collect())
}

/// Scales a nonzero vector so its first nonzero coordinate is 1.
pub fn normalize(field: &Field, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let lead = *v.iter().find(|e| !e.is_zero())?;
    let s = field.inv_nonzero(lead);
    Some(v.iter().map(|&e| field.mul(e, s)).collect())
}
