//! The table document: one extremal value per line.
//!
//! ```text
//! row: quantity=D q=2 r=2 k=0 s=4 value=1/6 witness=1,1,2,3 provenance=brute-force
//! row: quantity=Ind q=2 r=2 k=0 d=0/1 value=3 witness=1,2,3 provenance=brute-force
//! ```
//!
//! `D` rows give `D_q(r,k,s)` as an exact rational; `Ind` rows give
//! `Ind_q(r,k,d)` as an integer. Witness columns are integer-encoded
//! vectors (`sum_i v_i q^i`). Lines starting with `#` are comments.

use std::collections::HashMap;

use kdep_core::search::{search_ind, search_min_dependence, PartitionRunner, SearchConfig, SearchError, SearchValue};
use kdep_core::table::{ExtremalTable, Provenance, TableRow};
use kdep_core::{Field, GfMatrix, Matroid};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::document::ParseError;
use crate::report::parse_rational;

pub fn write_row(row: &TableRow) -> String {
    let witness = row.witness().iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    match row {
        TableRow::MinDependence { q, r, k, s, value, provenance, .. } => format!(
            "row: quantity=D q={q} r={r} k={k} s={s} value={}/{} witness={witness} provenance={}\n",
            value.numer(),
            value.denom(),
            provenance.as_str()
        ),
        TableRow::MaxSize { q, r, k, d, value, provenance, .. } => format!(
            "row: quantity=Ind q={q} r={r} k={k} d={}/{} value={value} witness={witness} provenance={}\n",
            d.numer(),
            d.denom(),
            provenance.as_str()
        ),
    }
}

pub fn write_table(table: &ExtremalTable) -> String {
    table.rows().iter().map(write_row).collect()
}

pub fn parse_table(text: &str) -> Result<ExtremalTable, ParseError> {
    let mut table = ExtremalTable::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        let Some(rest) = content.strip_prefix("row:") else {
            return Err(ParseError::new(line, indent + 1, "expected `row:`"));
        };
        table.push(parse_fields(line, indent + 5, rest)?);
    }
    Ok(table)
}

fn parse_fields(line: usize, start: usize, rest: &str) -> Result<TableRow, ParseError> {
    let mut fields: HashMap<&str, (usize, &str)> = HashMap::new();
    let mut offset = 0;
    for token in rest.split(' ') {
        let column = start + offset;
        offset += token.len() + 1;
        if token.is_empty() {
            continue;
        }
        let Some((key, value)) = token.split_once('=') else {
            return Err(ParseError::new(line, column, format!("expected key=value, found {token:?}")));
        };
        if !["quantity", "q", "r", "k", "s", "d", "value", "witness", "provenance"].contains(&key) {
            return Err(ParseError::new(line, column, format!("unknown field {key:?}")));
        }
        if fields.insert(key, (column + key.len() + 1, value)).is_some() {
            return Err(ParseError::new(line, column, format!("duplicate field {key:?}")));
        }
    }
    let end = start + offset;
    let get = |key: &str| fields.get(key).copied().ok_or_else(|| ParseError::new(line, end, format!("missing field {key:?}")));
    let uint = |key: &str| -> Result<usize, ParseError> {
        let (col, v) = get(key)?;
        v.parse().map_err(|_| ParseError::new(line, col, format!("{key} must be a non-negative integer, found {v:?}")))
    };
    let rational = |key: &str| -> Result<BigRational, ParseError> {
        let (col, v) = get(key)?;
        parse_rational(v)
            .filter(|x| *x >= BigRational::zero() && *x <= BigRational::one())
            .ok_or_else(|| ParseError::new(line, col, format!("{key} must be a rational in [0, 1], found {v:?}")))
    };
    let (qcol, qtext) = get("q")?;
    let q: u32 = qtext.parse().map_err(|_| ParseError::new(line, qcol, format!("q must be an integer, found {qtext:?}")))?;
    let (r, k) = (uint("r")?, uint("k")?);
    let (wcol, wtext) = get("witness")?;
    let witness = if wtext.is_empty() {
        Vec::new()
    } else {
        wtext
            .split(',')
            .map(|c| c.parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ParseError::new(line, wcol, "witness must be comma-separated integers"))?
    };
    let (pcol, ptext) = get("provenance")?;
    let provenance = match ptext {
        "brute-force" => Provenance::BruteForce,
        "closed-form" => Provenance::ClosedForm,
        other => return Err(ParseError::new(line, pcol, format!("unknown provenance {other:?}"))),
    };
    let (qtcol, quantity) = get("quantity")?;
    match quantity {
        "D" => {
            if let Some(&(col, _)) = fields.get("d") {
                return Err(ParseError::new(line, col, "d is not a field of D rows"));
            }
            Ok(TableRow::MinDependence { q, r, k, s: uint("s")?, value: rational("value")?, witness, provenance })
        }
        "Ind" => {
            if let Some(&(col, _)) = fields.get("s") {
                return Err(ParseError::new(line, col, "s is not a field of Ind rows"));
            }
            Ok(TableRow::MaxSize { q, r, k, d: rational("d")?, value: uint("value")?, witness, provenance })
        }
        other => Err(ParseError::new(line, qtcol, format!("quantity must be D or Ind, found {other:?}"))),
    }
}

/// Checks that the witness alone supports the row: a full-rank `r x s`
/// matrix whose k-dependence equals the `D` value, or is within `d` at
/// size `Ind`. Says nothing about optimality.
pub fn witness_supports(row: &TableRow) -> bool {
    let (q, r, k) = row.key();
    let Ok(field) = Field::new(q) else { return false };
    let Ok(mat) = GfMatrix::from_encoded_columns(&field, r, row.witness()) else { return false };
    if mat.cols() == 0 || k > r {
        return false;
    }
    let Ok(m) = Matroid::from_matrix(mat) else { return false };
    if m.rank() != r {
        return false;
    }
    let Ok(dep) = m.k_dependence(k) else { return false };
    match row {
        TableRow::MinDependence { s, value, .. } => m.size() == *s && dep.ratio() == *value,
        TableRow::MaxSize { d, value, .. } => m.size() == *value && dep.ratio() <= *d,
    }
}

/// Re-runs the search behind `row` and compares value and witness.
pub fn reverify<R: PartitionRunner>(row: &TableRow, cfg: &SearchConfig, runner: &R) -> Result<bool, SearchError> {
    let (q, r, k) = row.key();
    let result = match row {
        TableRow::MinDependence { s, .. } => search_min_dependence(q, r, k, *s, cfg, runner)?,
        TableRow::MaxSize { d, .. } => search_ind(q, r, k, d, cfg, runner)?,
    };
    let same_value = match (&result.value, row) {
        (SearchValue::MinDependence { value, .. }, TableRow::MinDependence { value: v, .. }) => value.ratio() == *v,
        (SearchValue::MaxSize { value, .. }, TableRow::MaxSize { value: v, .. }) => value == v,
        _ => false,
    };
    Ok(same_value && witness_supports(row))
}
