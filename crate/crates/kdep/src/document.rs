//! The matroid document: UTF-8 text, one `key: value` field per line.
//!
//! ```text
//! # comments and blank lines are ignored
//! name: fano
//! kind: matrix
//! q: 2
//! row: 1 0 0 1 1 0 1
//! row: 0 1 0 1 0 1 1
//! row: 0 0 1 0 1 1 1
//! ```
//!
//! A `bases` document lists the ground-set size, the rank and one basis per
//! line; `trusted: true` skips the exchange-axiom check, which is otherwise
//! limited to small ground sets.
//!
//! ```text
//! kind: bases
//! s: 4
//! r: 2
//! basis: 0 1
//! basis: 0 2
//! ```
//!
//! Matrix entries are the integer encodings of field elements, in `[0, q)`.

use std::fmt;

use kdep_core::field::FieldError;
use kdep_core::matroid::{BasesOptions, Source};
use kdep_core::{Field, GfMatrix, Matroid, MatroidError};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The document names a field order the tool does not support.
    pub unsupported_field: bool,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, column, message: message.into(), unsupported_field: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Matrix { q: u32, rows: Vec<Vec<u32>> },
    Bases { s: usize, r: usize, bases: Vec<Vec<usize>>, trusted: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidDocument {
    pub name: Option<String>,
    pub body: Body,
}

/// A value with the position of its first character.
struct Spanned<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

impl Spanned<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, message)
    }

    fn uint<T: std::str::FromStr>(&self) -> Result<T, ParseError> {
        self.text.parse().map_err(|_| self.err(format!("expected a non-negative integer, found {:?}", self.text)))
    }

    /// Whitespace-separated integers, each error pointing at its token.
    fn uints<T: std::str::FromStr>(&self) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        let mut offset = 0;
        for token in self.text.split([' ', '\t']) {
            if !token.is_empty() {
                let tok = Spanned { line: self.line, column: self.column + offset, text: token };
                out.push(tok.uint()?);
            }
            offset += token.chars().count() + 1;
        }
        Ok(out)
    }
}

impl MatroidDocument {
    pub fn parse(text: &str) -> Result<MatroidDocument, ParseError> {
        let mut name = None;
        let mut kind = None;
        let mut q = None;
        let mut s = None;
        let mut r = None;
        let mut trusted = None;
        let mut rows: Vec<Spanned> = Vec::new();
        let mut bases: Vec<Spanned> = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let content = raw.trim_end();
            let indent = content.len() - content.trim_start().len();
            let content = content.trim_start();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let Some((key, value)) = content.split_once(':') else {
                return Err(ParseError::new(line, indent + 1, "expected `key: value`"));
            };
            let key = key.trim_end();
            let value_start = key.len() + 1 + (value.len() - value.trim_start().len());
            let field = Spanned { line, column: indent + value_start + 1, text: value.trim() };
            let key_err = |m: String| ParseError::new(line, indent + 1, m);
            let slot = match key {
                "name" => &mut name,
                "kind" => &mut kind,
                "q" => &mut q,
                "s" => &mut s,
                "r" => &mut r,
                "trusted" => &mut trusted,
                "row" => {
                    rows.push(field);
                    continue;
                }
                "basis" => {
                    bases.push(field);
                    continue;
                }
                _ => return Err(key_err(format!("unknown field {key:?}"))),
            };
            if slot.is_some() {
                return Err(key_err(format!("duplicate field {key:?}")));
            }
            *slot = Some(field);
        }
        let end = |what: &str| ParseError::new(last_line + 1, 1, format!("missing field {what:?}"));
        let kind = kind.ok_or_else(|| end("kind"))?;
        let name = name.map(|f| f.text.to_string());
        let body = match kind.text {
            "matrix" => {
                if let Some(f) = [&s, &r, &trusted].into_iter().flatten().next() {
                    return Err(f.err("field not allowed in a matrix document"));
                }
                if let Some(b) = bases.first() {
                    return Err(b.err("basis lines are not allowed in a matrix document"));
                }
                let qf = q.ok_or_else(|| end("q"))?;
                let qv: u32 = qf.uint()?;
                let field = Field::new(qv).map_err(|e| {
                    let mut err = qf.err(e.to_string());
                    err.unsupported_field = matches!(e, FieldError::NotPrimePower(_) | FieldError::TooLarge { .. });
                    err
                })?;
                if rows.is_empty() {
                    return Err(end("row"));
                }
                let mut grid = Vec::with_capacity(rows.len());
                for f in &rows {
                    let vals: Vec<u32> = f.uints()?;
                    if let Some(pos) = vals.iter().position(|&v| v >= field.order()) {
                        let col = token_column(f, pos);
                        return Err(ParseError::new(f.line, col, format!("entry {} outside [0, {qv})", vals[pos])));
                    }
                    if let Some(first) = grid.first().map(Vec::len) {
                        if vals.len() != first {
                            return Err(f.err(format!("row has {} entries, expected {first}", vals.len())));
                        }
                    }
                    grid.push(vals);
                }
                if grid[0].is_empty() {
                    return Err(rows[0].err("rows are empty"));
                }
                Body::Matrix { q: qv, rows: grid }
            }
            "bases" => {
                if let Some(f) = &q {
                    return Err(f.err("field not allowed in a bases document"));
                }
                if let Some(f) = rows.first() {
                    return Err(f.err("row lines are not allowed in a bases document"));
                }
                let sv: usize = s.as_ref().ok_or_else(|| end("s"))?.uint()?;
                let rv: usize = r.as_ref().ok_or_else(|| end("r"))?.uint()?;
                let tv = match &trusted {
                    None => false,
                    Some(f) => match f.text {
                        "true" => true,
                        "false" => false,
                        other => return Err(f.err(format!("expected true or false, found {other:?}"))),
                    },
                };
                if bases.is_empty() {
                    return Err(end("basis"));
                }
                let mut list = Vec::with_capacity(bases.len());
                for f in &bases {
                    let b: Vec<usize> = f.uints()?;
                    if let Some(pos) = b.iter().position(|&e| e >= sv) {
                        return Err(ParseError::new(f.line, token_column(f, pos), format!("element {} outside [0, {sv})", b[pos])));
                    }
                    if b.len() != rv {
                        return Err(f.err(format!("basis has {} elements, expected r = {rv}", b.len())));
                    }
                    list.push(b);
                }
                Body::Bases { s: sv, r: rv, bases: list, trusted: tv }
            }
            other => return Err(kind.err(format!("kind must be matrix or bases, found {other:?}"))),
        };
        let doc = MatroidDocument { name, body };
        // surface matroid-level problems at the kind line
        doc.to_matroid().map_err(|e| kind.err(e.to_string()))?;
        Ok(doc)
    }

    pub fn to_matroid(&self) -> Result<Matroid, BuildError> {
        match &self.body {
            Body::Matrix { q, rows } => {
                let field = Field::new(*q)?;
                let m = GfMatrix::from_rows(&field, rows).map_err(MatroidError::from)?;
                Ok(Matroid::from_matrix(m)?)
            }
            Body::Bases { s, r, bases, trusted } => {
                let opts = BasesOptions { trusted: *trusted, ..BasesOptions::default() };
                Ok(Matroid::from_bases_with(*s, *r, bases, opts)?)
            }
        }
    }

    /// The matrix document of `m`.
    pub fn from_matrix(name: Option<String>, m: &GfMatrix) -> MatroidDocument {
        MatroidDocument { name, body: Body::Matrix { q: m.field().order(), rows: m.row_values() } }
    }

    /// A bases document for `m`, or its matrix document if it has one.
    pub fn from_matroid(name: Option<String>, m: &Matroid) -> MatroidDocument {
        match m.source() {
            Source::Linear(mat) => MatroidDocument::from_matrix(name, mat),
            Source::Bases(_) => MatroidDocument {
                name,
                body: Body::Bases { s: m.size(), r: m.rank(), bases: m.bases(), trusted: false },
            },
        }
    }
}

fn token_column(f: &Spanned, index: usize) -> usize {
    let mut offset = 0;
    let mut seen = 0;
    for token in f.text.split([' ', '\t']) {
        if !token.is_empty() {
            if seen == index {
                return f.column + offset;
            }
            seen += 1;
        }
        offset += token.chars().count() + 1;
    }
    f.column
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for MatroidDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "name: {name}")?;
        }
        match &self.body {
            Body::Matrix { q, rows } => {
                writeln!(f, "kind: matrix")?;
                writeln!(f, "q: {q}")?;
                for row in rows {
                    writeln!(f, "row: {}", join(row))?;
                }
            }
            Body::Bases { s, r, bases, trusted } => {
                writeln!(f, "kind: bases")?;
                writeln!(f, "s: {s}")?;
                writeln!(f, "r: {r}")?;
                if *trusted {
                    writeln!(f, "trusted: true")?;
                }
                for b in bases {
                    writeln!(f, "basis: {}", join(b))?;
                }
            }
        }
        Ok(())
    }
}
