//! Command output as ordered key/value entries, rendered as text, CSV or
//! JSON. Exact rationals are written as `num/denom` next to a decimal with
//! twelve significant digits.

use std::fmt::Write as _;
use std::str::FromStr;

use kdep_core::DependenceCount;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{Map, Number, Value};

/// Significant digits in printed decimals.
pub const DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Int(BigInt),
    Exact(BigRational),
    /// Unreduced `dependent/total`.
    Count(DependenceCount),
    Text(String),
    Bool(bool),
}

impl Entry {
    fn exact(&self) -> String {
        match self {
            Entry::Int(n) => n.to_string(),
            Entry::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
            Entry::Count(c) => c.to_string(),
            Entry::Text(s) => s.clone(),
            Entry::Bool(b) => b.to_string(),
        }
    }

    fn decimal(&self) -> Option<String> {
        match self {
            Entry::Exact(r) => Some(decimal(r)),
            Entry::Count(c) => Some(decimal(&c.ratio())),
            _ => None,
        }
    }
}

impl From<usize> for Entry {
    fn from(n: usize) -> Entry {
        Entry::Int(n.into())
    }
}

impl From<u64> for Entry {
    fn from(n: u64) -> Entry {
        Entry::Int(n.into())
    }
}

impl From<u32> for Entry {
    fn from(n: u32) -> Entry {
        Entry::Int(n.into())
    }
}

impl From<BigRational> for Entry {
    fn from(r: BigRational) -> Entry {
        Entry::Exact(r)
    }
}

impl From<DependenceCount> for Entry {
    fn from(c: DependenceCount) -> Entry {
        Entry::Count(c)
    }
}

impl From<&str> for Entry {
    fn from(s: &str) -> Entry {
        Entry::Text(s.to_string())
    }
}

impl From<String> for Entry {
    fn from(s: String) -> Entry {
        Entry::Text(s)
    }
}

impl From<bool> for Entry {
    fn from(b: bool) -> Entry {
        Entry::Bool(b)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, Entry)>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Entry>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn entries(&self) -> &[(String, Entry)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    /// `key = exact (decimal)` lines.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            match value.decimal() {
                Some(dec) => writeln!(out, "{key} = {} ({dec})", value.exact()),
                None => writeln!(out, "{key} = {}", value.exact()),
            }
            .expect("write to string");
        }
        out
    }

    /// `key,exact,decimal` rows under a header.
    pub fn csv(&self) -> String {
        let mut out = String::from("key,exact,decimal\n");
        for (key, value) in &self.entries {
            let dec = value.decimal().unwrap_or_default();
            writeln!(out, "{},{},{}", csv_field(key), csv_field(&value.exact()), dec).expect("write to string");
        }
        out
    }

    /// One object; exact values become `{"exact": "n/d", "decimal": x}`.
    pub fn json(&self) -> String {
        let mut obj = Map::new();
        for (key, value) in &self.entries {
            let v = match value {
                Entry::Int(n) => n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from),
                Entry::Text(s) => Value::String(s.clone()),
                Entry::Bool(b) => Value::Bool(*b),
                Entry::Exact(_) | Entry::Count(_) => {
                    let dec = value.decimal().expect("numeric entry");
                    let num = f64::from_str(&dec).ok().and_then(Number::from_f64).map_or(Value::Null, Value::Number);
                    let mut inner = Map::new();
                    inner.insert("exact".into(), Value::String(value.exact()));
                    inner.insert("decimal".into(), num);
                    Value::Object(inner)
                }
            };
            obj.insert(key.clone(), v);
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
        s.push('\n');
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `x` rounded to [`DIGITS`] significant digits, in positional notation
/// with trailing zeros removed. Rounding is exact (half away from zero).
pub fn decimal(x: &BigRational) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let a = x.abs();
    // e = floor(log10(a))
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let shift = DIGITS as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let half = BigRational::new(1.into(), 2.into());
    let mut digits = (scaled + half).floor().to_integer();
    let mut shift = shift;
    if digits.to_string().len() > DIGITS {
        // rounding carried into a new leading digit
        digits /= 10;
        shift -= 1;
    }
    let mut s = digits.to_string();
    if shift > 0 {
        let shift = shift as usize;
        if s.len() <= shift {
            s = format!("{}{s}", "0".repeat(shift - s.len() + 1));
        }
        s.insert(s.len() - shift, '.');
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        s = trimmed.to_string();
    } else {
        s.push_str(&"0".repeat((-shift) as usize));
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

fn pow10(e: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(1.into(), p)
    }
}

/// Parses `a/b`, an integer, or a finite decimal such as `0.125` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n = BigInt::from_str(&digits).ok()?;
    let r = BigRational::new(n, num_traits::pow(BigInt::from(10), frac.len()));
    Some(if neg { -r } else { r })
}
