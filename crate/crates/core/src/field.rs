//! Finite fields `F_q` for small prime powers `q`.
//!
//! An element of `F_{p^e}` is a polynomial of degree `< e` over `F_p`,
//! encoded as the integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. Under this
//! encoding `0` is zero and `1` is one. The defining modulus is the monic
//! irreducible polynomial of degree `e` whose lower coefficients have the
//! smallest encoding, so a given `q` always produces the same field.
//!
//! Every field carries full addition, multiplication, negation and inverse
//! tables. Rank computation over these fields is the hot loop of the crate.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Default largest field order accepted by [`Field::new`].
pub const DEFAULT_MAX_ORDER: u32 = 16;

/// Hard cap on the field order: elements are stored in a byte.
pub const ORDER_CAP: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {q} exceeds the configured maximum {max}")]
    TooLarge { q: u32, max: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value} is not an element of F_{q}")]
    InvalidElement { value: u32, q: u32 },
}

/// An element of some `F_q`, by its canonical integer encoding in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct FieldElement(pub u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Splits `q` into `(p, e)` with `q = p^e`, `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        return Some((q, 1));
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

struct Tables {
    q: u32,
    p: u32,
    e: u32,
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// The field `F_q` together with its arithmetic tables.
///
/// Cloning is cheap; all clones share the same tables.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl Field {
    /// Builds `F_q`, accepting orders up to [`DEFAULT_MAX_ORDER`].
    pub fn new(q: u32) -> Result<Field, FieldError> {
        Field::with_max_order(q, DEFAULT_MAX_ORDER)
    }

    pub fn with_max_order(q: u32, max: u32) -> Result<Field, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > max.min(ORDER_CAP) {
            return Err(FieldError::TooLarge { q, max: max.min(ORDER_CAP) });
        }
        let modulus = if e == 1 { Vec::new() } else { least_irreducible(p, e) };
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        let digits: Vec<Vec<u32>> = (0..q).map(|v| to_digits(v, p, e)).collect();
        for a in 0..n {
            neg[a] = from_digits(&digits[a].iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p) as u8;
            for b in 0..n {
                let sum: Vec<u32> = digits[a].iter().zip(&digits[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = from_digits(&sum, p) as u8;
                let prod = if e == 1 {
                    vec![(digits[a][0] * digits[b][0]) % p]
                } else {
                    poly_mul_mod(&digits[a], &digits[b], &modulus, p)
                };
                mul[a * n + b] = from_digits(&prod, p) as u8;
            }
        }
        for a in 1..n {
            inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).expect("nonzero element without inverse") as u8;
        }
        Ok(Field(Arc::new(Tables { q, p, e, modulus, add, mul, neg, inv })))
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.e
    }

    /// Coefficients `c_0..=c_e` of the defining polynomial, lowest degree
    /// first. Empty for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.0.modulus
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if value < self.0.q {
            Ok(FieldElement(value as u8))
        } else {
            Err(FieldError::InvalidElement { value, q: self.0.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(|v| FieldElement(v as u8))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.0.add[a.0 as usize * self.0.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.0.mul[a.0 as usize * self.0.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(FieldElement(self.0.inv[a.0 as usize]))
        }
    }

    /// `inv` for callers that have already excluded zero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        FieldElement(self.0.inv[a.0 as usize])
    }

    /// Row of the multiplication table for `a`, indexed by the other factor.
    #[inline]
    pub(crate) fn mul_row(&self, a: FieldElement) -> &[u8] {
        let q = self.0.q as usize;
        &self.0.mul[a.0 as usize * q..(a.0 as usize + 1) * q]
    }

    #[inline]
    pub(crate) fn add_row(&self, a: FieldElement) -> &[u8] {
        let q = self.0.q as usize;
        &self.0.add[a.0 as usize * q..(a.0 as usize + 1) * q]
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.q == other.0.q && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("q", &self.0.q)
            .field("p", &self.0.p)
            .field("e", &self.0.e)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

fn to_digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `a` modulo the monic polynomial `m` (coefficients low first).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let deg = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > deg {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - deg;
            for (i, &c) in m[..deg].iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * lead) % p;
            }
        }
    }
    r.resize(deg, 0);
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u8], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let m: Vec<u32> = modulus.iter().map(|&c| c as u32).collect();
    poly_rem(&prod, &m, p)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let e = f.len() as u32 - 1;
    for d in 1..=e / 2 {
        for low in 0..p.pow(d) {
            let mut g = to_digits(low, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible of degree `e` over `F_p` with the least encoding of its
/// lower coefficients.
fn least_irreducible(p: u32, e: u32) -> Vec<u8> {
    (0..p.pow(e))
        .map(|low| {
            let mut f = to_digits(low, p, e);
            f.push(1);
            f
        })
        .find(|f| f[0] != 0 && is_irreducible(f, p))
        .map(|f| f.into_iter().map(|c| c as u8).collect())
        .expect("an irreducible polynomial exists in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Table-free polynomial arithmetic over F_p, written independently of
    /// the construction above: elements are digit vectors, products are
    /// reduced by repeated subtraction of shifted multiples of the modulus.
    fn oracle_mul(a: u32, b: u32, p: u32, e: u32, modulus: &[u8]) -> u32 {
        let dig = |mut v: u32| {
            let mut d = Vec::new();
            for _ in 0..e {
                d.push((v % p) as i64);
                v /= p;
            }
            d
        };
        let (da, db) = (dig(a), dig(b));
        let mut prod = vec![0i64; 2 * e as usize];
        for i in 0..e as usize {
            for j in 0..e as usize {
                prod[i + j] += da[i] * db[j];
            }
        }
        if e > 1 {
            for top in (e as usize..prod.len()).rev() {
                let c = prod[top].rem_euclid(p as i64);
                prod[top] = 0;
                for (i, &m) in modulus[..e as usize].iter().enumerate() {
                    prod[top - e as usize + i] -= c * m as i64;
                }
            }
        }
        let mut v = 0i64;
        for i in (0..e as usize).rev() {
            v = v * p as i64 + prod[i].rem_euclid(p as i64);
        }
        v as u32
    }

    fn oracle_add(a: u32, b: u32, p: u32, e: u32) -> u32 {
        let (mut a, mut b, mut v, mut scale) = (a, b, 0, 1);
        for _ in 0..e {
            v += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        v
    }

    #[test]
    fn prime_field_basics() {
        let f2 = Field::new(2).unwrap();
        assert_eq!((f2.characteristic(), f2.degree()), (2, 1));
        assert!(f2.modulus().is_empty());
        assert_eq!(f2.add(FieldElement(1), FieldElement(1)), FieldElement(0));

        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.mul(FieldElement(3), FieldElement(4)), FieldElement(2));
        assert_eq!(f5.neg(FieldElement(2)), FieldElement(3));
        assert_eq!(f5.inv(FieldElement(2)).unwrap(), FieldElement(3));
    }

    #[test]
    fn f4_uses_x2_x_1() {
        let f4 = Field::new(4).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        // omega = x encodes as 2; omega^2 = omega + 1 encodes as 3
        assert_eq!(f4.mul(FieldElement(2), FieldElement(2)), FieldElement(3));
    }

    #[test]
    fn deterministic_moduli() {
        assert_eq!(Field::new(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(9).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(16).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(Field::new(9).unwrap(), Field::new(9).unwrap());
    }

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(Field::new(6).unwrap_err(), FieldError::NotPrimePower(6));
        assert_eq!(Field::new(12).unwrap_err(), FieldError::NotPrimePower(12));
        assert_eq!(Field::new(1).unwrap_err(), FieldError::NotPrimePower(1));
        assert_eq!(Field::new(0).unwrap_err(), FieldError::NotPrimePower(0));
        assert_eq!(Field::new(17).unwrap_err(), FieldError::TooLarge { q: 17, max: 16 });
        assert!(Field::with_max_order(27, 32).is_ok());
        assert!(Field::with_max_order(512, 1024).is_err());
    }

    #[test]
    fn inverse_of_zero() {
        let f = Field::new(7).unwrap();
        assert_eq!(f.inv(FieldElement::ZERO), Err(FieldError::DivisionByZero));
        assert!(f.element(7).is_err());
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn matches_polynomial_oracle_up_to_9() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let f = Field::new(q).unwrap();
            let (p, e) = (f.characteristic(), f.degree());
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.add(a, b).value(), oracle_add(a.value(), b.value(), p, e), "q={q} {a}+{b}");
                    assert_eq!(
                        f.mul(a, b).value(),
                        oracle_mul(a.value(), b.value(), p, e, f.modulus()),
                        "q={q} {a}*{b}"
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn group_orders() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 16] {
            let f = Field::new(q).unwrap();
            // every nonzero element has additive order p, so the group has order q
            for a in f.elements().filter(|a| !a.is_zero()) {
                let mut x = a;
                let mut n = 1;
                while !x.is_zero() {
                    x = f.add(x, a);
                    n += 1;
                }
                assert_eq!(n, f.characteristic());
            }
            // some element generates all q - 1 units
            let generator = f.elements().filter(|a| !a.is_zero()).find(|&g| {
                let mut x = g;
                let mut n = 1;
                while x != FieldElement::ONE {
                    x = f.mul(x, g);
                    n += 1;
                }
                n == q - 1
            });
            assert!(generator.is_some(), "F_{q} has no multiplicative generator");
        }
    }
}
