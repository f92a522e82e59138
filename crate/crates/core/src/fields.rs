//! Prime fields `F_p` and small extensions `F_{p^e}`.
//!
//! A [`FiniteField`] is a cheap, cloneable handle; elements are plain
//! [`FieldElement`] values that do not carry their field, so all arithmetic
//! goes through the field handle (`field.mul(a, b)`).
//!
//! Prime-field elements are the canonical residue in `[0, p)`. Extension
//! elements pack their coordinate vector over `F_p` (in the power basis
//! `1, t, ..., t^{e-1}` of `F_p[t]/(modulus)`) as base-`p` digits, so the
//! element `c_0 + c_1 t + ...` is stored as `c_0 + c_1 p + ...`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported prime (exclusive): products of two residues fit in `u64`.
pub const PRIME_BOUND: u64 = 1 << 31;

/// Largest supported order of a proper extension field.
pub const EXTENSION_ORDER_BOUND: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (must be below 2^31)")]
    PrimeTooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{e} exceeds the supported bound 2^16")]
    ExtensionTooLarge { p: u64, e: u32 },
    #[error("modulus has degree {found}, expected {expected}")]
    ModulusDegree { expected: u32, found: usize },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("coordinate vector has length {found}, expected {expected}")]
    CoordinateLength { expected: usize, found: usize },
}

/// An element of a [`FiniteField`]; see the module docs for the encoding.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    /// The packed encoding. For prime fields this is the residue.
    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Debug)]
struct Inner {
    p: u32,
    e: u32,
    order: u32,
    /// Monic modulus, low degree first, length `e + 1`. Empty when `e = 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// The finite field `F_{p^e}`.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}[{:?}]", self.0.p, self.0.e, self.0.modulus)
        }
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn mulmod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn powmod(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u32, p: u32) -> u32 {
    powmod(a, p as u64 - 2, p)
}

/// Remainder of `a` modulo `b` over `F_p`; both low degree first, `b` nonzero
/// with trimmed leading coefficient.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let q = mulmod(top, lead_inv, p);
            let shift = r.len() - 1 - db;
            for (i, &c) in b.iter().enumerate() {
                let t = mulmod(q, c, p);
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r
}

/// Irreducibility by trial division against every monic polynomial of degree
/// at most `deg / 2`. Only used for `p^e <= 2^16`, where that is cheap.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for enc in 0..count {
            let mut div = Vec::with_capacity(k + 1);
            let mut x = enc;
            for _ in 0..k {
                div.push((x % p as u64) as u32);
                x /= p as u64;
            }
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Deterministic default modulus: the monic irreducible polynomial of degree
/// `e` whose low coefficients, read as base-`p` digits, form the smallest
/// integer.
fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for enc in 0..count {
        let mut poly = Vec::with_capacity(e as usize + 1);
        let mut x = enc;
        for _ in 0..e {
            poly.push((x % p as u64) as u32);
            x /= p as u64;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

fn decode(mut x: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(x % p);
        x /= p;
    }
    out
}

fn encode(coords: &[u32], p: u32) -> u32 {
    coords.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Multiplication in `F_p[t]/(modulus)` on coordinate vectors.
fn slow_mul(a: u32, b: u32, p: u32, e: u32, modulus: &[u32]) -> u32 {
    let ca = decode(a, p, e);
    let cb = decode(b, p, e);
    let mut prod = vec![0u32; 2 * e as usize - 1];
    for (i, &x) in ca.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in cb.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    let r = poly_rem(&prod, modulus, p);
    let mut coords = r;
    coords.resize(e as usize, 0);
    encode(&coords, p)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn build_tables(p: u32, e: u32, order: u32, modulus: &[u32]) -> Tables {
    let group = order as u64 - 1;
    let factors = prime_factors(group);
    let slow_pow = |mut base: u32, mut exp: u64| {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = slow_mul(acc, base, p, e, modulus);
            }
            base = slow_mul(base, base, p, e, modulus);
            exp >>= 1;
        }
        acc
    };
    let generator = (2..order)
        .find(|&g| factors.iter().all(|&r| slow_pow(g, group / r) != 1))
        .expect("the multiplicative group of a finite field is cyclic");
    let mut exp = Vec::with_capacity(group as usize);
    let mut log = vec![0u32; order as usize];
    let mut x = 1u32;
    for i in 0..group as u32 {
        exp.push(x);
        log[x as usize] = i;
        x = slow_mul(x, generator, p, e, modulus);
    }
    Tables { exp, log }
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    /// `F_{p^e}`, with the given modulus (low degree first) or the default
    /// one. The modulus is normalized to be monic.
    pub fn new(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p >= PRIME_BOUND {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let pu = p as u32;
        if e == 1 {
            if let Some(m) = modulus {
                let m = trim(m.iter().map(|&c| (c % p) as u32).collect());
                if m.len() != 2 {
                    return Err(FieldError::ModulusDegree {
                        expected: 1,
                        found: m.len().saturating_sub(1),
                    });
                }
            }
            return Ok(FiniteField(Arc::new(Inner {
                p: pu,
                e: 1,
                order: pu,
                modulus: Vec::new(),
                tables: None,
            })));
        }
        let order = p.checked_pow(e).filter(|&q| q <= EXTENSION_ORDER_BOUND);
        let Some(order) = order else {
            return Err(FieldError::ExtensionTooLarge { p, e });
        };
        let modulus = match modulus {
            Some(m) => {
                let m = trim(m.iter().map(|&c| (c % p) as u32).collect());
                if m.len() != e as usize + 1 {
                    return Err(FieldError::ModulusDegree {
                        expected: e,
                        found: m.len().saturating_sub(1),
                    });
                }
                let lead_inv = inv_mod(*m.last().unwrap(), pu);
                let m: Vec<u32> = m.iter().map(|&c| mulmod(c, lead_inv, pu)).collect();
                if !is_irreducible(&m, pu) {
                    return Err(FieldError::ReducibleModulus(p));
                }
                m
            }
            None => default_modulus(pu, e),
        };
        let tables = build_tables(pu, e, order as u32, &modulus);
        Ok(FiniteField(Arc::new(Inner {
            p: pu,
            e,
            order: order as u32,
            modulus,
            tables: Some(tables),
        })))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u64 {
        self.0.order as u64
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// The monic modulus, low degree first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        (self.0.e > 1).then_some(self.0.modulus.as_slice())
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The image of an integer under `Z -> F_p -> F_{p^e}`.
    pub fn from_int(&self, n: i128) -> FieldElement {
        FieldElement(n.rem_euclid(self.0.p as i128) as u32)
    }

    /// The generator `t` of the power basis (or `1` for a prime field).
    pub fn generator(&self) -> FieldElement {
        if self.0.e == 1 {
            self.one()
        } else {
            FieldElement(self.0.p)
        }
    }

    /// Decodes a packed value, returning `None` when out of range.
    pub fn element(&self, raw: u32) -> Option<FieldElement> {
        (raw < self.0.order).then_some(FieldElement(raw))
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElement, FieldError> {
        if coords.len() != self.0.e as usize {
            return Err(FieldError::CoordinateLength {
                expected: self.0.e as usize,
                found: coords.len(),
            });
        }
        let reduced: Vec<u32> = coords.iter().map(|&c| c % self.0.p).collect();
        Ok(FieldElement(encode(&reduced, self.0.p)))
    }

    pub fn coords(&self, x: FieldElement) -> Vec<u32> {
        decode(x.0, self.0.p, self.0.e)
    }

    /// All elements, in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.order).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.0.p;
        if self.0.e == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return FieldElement((s % p as u64) as u32);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.0.e {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.0.p;
        if self.0.e == 1 {
            return FieldElement((p - a.0) % p);
        }
        let coords: Vec<u32> = self.coords(a).into_iter().map(|c| (p - c) % p).collect();
        FieldElement(encode(&coords, p))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.0.tables {
            None => FieldElement(mulmod(a.0, b.0, self.0.p)),
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    return FieldElement(0);
                }
                let n = t.exp.len() as u64;
                let i = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % n;
                FieldElement(t.exp[i as usize])
            }
        }
    }

    pub fn pow(&self, a: FieldElement, exp: u64) -> FieldElement {
        match &self.0.tables {
            None => FieldElement(powmod(a.0, exp, self.0.p)),
            Some(t) => {
                if exp == 0 {
                    return self.one();
                }
                if a.0 == 0 {
                    return FieldElement(0);
                }
                let n = t.exp.len() as u64;
                let i = (t.log[a.0 as usize] as u64 % n) * (exp % n) % n;
                FieldElement(t.exp[i as usize])
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return None;
        }
        match &self.0.tables {
            None => Some(FieldElement(inv_mod(a.0, self.0.p))),
            Some(t) => {
                let n = t.exp.len() as u32;
                let l = t.log[a.0 as usize];
                Some(FieldElement(t.exp[((n - l) % n) as usize]))
            }
        }
    }

    /// The Frobenius endomorphism `x -> x^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        if self.0.e == 1 {
            a
        } else {
            self.pow(a, self.0.p as u64)
        }
    }

    /// `x -> x^{p^k}`.
    pub fn frobenius_iter(&self, a: FieldElement, k: u32) -> FieldElement {
        let k = k % self.0.e;
        (0..k).fold(a, |x, _| self.frobenius(x))
    }
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}
