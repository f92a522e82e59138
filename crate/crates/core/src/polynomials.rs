//! Sparse multivariate polynomials over finite fields, weighted gradings, and
//! integer-coefficient models with reduction modulo `p`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::{FieldElement, FiniteField};

/// Exponents are stored as `u32`; every power we form keeps them below this.
pub const EXPONENT_BOUND: u64 = 1 << 31;

/// Sparse powers switch to the dense ternary representation once the running
/// power has more terms than this and fills at least an eighth of the grid.
const DENSE_SWITCH_TERMS: usize = 4096;
const DENSE_MAX_CELLS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("exponent vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("weight system is empty")]
    EmptyWeights,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("exponent {0} exceeds the supported bound 2^31")]
    ExponentOverflow(u64),
    #[error("polynomial and point live over incompatible fields")]
    FieldMismatch,
    #[error("merged coefficient leaves the 64-bit integer range")]
    CoefficientOverflow,
}

/// Positive integer weights `w_0, ..., w_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct WeightSystem(Vec<u32>);

impl TryFrom<Vec<u32>> for WeightSystem {
    type Error = PolyError;

    fn try_from(w: Vec<u32>) -> Result<Self, PolyError> {
        WeightSystem::new(w)
    }
}

impl From<WeightSystem> for Vec<u32> {
    fn from(w: WeightSystem) -> Vec<u32> {
        w.0
    }
}

impl WeightSystem {
    pub fn new(weights: Vec<u32>) -> Result<Self, PolyError> {
        if weights.is_empty() {
            return Err(PolyError::EmptyWeights);
        }
        if weights.contains(&0) {
            return Err(PolyError::NonPositiveWeight);
        }
        Ok(WeightSystem(weights))
    }

    pub fn standard(nvars: usize) -> Self {
        WeightSystem(vec![1; nvars])
    }

    pub fn weights(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&w| w as u64).sum()
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn degree_of(&self, m: &[u32]) -> Result<u64, PolyError> {
        weighted_degree(m, self)
    }
}

pub fn weighted_degree(m: &[u32], w: &WeightSystem) -> Result<u64, PolyError> {
    if m.len() != w.len() {
        return Err(PolyError::LengthMismatch {
            expected: w.len(),
            found: m.len(),
        });
    }
    Ok(m.iter().zip(&w.0).map(|(&a, &b)| a as u64 * b as u64).sum())
}

/// A polynomial in `nvars` variables over a finite field. Terms are kept in
/// lexicographic order of exponent vectors and never hold a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: FiniteField,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl SparsePoly {
    pub fn zero(field: FiniteField, nvars: usize) -> Self {
        SparsePoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: FiniteField, nvars: usize) -> Self {
        let mut p = Self::zero(field.clone(), nvars);
        p.terms.insert(vec![0; nvars], field.one());
        p
    }

    /// Sums the given terms; repeated exponent vectors accumulate.
    pub fn from_terms(
        field: FiniteField,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, m: Vec<u32>, c: FieldElement) -> Result<(), PolyError> {
        if m.len() != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                found: m.len(),
            });
        }
        if let Some(&big) = m.iter().find(|&&x| x as u64 >= EXPONENT_BOUND) {
            return Err(PolyError::ExponentOverflow(big as u64));
        }
        let k = &self.field;
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = k.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], FieldElement)> {
        self.terms.iter().map(|(m, &c)| (m.as_slice(), c))
    }

    pub fn coefficient(&self, m: &[u32]) -> Result<FieldElement, PolyError> {
        if m.len() != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                found: m.len(),
            });
        }
        Ok(self.terms.get(m).copied().unwrap_or(FieldElement::ZERO))
    }

    /// Total (unit-weight) degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&x| x as u64).sum())
            .max()
    }

    fn max_exponents(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.nvars];
        for m in self.terms.keys() {
            for (o, &x) in out.iter_mut().zip(m) {
                *o = (*o).max(x as u64);
            }
        }
        out
    }

    pub fn scale(&self, c: FieldElement) -> SparsePoly {
        let k = &self.field;
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, &x)| {
                let y = k.mul(x, c);
                (!y.is_zero()).then(|| (m.clone(), y))
            })
            .collect();
        SparsePoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        if other.nvars != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if other.field != self.field {
            return Err(PolyError::FieldMismatch);
        }
        let k = &self.field;
        let mut acc: HashMap<Vec<u32>, FieldElement> = HashMap::new();
        for (a, &x) in &self.terms {
            for (b, &y) in &other.terms {
                let mut m = Vec::with_capacity(self.nvars);
                for (&i, &j) in a.iter().zip(b) {
                    let s = i as u64 + j as u64;
                    if s >= EXPONENT_BOUND {
                        return Err(PolyError::ExponentOverflow(s));
                    }
                    m.push(s as u32);
                }
                let slot = acc.entry(m).or_insert(FieldElement::ZERO);
                *slot = k.add(*slot, k.mul(x, y));
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(SparsePoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        })
    }

    /// `self^n` by repeated multiplication with packed monomial keys.
    ///
    /// Repeated multiplication by a sparse base costs about
    /// `terms(f) · Σ_k terms(f^k)`, far below binary powering when the base
    /// has few terms and its powers are dense.
    pub fn pow(&self, n: u64) -> Result<SparsePoly, PolyError> {
        self.pow_with(n, true)
    }

    fn pow_with(&self, n: u64, allow_dense: bool) -> Result<SparsePoly, PolyError> {
        if n == 0 {
            return Ok(SparsePoly::one(self.field.clone(), self.nvars));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let maxes = self.max_exponents();
        let mut bounds = Vec::with_capacity(maxes.len());
        for &m in &maxes {
            let b = m.saturating_mul(n);
            if b >= EXPONENT_BOUND {
                return Err(PolyError::ExponentOverflow(b));
            }
            bounds.push(b);
        }
        let Some(packer) = Packer::new(&bounds) else {
            // Keys do not fit in 64 bits; fall back to plain multiplication.
            let mut acc = self.clone();
            for _ in 1..n {
                acc = acc.mul(self)?;
            }
            return Ok(acc);
        };
        let k = &self.field;
        let base: Vec<(u64, FieldElement)> = self
            .terms
            .iter()
            .map(|(m, &c)| (packer.pack(m), c))
            .collect();
        let homogeneous_degree = self.homogeneous_total_degree();
        let mut acc: HashMap<u64, FieldElement> = base.iter().copied().collect();
        let mut step = 1;
        while step < n {
            if allow_dense && self.nvars == 3 && acc.len() > DENSE_SWITCH_TERMS {
                if let Some(d) = homogeneous_degree {
                    let final_deg = d * n;
                    let cells = (final_deg + 1) * (final_deg + 1);
                    if cells <= DENSE_MAX_CELLS && (acc.len() as u64) * 8 >= cells {
                        let current = unpack_map(&packer, acc, k, self);
                        return Ok(dense_ternary_finish(current, self, d, step, n));
                    }
                }
            }
            let mut next: HashMap<u64, FieldElement> = HashMap::with_capacity(acc.len() * 2);
            for (&a, &x) in &acc {
                for &(b, y) in &base {
                    // packed keys add componentwise since no component overflows its radix
                    let slot = next.entry(a + b).or_insert(FieldElement::ZERO);
                    *slot = k.add(*slot, k.mul(x, y));
                }
            }
            next.retain(|_, c| !c.is_zero());
            acc = next;
            step += 1;
        }
        Ok(unpack_map(&packer, acc, k, self))
    }

    /// `f^(p-1)` where `p` is the field characteristic.
    pub fn power_pminus1(&self) -> Result<SparsePoly, PolyError> {
        self.pow(self.field.characteristic() - 1)
    }

    fn homogeneous_total_degree(&self) -> Option<u64> {
        let mut degs = self
            .terms
            .keys()
            .map(|m| m.iter().map(|&x| x as u64).sum::<u64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// The common weighted degree of all terms, or `None` when terms differ.
    pub fn is_quasi_homogeneous(&self, w: &WeightSystem) -> Result<Option<u64>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut degs = self.terms.keys().map(|m| weighted_degree(m, w));
        let first = degs.next().unwrap()?;
        for d in degs {
            if d? != first {
                return Ok(None);
            }
        }
        Ok(Some(first))
    }

    /// Formal partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> SparsePoly {
        let k = &self.field;
        let mut out = SparsePoly::zero(k.clone(), self.nvars);
        for (m, &c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let coeff = k.mul(c, k.from_int(m[var] as i128));
            if coeff.is_zero() {
                continue;
            }
            let mut dm = m.clone();
            dm[var] -= 1;
            out.terms.insert(dm, coeff);
        }
        out
    }

    /// Evaluates at a point with coordinates in `target`, which must be this
    /// polynomial's field or an extension of its prime field (when this
    /// polynomial is over a prime field).
    pub fn evaluate_in(
        &self,
        target: &FiniteField,
        point: &[FieldElement],
    ) -> Result<FieldElement, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let compatible = *target == self.field
            || (self.field.is_prime_field()
                && target.characteristic() == self.field.characteristic());
        if !compatible {
            return Err(PolyError::FieldMismatch);
        }
        let mut acc = target.zero();
        for (m, &c) in &self.terms {
            let mut t = if *target == self.field {
                c
            } else {
                target.from_int(c.raw() as i128)
            };
            for (&x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = target.mul(t, target.pow(x, e as u64));
                }
            }
            acc = target.add(acc, t);
        }
        Ok(acc)
    }
}

/// Mixed-radix packing of exponent vectors into `u64`.
struct Packer {
    radices: Vec<u64>,
}

impl Packer {
    fn new(bounds: &[u64]) -> Option<Packer> {
        let mut product: u64 = 1;
        let mut radices = Vec::with_capacity(bounds.len());
        for &b in bounds {
            radices.push(product);
            product = product.checked_mul(b + 1)?;
        }
        Some(Packer { radices })
    }

    fn pack(&self, m: &[u32]) -> u64 {
        m.iter()
            .zip(&self.radices)
            .map(|(&x, &r)| x as u64 * r)
            .sum()
    }

    fn unpack(&self, mut key: u64) -> Vec<u32> {
        let mut out = vec![0u32; self.radices.len()];
        for i in (0..self.radices.len()).rev() {
            out[i] = (key / self.radices[i]) as u32;
            key %= self.radices[i];
        }
        out
    }
}

fn unpack_map(
    packer: &Packer,
    acc: HashMap<u64, FieldElement>,
    k: &FiniteField,
    like: &SparsePoly,
) -> SparsePoly {
    let terms = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(key, c)| (packer.unpack(key), c))
        .collect();
    SparsePoly {
        field: k.clone(),
        nvars: like.nvars,
        terms,
    }
}

/// Finishes `f^n` from `f^step` for a homogeneous ternary form `f` of degree
/// `d`, storing each power as a dense grid indexed by the first two exponents.
fn dense_ternary_finish(
    current: SparsePoly,
    f: &SparsePoly,
    d: u64,
    step: u64,
    n: u64,
) -> SparsePoly {
    let k = &f.field;
    let side = (d * n + 1) as usize;
    let mut grid = vec![FieldElement::ZERO; side * side];
    for (m, &c) in &current.terms {
        grid[m[0] as usize * side + m[1] as usize] = c;
    }
    let base: Vec<(usize, usize, FieldElement)> = f
        .terms
        .iter()
        .map(|(m, &c)| (m[0] as usize, m[1] as usize, c))
        .collect();
    let mut deg = d * step;
    for _ in step..n {
        let mut next = vec![FieldElement::ZERO; side * side];
        let reach = deg as usize;
        for i in 0..=reach {
            for j in 0..=reach - i {
                let x = grid[i * side + j];
                if x.is_zero() {
                    continue;
                }
                for &(a, b, y) in &base {
                    let idx = (i + a) * side + (j + b);
                    next[idx] = k.add(next[idx], k.mul(x, y));
                }
            }
        }
        grid = next;
        deg += d;
    }
    let mut terms = BTreeMap::new();
    for i in 0..side {
        for j in 0..side - i {
            let c = grid[i * side + j];
            if !c.is_zero() {
                let l = deg - i as u64 - j as u64;
                terms.insert(vec![i as u32, j as u32, l as u32], c);
            }
        }
    }
    SparsePoly {
        field: k.clone(),
        nvars: 3,
        terms,
    }
}

/// One term of an integer-coefficient polynomial, as it appears in the model
/// JSON schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegerTerm {
    pub coeff: i64,
    pub exponents: Vec<u32>,
}

/// A polynomial with integer coefficients, normalized: duplicate exponent
/// vectors merged, zero coefficients dropped, lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl IntegerPoly {
    pub fn new(nvars: usize, terms: &[IntegerTerm]) -> Result<Self, PolyError> {
        let mut map: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
        for t in terms {
            if t.exponents.len() != nvars {
                return Err(PolyError::LengthMismatch {
                    expected: nvars,
                    found: t.exponents.len(),
                });
            }
            if let Some(&big) = t.exponents.iter().find(|&&x| x as u64 >= EXPONENT_BOUND) {
                return Err(PolyError::ExponentOverflow(big as u64));
            }
            *map.entry(t.exponents.clone()).or_insert(0) += t.coeff as i128;
        }
        if map.values().any(|&c| i64::try_from(c).is_err()) {
            return Err(PolyError::CoefficientOverflow);
        }
        map.retain(|_, c| *c != 0);
        Ok(IntegerPoly { nvars, terms: map })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i128)> {
        self.terms.iter().map(|(m, &c)| (m.as_slice(), c))
    }

    pub fn to_terms(&self) -> Vec<IntegerTerm> {
        self.terms
            .iter()
            .map(|(m, &c)| IntegerTerm {
                coeff: c as i64,
                exponents: m.clone(),
            })
            .collect()
    }

    pub fn is_quasi_homogeneous(&self, w: &WeightSystem) -> Result<Option<u64>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut degs = self.terms.keys().map(|m| weighted_degree(m, w));
        let first = degs.next().unwrap()?;
        for d in degs {
            if d? != first {
                return Ok(None);
            }
        }
        Ok(Some(first))
    }

    pub fn mul(&self, other: &IntegerPoly) -> IntegerPoly {
        let mut map: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
        for (a, &x) in &self.terms {
            for (b, &y) in &other.terms {
                let m: Vec<u32> = a.iter().zip(b).map(|(&i, &j)| i + j).collect();
                *map.entry(m).or_insert(0) += x * y;
            }
        }
        map.retain(|_, c| *c != 0);
        IntegerPoly {
            nvars: self.nvars,
            terms: map,
        }
    }

    /// Image in `F_p[x]`; terms whose coefficient vanishes mod `p` disappear.
    pub fn reduce_mod_p(&self, field: &FiniteField) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, &c)| {
                let r = field.from_int(c);
                (!r.is_zero()).then(|| (m.clone(), r))
            })
            .collect();
        SparsePoly {
            field: field.clone(),
            nvars: self.nvars,
            terms,
        }
    }
}

pub fn reduce_mod_p(f: &IntegerPoly, p: u64) -> Result<SparsePoly, crate::fields::FieldError> {
    Ok(f.reduce_mod_p(&FiniteField::prime(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ipoly(nvars: usize, terms: &[(i64, &[u32])]) -> IntegerPoly {
        let t: Vec<IntegerTerm> = terms
            .iter()
            .map(|&(c, e)| IntegerTerm {
                coeff: c,
                exponents: e.to_vec(),
            })
            .collect();
        IntegerPoly::new(nvars, &t).unwrap()
    }

    fn fermat(d: u32) -> IntegerPoly {
        ipoly(3, &[(1, &[d, 0, 0]), (1, &[0, d, 0]), (1, &[0, 0, d])])
    }

    fn factorial(n: u64) -> u128 {
        (1..=n as u128).product()
    }

    /// Multinomial coefficient n! / Π k_i!, reduced mod p.
    fn multinomial_mod(parts: &[u64], p: u64) -> u64 {
        let n: u64 = parts.iter().sum();
        let denom: u128 = parts.iter().map(|&k| factorial(k)).product();
        ((factorial(n) / denom) % p as u128) as u64
    }

    #[test]
    fn weighted_degree_examples() {
        let w = WeightSystem::new(vec![21, 14, 6]).unwrap();
        assert_eq!(weighted_degree(&[2, 0, 0], &w).unwrap(), 42);
        assert_eq!(weighted_degree(&[0, 0, 0], &w).unwrap(), 0);
        assert_eq!(
            weighted_degree(&[1, 1, 1], &WeightSystem::standard(3)).unwrap(),
            3
        );
        assert!(matches!(
            weighted_degree(&[1, 1], &w),
            Err(PolyError::LengthMismatch { .. })
        ));
        assert_eq!(
            WeightSystem::new(vec![1, 0]).unwrap_err(),
            PolyError::NonPositiveWeight
        );
    }

    #[test]
    fn quasi_homogeneity_examples() {
        let w = WeightSystem::new(vec![21, 14, 6]).unwrap();
        let brieskorn = ipoly(3, &[(1, &[2, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 7])]);
        assert_eq!(brieskorn.is_quasi_homogeneous(&w).unwrap(), Some(42));
        assert_eq!(
            fermat(4)
                .is_quasi_homogeneous(&WeightSystem::standard(3))
                .unwrap(),
            Some(4)
        );
        let deformed = ipoly(
            3,
            &[
                (1, &[2, 0, 0]),
                (1, &[0, 3, 0]),
                (1, &[0, 0, 7]),
                (1, &[1, 1, 1]),
            ],
        );
        assert_eq!(deformed.is_quasi_homogeneous(&w).unwrap(), None);
        let k = FiniteField::prime(5).unwrap();
        assert_eq!(
            SparsePoly::zero(k, 3).is_quasi_homogeneous(&w).unwrap_err(),
            PolyError::ZeroPolynomial
        );
    }

    #[test]
    fn power_examples() {
        let f5 = FiniteField::prime(5).unwrap();
        let x = ipoly(1, &[(1, &[1])]).reduce_mod_p(&f5);
        let x4 = x.power_pminus1().unwrap();
        assert_eq!(
            x4.terms().collect::<Vec<_>>(),
            vec![(&[4u32][..], f5.one())]
        );

        let f3 = FiniteField::prime(3).unwrap();
        let xy = ipoly(2, &[(1, &[1, 0]), (1, &[0, 1])]).reduce_mod_p(&f3);
        let sq = xy.power_pminus1().unwrap();
        let expect = ipoly(2, &[(1, &[2, 0]), (2, &[1, 1]), (1, &[0, 2])]).reduce_mod_p(&f3);
        assert_eq!(sq, expect);
    }

    #[test]
    fn fermat_quartic_square_mod_3_matches_expansion() {
        let f3 = FiniteField::prime(3).unwrap();
        let f = fermat(4).reduce_mod_p(&f3);
        let sq = f.power_pminus1().unwrap();
        // (x^4+y^4+z^4)^2 = Σ x^8 + 2 Σ x^4 y^4, expanded by hand
        let expect = ipoly(
            3,
            &[
                (1, &[8, 0, 0]),
                (1, &[0, 8, 0]),
                (1, &[0, 0, 8]),
                (2, &[4, 4, 0]),
                (2, &[4, 0, 4]),
                (2, &[0, 4, 4]),
            ],
        )
        .reduce_mod_p(&f3);
        assert_eq!(sq, expect);
    }

    #[test]
    fn coefficient_examples_match_multinomials() {
        let f5 = FiniteField::prime(5).unwrap();
        let q4 = fermat(4).reduce_mod_p(&f5).pow(4).unwrap();
        let expect = multinomial_mod(&[2, 1, 1], 5);
        assert_eq!(expect, 2);
        assert_eq!(
            q4.coefficient(&[8, 4, 4]).unwrap(),
            f5.from_int(expect as i128)
        );

        let f7 = FiniteField::prime(7).unwrap();
        let c6 = fermat(3).reduce_mod_p(&f7).pow(6).unwrap();
        let expect = multinomial_mod(&[2, 2, 2], 7);
        assert_eq!(expect, 6);
        assert_eq!(
            c6.coefficient(&[6, 6, 6]).unwrap(),
            f7.from_int(expect as i128)
        );

        assert!(SparsePoly::zero(f7.clone(), 3)
            .coefficient(&[1, 2, 3])
            .unwrap()
            .is_zero());
        assert!(c6.coefficient(&[1, 2]).is_err());
    }

    #[test]
    fn full_fermat_power_matches_multinomial_expansion() {
        // every coefficient of (x^d+y^d+z^d)^n is a multinomial
        for (d, p) in [(3u32, 7u64), (4, 5), (4, 13)] {
            let k = FiniteField::prime(p).unwrap();
            let n = p - 1;
            let pw = fermat(d).reduce_mod_p(&k).pow(n).unwrap();
            let mut expected = BTreeMap::new();
            for i in 0..=n {
                for j in 0..=n - i {
                    let l = n - i - j;
                    let c = multinomial_mod(&[i, j, l], p);
                    if c != 0 {
                        expected.insert(
                            vec![d * i as u32, d * j as u32, d * l as u32],
                            k.from_int(c as i128),
                        );
                    }
                }
            }
            assert_eq!(pw.terms, expected, "d={d} p={p}");
        }
    }

    #[test]
    fn reduce_mod_p_examples() {
        let f5 = FiniteField::prime(5).unwrap();
        let r = fermat(4).reduce_mod_p(&f5);
        assert_eq!(r.len(), 3);
        assert!(r.terms().all(|(_, c)| c == f5.one()));
        let g = ipoly(2, &[(5, &[2, 0]), (1, &[0, 1])]).reduce_mod_p(&f5);
        assert_eq!(
            g.terms().collect::<Vec<_>>(),
            vec![(&[0u32, 1][..], f5.one())]
        );
        let f2 = FiniteField::prime(2).unwrap();
        let b = ipoly(3, &[(1, &[2, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 7])]).reduce_mod_p(&f2);
        assert_eq!(b.len(), 3);
        assert_eq!(
            reduce_mod_p(&fermat(4), 4).unwrap_err(),
            crate::fields::FieldError::NotPrime(4)
        );
    }

    #[test]
    fn integer_terms_merge_and_cancel() {
        let p = ipoly(
            2,
            &[(3, &[1, 0]), (-3, &[1, 0]), (2, &[0, 1]), (1, &[0, 1])],
        );
        assert_eq!(p.terms().collect::<Vec<_>>(), vec![(&[0u32, 1][..], 3)]);
        let bad = IntegerPoly::new(
            2,
            &[IntegerTerm {
                coeff: 1,
                exponents: vec![1],
            }],
        );
        assert!(matches!(bad, Err(PolyError::LengthMismatch { .. })));
        let big = IntegerTerm {
            coeff: i64::MAX,
            exponents: vec![1, 1],
        };
        assert_eq!(
            IntegerPoly::new(2, &[big.clone(), big]).unwrap_err(),
            PolyError::CoefficientOverflow
        );
    }

    #[test]
    fn dense_and_sparse_powers_agree() {
        let k = FiniteField::prime(11).unwrap();
        // a dense quartic: every monomial of degree 4 with coefficient (i+2j+1)
        let mut terms = Vec::new();
        for i in 0..=4u32 {
            for j in 0..=4 - i {
                terms.push((vec![i, j, 4 - i - j], k.from_int((i + 2 * j + 1) as i128)));
            }
        }
        let f = SparsePoly::from_terms(k.clone(), 3, terms).unwrap();
        let n = 40;
        let sparse = f.pow_with(n, false).unwrap();
        let dense = f.pow_with(n, true).unwrap();
        assert!(sparse.len() > DENSE_SWITCH_TERMS);
        assert_eq!(sparse, dense);
        // spot-check against plain repeated multiplication at a lower power
        let mut acc = f.clone();
        for _ in 1..5 {
            acc = acc.mul(&f).unwrap();
        }
        assert_eq!(acc, f.pow(5).unwrap());
    }

    #[test]
    fn exponent_guard() {
        let k = FiniteField::prime(3).unwrap();
        let f = SparsePoly::from_terms(k.clone(), 1, [(vec![1 << 30], k.one())]).unwrap();
        assert!(matches!(f.pow(2), Err(PolyError::ExponentOverflow(_))));
        let mut g = SparsePoly::zero(k.clone(), 1);
        assert!(matches!(
            g.add_term(vec![1 << 31], k.one()),
            Err(PolyError::ExponentOverflow(_))
        ));
    }

    #[test]
    fn derivative_and_evaluation() {
        let k = FiniteField::prime(5).unwrap();
        let f = fermat(4).reduce_mod_p(&k);
        let fx = f.derivative(0);
        assert_eq!(
            fx.terms().collect::<Vec<_>>(),
            vec![(&[3u32, 0, 0][..], k.from_int(4))]
        );
        let pt = [k.from_int(1), k.from_int(2), k.from_int(0)];
        // 1 + 16 = 17 = 2 mod 5
        assert_eq!(f.evaluate_in(&k, &pt).unwrap(), k.from_int(2));
        let k25 = FiniteField::new(5, 2, None).unwrap();
        let g = k25.generator();
        let val = f.evaluate_in(&k25, &[g, k25.zero(), k25.zero()]).unwrap();
        assert_eq!(val, k25.pow(g, 4));
        let f7 = FiniteField::prime(7).unwrap();
        assert_eq!(
            f.evaluate_in(&f7, &[f7.one(); 3]).unwrap_err(),
            PolyError::FieldMismatch
        );
    }
}
