//! Graded pieces of the top local cohomology of a hypersurface ring
//! `R = S/(f)`, `S = k[x_0, ..., x_n]`, and the Frobenius action on them.
//!
//! `H^{n+1}_m(S)` has the Čech basis `x^{-a}` with every `a_i >= 1`, and
//! `H^n_m(R)` is the kernel of multiplication by `f` on `H^{n+1}_m(S)(-d)`.
//! A class of degree `e` is therefore a combination of `x^{-a}` with
//! `Σ a_i w_i = d - e`. Frobenius sends `x^{-a}` to `f^{p-1} x^{-pa}`,
//! keeping only the monomials whose exponents are all negative, so it maps
//! degree `e` to degree `p e` and preserves degree zero.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::{FieldElement, FiniteField, EXTENSION_ORDER_BOUND};
use crate::matrix::Matrix;
use crate::polynomials::{PolyError, SparsePoly, WeightSystem};
use crate::semilinear::SemilinearOperator;

/// Hypotheses every graded verdict relies on but cannot check.
pub const ASSUMPTIONS: &[&str] = &[
    "R is F-rational on the punctured spectrum (isolated non-F-rational point at the homogeneous maximal ideal)",
    "the tight closure of zero in the top local cohomology has finite length",
];

/// Largest number of candidate points [`HypersurfaceData::isolated_check`]
/// evaluates at one extension degree.
pub const ISOLATED_SEARCH_BOUND: u64 = 1 << 21;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LochomError {
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not quasi-homogeneous for the given weights")]
    NotQuasiHomogeneous,
    #[error("hypersurface needs at least two variables, got {0}")]
    TooFewVariables(usize),
    #[error("{found} weights given for {expected} variables")]
    WeightCount { expected: usize, found: usize },
    #[error("singular-point search over {0} points exceeds the bound")]
    SearchTooLarge(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A quasi-homogeneous hypersurface `f` with its grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypersurfaceData {
    f: SparsePoly,
    weights: WeightSystem,
    degree: u64,
}

/// The graded piece `[H^n_m(R)]_e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomPiece {
    pub degree: i64,
    /// Exponent vectors `a` of the classes `x^{-a}` spanning the ambient
    /// piece of `H^{n+1}_m(S)(-d)`, in lexicographic order.
    pub ambient_basis: Vec<Vec<u32>>,
    /// Coordinates (against `ambient_basis`) of a basis of the kernel of
    /// multiplication by `f`.
    pub kernel_basis: Vec<Vec<FieldElement>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    FNilpotent,
    NotFNilpotent,
}

impl Verdict {
    pub fn is_nilpotent(self) -> bool {
        self == Verdict::FNilpotent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradedReason {
    NegativeAInvariant,
    EmptyDegreeZero,
    NilpotentFrobenius,
    StableClasses,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedVerdict {
    pub verdict: Verdict,
    pub reason: GradedReason,
    pub degree: u64,
    pub a_invariant: i64,
    pub basis_dim: usize,
    pub ss_dim: usize,
    pub nil_dim: usize,
    /// Over a prime field: a nonzero degree-zero class fixed by Frobenius,
    /// when one exists.
    pub fixed_vector: Option<Vec<FieldElement>>,
}

/// Outcome of the singular-point search backing the isolated-singularity
/// hypothesis. `Pass` is evidence, not proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IsolatedCheck {
    Pass {
        searched_degree: u32,
    },
    Fail {
        extension_degree: u32,
        point: Vec<u32>,
    },
    Inconclusive {
        searched_degree: u32,
    },
}

impl IsolatedCheck {
    pub fn label(&self) -> &'static str {
        match self {
            IsolatedCheck::Pass { .. } => "PASS",
            IsolatedCheck::Fail { .. } => "FAIL",
            IsolatedCheck::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

/// All `a` with every `a_i >= 1` and `Σ a_i w_i = s`, lexicographically.
pub fn neg_monomials(weights: &WeightSystem, s: i64) -> Vec<Vec<u32>> {
    fn go(w: &[u32], remaining: u64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&first, rest)) = w.split_first() else {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        let rest_min: u64 = rest.iter().map(|&x| x as u64).sum();
        if remaining < first as u64 + rest_min {
            return;
        }
        if rest.is_empty() {
            if remaining.is_multiple_of(first as u64) {
                prefix.push((remaining / first as u64) as u32);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let max_a = (remaining - rest_min) / first as u64;
        for a in 1..=max_a {
            prefix.push(a as u32);
            go(rest, remaining - a * first as u64, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if s > 0 {
        go(weights.weights(), s as u64, &mut Vec::new(), &mut out);
    }
    out
}

fn index_of(basis: &[Vec<u32>]) -> HashMap<&[u32], usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i))
        .collect()
}

impl HypersurfaceData {
    pub fn new(f: SparsePoly, weights: WeightSystem) -> Result<Self, LochomError> {
        if weights.len() != f.nvars() {
            return Err(LochomError::WeightCount {
                expected: f.nvars(),
                found: weights.len(),
            });
        }
        if f.nvars() < 2 {
            return Err(LochomError::TooFewVariables(f.nvars()));
        }
        if f.is_zero() {
            return Err(LochomError::ZeroPolynomial);
        }
        let degree = f
            .is_quasi_homogeneous(&weights)?
            .ok_or(LochomError::NotQuasiHomogeneous)?;
        Ok(HypersurfaceData { f, weights, degree })
    }

    pub fn field(&self) -> &FiniteField {
        self.f.field()
    }

    pub fn polynomial(&self) -> &SparsePoly {
        &self.f
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    /// Weighted degree `d` of `f`.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// `a(R) = d - Σ w_i`.
    pub fn a_invariant(&self) -> i64 {
        self.degree as i64 - self.weights.total() as i64
    }

    pub fn neg_monomials(&self, s: i64) -> Vec<Vec<u32>> {
        neg_monomials(&self.weights, s)
    }

    /// Basis of the degree-zero piece (no kernel condition applies there).
    pub fn degree_zero_basis(&self) -> Vec<Vec<u32>> {
        self.neg_monomials(self.degree as i64)
    }

    /// Matrix of multiplication by `f` from the ambient piece of degree `e`
    /// into `H^{n+1}_m(S)` in degree `e`, truncating non-negative exponents.
    pub fn multiplication_matrix(&self, e: i64) -> (Vec<Vec<u32>>, Vec<Vec<u32>>, Matrix) {
        let k = self.field();
        let source = self.neg_monomials(self.degree as i64 - e);
        let target = self.neg_monomials(-e);
        let index = index_of(&target);
        let mut m = Matrix::zeros(target.len(), source.len());
        for (col, a) in source.iter().enumerate() {
            for (u, c) in self.f.terms() {
                if a.iter().zip(u).all(|(&ai, &ui)| ai > ui) {
                    let b: Vec<u32> = a.iter().zip(u).map(|(&ai, &ui)| ai - ui).collect();
                    let row = index[b.as_slice()];
                    m[(row, col)] = k.add(m[(row, col)], c);
                }
            }
        }
        (source, target, m)
    }

    pub fn degree_piece(&self, e: i64) -> CohomPiece {
        let (source, _, m) = self.multiplication_matrix(e);
        let kernel_basis = m.nullspace(self.field());
        CohomPiece {
            degree: e,
            ambient_basis: source,
            kernel_basis,
        }
    }

    /// Matrix of Frobenius from the ambient span of degree `e` to that of
    /// degree `p e`: entry `(b, a)` is the coefficient of `x^{pa-b}` in
    /// `f^{p-1}`.
    pub fn frobenius_degree_map(&self, e: i64) -> Result<Matrix, LochomError> {
        let p = self.field().characteristic();
        let d = self.degree as i64;
        let source = self.neg_monomials(d - e);
        let target = self.neg_monomials(d - p as i64 * e);
        let mut m = Matrix::zeros(target.len(), source.len());
        if source.is_empty() || target.is_empty() {
            return Ok(m);
        }
        let g = self.f.power_pminus1()?;
        let index = index_of(&target);
        let k = self.field();
        for (col, a) in source.iter().enumerate() {
            for (u, c) in g.terms() {
                // b = p a - u must have every entry >= 1
                let mut b = Vec::with_capacity(a.len());
                for (&ai, &ui) in a.iter().zip(u) {
                    let pa = ai as u64 * p;
                    if pa <= ui as u64 {
                        break;
                    }
                    b.push((pa - ui as u64) as u32);
                }
                if b.len() != a.len() {
                    continue;
                }
                let row = *index
                    .get(b.as_slice())
                    .expect("Frobenius image has degree d - p e");
                m[(row, col)] = k.add(m[(row, col)], c);
            }
        }
        Ok(m)
    }

    /// The p-semilinear Frobenius on `[H^n_m(R)]_0` in the basis
    /// [`Self::degree_zero_basis`].
    pub fn frobenius_on_degree_zero(&self) -> Result<SemilinearOperator, LochomError> {
        let m = self.frobenius_degree_map(0)?;
        Ok(SemilinearOperator::new(self.field().clone(), m).expect("degree-zero map is square"))
    }

    pub fn classify_graded(&self) -> Result<GradedVerdict, LochomError> {
        let a_invariant = self.a_invariant();
        let basis_dim = self.degree_zero_basis().len();
        let base = GradedVerdict {
            verdict: Verdict::FNilpotent,
            reason: GradedReason::EmptyDegreeZero,
            degree: self.degree,
            a_invariant,
            basis_dim,
            ss_dim: 0,
            nil_dim: basis_dim,
            fixed_vector: None,
        };
        if a_invariant < 0 {
            return Ok(GradedVerdict {
                reason: GradedReason::NegativeAInvariant,
                ..base
            });
        }
        if basis_dim == 0 {
            return Ok(base);
        }
        let op = self.frobenius_on_degree_zero()?;
        let split = op.fitting_decomposition();
        if split.ss_dim == 0 {
            return Ok(GradedVerdict {
                reason: GradedReason::NilpotentFrobenius,
                ..base
            });
        }
        let fixed_vector = if self.field().is_prime_field() {
            op.fixed_points().into_iter().next()
        } else {
            None
        };
        Ok(GradedVerdict {
            verdict: Verdict::NotFNilpotent,
            reason: GradedReason::StableClasses,
            ss_dim: split.ss_dim,
            nil_dim: split.nil_dim,
            fixed_vector,
            ..base
        })
    }

    /// Searches for singular points of `V(f)` away from the origin over
    /// `F_{p^k}` for `k = 1..=max_extension`.
    ///
    /// With equal weights points are enumerated projectively; otherwise
    /// every nonzero affine point is tried. Extensions are only searched
    /// when `f` is defined over a prime field.
    pub fn isolated_check(&self, max_extension: u32) -> Result<IsolatedCheck, LochomError> {
        let base = self.field();
        let p = base.characteristic();
        let n = self.nvars();
        let partials: Vec<SparsePoly> = (0..n).map(|i| self.f.derivative(i)).collect();
        let projective = self
            .weights
            .weights()
            .iter()
            .all(|&w| w == self.weights.weights()[0]);
        for k in 1..=max_extension {
            let field = if k == 1 {
                base.clone()
            } else {
                let order = (base.order() as u128).checked_pow(k);
                if !base.is_prime_field() || order.is_none_or(|q| q > EXTENSION_ORDER_BOUND as u128)
                {
                    return Ok(IsolatedCheck::Inconclusive {
                        searched_degree: k - 1,
                    });
                }
                FiniteField::new(p, k, None).expect("extension order checked above")
            };
            let q = field.order() as u128;
            let count = if projective {
                (q.pow(n as u32) - 1) / (q - 1)
            } else {
                q.pow(n as u32) - 1
            };
            if count > ISOLATED_SEARCH_BOUND as u128 {
                if k == 1 {
                    return Err(LochomError::SearchTooLarge(
                        count.min(u64::MAX as u128) as u64
                    ));
                }
                return Ok(IsolatedCheck::Inconclusive {
                    searched_degree: k - 1,
                });
            }
            let singular = |pt: &[FieldElement]| -> bool {
                self.f.evaluate_in(&field, pt).is_ok_and(|v| v.is_zero())
                    && partials
                        .iter()
                        .all(|g| g.evaluate_in(&field, pt).is_ok_and(|v| v.is_zero()))
            };
            if let Some(pt) = search_points(&field, n, projective, singular) {
                return Ok(IsolatedCheck::Fail {
                    extension_degree: k,
                    point: pt.iter().map(|x| x.raw()).collect(),
                });
            }
        }
        Ok(IsolatedCheck::Pass {
            searched_degree: max_extension,
        })
    }
}

/// First point (in enumeration order) satisfying `pred`, over nonzero
/// affine points or normalized projective representatives.
fn search_points(
    field: &FiniteField,
    n: usize,
    projective: bool,
    mut pred: impl FnMut(&[FieldElement]) -> bool,
) -> Option<Vec<FieldElement>> {
    let q = field.order();
    let mut pt = vec![field.zero(); n];
    // Projective representatives: first nonzero coordinate equal to one.
    let leads: Vec<usize> = if projective {
        (0..n).collect()
    } else {
        vec![usize::MAX]
    };
    for lead in leads {
        let free: Vec<usize> = if projective {
            (lead + 1..n).collect()
        } else {
            (0..n).collect()
        };
        let total = q.pow(free.len() as u32);
        for idx in 0..total {
            pt.iter_mut().for_each(|x| *x = field.zero());
            if projective {
                pt[lead] = field.one();
            }
            let mut rest = idx;
            for &i in &free {
                pt[i] = field.element((rest % q) as u32).unwrap();
                rest /= q;
            }
            if !projective && idx == 0 {
                continue;
            }
            if pred(&pt) {
                return Some(pt.clone());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{IntegerPoly, IntegerTerm};

    fn hyper(p: u64, weights: &[u32], terms: &[(i64, &[u32])]) -> HypersurfaceData {
        let k = FiniteField::prime(p).unwrap();
        let t: Vec<IntegerTerm> = terms
            .iter()
            .map(|&(c, e)| IntegerTerm {
                coeff: c,
                exponents: e.to_vec(),
            })
            .collect();
        let f = IntegerPoly::new(weights.len(), &t)
            .unwrap()
            .reduce_mod_p(&k);
        HypersurfaceData::new(f, WeightSystem::new(weights.to_vec()).unwrap()).unwrap()
    }

    fn quartic(p: u64) -> HypersurfaceData {
        hyper(
            p,
            &[1, 1, 1],
            &[(1, &[4, 0, 0]), (1, &[0, 4, 0]), (1, &[0, 0, 4])],
        )
    }

    fn brieskorn(p: u64) -> HypersurfaceData {
        hyper(
            p,
            &[21, 14, 6],
            &[(1, &[2, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 7])],
        )
    }

    fn raw(m: &Matrix) -> Vec<Vec<u32>> {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|x| x.raw()).collect())
            .collect()
    }

    #[test]
    fn a_invariant_examples() {
        assert_eq!(brieskorn(11).a_invariant(), 1);
        assert_eq!(quartic(5).a_invariant(), 1);
        let conic = hyper(
            5,
            &[1, 1, 1],
            &[(1, &[2, 0, 0]), (1, &[0, 2, 0]), (1, &[0, 0, 2])],
        );
        assert_eq!(conic.a_invariant(), -1);
    }

    #[test]
    fn neg_monomial_examples() {
        let unit = WeightSystem::standard(3);
        assert_eq!(
            neg_monomials(&unit, 4),
            vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]
        );
        assert!(neg_monomials(&WeightSystem::new(vec![21, 14, 6]).unwrap(), 42).is_empty());
        assert!(neg_monomials(&WeightSystem::new(vec![2, 3]).unwrap(), 6).is_empty());
        assert!(neg_monomials(&unit, 0).is_empty());
        assert!(neg_monomials(&unit, -3).is_empty());
        assert_eq!(
            neg_monomials(&WeightSystem::new(vec![2, 3]).unwrap(), 12),
            vec![vec![3, 2]]
        );
    }

    #[test]
    fn neg_monomials_match_brute_force() {
        for w in [vec![1, 1, 1], vec![2, 3, 5], vec![3, 1], vec![1, 2, 2, 3]] {
            let ws = WeightSystem::new(w.clone()).unwrap();
            for s in 0..20i64 {
                let mut expect = Vec::new();
                let bound = 20u32;
                let n = w.len();
                let total = (bound as u64).pow(n as u32);
                for idx in 0..total {
                    let mut x = idx;
                    let a: Vec<u32> = (0..n)
                        .map(|_| {
                            let v = (x % bound as u64) as u32 + 1;
                            x /= bound as u64;
                            v
                        })
                        .collect();
                    if a.iter()
                        .zip(&w)
                        .map(|(&ai, &wi)| (ai * wi) as i64)
                        .sum::<i64>()
                        == s
                    {
                        expect.push(a);
                    }
                }
                expect.sort();
                assert_eq!(neg_monomials(&ws, s), expect, "w={w:?} s={s}");
            }
        }
    }

    #[test]
    fn degree_piece_examples() {
        let node = hyper(7, &[1, 1], &[(1, &[1, 1])]);
        let piece = node.degree_piece(0);
        assert_eq!(piece.ambient_basis, vec![vec![1, 1]]);
        assert_eq!(piece.kernel_basis.len(), 1);

        let circle = hyper(5, &[1, 1], &[(1, &[2, 0]), (1, &[0, 2])]);
        let piece = circle.degree_piece(-2);
        assert_eq!(
            piece.ambient_basis,
            vec![vec![1, 3], vec![2, 2], vec![3, 1]]
        );
        assert_eq!(piece.kernel_basis.len(), 2);
        let k = circle.field();
        let (_, _, mult) = circle.multiplication_matrix(-2);
        assert_eq!(raw(&mult), vec![vec![1, 0, 1]]);
        // span{(2,2), (1,3) - (3,1)}
        let span = Matrix::from_rows(piece.kernel_basis.clone()).unwrap();
        let expected = Matrix::from_rows(vec![
            vec![k.zero(), k.one(), k.zero()],
            vec![k.one(), k.zero(), k.from_int(-1)],
        ])
        .unwrap();
        let mut stacked = piece.kernel_basis.clone();
        stacked.extend((0..2).map(|i| expected.row(i).to_vec()));
        assert_eq!(span.rank(k), 2);
        assert_eq!(Matrix::from_rows(stacked).unwrap().rank(k), 2);

        let q = quartic(5).degree_piece(0);
        assert_eq!(q.ambient_basis.len(), 3);
        assert_eq!(q.kernel_basis.len(), 3);
    }

    #[test]
    fn frobenius_on_degree_zero_examples() {
        let m5 = quartic(5).frobenius_on_degree_zero().unwrap();
        assert_eq!(
            raw(m5.matrix()),
            vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]
        );
        let m3 = quartic(3).frobenius_on_degree_zero().unwrap();
        assert!(m3.matrix().is_zero());
        assert_eq!(m3.dim(), 3);
        for p in [2, 3, 5, 7, 11] {
            let node = hyper(p, &[1, 1], &[(1, &[1, 1])]);
            assert_eq!(
                raw(node.frobenius_on_degree_zero().unwrap().matrix()),
                vec![vec![1]]
            );
        }
    }

    #[test]
    fn frobenius_degree_map_examples() {
        let q = quartic(7);
        assert_eq!(
            q.frobenius_degree_map(0).unwrap(),
            q.frobenius_on_degree_zero().unwrap().matrix().clone()
        );
        let q3 = quartic(3);
        let m = q3.frobenius_degree_map(-1).unwrap();
        assert_eq!(m.cols(), 6);
        assert_eq!(m.rows(), q3.neg_monomials(7).len());
        // empty source when d - e is below Σ w
        let m = q3.frobenius_degree_map(3).unwrap();
        assert_eq!(m.cols(), 0);
    }

    #[test]
    fn classify_examples() {
        for p in [5, 11, 13, 101] {
            let v = brieskorn(p).classify_graded().unwrap();
            assert_eq!(
                (v.verdict, v.reason, v.basis_dim),
                (Verdict::FNilpotent, GradedReason::EmptyDegreeZero, 0)
            );
        }
        let v5 = quartic(5).classify_graded().unwrap();
        assert_eq!(v5.verdict, Verdict::NotFNilpotent);
        assert_eq!(v5.ss_dim, 3);
        // 2v = v has no nonzero solution over F_5
        assert_eq!(v5.fixed_vector, None);
        let node = hyper(13, &[1, 1], &[(1, &[1, 1])]);
        let vn = node.classify_graded().unwrap();
        assert_eq!(vn.verdict, Verdict::NotFNilpotent);
        let fixed = vn.fixed_vector.unwrap();
        let op = node.frobenius_on_degree_zero().unwrap();
        assert_eq!(op.apply(&fixed).unwrap(), fixed);
        let v3 = quartic(3).classify_graded().unwrap();
        assert_eq!(
            (v3.verdict, v3.reason),
            (Verdict::FNilpotent, GradedReason::NilpotentFrobenius)
        );
        for p in [5, 7, 11] {
            let cusp = hyper(p, &[2, 3], &[(1, &[0, 2]), (-1, &[3, 0])]);
            assert_eq!(cusp.classify_graded().unwrap().verdict, Verdict::FNilpotent);
        }
        let conic = hyper(
            5,
            &[1, 1, 1],
            &[(1, &[2, 0, 0]), (1, &[0, 2, 0]), (1, &[0, 0, 2])],
        );
        assert_eq!(
            conic.classify_graded().unwrap().reason,
            GradedReason::NegativeAInvariant
        );
    }

    #[test]
    fn construction_errors() {
        let k = FiniteField::prime(5).unwrap();
        let w = WeightSystem::new(vec![21, 14, 6]).unwrap();
        let t: Vec<IntegerTerm> = [(&[2u32, 0, 0][..]), &[0, 3, 0], &[0, 0, 7], &[1, 1, 1]]
            .iter()
            .map(|e| IntegerTerm {
                coeff: 1,
                exponents: e.to_vec(),
            })
            .collect();
        let f = IntegerPoly::new(3, &t).unwrap().reduce_mod_p(&k);
        assert_eq!(
            HypersurfaceData::new(f, w.clone()).unwrap_err(),
            LochomError::NotQuasiHomogeneous
        );
        assert_eq!(
            HypersurfaceData::new(SparsePoly::zero(k.clone(), 3), w.clone()).unwrap_err(),
            LochomError::ZeroPolynomial
        );
        assert!(matches!(
            HypersurfaceData::new(SparsePoly::zero(k.clone(), 2), w).unwrap_err(),
            LochomError::WeightCount { .. }
        ));
        let one_var = SparsePoly::from_terms(k.clone(), 1, [(vec![2], k.one())]).unwrap();
        assert_eq!(
            HypersurfaceData::new(one_var, WeightSystem::standard(1)).unwrap_err(),
            LochomError::TooFewVariables(1)
        );
    }

    #[test]
    fn isolated_check_examples() {
        assert_eq!(
            quartic(5).isolated_check(2).unwrap(),
            IsolatedCheck::Pass { searched_degree: 2 }
        );
        let x2y = hyper(5, &[1, 1, 1], &[(1, &[2, 1, 0])]);
        match x2y.isolated_check(1).unwrap() {
            IsolatedCheck::Fail {
                extension_degree: 1,
                point,
            } => {
                assert_eq!(point[0], 0);
                let f = x2y.polynomial();
                let k = x2y.field();
                let pt: Vec<_> = point.iter().map(|&r| k.element(r).unwrap()).collect();
                assert!(f.evaluate_in(k, &pt).unwrap().is_zero());
            }
            other => panic!("expected FAIL, got {other:?}"),
        }
        match quartic(2).isolated_check(1).unwrap() {
            IsolatedCheck::Fail { point, .. } => {
                let s: u32 = point.iter().sum();
                assert_eq!(s % 2, 0, "point lies on x+y+z = 0");
            }
            other => panic!("expected FAIL, got {other:?}"),
        }
        // weighted enumeration
        assert!(matches!(
            brieskorn(11).isolated_check(1).unwrap(),
            IsolatedCheck::Pass { .. }
        ));
        assert!(matches!(
            quartic(257).isolated_check(2).unwrap(),
            IsolatedCheck::Inconclusive { searched_degree: 1 }
        ));
        assert!(matches!(
            brieskorn(199).isolated_check(1),
            Err(LochomError::SearchTooLarge(_))
        ));
    }
}
