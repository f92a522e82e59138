//! p-semilinear operators on `F_q^m`.
//!
//! An operator is stored as a matrix `A` whose column `j` is `φ(e_j)`; it acts
//! by `φ(v) = A · v^[p]`, where `v^[p]` raises each coordinate to the `p`-th
//! power. Nilpotence is decided from the `m`-fold composite
//! `A · A^(p) · ... · A^(p^{m-1})`, whose column space is the stable image
//! `V_ss` on which `φ` is bijective.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::fields::{FieldElement, FiniteField};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemilinearError {
    #[error("operator matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry {0} is not an element of the field")]
    ForeignEntry(u32),
    #[error("vector has length {found}, operator dimension is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("brute-force search over {0} vectors exceeds the bound 10^6")]
    SearchTooLarge(u128),
}

/// Largest number of vectors [`brute_force_oracle`] is willing to enumerate.
pub const BRUTE_FORCE_BOUND: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearOperator {
    field: FiniteField,
    matrix: Matrix,
}

/// The splitting `V = V_ss ⊕ V_nil`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FittingSplit {
    pub ss_dim: usize,
    pub nil_dim: usize,
    /// Independent columns of the `dim`-fold composite spanning `V_ss`.
    #[serde(skip)]
    pub ss_image_basis: Vec<Vec<FieldElement>>,
}

impl SemilinearOperator {
    pub fn new(field: FiniteField, matrix: Matrix) -> Result<Self, SemilinearError> {
        if !matrix.is_square() {
            return Err(SemilinearError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if let Some(bad) = matrix
            .entries()
            .iter()
            .find(|x| field.element(x.raw()).is_none())
        {
            return Err(SemilinearError::ForeignEntry(bad.raw()));
        }
        Ok(SemilinearOperator { field, matrix })
    }

    pub fn zero(field: FiniteField, dim: usize) -> Self {
        SemilinearOperator {
            field,
            matrix: Matrix::zeros(dim, dim),
        }
    }

    pub fn identity(field: FiniteField, dim: usize) -> Self {
        let matrix = Matrix::identity(&field, dim);
        SemilinearOperator { field, matrix }
    }

    /// The direct sum of operators over a common field.
    ///
    /// Panics if the operators live over different fields.
    pub fn block_diagonal(field: FiniteField, blocks: &[&SemilinearOperator]) -> Self {
        let dim = blocks.iter().map(|b| b.dim()).sum();
        let mut matrix = Matrix::zeros(dim, dim);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.field, field, "blocks must share a field");
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    matrix[(offset + i, offset + j)] = b.matrix[(i, j)];
                }
            }
            offset += b.dim();
        }
        SemilinearOperator { field, matrix }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    fn frobenius_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        v.iter().map(|&x| self.field.frobenius(x)).collect()
    }

    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, SemilinearError> {
        if v.len() != self.dim() {
            return Err(SemilinearError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        if let Some(bad) = v.iter().find(|x| self.field.element(x.raw()).is_none()) {
            return Err(SemilinearError::ForeignEntry(bad.raw()));
        }
        Ok(self.matrix.mul_vec(&self.field, &self.frobenius_vec(v)))
    }

    /// Matrix `M` of `φ^m`, in the sense `φ^m(v) = M · v^[p^m]`.
    pub fn power_matrix(&self, m: usize) -> Matrix {
        let k = &self.field;
        let mut acc = Matrix::identity(k, self.dim());
        for _ in 0..m {
            // φ ∘ φ^j has matrix A · (M_j)^(p)
            let twisted = if k.is_prime_field() {
                acc
            } else {
                acc.map(|x| k.frobenius(x))
            };
            acc = self.matrix.mul(k, &twisted);
        }
        acc
    }

    pub fn fitting_decomposition(&self) -> FittingSplit {
        let stable = self.power_matrix(self.dim());
        let pivots = stable.independent_columns(&self.field);
        let ss_image_basis: Vec<_> = pivots.iter().map(|&j| stable.column(j)).collect();
        FittingSplit {
            ss_dim: ss_image_basis.len(),
            nil_dim: self.dim() - ss_image_basis.len(),
            ss_image_basis,
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.power_matrix(self.dim()).is_zero()
    }

    /// An `F_p`-basis of `{v : φ(v) = v}` over the operator's own field.
    pub fn fixed_points(&self) -> Vec<Vec<FieldElement>> {
        let k = &self.field;
        let n = self.dim();
        if k.is_prime_field() {
            let shifted = self.matrix.sub(k, &Matrix::identity(k, n));
            return shifted.nullspace(k);
        }
        // View F_q^n as F_p^{n e}; v -> φ(v) - v is F_p-linear there.
        let e = k.degree() as usize;
        let fp = FiniteField::prime(k.characteristic()).expect("characteristic is prime");
        let mut columns = Vec::with_capacity(n * e);
        for i in 0..n {
            for j in 0..e {
                let mut unit = vec![0u32; e];
                unit[j] = 1;
                let mut v = vec![k.zero(); n];
                v[i] = k.from_coords(&unit).expect("unit has length e");
                let image = self.apply(&v).expect("dimensions agree");
                let diff: Vec<FieldElement> =
                    image.iter().zip(&v).map(|(&a, &b)| k.sub(a, b)).collect();
                let flat: Vec<FieldElement> = diff
                    .iter()
                    .flat_map(|&x| k.coords(x))
                    .map(|c| fp.from_int(c as i128))
                    .collect();
                columns.push(flat);
            }
        }
        let system = Matrix::from_columns(n * e, &columns);
        system
            .nullspace(&fp)
            .into_iter()
            .map(|sol| {
                sol.chunks(e)
                    .map(|chunk| {
                        let coords: Vec<u32> = chunk.iter().map(|x| x.raw()).collect();
                        k.from_coords(&coords).expect("chunk has length e")
                    })
                    .collect()
            })
            .collect()
    }
}

/// Exhaustive reference computation, independent of the matrix algebra above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Every fixed vector, in enumeration order.
    pub fixed: Vec<Vec<FieldElement>>,
    pub nilpotent: bool,
    /// Cardinality of the eventual image `φ^N(V)`, which is `q^{ss_dim}`.
    pub stable_image_size: u64,
}

pub fn brute_force_oracle(op: &SemilinearOperator) -> Result<OracleResult, SemilinearError> {
    let k = &op.field;
    let q = k.order() as u128;
    let n = op.dim();
    let total = q.checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > BRUTE_FORCE_BOUND {
        return Err(SemilinearError::SearchTooLarge(total));
    }
    let decode = |mut idx: u64| -> Vec<FieldElement> {
        (0..n)
            .map(|_| {
                let x = k.element((idx % q as u64) as u32).unwrap();
                idx /= q as u64;
                x
            })
            .collect()
    };
    let act = |v: &[FieldElement]| -> Vec<FieldElement> {
        (0..n)
            .map(|i| {
                let mut acc = k.zero();
                for (j, &x) in v.iter().enumerate() {
                    acc = k.add(acc, k.mul(op.matrix[(i, j)], k.pow(x, k.characteristic())));
                }
                acc
            })
            .collect()
    };
    let mut fixed = Vec::new();
    let mut image: HashSet<Vec<FieldElement>> = HashSet::new();
    for idx in 0..total as u64 {
        let v = decode(idx);
        let w = act(&v);
        if w == v {
            fixed.push(v);
        }
        image.insert(w);
    }
    // Iterate images of sets until the size stops shrinking.
    loop {
        let next: HashSet<Vec<FieldElement>> = image.iter().map(|v| act(v)).collect();
        if next.len() == image.len() {
            break;
        }
        image = next;
    }
    let nilpotent = image.len() == 1 && image.iter().all(|v| v.iter().all(|x| x.is_zero()));
    Ok(OracleResult {
        fixed,
        nilpotent,
        stable_image_size: image.len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> FiniteField {
        FiniteField::new(2, 2, Some(&[1, 1, 1])).unwrap()
    }

    fn op(k: &FiniteField, rows: &[&[i128]]) -> SemilinearOperator {
        let m = Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| k.from_int(x)).collect())
                .collect(),
        )
        .unwrap();
        SemilinearOperator::new(k.clone(), m).unwrap()
    }

    fn t_op() -> SemilinearOperator {
        let k = f4();
        let m = Matrix::from_rows(vec![vec![k.generator()]]).unwrap();
        SemilinearOperator::new(k, m).unwrap()
    }

    fn jordan(k: &FiniteField, n: usize) -> SemilinearOperator {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = k.one();
        }
        SemilinearOperator::new(k.clone(), m).unwrap()
    }

    #[test]
    fn apply_examples() {
        let k = FiniteField::prime(7).unwrap();
        let v: Vec<_> = [3, 5, 6].iter().map(|&x| k.from_int(x)).collect();
        let zero = SemilinearOperator::zero(k.clone(), 3);
        assert!(zero.apply(&v).unwrap().iter().all(|x| x.is_zero()));
        assert_eq!(
            SemilinearOperator::identity(k.clone(), 3)
                .apply(&v)
                .unwrap(),
            v
        );
        // over F_4: t · t^2 = 1
        let t = t_op();
        assert_eq!(t.apply(&[f4().generator()]).unwrap(), vec![f4().one()]);
    }

    #[test]
    fn apply_rejects_bad_input() {
        let k = FiniteField::prime(3).unwrap();
        let id = SemilinearOperator::identity(k.clone(), 2);
        assert!(matches!(
            id.apply(&[k.one()]),
            Err(SemilinearError::DimensionMismatch { .. })
        ));
        let f9 = FiniteField::new(3, 2, None).unwrap();
        let foreign = f9.element(7).unwrap();
        assert_eq!(
            id.apply(&[foreign, k.one()]),
            Err(SemilinearError::ForeignEntry(7))
        );
        assert!(matches!(
            SemilinearOperator::new(k, Matrix::zeros(2, 3)),
            Err(SemilinearError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn power_matrix_examples() {
        let k = FiniteField::prime(5).unwrap();
        let a = op(&k, &[&[1, 2], &[3, 4]]);
        assert_eq!(a.power_matrix(2), a.matrix().mul(&k, a.matrix()));
        assert_eq!(a.power_matrix(0), Matrix::identity(&k, 2));
        assert_eq!(
            t_op().power_matrix(2),
            Matrix::from_rows(vec![vec![f4().one()]]).unwrap()
        );
        assert!(SemilinearOperator::zero(k, 2).power_matrix(1).is_zero());
    }

    #[test]
    fn power_matrix_composes_with_apply() {
        let k = FiniteField::new(3, 2, None).unwrap();
        let g = k.generator();
        let m = Matrix::from_rows(vec![vec![g, k.one()], vec![k.zero(), k.mul(g, g)]]).unwrap();
        let phi = SemilinearOperator::new(k.clone(), m).unwrap();
        let v = vec![k.add(g, k.one()), g];
        let mut iterated = v.clone();
        for _ in 0..3 {
            iterated = phi.apply(&iterated).unwrap();
        }
        let twisted: Vec<_> = v.iter().map(|&x| k.frobenius_iter(x, 3)).collect();
        assert_eq!(phi.power_matrix(3).mul_vec(&k, &twisted), iterated);
    }

    #[test]
    fn fitting_examples() {
        let k = FiniteField::prime(3).unwrap();
        let j = jordan(&k, 4).fitting_decomposition();
        assert_eq!((j.ss_dim, j.nil_dim), (0, 4));
        let id = SemilinearOperator::identity(k, 3).fitting_decomposition();
        assert_eq!((id.ss_dim, id.nil_dim), (3, 0));
        assert_eq!(t_op().fitting_decomposition().ss_dim, 1);
    }

    #[test]
    fn nilpotence_examples() {
        let f5 = FiniteField::prime(5).unwrap();
        assert!(SemilinearOperator::zero(f5.clone(), 3).is_nilpotent());
        assert!(!SemilinearOperator::identity(f5.clone(), 3).is_nilpotent());
        assert!(!op(&f5, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]).is_nilpotent());
        // dimension zero counts as nilpotent
        let empty = SemilinearOperator::zero(f5, 0);
        assert!(empty.is_nilpotent());
        assert_eq!(empty.fitting_decomposition().ss_dim, 0);
    }

    #[test]
    fn fixed_point_examples() {
        let k = FiniteField::prime(5).unwrap();
        assert!(SemilinearOperator::zero(k.clone(), 2)
            .fixed_points()
            .is_empty());
        assert_eq!(SemilinearOperator::identity(k, 3).fixed_points().len(), 3);
        // c^2 t = c has solutions {0, t^2}
        let fixed = t_op().fixed_points();
        assert_eq!(fixed.len(), 1);
        let t = f4().generator();
        assert_eq!(fixed[0], vec![f4().mul(t, t)]);
    }

    #[test]
    fn oracle_examples() {
        let f2 = FiniteField::prime(2).unwrap();
        let r = brute_force_oracle(&op(&f2, &[&[0, 1], &[0, 0]])).unwrap();
        assert!(r.nilpotent);
        assert_eq!(r.fixed, vec![vec![f2.zero(), f2.zero()]]);
        let r = brute_force_oracle(&t_op()).unwrap();
        assert!(!r.nilpotent);
        assert_eq!(r.fixed.len(), 2);
        let f3 = FiniteField::prime(3).unwrap();
        let r = brute_force_oracle(&op(&f3, &[&[1]])).unwrap();
        assert_eq!(r.fixed.len(), 3);
        assert!(!r.nilpotent);
        let big = SemilinearOperator::zero(FiniteField::prime(101).unwrap(), 3);
        assert!(matches!(
            brute_force_oracle(&big),
            Err(SemilinearError::SearchTooLarge(_))
        ));
    }

    #[test]
    fn block_diagonal_adds_fitting_dimensions() {
        let k = FiniteField::prime(7).unwrap();
        let a = SemilinearOperator::identity(k.clone(), 2);
        let b = jordan(&k, 3);
        let sum = SemilinearOperator::block_diagonal(k, &[&a, &b]);
        let split = sum.fitting_decomposition();
        assert_eq!((sum.dim(), split.ss_dim, split.nil_dim), (5, 2, 3));
    }
}
