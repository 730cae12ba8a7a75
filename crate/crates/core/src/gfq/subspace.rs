use alloc::vec::Vec;

use super::field::Field;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// A subspace of `F^n` stored as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// Row span of `rows`.
    pub fn span(rows: &Matrix<F>) -> Self {
        let r = rows.rref();
        let idx: Vec<usize> = (0..r.rank).collect();
        Subspace { basis: r.reduced.select_rows(&idx), pivots: r.pivots }
    }

    pub fn full(field: &F, n: usize) -> Self {
        Subspace { basis: Matrix::identity(field, n), pivots: (0..n).collect() }
    }

    pub fn zero(field: &F, n: usize) -> Self {
        Subspace { basis: Matrix::zeros(field, 0, n), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    /// Coordinates of `v` in the echelon basis, `None` if `v` is outside.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let coords: Vec<F::Elem> = self.pivots.iter().map(|&c| v[c].clone()).collect();
        let back = self.basis.vec_mul(&coords);
        if back.iter().zip(v).all(|(a, b)| a == b) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        Ok(Self::span(&self.basis.vstack(&other.basis)?))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        let stacked = self.basis.vstack(&other.basis)?;
        let lk = stacked.left_kernel();
        let idx: Vec<usize> = (0..self.dim()).collect();
        let coeffs = lk.select_cols(&idx);
        Ok(Self::span(&coeffs.mul(&self.basis)?))
    }

    /// Matrix of `op` (acting on row vectors) restricted to this stable
    /// subspace, in the echelon basis.
    pub fn restrict(&self, op: &Matrix<F>) -> Result<Matrix<F>> {
        let img = self.basis.mul(op)?;
        let mut rows = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            rows.push(
                self.coordinates(img.row(i))
                    .ok_or_else(|| Error::Internal(alloc::string::String::from("subspace is not stable")))?,
            );
        }
        Matrix::from_rows(self.field(), self.dim(), &rows)
    }

    /// `{x in W : x op = 0}`.
    pub fn kernel_of(&self, op: &Matrix<F>) -> Result<Self> {
        let img = self.basis.mul(op)?;
        let lk = img.left_kernel();
        Ok(Self::span(&lk.mul(&self.basis)?))
    }

    pub fn image(&self, op: &Matrix<F>) -> Result<Self> {
        Ok(Self::span(&self.basis.mul(op)?))
    }

    /// Ambient vectors from coordinate rows.
    pub fn lift(&self, coords: &Matrix<F>) -> Result<Matrix<F>> {
        coords.mul(&self.basis)
    }
}

impl<F: Field> Matrix<F> {
    /// Matrix times column vector.
    pub fn vec_mul_col(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field();
        (0..self.rows())
            .map(|i| self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| f.mul_add(a, b, &acc)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::FiniteField;

    #[test]
    fn intersection_and_sum_dimensions() {
        let f = FiniteField::new(7, 1).unwrap();
        let u = Subspace::span(&Matrix::from_i64(&f, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]));
        let w = Subspace::span(&Matrix::from_i64(&f, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]));
        assert_eq!(u.intersect(&w).unwrap().dim(), 1);
        assert_eq!(u.sum(&w).unwrap().dim(), 3);
        assert!(u.contains(&[f.from_i64(3), f.from_i64(5), f.zero(), f.zero()]));
        assert!(!u.contains(&[f.zero(), f.zero(), f.one(), f.zero()]));
    }

    #[test]
    fn restriction_of_stable_subspace() {
        let f = FiniteField::new(5, 1).unwrap();
        let op = Matrix::from_i64(&f, &[&[2, 0, 0], &[0, 3, 0], &[1, 0, 4]]);
        // span(e2) is stable under v -> v op
        let w = Subspace::span(&Matrix::from_i64(&f, &[&[0, 1, 0]]));
        let r = w.restrict(&op).unwrap();
        assert_eq!(r.shape(), (1, 1));
        assert!(w.kernel_of(&op.sub_scalar(&f.from_i64(3))).unwrap().dim() == 1);
    }
}
