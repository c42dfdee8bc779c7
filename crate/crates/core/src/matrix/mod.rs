//! Dense linear algebra over exact rationals and `f64`.
//!
//! [`Matrix`] is a plain row-major container; kernels that only need field
//! operations are generic over [`Scalar`], while factorizations that need
//! square roots live in [`float`] and exact elimination lives in [`exact`].

pub mod exact;
pub mod float;
pub mod random;
mod scalar;
pub mod sym;
mod tol;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use scalar::{rat, ratio, rational_from_f64, Rational, Scalar, ScalarKind};
pub use tol::Tolerances;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Row-major data of length `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    /// Square matrix from small integer rows; panics on ragged input.
    pub fn from_int_rows<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Self::from_fn(N, N, |i, j| T::from_i64(rows[i][j]))
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Dimension of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.rows.min(self.cols) {
            T::add_to(&mut t, &self[(i, i)]);
        }
        t
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(T::to_f64)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    /// Exact symmetry; for floats use [`Matrix::is_symmetric_within`].
    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Symmetry test: exact for rationals, relative to the max-abs entry for floats.
    pub fn is_symmetric_within(&self, rel_tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs();
        (0..self.rows)
            .all(|i| (0..i).all(|j| T::near(&self[(i, j)], &self[(j, i)], scale, rel_tol)))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    T::mul_add_to(&mut out.data[i * rhs.cols + j], a, &rhs.data[k * rhs.cols + j]);
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    T::mul_add_to(&mut acc, a, x);
                }
                acc
            })
            .collect()
    }

    /// Binary powering; `pow(0)` is the identity.
    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Self::identity(self.rows);
        if e == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut first = true;
        loop {
            if e & 1 == 1 {
                result = if first { base.clone() } else { &result * &base };
                first = false;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        result
    }

    /// Leading principal `r x r` block.
    pub fn leading_block(&self, r: usize) -> Self {
        Self::from_fn(r, r, |i, j| self[(i, j)].clone())
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.check_same_dim(rhs).expect("matrix sum dimension mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.check_same_dim(rhs).expect("matrix difference dimension mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|v| -v.clone())
    }
}

/// Matrix over either scalar kind, used at I/O boundaries.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Rational(Matrix<Rational>),
    Float(Matrix<f64>),
}

impl AnyMatrix {
    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyMatrix::Rational(_) => ScalarKind::Rational,
            AnyMatrix::Float(_) => ScalarKind::Float,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyMatrix::Rational(m) => m.rows(),
            AnyMatrix::Float(m) => m.rows(),
        }
    }

    /// Float view; rationals are rounded to nearest.
    pub fn to_f64(&self) -> Matrix<f64> {
        match self {
            AnyMatrix::Rational(m) => m.to_f64(),
            AnyMatrix::Float(m) => m.clone(),
        }
    }

    pub fn as_rational(&self) -> Result<&Matrix<Rational>> {
        match self {
            AnyMatrix::Rational(m) => Ok(m),
            AnyMatrix::Float(_) => Err(Error::KindMismatch {
                expected: "rational",
                found: "float",
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_repeated_product() {
        let a: Matrix<Rational> = Matrix::from_int_rows([[1, 2], [3, 4]]);
        let mut expected = Matrix::identity(2);
        for e in 0..7 {
            assert_eq!(a.pow(e), expected);
            expected = &expected * &a;
        }
    }

    #[test]
    fn product_dimension_mismatch_is_an_error() {
        let a: Matrix<f64> = Matrix::zeros(2, 3);
        assert!(matches!(a.checked_mul(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn float_symmetry_is_tolerant_rational_is_exact() {
        let f = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0 + 1e-15, 1.0]]).unwrap();
        assert!(!f.is_symmetric());
        assert!(f.is_symmetric_within(1e-12));
        let r = Matrix::from_rows(vec![vec![rat(1), ratio(1, 3)], vec![ratio(1, 3), rat(0)]]).unwrap();
        assert!(r.is_symmetric_within(1.0));
    }
}
