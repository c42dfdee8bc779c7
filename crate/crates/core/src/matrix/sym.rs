//! Column-stacking, Kronecker products and symmetric coordinates.
//!
//! Index maps are 0-based here: `alpha(i, j)` is the position of `a_ij` in
//! `vec A`, and `beta(k, l)` (for `l <= k`) the position of `x_kl` in the
//! symmetric coordinate vector, which lists the lower triangle column by
//! column: `(x11, x21, .., xn1, x22, .., xnn)`.

use super::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Length of the symmetric coordinate vector, `n(n+1)/2`.
pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

#[inline]
pub fn alpha(n: usize, i: usize, j: usize) -> usize {
    n * j + i
}

#[inline]
pub fn beta(n: usize, k: usize, l: usize) -> usize {
    debug_assert!(l <= k && k < n);
    l * (2 * n - l + 1) / 2 + (k - l)
}

/// Symmetric matrix in lower-triangle coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPoint<T> {
    pub n: usize,
    pub coords: Vec<T>,
}

impl<T: Scalar> SymPoint<T> {
    pub fn new(n: usize, coords: Vec<T>) -> Result<Self> {
        if coords.len() != sym_dim(n) {
            return Err(Error::Dimension(format!(
                "{} symmetric coordinates for n = {n}",
                coords.len()
            )));
        }
        Ok(Self { n, coords })
    }
}

/// Stacks the columns of `a`.
pub fn vec<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    let (r, c) = (a.rows(), a.cols());
    let mut out = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            out.push(a[(i, j)].clone());
        }
    }
    out
}

/// Inverse of [`vec`] for square `n x n` matrices.
pub fn unvec<T: Scalar>(v: &[T], n: usize) -> Result<Matrix<T>> {
    if v.len() != n * n {
        return Err(Error::Dimension(format!("vector of length {} is not vec of an {n}x{n} matrix", v.len())));
    }
    Ok(Matrix::from_fn(n, n, |i, j| v[alpha(n, i, j)].clone()))
}

/// Kronecker product: block `(i, j)` is `a_ij * b`.
pub fn kron<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = Matrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = &a[(i, j)];
            if aij.is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij.clone() * b[(k, l)].clone();
                }
            }
        }
    }
    out
}

/// `acc += a ⊗ b` without materializing the product.
pub fn kron_add_to<T: Scalar>(acc: &mut Matrix<T>, a: &Matrix<T>, b: &Matrix<T>) {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    assert_eq!((acc.rows(), acc.cols()), (ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = &a[(i, j)];
            if aij.is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    T::mul_add_to(&mut acc[(i * br + k, j * bc + l)], aij, &b[(k, l)]);
                }
            }
        }
    }
}

/// Symmetric coordinates of a symmetric matrix.
///
/// Rationals must be exactly symmetric; floats within `sym_tol` relative to
/// the largest entry.
pub fn mu<T: Scalar>(x: &Matrix<T>, sym_tol: f64) -> Result<SymPoint<T>> {
    if !x.is_square() {
        return Err(Error::Dimension("mu of a non-square matrix".into()));
    }
    if !x.is_symmetric_within(sym_tol) {
        return Err(Error::NotSymmetric);
    }
    Ok(mu_lower(x))
}

/// Lower-triangle extraction, the linear map represented by `M`. No symmetry check.
pub fn mu_lower<T: Scalar>(x: &Matrix<T>) -> SymPoint<T> {
    let n = x.rows();
    let mut coords = Vec::with_capacity(sym_dim(n));
    for l in 0..n {
        for k in l..n {
            coords.push(x[(k, l)].clone());
        }
    }
    SymPoint { n, coords }
}

/// Symmetric matrix with the given coordinates.
pub fn nu<T: Scalar>(p: &SymPoint<T>) -> Matrix<T> {
    let n = p.n;
    Matrix::from_fn(n, n, |i, j| {
        let (k, l) = if i >= j { (i, j) } else { (j, i) };
        p.coords[beta(n, k, l)].clone()
    })
}

/// `sym_dim x n²` 0/1 matrix of `mu ∘ vec⁻¹`.
pub fn build_m<T: Scalar>(n: usize) -> Matrix<T> {
    let mut m = Matrix::zeros(sym_dim(n), n * n);
    for l in 0..n {
        for k in l..n {
            m[(beta(n, k, l), alpha(n, k, l))] = T::one();
        }
    }
    m
}

/// `n² x sym_dim` 0/1 matrix of `vec ∘ nu`.
pub fn build_n<T: Scalar>(n: usize) -> Matrix<T> {
    let mut m = Matrix::zeros(n * n, sym_dim(n));
    for l in 0..n {
        for k in l..n {
            let b = beta(n, k, l);
            m[(alpha(n, k, l), b)] = T::one();
            m[(alpha(n, l, k), b)] = T::one();
        }
    }
    m
}

/// `M · full · N` by index selection, for an `n² x n²` matrix `full`.
pub fn restrict<T: Scalar>(full: &Matrix<T>, n: usize) -> Matrix<T> {
    assert_eq!((full.rows(), full.cols()), (n * n, n * n));
    let d = sym_dim(n);
    let mut out = Matrix::zeros(d, d);
    for l in 0..n {
        for k in l..n {
            let row = alpha(n, k, l);
            let r = beta(n, k, l);
            for lc in 0..n {
                for kc in lc..n {
                    let c = beta(n, kc, lc);
                    let mut v = full[(row, alpha(n, kc, lc))].clone();
                    if kc != lc {
                        T::add_to(&mut v, &full[(row, alpha(n, lc, kc))]);
                    }
                    out[(r, c)] = v;
                }
            }
        }
    }
    out
}
