//! Exact rational elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{rational_from_f64, Matrix, Rational};
use crate::error::{Error, Result};

/// Exact determinant by Bareiss fraction-free elimination.
///
/// Each row is scaled to integers by the lcm of its denominators first, so
/// the elimination runs entirely over `BigInt`.
pub fn det_exact(a: &Matrix<Rational>) -> Result<Rational> {
    if !a.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = a.rows();
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = a
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        m.push(a.row(i).iter().map(|v| v.numer() * (&l / v.denom())).collect());
        scale *= l;
    }
    let det = bareiss(&mut m);
    Ok(Rational::new(det, scale))
}

/// Determinant of an integer matrix; the matrix is consumed as workspace.
pub fn bareiss(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn inverse_exact(a: &Matrix<Rational>) -> Result<Matrix<Rational>> {
    if !a.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = a.rows();
    let mut m = a.to_rows();
    let mut inv = Matrix::<Rational>::identity(n).to_rows();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, p);
        inv.swap(col, p);
        let pivot = m[col][col].clone();
        for j in 0..n {
            m[col][j] /= pivot.clone();
            inv[col][j] /= pivot.clone();
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                let t = &f * &m[col][j];
                m[r][j] -= t;
                let t = &f * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Matrix::from_rows(inv)
}

/// Exact null-space basis from the reduced row echelon form; one vector
/// per free column, with a 1 in that column.
pub fn kernel_basis_exact(a: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for j in c..cols {
            m[r][j] /= pivot.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

pub fn rank_exact(a: &Matrix<Rational>) -> usize {
    a.cols() - kernel_basis_exact(a).len()
}

/// Leading principal minors `det A[..k, ..k]` for `k = 1..=n`.
pub fn leading_principal_minors(a: &Matrix<Rational>) -> Vec<Rational> {
    (1..=a.rows())
        .map(|k| det_exact(&a.leading_block(k)).expect("square block"))
        .collect()
}

/// Sylvester's criterion, exactly.
pub fn is_pd_exact(a: &Matrix<Rational>) -> bool {
    a.is_symmetric() && leading_principal_minors(a).iter().all(|m| m.is_positive())
}

/// Exact rational image of a finite float matrix.
pub fn to_rational(a: &Matrix<f64>) -> Result<Matrix<Rational>> {
    let data = a
        .data()
        .iter()
        .map(|&v| rational_from_f64(v).ok_or_else(|| Error::Json(format!("non-finite entry {v}"))))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_vec(a.rows(), a.cols(), data)
}
