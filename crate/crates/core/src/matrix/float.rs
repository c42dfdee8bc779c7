//! Floating-point factorizations: Cholesky, cyclic Jacobi eigensolver,
//! PSD roots, the geometric mean and LU with partial pivoting.

use super::{Matrix, Tolerances};
use crate::error::{Error, Result};

/// Symmetric eigendecomposition `A = Q diag(lambda) Qᵀ`, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub q: Matrix<f64>,
    pub lambda: Vec<f64>,
}

impl EigenDecomposition {
    /// `Q diag(f(lambda)) Qᵀ`, symmetrized.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Matrix<f64> {
        let n = self.lambda.len();
        let d: Vec<f64> = self.lambda.iter().map(|&l| f(l)).collect();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = 0.0;
                for k in 0..n {
                    s += self.q[(i, k)] * d[k] * self.q[(j, k)];
                }
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.lambda.last().copied().unwrap_or(f64::INFINITY)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.lambda.first().copied().unwrap_or(0.0)
    }
}

impl Matrix<f64> {
    pub fn norm_fro(&self) -> f64 {
        self.data().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn norm_one(&self) -> f64 {
        (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest singular value.
    pub fn norm_spectral(&self) -> f64 {
        if self.rows() == 0 || self.cols() == 0 {
            return 0.0;
        }
        let tol = Tolerances::default();
        if self.is_square() && self.is_symmetric_within(tol.sym_tol) {
            if let Ok(e) = sym_eig_with(&self.symmetrized(), &tol) {
                return e.lambda.iter().map(|l| l.abs()).fold(0.0, f64::max);
            }
        }
        let gram = &self.transpose() * self;
        match sym_eig_with(&gram.symmetrized(), &tol) {
            Ok(e) => e.max_eigenvalue().max(0.0).sqrt(),
            Err(_) => self.norm_fro(),
        }
    }

    /// `(A + Aᵀ) / 2`.
    pub fn symmetrized(&self) -> Matrix<f64> {
        Matrix::from_fn(self.rows(), self.cols(), |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    pub fn is_finite(&self) -> bool {
        self.data().iter().all(|v| v.is_finite())
    }

    /// `true` when Cholesky succeeds.
    pub fn is_pd(&self) -> bool {
        self.is_finite() && matches!(cholesky(self, &Tolerances::default()), Ok(Some(_)))
    }

    pub fn inverse(&self) -> Result<Matrix<f64>> {
        Lu::factor(self)?.inverse()
    }
}

/// Lower Cholesky factor, or `None` when `a` is not positive definite.
pub fn cholesky(a: &Matrix<f64>, tol: &Tolerances) -> Result<Option<Matrix<f64>>> {
    if !a.is_square() {
        return Err(Error::Dimension("Cholesky of a non-square matrix".into()));
    }
    if !a.is_symmetric_within(tol.sym_tol) {
        return Err(Error::NotSymmetric);
    }
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > tol.pivot_floor) {
            return Ok(None);
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = 0.5 * (a[(i, j)] + a[(j, i)]);
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(Some(l))
}

pub fn sym_eig(a: &Matrix<f64>) -> Result<EigenDecomposition> {
    sym_eig_with(a, &Tolerances::default())
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
pub fn sym_eig_with(a: &Matrix<f64>, tol: &Tolerances) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::Dimension("eigendecomposition of a non-square matrix".into()));
    }
    if !a.is_finite() {
        return Err(Error::NoConvergence(0));
    }
    if !a.is_symmetric_within(tol.sym_tol) {
        return Err(Error::NotSymmetric);
    }
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = Matrix::<f64>::identity(n);
    let norm = m.norm_fro();
    let threshold = tol.eig_tol * norm;

    let off = |m: &Matrix<f64>| {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += m[(p, q)] * m[(p, q)];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut converged = off(&m) <= threshold;
    let mut sweep = 0;
    while !converged && sweep < tol.max_sweeps {
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for r in 0..n {
                    let arp = m[(r, p)];
                    let arq = m[(r, q)];
                    m[(r, p)] = c * arp - s * arq;
                    m[(r, q)] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = m[(p, r)];
                    let aqr = m[(q, r)];
                    m[(p, r)] = c * apr - s * aqr;
                    m[(q, r)] = s * apr + c * aqr;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = c * vrp - s * vrq;
                    v[(r, q)] = s * vrp + c * vrq;
                }
            }
        }
        converged = off(&m) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence(tol.max_sweeps));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let lambda = order.iter().map(|&i| m[(i, i)]).collect();
    let q = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition { q, lambda })
}

/// Unique PSD `r`-th root of a PSD matrix.
///
/// Eigenvalues in `[-psd_tol * ||P||, 0]` are clamped to zero; anything more
/// negative is rejected.
pub fn pd_root(p: &Matrix<f64>, r: u32, tol: &Tolerances) -> Result<Matrix<f64>> {
    assert!(r >= 1, "root order must be positive");
    let e = sym_eig_with(p, tol)?;
    clamp_psd(&e, tol)?;
    if r == 1 {
        return Ok(p.symmetrized());
    }
    let inv = 1.0 / r as f64;
    Ok(e.apply(|l| if l <= 0.0 { 0.0 } else { l.powf(inv) }))
}

fn clamp_psd(e: &EigenDecomposition, tol: &Tolerances) -> Result<()> {
    let scale = e.lambda.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let min = e.min_eigenvalue();
    if min < -tol.psd_tol * scale {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(())
}

/// `A^{-1/2}` for positive definite `A`.
pub fn pd_inv_sqrt(a: &Matrix<f64>, tol: &Tolerances) -> Result<Matrix<f64>> {
    let e = sym_eig_with(a, tol)?;
    if !(e.min_eigenvalue() > 0.0) {
        return Err(Error::NotPd);
    }
    Ok(e.apply(|l| 1.0 / l.sqrt()))
}

/// Positive definite `A` split as `(A^{1/2}, A^{-1/2})` from one eigensolve.
pub fn pd_sqrt_pair(a: &Matrix<f64>, tol: &Tolerances) -> Result<(Matrix<f64>, Matrix<f64>)> {
    if cholesky(a, tol)?.is_none() {
        return Err(Error::NotPd);
    }
    let e = sym_eig_with(a, tol)?;
    if !(e.min_eigenvalue() > 0.0) {
        return Err(Error::NotPd);
    }
    Ok((e.apply(f64::sqrt), e.apply(|l| 1.0 / l.sqrt())))
}

/// Geometric mean `A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}`.
pub fn geometric_mean(a: &Matrix<f64>, b: &Matrix<f64>, tol: &Tolerances) -> Result<Matrix<f64>> {
    a.check_same_dim(b)?;
    if cholesky(b, tol)?.is_none() {
        return Err(Error::NotPd);
    }
    let (ah, aih) = pd_sqrt_pair(a, tol)?;
    let inner = &(&aih * b) * &aih;
    let root = pd_root(&inner.symmetrized(), 2, tol)?;
    Ok((&(&ah * &root) * &ah).symmetrized())
}

/// Orthonormal basis of the numerical kernel: eigenvectors (of `A` when
/// symmetric, else of `AᵀA`) whose singular value is at most
/// `rank_tol * ||A||`.
pub fn kernel_basis(a: &Matrix<f64>, tol: &Tolerances) -> Result<Vec<Vec<f64>>> {
    let n = a.cols();
    let (e, singular): (EigenDecomposition, Vec<f64>) = if a.is_square() && a.is_symmetric_within(tol.sym_tol) {
        let e = sym_eig_with(&a.symmetrized(), tol)?;
        let s = e.lambda.iter().map(|l| l.abs()).collect();
        (e, s)
    } else {
        let e = sym_eig_with(&(&a.transpose() * a).symmetrized(), tol)?;
        let s = e.lambda.iter().map(|l| l.max(0.0).sqrt()).collect();
        (e, s)
    };
    let scale = singular.iter().cloned().fold(0.0, f64::max);
    Ok((0..n)
        .filter(|&k| singular[k] <= tol.rank_tol * scale)
        .map(|k| (0..n).map(|i| e.q[(i, k)]).collect())
        .collect())
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix<f64>,
    perm: Vec<usize>,
    parity: f64,
    singular: bool,
}

impl Lu {
    pub fn factor(a: &Matrix<f64>) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::Dimension("LU of a non-square matrix".into()));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut parity = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 || !pmax.is_finite() {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                parity = -parity;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        let v = lu[(k, j)];
                        lu[(i, j)] -= f * v;
                    }
                }
            }
        }
        Ok(Lu {
            lu,
            perm,
            parity,
            singular,
        })
    }

    pub fn det(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        (0..self.lu.rows()).fold(self.parity, |acc, i| acc * self.lu[(i, i)])
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if self.singular {
            return Err(Error::Singular);
        }
        let n = self.lu.rows();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] -= self.lu[(i, k)] * x[k];
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix<f64>> {
        let n = self.lu.rows();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}
