//! Deterministic random test matrices.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::exact::is_pd_exact;
use super::{Matrix, Rational};

/// Denominator used when rounding float samples to rationals.
pub const RATIONAL_DENOMINATOR: i64 = 256;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-ish orthogonal matrix from Gram-Schmidt on a Gaussian matrix.
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> Matrix<f64> {
    loop {
        let g: Matrix<f64> = Matrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        let mut q = Matrix::<f64>::zeros(n, n);
        let mut ok = true;
        for j in 0..n {
            let mut v: Vec<f64> = (0..n).map(|i| g[(i, j)]).collect();
            for _ in 0..2 {
                for k in 0..j {
                    let d: f64 = (0..n).map(|i| q[(i, k)] * v[i]).sum();
                    for (i, vi) in v.iter_mut().enumerate() {
                        *vi -= d * q[(i, k)];
                    }
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for (i, vi) in v.iter().enumerate() {
                q[(i, j)] = vi / norm;
            }
        }
        if ok {
            return q;
        }
    }
}

/// `Q diag(lambda) Qᵀ` with a log-uniform spectrum in `[1, cond_cap]`.
pub fn random_pd_with<R: Rng>(n: usize, cond_cap: f64, rng: &mut R) -> Matrix<f64> {
    assert!(cond_cap >= 1.0, "condition cap must be at least 1");
    let q = random_orthogonal(n, rng);
    let log_cap = cond_cap.ln();
    let lambda: Vec<f64> = (0..n).map(|_| (rng.random::<f64>() * log_cap).exp()).collect();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..n).map(|k| q[(i, k)] * lambda[k] * q[(j, k)]).sum();
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    out
}

/// Deterministic-per-seed positive definite matrix with condition number at most `cond_cap`.
pub fn random_pd(n: usize, seed: u64, cond_cap: f64) -> Matrix<f64> {
    random_pd_with(n, cond_cap, &mut rng(seed))
}

/// Rational variant: entries rounded to multiples of `1/RATIONAL_DENOMINATOR`,
/// positive definiteness re-verified with exact minors.
pub fn random_pd_rational_with<R: Rng>(n: usize, cond_cap: f64, rng: &mut R) -> Matrix<Rational> {
    loop {
        let f = random_pd_with(n, cond_cap, rng);
        let r = round_symmetric(&f, RATIONAL_DENOMINATOR);
        if is_pd_exact(&r) {
            return r;
        }
    }
}

pub fn random_pd_rational(n: usize, seed: u64, cond_cap: f64) -> Matrix<Rational> {
    random_pd_rational_with(n, cond_cap, &mut rng(seed))
}

fn round_symmetric(a: &Matrix<f64>, denom: i64) -> Matrix<Rational> {
    let n = a.rows();
    Matrix::from_fn(n, n, |i, j| {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let num = (a[(r, c)] * denom as f64).round() as i64;
        Rational::new(BigInt::from(num), BigInt::from(denom))
    })
}

/// Matrix with independent entries `num / den`, `num` in `-range..=range`,
/// `den` in `1..=den_max`.
pub fn random_rational_with<R: Rng>(rows: usize, cols: usize, range: i64, den_max: i64, rng: &mut R) -> Matrix<Rational> {
    Matrix::from_fn(rows, cols, |_, _| {
        let num = rng.random_range(-range..=range);
        let den = rng.random_range(1..=den_max);
        Rational::new(BigInt::from(num), BigInt::from(den))
    })
}

/// Random symmetric rational matrix.
pub fn random_symmetric_rational_with<R: Rng>(n: usize, range: i64, den_max: i64, rng: &mut R) -> Matrix<Rational> {
    let a = random_rational_with(n, n, range, den_max, rng);
    Matrix::from_fn(n, n, |i, j| if i >= j { a[(i, j)].clone() } else { a[(j, i)].clone() })
}

pub fn random_symmetric_with<R: Rng>(n: usize, rng: &mut R) -> Matrix<f64> {
    let g: Matrix<f64> = Matrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    g.symmetrized()
}
