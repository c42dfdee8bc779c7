use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{finish, Equation, Method, SolveOptions, SolveReport};
use crate::calculus::reduced_jacobian;
use crate::error::{Error, Result};
use crate::eval::Assignment;
use crate::matrix::float::{cholesky, Lu};
use crate::matrix::random::random_pd_with;
use crate::matrix::sym::{mu_lower, nu, SymPoint};
use crate::matrix::{Matrix, Tolerances};

/// Outcome of one Newton solve at fixed coefficients.
pub(super) struct NewtonRun {
    pub x: Matrix<f64>,
    pub iterations: usize,
    /// Iteration at which the residual first met the tolerance.
    pub converged_at: usize,
}

/// `‖F‖_F` on the symmetric part of `S(X) - P`, the line-search merit.
fn merit(eq_word: &crate::word::Word, a: &Assignment<f64>, p: &Matrix<f64>) -> Result<(f64, Matrix<f64>)> {
    let f = (&crate::eval::evaluate(eq_word, a)? - p).symmetrized();
    Ok((f.norm_fro(), f))
}

fn is_pd(x: &Matrix<f64>, tol: &Tolerances) -> bool {
    x.is_finite() && matches!(cholesky(x, tol), Ok(Some(_)))
}

/// Damped Newton at coefficients `b` and right-hand side `p`.
///
/// Steps are halved until the iterate is positive definite and the merit
/// decreases by the Armijo factor. After the residual reaches `tol` up to
/// three more steps are taken while each at least halves it.
pub(super) fn newton_core(
    word: &crate::word::Word,
    b: &[Matrix<f64>],
    p: &Matrix<f64>,
    x0: &Matrix<f64>,
    tol: f64,
    max_iter: usize,
    opts: &SolveOptions,
) -> Result<NewtonRun> {
    let n = p.rows();
    let mut x = x0.symmetrized();
    if !is_pd(&x, &opts.tolerances) {
        return Err(Error::NotPd);
    }
    let mut a = Assignment::new(x.clone(), b.to_vec());
    let (mut phi, mut f) = merit(word, &a, p)?;
    let mut residual = f.norm_spectral();
    let mut polish = 0;
    let mut converged_at = 0;
    for iter in 0..=max_iter {
        if residual <= tol {
            if polish == 0 {
                converged_at = iter;
            }
            if polish == 3 {
                return Ok(NewtonRun { x, iterations: iter, converged_at });
            }
            polish += 1;
        }
        if iter == max_iter {
            break;
        }
        let j = reduced_jacobian(word, &a)?;
        let lu = Lu::factor(&j)?;
        if lu.is_singular() {
            return Err(Error::SingularJacobian(f64::INFINITY));
        }
        let inv_norm = lu.inverse()?.norm_one();
        if !(inv_norm * j.norm_one() <= opts.jacobian_cap) {
            return Err(Error::SingularJacobian(inv_norm));
        }
        let rhs: Vec<f64> = mu_lower(&f).coords.iter().map(|v| -v).collect();
        let delta = nu(&SymPoint {
            n,
            coords: lu.solve(&rhs)?,
        });
        let mut t = 1.0;
        let accepted = loop {
            let cand = &x + &delta.scale(&t);
            if is_pd(&cand, &opts.tolerances) {
                let ca = Assignment::new(cand.clone(), b.to_vec());
                let (cphi, cf) = merit(word, &ca, p)?;
                if cphi <= (1.0 - opts.armijo * t) * phi {
                    break Some((cand, ca, cphi, cf));
                }
            }
            t *= 0.5;
            if t < 1e-12 {
                break None;
            }
        };
        let Some((cand, ca, cphi, cf)) = accepted else {
            if residual <= tol {
                return Ok(NewtonRun { x, iterations: iter, converged_at });
            }
            break;
        };
        let new_residual = cf.norm_spectral();
        if polish > 0 && new_residual > 0.5 * residual {
            // stalled at rounding level; keep the better point
            let x = if new_residual < residual { cand } else { x };
            return Ok(NewtonRun { x, iterations: iter + 1, converged_at });
        }
        x = cand;
        a = ca;
        phi = cphi;
        f = cf;
        residual = new_residual;
    }
    if residual <= tol {
        return Ok(NewtonRun { x, iterations: max_iter, converged_at: max_iter });
    }
    Err(Error::MaxIterations {
        iterations: max_iter,
        residual,
    })
}

/// Damped Newton in symmetric coordinates from a positive definite `x0`.
///
/// `P` must be positive definite; see [`super::reduce_singular`] otherwise.
pub fn newton_solve(eq: &Equation, x0: &Matrix<f64>, opts: &SolveOptions) -> Result<SolveReport> {
    x0.check_same_dim(&eq.p)?;
    if !is_pd(&eq.p, &opts.tolerances) {
        return Err(Error::NotPd);
    }
    let run = newton_core(&eq.word, &eq.b, &eq.p, x0, opts.tol, opts.max_iter, opts)?;
    finish(eq, Method::Newton, run.x, run.iterations, opts)
}

/// Newton from `starts` random positive definite points, one seeded stream
/// per start, returning every run that converged. Completeness is not
/// claimed: there is no procedure that is guaranteed to find all solutions.
pub fn multi_start_newton(eq: &Equation, starts: usize, seed: u64, opts: &SolveOptions) -> Vec<SolveReport> {
    let n = eq.n();
    let scale = eq.power_start(&opts.tolerances).map(|x| x.norm_spectral()).unwrap_or(1.0).max(f64::MIN_POSITIVE);
    (0..starts)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let x0 = random_pd_with(n, 100.0, &mut rng);
            let x0 = x0.scale(&(scale / x0.norm_spectral()));
            newton_solve(eq, &x0, opts).ok()
        })
        .collect()
}
