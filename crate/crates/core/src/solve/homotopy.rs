use super::newton::newton_core;
use super::{finish, Equation, Method, PathSample, SolveOptions, SolveReport};
use crate::calculus::{coefficient_derivative, reduced_jacobian};
use crate::error::{Error, Result};
use crate::eval::Assignment;
use crate::matrix::float::{cholesky, Lu};
use crate::matrix::sym::{mu_lower, nu, SymPoint};
use crate::matrix::Matrix;

/// Coefficients on the path: `t B_i + (1 - t) I`.
fn path_coefficients(b: &[Matrix<f64>], t: f64) -> Vec<Matrix<f64>> {
    let n = b.first().map_or(0, Matrix::rows);
    let id = Matrix::<f64>::identity(n);
    b.iter().map(|bi| &bi.scale(&t) + &id.scale(&(1.0 - t))).collect()
}

/// Determinant of the reduced Jacobian, or `None` when LU breaks down.
fn path_det(eq: &Equation, x: &Matrix<f64>, b: &[Matrix<f64>]) -> Result<f64> {
    let j = reduced_jacobian(&eq.word, &Assignment::new(x.clone(), b.to_vec()))?;
    Ok(Lu::factor(&j)?.det())
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Cap on `‖X‖` along the path: `factor · ‖P‖^{1/s} · max(1, ‖B_i⁻¹‖)^{2k/s}`.
fn divergence_cap(eq: &Equation, factor: f64) -> Result<f64> {
    let s = eq.degree() as f64;
    let k = eq.b.len() as f64;
    let mut inv = 1.0f64;
    for bi in &eq.b {
        inv = inv.max(bi.inverse()?.norm_spectral());
    }
    Ok(factor * eq.p.norm_spectral().powf(1.0 / s) * inv.powf(2.0 * k / s))
}

/// Follows `S(X, t B_i + (1-t) I) = P` from `X = P^{1/s}` at `t = 0` to `t = 1`.
///
/// Euler predictor from the Jacobian system, Newton corrector at fixed `t`.
/// The step halves when the corrector fails or the Jacobian determinant
/// changes sign, and grows by half after an easy correction.
pub fn homotopy_solve(eq: &Equation, opts: &SolveOptions) -> Result<SolveReport> {
    let tol = &opts.tolerances;
    if cholesky(&eq.p, tol)?.is_none() {
        return Err(Error::NotPd);
    }
    let n = eq.n();
    let cap = divergence_cap(eq, opts.divergence_factor)?;
    let directions: Vec<Matrix<f64>> = eq.b.iter().map(|bi| bi - &Matrix::identity(n)).collect();

    let mut t = 0.0f64;
    let mut x = eq.power_start(tol)?;
    let mut det = path_det(eq, &x, &path_coefficients(&eq.b, 0.0))?;
    let mut path = vec![PathSample {
        t,
        norm_x: x.norm_spectral(),
        det,
    }];
    let mut dt = opts.dt_init.clamp(opts.dt_min, opts.dt_max);
    let mut steps = 0usize;

    while t < 1.0 {
        let h = dt.min(1.0 - t);
        let bt = path_coefficients(&eq.b, t);
        let a = Assignment::new(x.clone(), bt);
        let j = reduced_jacobian(&eq.word, &a)?;
        let ft = coefficient_derivative(&eq.word, &a, &directions)?;
        let rhs: Vec<f64> = mu_lower(&ft).coords.iter().map(|v| -v).collect();
        let velocity = nu(&SymPoint {
            n,
            coords: Lu::factor(&j)?.solve(&rhs).map_err(|_| Error::SingularJacobian(f64::INFINITY))?,
        });
        let predicted = &x + &velocity.scale(&h);
        let t_new = if h >= 1.0 - t { 1.0 } else { t + h };
        let b_new = path_coefficients(&eq.b, t_new);
        let corrected = newton_core(&eq.word, &b_new, &eq.p, &predicted, opts.tol, opts.corrector_iters, opts);

        let accepted = match corrected {
            Ok(run) => {
                let norm = run.x.norm_spectral();
                if !(norm <= cap) {
                    return Err(Error::Divergence { norm, cap });
                }
                let new_det = path_det(eq, &run.x, &b_new)?;
                if sign(new_det) != sign(det) && h > opts.dt_min {
                    None
                } else {
                    Some((run, new_det, norm))
                }
            }
            Err(Error::Divergence { norm, cap }) => return Err(Error::Divergence { norm, cap }),
            Err(_) => None,
        };

        match accepted {
            Some((run, new_det, norm)) => {
                let easy = run.converged_at <= 3;
                x = run.x;
                det = new_det;
                t = t_new;
                steps += 1;
                path.push(PathSample { t, norm_x: norm, det });
                if easy {
                    dt = (dt * 1.5).min(opts.dt_max);
                }
            }
            None => {
                if h <= opts.dt_min {
                    return Err(Error::StepUnderflow { t });
                }
                dt = (h * 0.5).max(opts.dt_min);
            }
        }
    }

    let run = newton_core(&eq.word, &eq.b, &eq.p, &x, opts.tol, opts.max_iter, opts)?;
    let mut report = finish(eq, Method::Homotopy, run.x, steps, opts)?;
    report.path = Some(path);
    Ok(report)
}
