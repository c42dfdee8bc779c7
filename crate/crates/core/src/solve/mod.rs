//! Solving `S(X, B1..Bk) = P` for positive semidefinite `X`.
//!
//! Totally symmetric words have closed forms; everything else goes through
//! Newton's method in symmetric coordinates or homotopy continuation from
//! the pure power `X^s = P`. Singular right-hand sides are first reduced to
//! a smaller equation with positive definite `P`.

mod closed;
mod degree;
mod homotopy;
mod newton;
mod singular;

use std::fmt;

pub use closed::{solve_pin, solve_power, solve_riccati, solve_totally_symmetric, ClosedFormRoute};
pub use degree::{sign_sum_report, SignSum};
pub use homotopy::homotopy_solve;
pub use newton::{multi_start_newton, newton_solve};
pub use singular::{reduce_singular, SingularReduction};

use crate::calculus::jacobian_reduced;
use crate::error::{Error, Result};
use crate::eval::{evaluate, Assignment};
use crate::matrix::float::{cholesky, pd_root, sym_eig_with};
use crate::matrix::{Matrix, Tolerances};
use crate::word::Word;

/// A symmetric word equation with float data.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub word: Word,
    pub b: Vec<Matrix<f64>>,
    pub p: Matrix<f64>,
}

impl Equation {
    /// Checks that the word is interlaced and symmetric, every `B_i` is
    /// positive definite and `P` is positive semidefinite.
    pub fn new(word: Word, b: Vec<Matrix<f64>>, p: Matrix<f64>, tol: &Tolerances) -> Result<Self> {
        if !word.is_interlaced() {
            return Err(Error::NotInterlaced(word.to_string()));
        }
        if !word.is_symmetric() {
            return Err(Error::NotSymmetricWord(word.to_string()));
        }
        if let Some(i) = word.max_b_index() {
            if i > b.len() {
                return Err(Error::MissingLetter(format!("B{i}")));
            }
        }
        if !p.is_square() {
            return Err(Error::Dimension("right-hand side must be square".into()));
        }
        let n = p.rows();
        for bi in &b {
            if bi.rows() != n || bi.cols() != n {
                return Err(Error::Dimension(format!("coefficients must be {n}x{n}")));
            }
            if cholesky(bi, tol)?.is_none() {
                return Err(Error::NotPd);
            }
        }
        let e = sym_eig_with(&p, tol)?;
        let scale = e.lambda.iter().map(|l| l.abs()).fold(0.0, f64::max);
        if e.min_eigenvalue() < -tol.psd_tol * scale {
            return Err(Error::NotPsd {
                min_eigenvalue: e.min_eigenvalue(),
            });
        }
        Ok(Self { word, b, p })
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn degree(&self) -> usize {
        self.word.degree()
    }

    pub fn assignment(&self, x: Matrix<f64>) -> Assignment<f64> {
        Assignment::new(x, self.b.clone())
    }

    pub fn lhs(&self, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        evaluate(&self.word, &self.assignment(x.clone()))
    }

    /// `‖S(X) - P‖₂`.
    pub fn residual(&self, x: &Matrix<f64>) -> Result<f64> {
        Ok((&self.lhs(x)? - &self.p).symmetrized().norm_spectral())
    }

    /// `P^{1/s}`, the solution of the pure power equation.
    pub fn power_start(&self, tol: &Tolerances) -> Result<Matrix<f64>> {
        pd_root(&self.p, self.degree() as u32, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Closed form when the word decomposes, otherwise homotopy.
    Auto,
    ClosedForm,
    Newton,
    Homotopy,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::ClosedForm => "closed-form",
            Method::Newton => "newton",
            Method::Homotopy => "homotopy",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Absolute residual target in the spectral norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Sufficient-decrease constant of the backtracking line search.
    pub armijo: f64,
    pub dt_init: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub corrector_iters: usize,
    /// Multiplier in the divergence guard on `‖X‖`.
    pub divergence_factor: f64,
    /// Newton gives up when `cond(J)` exceeds this.
    pub jacobian_cap: f64,
    /// Spectral distance under which two solutions are the same.
    pub dedup_tol: f64,
    pub tolerances: Tolerances,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 50,
            armijo: 1e-4,
            dt_init: 0.05,
            dt_min: 1e-4,
            dt_max: 0.1,
            corrector_iters: 8,
            divergence_factor: 1e6,
            jacobian_cap: 1e14,
            dedup_tol: 1e-6,
            tolerances: Tolerances::default(),
        }
    }
}

/// One accepted point on a homotopy path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub t: f64,
    pub norm_x: f64,
    pub det: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    pub word: Word,
    pub x: Matrix<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub jacobian_sign: i8,
    /// Constructor plan used by the closed form.
    pub plan: Option<String>,
    pub path: Option<Vec<PathSample>>,
    /// Rank of `P` when the equation went through the singular reduction.
    pub reduced_rank: Option<usize>,
}

/// Sign of the reduced Jacobian determinant at `x`; floating point is
/// escalated to exact arithmetic when the sign is not clear of rounding.
pub fn jacobian_sign(eq: &Equation, x: &Matrix<f64>, tol: &Tolerances) -> Result<i8> {
    if eq.n() == 0 {
        return Ok(1);
    }
    let x = x.symmetrized();
    Ok(jacobian_reduced(&eq.word, &eq.assignment(x), tol)?.sign)
}

fn finish(eq: &Equation, method: Method, x: Matrix<f64>, iterations: usize, opts: &SolveOptions) -> Result<SolveReport> {
    let x = x.symmetrized();
    let residual = eq.residual(&x)?;
    let jacobian_sign = jacobian_sign(eq, &x, &opts.tolerances)?;
    Ok(SolveReport {
        method,
        word: eq.word.clone(),
        x,
        residual,
        iterations,
        jacobian_sign,
        plan: None,
        path: None,
        reduced_rank: None,
    })
}

/// Closed-form solution with its report, or `None` when the word has no
/// constructor plan.
pub fn closed_form_solve(eq: &Equation, opts: &SolveOptions) -> Result<Option<SolveReport>> {
    let Some(route) = ClosedFormRoute::find(&eq.word) else {
        return Ok(None);
    };
    let x = route.solve(&eq.b, &eq.p, &opts.tolerances)?;
    let mut report = finish(eq, Method::ClosedForm, x, 0, opts)?;
    report.plan = Some(route.describe());
    Ok(Some(report))
}

fn solve_regular(eq: &Equation, method: Method, opts: &SolveOptions) -> Result<SolveReport> {
    match method {
        Method::Auto => match closed_form_solve(eq, opts)? {
            Some(r) => Ok(r),
            None => homotopy_solve(eq, opts),
        },
        Method::ClosedForm => closed_form_solve(eq, opts)?
            .ok_or_else(|| Error::NotSymmetricWord(format!("{} has no closed form", eq.word))),
        Method::Newton => newton_solve(eq, &eq.power_start(&opts.tolerances)?, opts),
        Method::Homotopy => homotopy_solve(eq, opts),
    }
}

/// Solves `eq` with the chosen method, reducing a singular `P` first.
pub fn solve(eq: &Equation, method: Method, opts: &SolveOptions) -> Result<SolveReport> {
    let red = reduce_singular(eq, &opts.tolerances)?;
    if red.rank == eq.n() {
        return solve_regular(eq, method, opts);
    }
    let (x, iterations, plan, m) = if red.rank == 0 {
        (Matrix::zeros(0, 0), 0, None, method)
    } else {
        let r = solve_regular(&red.reduced, method, opts)?;
        (r.x, r.iterations, r.plan, r.method)
    };
    let full = red.embed(&x)?;
    let mut report = finish(eq, m, full, iterations, opts)?;
    report.plan = plan;
    report.reduced_rank = Some(red.rank);
    Ok(report)
}
