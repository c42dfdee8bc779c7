use super::{jacobian_sign, Equation, SolveOptions};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Sum of Jacobian determinant signs over distinct solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSum {
    pub sum: i64,
    /// Signs of the distinct solutions, in input order.
    pub signs: Vec<i8>,
    /// Indices into the input list of the solutions that were kept.
    pub kept: Vec<usize>,
    /// A complete list at a regular value sums to one; anything else means
    /// solutions are missing or `P` is not regular.
    pub incomplete: bool,
}

/// Checks every candidate, drops duplicates within `dedup_tol` and sums the
/// determinant signs.
pub fn sign_sum_report(eq: &Equation, solutions: &[Matrix<f64>], opts: &SolveOptions) -> Result<SignSum> {
    let mut kept: Vec<usize> = Vec::new();
    let mut signs = Vec::new();
    for (index, x) in solutions.iter().enumerate() {
        let residual = eq.residual(x)?;
        if !(residual <= opts.tol) {
            return Err(Error::NotASolution { index, residual });
        }
        if kept
            .iter()
            .any(|&k| (&solutions[k] - x).symmetrized().norm_spectral() <= opts.dedup_tol)
        {
            continue;
        }
        let s = jacobian_sign(eq, x, &opts.tolerances)?;
        if s == 0 {
            return Err(Error::ZeroJacobian { index });
        }
        kept.push(index);
        signs.push(s);
    }
    let sum = signs.iter().map(|&s| s as i64).sum();
    Ok(SignSum {
        sum,
        signs,
        kept,
        incomplete: sum != 1,
    })
}
