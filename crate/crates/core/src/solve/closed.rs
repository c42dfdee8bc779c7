use crate::error::{Error, Result};
use crate::matrix::float::{pd_root, pd_sqrt_pair};
use crate::matrix::{Matrix, Tolerances};
use crate::word::{decompose_totally_symmetric, normal_form, NormalForm, Step, TotallySymmetricPlan, Word};

/// Unique PSD solution of `X^s = P`.
pub fn solve_power(p: &Matrix<f64>, s: u32, tol: &Tolerances) -> Result<Matrix<f64>> {
    pd_root(p, s, tol)
}

/// Unique PSD solution of `XBX = P`: `B^{-1/2} (B^{1/2} P B^{1/2})^{1/2} B^{-1/2}`.
pub fn solve_riccati(b: &Matrix<f64>, p: &Matrix<f64>, tol: &Tolerances) -> Result<Matrix<f64>> {
    solve_pin(b, 1, p, tol)
}

/// Unique PSD solution of `(XB)^m X = P`.
pub fn solve_pin(b: &Matrix<f64>, m: u32, p: &Matrix<f64>, tol: &Tolerances) -> Result<Matrix<f64>> {
    b.check_same_dim(p)?;
    let (bh, bih) = pd_sqrt_pair(b, tol)?;
    let inner = (&(&bh * p) * &bh).symmetrized();
    let root = pd_root(&inner, m + 1, tol)?;
    Ok((&(&bih * &root) * &bih).symmetrized())
}

/// Unwinds `plan` from the outside in, each step inverting one constructor.
pub fn solve_totally_symmetric(
    plan: &TotallySymmetricPlan,
    b: &[Matrix<f64>],
    p: &Matrix<f64>,
    tol: &Tolerances,
) -> Result<Matrix<f64>> {
    let coeff = |i: usize| b.get(i - 1).ok_or_else(|| Error::MissingLetter(format!("B{i}")));
    let mut q = p.symmetrized();
    for step in &plan.steps {
        q = match *step {
            Step::Power(m) => pd_root(&q, m, tol)?,
            Step::Pin(m, i) => solve_pin(coeff(i)?, m, &q, tol)?,
            Step::Conj(i) => {
                let bi = coeff(i)?;
                let inv = bi.inverse()?;
                (&(&inv * &q) * &inv).symmetrized()
            }
        };
    }
    Ok(q)
}

/// How a word reaches a closed form: directly, or after renaming its
/// coefficient powers to fresh letters.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormRoute {
    Direct(TotallySymmetricPlan),
    Normal {
        form: NormalForm,
        plan: TotallySymmetricPlan,
    },
}

impl ClosedFormRoute {
    pub fn find(w: &Word) -> Option<Self> {
        if let Some(plan) = decompose_totally_symmetric(w) {
            return Some(Self::Direct(plan));
        }
        let form = normal_form(w).ok()?;
        let plan = decompose_totally_symmetric(&form.core)?;
        Some(Self::Normal { form, plan })
    }

    pub fn solve(&self, b: &[Matrix<f64>], p: &Matrix<f64>, tol: &Tolerances) -> Result<Matrix<f64>> {
        match self {
            Self::Direct(plan) => solve_totally_symmetric(plan, b, p, tol),
            Self::Normal { form, plan } => {
                let c = form.peel_matrix(b, p.rows())?;
                let ci = c.inverse()?;
                let inner = (&(&ci * p) * &ci.transpose()).symmetrized();
                solve_totally_symmetric(plan, &form.core_coefficients(b)?, &inner, tol)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Direct(plan) => plan.to_string(),
            Self::Normal { form, plan } => {
                let mut parts: Vec<String> = form
                    .substitutions
                    .iter()
                    .map(|(j, (i, q))| format!("B{j} = B{i}^{q}"))
                    .collect();
                for (i, q) in &form.peel {
                    parts.push(format!("peel B{i}^{q}"));
                }
                format!("{plan} on {} with {}", form.core, parts.join(", "))
            }
        }
    }
}
