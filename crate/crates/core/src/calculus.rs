//! Derivatives of word maps `X ↦ W(X, B1..Bk)`.
//!
//! With `W = L_j X R_j` at the `j`-th occurrence of `X`,
//! `dW/dX = Σ_j R_jᵀ ⊗ L_j` on column-stacked matrices, and the reduced
//! Jacobian in symmetric coordinates is `M · dW/dX · N`.

use crate::error::{Error, Result};
use crate::eval::{evaluate, Assignment};
use crate::matrix::exact::{det_exact, to_rational};
use crate::matrix::float::Lu;
use crate::matrix::sym::{kron_add_to, mu_lower, nu, restrict, sym_dim, SymPoint};
use crate::matrix::{Matrix, Rational, Scalar, Tolerances};
use crate::word::{Letter, Word};

/// Left and right cofactors of every occurrence of a letter, in order.
struct Occurrence<T> {
    letter: Letter,
    left: Matrix<T>,
    right: Matrix<T>,
}

fn occurrences<T: Scalar>(
    w: &Word,
    a: &Assignment<T>,
    keep: impl Fn(Letter) -> bool,
) -> Result<(usize, Vec<Occurrence<T>>)> {
    let n = a.validate_for(w)?;
    let seq = w.to_letters();
    let mats: Vec<&Matrix<T>> = seq
        .iter()
        .map(|&l| a.letter(l))
        .collect::<Result<_>>()?;
    // suffix[p] = product of seq[p..]
    let mut suffix = vec![Matrix::identity(n); seq.len() + 1];
    for p in (0..seq.len()).rev() {
        suffix[p] = mats[p] * &suffix[p + 1];
    }
    let mut prefix = Matrix::identity(n);
    let mut out = Vec::new();
    for (p, &l) in seq.iter().enumerate() {
        if keep(l) {
            out.push(Occurrence {
                letter: l,
                left: prefix.clone(),
                right: suffix[p + 1].clone(),
            });
        }
        prefix = &prefix * mats[p];
    }
    Ok((n, out))
}

fn x_occurrences<T: Scalar>(w: &Word, a: &Assignment<T>) -> Result<(usize, Vec<Occurrence<T>>)> {
    if !w.contains_x() {
        return Err(Error::MissingX(w.to_string()));
    }
    if a.x.is_none() {
        return Err(Error::MissingLetter("X".into()));
    }
    occurrences(w, a, Letter::is_x)
}

/// `dW/dX` as an `n² x n²` matrix acting on `vec H`.
pub fn jacobian_full<T: Scalar>(w: &Word, a: &Assignment<T>) -> Result<Matrix<T>> {
    let (n, occ) = x_occurrences(w, a)?;
    let mut full = Matrix::zeros(n * n, n * n);
    for o in &occ {
        kron_add_to(&mut full, &o.right.transpose(), &o.left);
    }
    Ok(full)
}

/// `M · dW/dX · N` without a determinant.
pub fn reduced_jacobian<T: Scalar>(w: &Word, a: &Assignment<T>) -> Result<Matrix<T>> {
    let n = a.validate_for(w)?;
    Ok(restrict(&jacobian_full(w, a)?, n))
}

/// `Σ_j L_j H R_j`, the derivative of `W` at `X` in direction `H`.
pub fn directional_derivative<T: Scalar>(w: &Word, a: &Assignment<T>, h: &Matrix<T>) -> Result<Matrix<T>> {
    let (n, occ) = x_occurrences(w, a)?;
    if h.rows() != n || h.cols() != n {
        return Err(Error::Dimension(format!("direction must be {n}x{n}")));
    }
    let mut out = Matrix::zeros(n, n);
    for o in &occ {
        out = &out + &(&(&o.left * h) * &o.right);
    }
    Ok(out)
}

/// Derivative of `W` when each coefficient `B_i` moves in direction `h[i-1]`
/// and `X` stays fixed.
pub fn coefficient_derivative<T: Scalar>(w: &Word, a: &Assignment<T>, h: &[Matrix<T>]) -> Result<Matrix<T>> {
    let (n, occ) = occurrences(w, a, |l| !l.is_x())?;
    let mut out = Matrix::zeros(n, n);
    for o in &occ {
        let Letter::B(i) = o.letter else { unreachable!() };
        let hi = h.get(i - 1).ok_or_else(|| Error::MissingLetter(format!("B{i}")))?;
        out = &out + &(&(&o.left * hi) * &o.right);
    }
    Ok(out)
}

/// Central-difference reduced Jacobian of `μ ∘ W ∘ ν` with step `h`.
pub fn jacobian_fd(w: &Word, a: &Assignment<f64>, h: f64) -> Result<Matrix<f64>> {
    let x = a.x.as_ref().ok_or_else(|| Error::MissingLetter("X".into()))?;
    let n = a.validate_for(w)?;
    let d = sym_dim(n);
    let mut out = Matrix::zeros(d, d);
    for c in 0..d {
        let mut e = vec![0.0; d];
        e[c] = h;
        let dir = nu(&SymPoint { n, coords: e });
        let plus = evaluate(w, &a.with_x(x + &dir))?;
        let minus = evaluate(w, &a.with_x(x - &dir))?;
        let col = mu_lower(&(&plus - &minus)).coords;
        for r in 0..d {
            out[(r, c)] = col[r] / (2.0 * h);
        }
    }
    Ok(out)
}

/// Where a reported determinant sign comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SignSource {
    /// Exact arithmetic on rational inputs.
    Exact,
    /// Floating-point LU, with the perturbation bound clear of zero.
    Float,
    /// Floating point was inconclusive; the inputs were converted to exact
    /// rationals and this is the exact determinant.
    Escalated(Rational),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianReport<T> {
    pub word: Word,
    pub at_x: Matrix<T>,
    pub full: Matrix<T>,
    pub reduced: Matrix<T>,
    pub det: T,
    pub sign: i8,
    /// `‖J‖₁ ‖J⁻¹‖₁` in float mode.
    pub condition: Option<f64>,
    pub source: SignSource,
}

/// Scalars with a determinant suited to sign certificates.
pub trait JacobianScalar: Scalar {
    #[doc(hidden)]
    fn det_and_sign(
        w: &Word,
        a: &Assignment<Self>,
        reduced: &Matrix<Self>,
        noise: f64,
    ) -> Result<(Self, i8, Option<f64>, SignSource)>;
}

fn sign_of<T: Scalar>(v: &T) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

impl JacobianScalar for Rational {
    fn det_and_sign(
        _: &Word,
        _: &Assignment<Self>,
        reduced: &Matrix<Self>,
        _: f64,
    ) -> Result<(Self, i8, Option<f64>, SignSource)> {
        let det = det_exact(reduced)?;
        let s = sign_of(&det);
        Ok((det, s, None, SignSource::Exact))
    }
}

impl JacobianScalar for f64 {
    fn det_and_sign(
        w: &Word,
        a: &Assignment<Self>,
        reduced: &Matrix<Self>,
        noise: f64,
    ) -> Result<(Self, i8, Option<f64>, SignSource)> {
        let m = reduced.rows();
        let lu = Lu::factor(reduced)?;
        let det = lu.det();
        let mut condition = None;
        if !lu.is_singular() && det.is_finite() {
            let inv_norm = lu.inverse()?.norm_one();
            let norm = reduced.norm_one();
            condition = Some(norm * inv_norm);
            // J + E is nonsingular for every ‖E‖₁ < 1/‖J⁻¹‖₁, so the sign
            // cannot flip while the rounding bound stays below that radius.
            let lu_noise = 4.0 * (m * m) as f64 * f64::EPSILON * norm;
            let bound = m as f64 * noise + lu_noise;
            if inv_norm.is_finite() && inv_norm * bound < 0.25 {
                return Ok((det, sign_of(&det), condition, SignSource::Float));
            }
        }
        let exact = Assignment {
            x: a.x.as_ref().map(to_rational).transpose()?,
            b: a.b.iter().map(to_rational).collect::<Result<_>>()?,
        };
        let det_q = det_exact(&reduced_jacobian(w, &exact)?)?;
        Ok((det, sign_of(&det_q), condition, SignSource::Escalated(det_q)))
    }
}

/// Entrywise rounding bound for the float Jacobian: every term is a product
/// of `len - 1` letters, each summed over `n` terms.
fn float_noise<T: Scalar>(w: &Word, a: &Assignment<T>, n: usize) -> Result<f64> {
    if T::KIND == crate::matrix::ScalarKind::Rational {
        return Ok(0.0);
    }
    let len = w.len() as f64;
    let mut mass = 0.0;
    for j in 1..=w.degree() {
        let (l, r) = w.split_at_occurrence(j)?;
        let mut p = 1.0;
        for letter in l.letters().chain(r.letters()) {
            p *= a.letter(letter)?.to_f64().norm_fro();
        }
        mass += p;
    }
    Ok(4.0 * (len + 2.0) * n as f64 * f64::EPSILON * mass)
}

/// The reduced Jacobian at a symmetric `X` with its determinant and sign.
pub fn jacobian_reduced<T: JacobianScalar>(w: &Word, a: &Assignment<T>, tol: &Tolerances) -> Result<JacobianReport<T>> {
    let x = a.x.as_ref().ok_or_else(|| Error::MissingLetter("X".into()))?;
    if !x.is_symmetric_within(tol.sym_tol) {
        return Err(Error::NotSymmetric);
    }
    let full = jacobian_full(w, a)?;
    let n = x.rows();
    let reduced = restrict(&full, n);
    let noise = float_noise(w, a, n)?;
    let (det, sign, condition, source) = T::det_and_sign(w, a, &reduced, noise)?;
    Ok(JacobianReport {
        word: w.clone(),
        at_x: x.clone(),
        full,
        reduced,
        det,
        sign,
        condition,
        source,
    })
}

/// Exact determinant of the reduced Jacobian and its sign.
///
/// A negative sign at a positive definite `X` means the equation
/// `W(X, B) = W(X₀, B)` has at least two positive definite solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetCertificate {
    pub det: Rational,
    pub sign: i8,
}

pub fn det_sign_certificate(w: &Word, a: &Assignment<Rational>) -> Result<DetCertificate> {
    let x = a.x.as_ref().ok_or_else(|| Error::MissingLetter("X".into()))?;
    if !x.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let det = det_exact(&reduced_jacobian(w, a)?)?;
    let sign = sign_of(&det);
    Ok(DetCertificate { det, sign })
}

/// Reduced Jacobian as a map on symmetric coordinates: `J · μ(H)`.
pub fn apply_reduced<T: Scalar>(reduced: &Matrix<T>, h: &Matrix<T>) -> Vec<T> {
    reduced.mul_vec(&mu_lower(h).coords)
}
