use super::Equation;
use crate::error::Result;
use crate::matrix::float::sym_eig_with;
use crate::matrix::{Matrix, Tolerances};
use crate::word::normal_form;

/// An equation with singular `P` rewritten as one of size `rank` with
/// positive definite right-hand side.
///
/// Outer coefficient layers `C W C` are peeled first, so the rotated word
/// starts with `X` and solutions vanish on the kernel of the rotated
/// right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularReduction {
    /// Orthogonal change of basis; `P' = Q diag(λ) Qᵀ` with `λ` descending.
    pub q: Matrix<f64>,
    pub rank: usize,
    /// Product of the peeled coefficient powers.
    pub peel: Matrix<f64>,
    /// Leading `rank x rank` equation.
    pub reduced: Equation,
    n: usize,
}

impl SingularReduction {
    /// `Q diag(X_r, 0) Qᵀ`.
    pub fn embed(&self, xr: &Matrix<f64>) -> Result<Matrix<f64>> {
        let n = self.n;
        let r = self.rank;
        let padded = Matrix::from_fn(n, n, |i, j| if i < r && j < r { xr[(i, j)] } else { 0.0 });
        Ok((&(&self.q * &padded) * &self.q.transpose()).symmetrized())
    }

    pub fn peel_is_identity(&self) -> bool {
        self.peel == Matrix::identity(self.n)
    }
}

/// Rotates `P` to `diag(Λ_r, 0)` and keeps the leading blocks.
///
/// The rank counts eigenvalues above `rank_tol · ‖P‖`.
pub fn reduce_singular(eq: &Equation, tol: &Tolerances) -> Result<SingularReduction> {
    let n = eq.n();
    let nf = normal_form(&eq.word)?;
    let peel = nf.peel_matrix(&eq.b, n)?;
    let (word, p) = if nf.peel.is_empty() {
        (eq.word.clone(), eq.p.clone())
    } else {
        let ci = peel.inverse()?;
        (nf.unpeeled(), (&(&ci * &eq.p) * &ci.transpose()).symmetrized())
    };
    let e = sym_eig_with(&p.symmetrized(), tol)?;
    let scale = e.lambda.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let rank = e.lambda.iter().filter(|&&l| l > tol.rank_tol * scale).count();
    let q = e.q.clone();
    let qt = q.transpose();
    let b = eq
        .b
        .iter()
        .map(|bi| (&(&qt * bi) * &q).symmetrized().leading_block(rank))
        .collect();
    let reduced = Equation {
        word,
        b,
        p: Matrix::diagonal(&e.lambda[..rank]),
    };
    Ok(SingularReduction {
        q,
        rank,
        peel,
        reduced,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::float::kernel_basis;
    use crate::matrix::random::random_pd;
    use crate::solve::{solve, Method, SolveOptions};
    use crate::word::Word;

    fn eq(word: &str, b: Vec<Matrix<f64>>, p: Matrix<f64>) -> Equation {
        Equation::new(Word::parse(word).unwrap(), b, p, &Tolerances::default()).unwrap()
    }

    #[test]
    fn definite_p_keeps_full_rank() {
        let e = eq("X B1 X", vec![random_pd(3, 1, 5.0)], random_pd(3, 2, 5.0));
        let red = reduce_singular(&e, &Tolerances::default()).unwrap();
        assert_eq!(red.rank, 3);
        assert!(red.peel_is_identity());
    }

    #[test]
    fn zero_p_gives_zero_solution() {
        let e = eq("X B1 X^2 B1 X", vec![random_pd(3, 3, 5.0)], Matrix::zeros(3, 3));
        let red = reduce_singular(&e, &Tolerances::default()).unwrap();
        assert_eq!(red.rank, 0);
        let r = solve(&e, Method::Auto, &SolveOptions::default()).unwrap();
        assert!(r.x.is_zero());
        assert_eq!(r.reduced_rank, Some(0));
    }

    #[test]
    fn rank_two_kernel_is_preserved() {
        let v = [1.0, -2.0, 0.5];
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        let proj = Matrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { 0.0 } - v[i] * v[j] / norm2);
        let base = random_pd(3, 4, 5.0);
        let p = (&(&proj * &base) * &proj).symmetrized();
        let e = eq("X B1 X^3 B1 X", vec![random_pd(3, 5, 5.0)], p.clone());
        for m in [Method::Auto, Method::Newton] {
            let r = solve(&e, m, &SolveOptions::default()).unwrap();
            assert_eq!(r.reduced_rank, Some(2));
            assert!(r.residual <= 1e-8, "{m}: {}", r.residual);
            let k = kernel_basis(&r.x, &Tolerances { rank_tol: 1e-8, ..Tolerances::default() }).unwrap();
            assert_eq!(k.len(), 1);
            let dot: f64 = k[0].iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!((dot.abs() - norm2.sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn outer_layer_is_peeled() {
        let b1 = random_pd(2, 6, 5.0);
        let p = Matrix::from_rows(vec![vec![4.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let e = eq("B1 X B1", vec![b1], p);
        let red = reduce_singular(&e, &Tolerances::default()).unwrap();
        assert_eq!(red.rank, 1);
        assert!(!red.peel_is_identity());
        let r = solve(&e, Method::Auto, &SolveOptions::default()).unwrap();
        assert!(r.residual < 1e-10);
    }
}
