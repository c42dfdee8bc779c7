use std::collections::BTreeMap;

use super::{Letter, Word};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Scalar};

/// An interlaced symmetric word split into an outer conjugation layer and a
/// core `X^{p1} B'1 X^{p2} B'2 ... B'2 X^{p2} B'1 X^{p1}` over fresh letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    /// Begins and ends with a power of `X`.
    pub core: Word,
    /// Outer conjugating letter powers `(index, exponent)`, outermost first.
    pub peel: Vec<(usize, u32)>,
    /// Fresh letter index to `(original index, exponent)`.
    pub substitutions: BTreeMap<usize, (usize, u32)>,
    original_k: usize,
}

/// Peels outer coefficient runs and renames every inner run `B_i^q` to a
/// fresh letter shared by mirror-image positions.
pub fn normal_form(w: &Word) -> Result<NormalForm> {
    if !w.is_interlaced() {
        return Err(Error::NotInterlaced(w.to_string()));
    }
    if !w.is_symmetric() {
        return Err(Error::NotSymmetricWord(w.to_string()));
    }
    let mut factors = w.factors();
    let mut peel = Vec::new();
    while let Some(first) = factors.first().filter(|f| !f.letter.is_x()) {
        let Letter::B(i) = first.letter else { unreachable!() };
        peel.push((i, first.exp));
        factors = &factors[1..factors.len() - 1];
    }

    let runs: Vec<usize> = (0..factors.len()).filter(|&i| !factors[i].letter.is_x()).collect();
    let r = runs.len();
    let mut substitutions = BTreeMap::new();
    let mut core = Vec::with_capacity(factors.len());
    let mut run_idx = 0;
    for f in factors {
        match f.letter {
            Letter::X => core.push((Letter::X, f.exp)),
            Letter::B(i) => {
                let fresh = run_idx.min(r - 1 - run_idx) + 1;
                substitutions.insert(fresh, (i, f.exp));
                core.push((Letter::B(fresh), 1));
                run_idx += 1;
            }
        }
    }
    let k_core = substitutions.len().max(1);
    Ok(NormalForm {
        core: Word::from_factors(k_core, core)?,
        peel,
        substitutions,
        original_k: w.alphabet_size(),
    })
}

impl NormalForm {
    /// Substitutes the fresh letters back and restores the peeled layers.
    pub fn rewrap(&self) -> Word {
        let inner = self.core.factors().iter().map(|f| match f.letter {
            Letter::X => (Letter::X, f.exp),
            Letter::B(j) => {
                let (i, q) = self.substitutions[&j];
                (Letter::B(i), q * f.exp)
            }
        });
        let front = self.peel.iter().map(|&(i, q)| (Letter::B(i), q));
        let back = self.peel.iter().rev().map(|&(i, q)| (Letter::B(i), q));
        Word::from_factors(self.original_k, front.chain(inner).chain(back).collect::<Vec<_>>())
            .expect("indices come from the original word")
    }

    /// Matrices for the fresh letters: `B'_j = B_i^q`.
    pub fn core_coefficients<T: Scalar>(&self, b: &[Matrix<T>]) -> Result<Vec<Matrix<T>>> {
        self.substitutions
            .values()
            .map(|&(i, q)| {
                b.get(i - 1)
                    .map(|m| m.pow(q))
                    .ok_or_else(|| Error::MissingLetter(format!("B{i}")))
            })
            .collect()
    }

    /// The peeled conjugation as one matrix `B_{i1}^{q1} B_{i2}^{q2} ...`, so
    /// that `W = C · core · Cᵀ` when every `B_i` is symmetric.
    pub fn peel_matrix<T: Scalar>(&self, b: &[Matrix<T>], n: usize) -> Result<Matrix<T>> {
        let mut c = Matrix::identity(n);
        for &(i, q) in &self.peel {
            let bi = b.get(i - 1).ok_or_else(|| Error::MissingLetter(format!("B{i}")))?;
            c = &c * &bi.pow(q);
        }
        Ok(c)
    }

    /// The original word with the peel removed.
    pub fn unpeeled(&self) -> Word {
        let inner = NormalForm {
            peel: Vec::new(),
            ..self.clone()
        };
        inner.rewrap()
    }
}
