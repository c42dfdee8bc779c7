//! Evaluating words at matrices: the evaluation homomorphism, its exact
//! inverse on the injective pair, `H_{m,k}` sums and trace coefficients.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::matrix::exact::inverse_exact;
use crate::matrix::{Matrix, Rational, Scalar};
use crate::word::{Letter, Word};

/// Matrices substituted for `X` and `B1..Bk`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment<T> {
    pub x: Option<Matrix<T>>,
    pub b: Vec<Matrix<T>>,
}

impl<T: Scalar> Assignment<T> {
    pub fn new(x: Matrix<T>, b: Vec<Matrix<T>>) -> Self {
        Self { x: Some(x), b }
    }

    pub fn coefficients_only(b: Vec<Matrix<T>>) -> Self {
        Self { x: None, b }
    }

    /// Same coefficients, different `X`.
    pub fn with_x(&self, x: Matrix<T>) -> Self {
        Self {
            x: Some(x),
            b: self.b.clone(),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.x.as_ref().or(self.b.first()).map(Matrix::rows)
    }

    pub fn letter(&self, l: Letter) -> Result<&Matrix<T>> {
        match l {
            Letter::X => self.x.as_ref().ok_or_else(|| Error::MissingLetter("X".into())),
            Letter::B(i) => self
                .b
                .get(i - 1)
                .ok_or_else(|| Error::MissingLetter(format!("B{i}"))),
        }
    }

    /// Checks that every letter of `w` is assigned and all matrices share one dimension.
    pub fn validate_for(&self, w: &Word) -> Result<usize> {
        let n = self
            .dim()
            .ok_or_else(|| Error::Dimension("empty assignment has no dimension".into()))?;
        for m in self.x.iter().chain(&self.b) {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension(format!(
                    "expected {n}x{n} matrices, found {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for f in w.factors() {
            self.letter(f.letter)?;
        }
        Ok(n)
    }
}

/// `w` evaluated at `a`; the identity word gives the identity matrix.
pub fn evaluate<T: Scalar>(w: &Word, a: &Assignment<T>) -> Result<Matrix<T>> {
    let n = a.validate_for(w)?;
    Ok(evaluate_unchecked(w, a, n))
}

pub(crate) fn evaluate_unchecked<T: Scalar>(w: &Word, a: &Assignment<T>, n: usize) -> Matrix<T> {
    let mut acc: Option<Matrix<T>> = None;
    for f in w.factors() {
        let m = a.letter(f.letter).expect("validated assignment");
        let p = if f.exp == 1 { m.clone() } else { m.pow(f.exp) };
        acc = Some(match acc {
            None => p,
            Some(acc) => &acc * &p,
        });
    }
    acc.unwrap_or_else(|| Matrix::identity(n))
}

pub fn trace_word<T: Scalar>(w: &Word, a: &Assignment<T>) -> Result<T> {
    Ok(evaluate(w, a)?.trace())
}

/// The pair on which evaluation of two-letter words is injective:
/// `a = [[3,1],[1,1]]` for `A` (`X`) and `b = [[1,1],[1,3]]` for `B` (`B1`).
pub fn injective_pair() -> (Matrix<Rational>, Matrix<Rational>) {
    (
        Matrix::from_int_rows([[3, 1], [1, 1]]),
        Matrix::from_int_rows([[1, 1], [1, 3]]),
    )
}

fn check_two_letter(w: &Word) -> Result<()> {
    match w.max_b_index() {
        Some(i) if i > 1 => Err(Error::IndexOutOfRange { index: i, k: 1 }),
        _ => Ok(()),
    }
}

/// Evaluation of a word over `{A, B}` (spelled `X`, `B1`) at the injective pair.
pub fn encode(w: &Word) -> Result<Matrix<Rational>> {
    check_two_letter(w)?;
    let (a, b) = injective_pair();
    evaluate(w, &Assignment::new(a, vec![b]))
}

/// Whether `w` evaluates to a symmetric matrix at the injective pair.
///
/// Because evaluation there is injective, this holds exactly when `w` is a
/// palindrome.
pub fn hermitian_symmetry_certificate(w: &Word) -> Result<bool> {
    Ok(encode(w)?.is_symmetric())
}

/// Recovers the unique word with `encode(word) = m` and length at most `max_len`.
///
/// Strips letters from the left: a branch survives while `a⁻¹M` (or `b⁻¹M`)
/// stays a nonnegative integer matrix.
pub fn decode(m: &Matrix<Rational>, max_len: usize) -> Result<Word> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::Dimension("decode expects a 2x2 matrix".into()));
    }
    if !is_nonnegative_integer(m) {
        return Err(Error::NotInImage);
    }
    let (a, b) = injective_pair();
    let inverses = [
        (Letter::X, inverse_exact(&a).expect("a is invertible")),
        (Letter::B(1), inverse_exact(&b).expect("b is invertible")),
    ];
    let mut letters = Vec::new();
    if strip(m, max_len, &inverses, &mut letters) {
        Word::from_letters(1, &letters)
    } else {
        Err(Error::NotInImage)
    }
}

fn strip(
    m: &Matrix<Rational>,
    budget: usize,
    inverses: &[(Letter, Matrix<Rational>); 2],
    letters: &mut Vec<Letter>,
) -> bool {
    if *m == Matrix::identity(2) {
        return true;
    }
    if budget == 0 {
        return false;
    }
    for (letter, inv) in inverses {
        let rest = inv * m;
        if is_nonnegative_integer(&rest) {
            letters.push(*letter);
            if strip(&rest, budget - 1, inverses, letters) {
                return true;
            }
            letters.pop();
        }
    }
    false
}

fn is_nonnegative_integer(m: &Matrix<Rational>) -> bool {
    m.data().iter().all(|v| v.is_integer() && !v.is_negative())
}

/// All `C(m, k)` words of length `m` with exactly `k` letters `B` (`B1`),
/// the rest `A` (`X`), in lexicographic order with `A < B`.
pub fn hmk_words(m: usize, k: usize) -> Vec<Word> {
    fn rec(pos: usize, m: usize, left: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if pos == m {
            out.push(Word::from_letters(1, cur).expect("two-letter word"));
            return;
        }
        if m - pos > left {
            cur.push(Letter::X);
            rec(pos + 1, m, left, cur, out);
            cur.pop();
        }
        if left > 0 {
            cur.push(Letter::B(1));
            rec(pos + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= m {
        rec(0, m, k, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

/// Coefficients of `t^0..t^m` in `Tr[(A + tB)^m]`, each the trace of `H_{m,k}(A, B)`.
pub fn bmv_coefficients<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, m: usize) -> Result<Vec<T>> {
    a.check_same_dim(b)?;
    let assignment = Assignment::new(a.clone(), vec![b.clone()]);
    (0..=m)
        .map(|k| {
            let mut sum = T::zero();
            for w in hmk_words(m, k) {
                T::add_to(&mut sum, &trace_word(&w, &assignment)?);
            }
            Ok(sum)
        })
        .collect()
}

/// `H_{m,k}(A, B)` itself.
pub fn hmk_sum<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, m: usize, k: usize) -> Result<Matrix<T>> {
    a.check_same_dim(b)?;
    let assignment = Assignment::new(a.clone(), vec![b.clone()]);
    let mut sum = Matrix::zeros(a.rows(), a.rows());
    for w in hmk_words(m, k) {
        sum = &sum + &evaluate(&w, &assignment)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn evaluate_ab_by_hand() {
        let (a, b) = injective_pair();
        let m = evaluate(&w("X B1"), &Assignment::new(a, vec![b])).unwrap();
        assert_eq!(m, Matrix::from_int_rows([[4, 6], [2, 4]]));
    }

    #[test]
    fn identity_word_evaluates_to_identity() {
        let a = Assignment::new(Matrix::<Rational>::from_int_rows([[2, 1], [1, 2]]), vec![]);
        assert_eq!(evaluate(&Word::identity(1), &a).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn missing_letters_and_dimensions() {
        let a = Assignment::coefficients_only(vec![Matrix::<f64>::identity(2)]);
        assert_eq!(evaluate(&w("X B1"), &a), Err(Error::MissingLetter("X".into())));
        let bad = Assignment::new(Matrix::<f64>::identity(3), vec![Matrix::identity(2)]);
        assert!(matches!(evaluate(&w("X B1"), &bad), Err(Error::Dimension(_))));
        let short = Assignment::new(Matrix::<f64>::identity(2), vec![]);
        assert_eq!(evaluate(&w("X B2"), &short), Err(Error::MissingLetter("B2".into())));
    }

    #[test]
    fn trace_of_square() {
        let a = Assignment::new(Matrix::diagonal(&[rat(1), rat(2)]), vec![]);
        assert_eq!(trace_word(&w("X^2"), &a).unwrap(), rat(5));
    }

    #[test]
    fn certificate_examples() {
        assert!(!hermitian_symmetry_certificate(&Word::from_ab("BABAAB").unwrap()).unwrap());
        assert!(hermitian_symmetry_certificate(&Word::from_ab("ABBA").unwrap()).unwrap());
        assert!(hermitian_symmetry_certificate(&w("X B2")).is_err());
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(&Matrix::identity(2), 4).unwrap(), Word::identity(1));
        assert_eq!(decode(&Matrix::from_int_rows([[4, 6], [2, 4]]), 4).unwrap(), w("X B1"));
        let m = encode(&Word::from_ab("ABBAB").unwrap()).unwrap();
        assert_eq!(decode(&m, 4), Err(Error::NotInImage));
        assert_eq!(decode(&Matrix::from_int_rows([[2, 0], [0, 1]]), 8), Err(Error::NotInImage));
    }

    #[test]
    fn hmk_enumeration() {
        assert_eq!(hmk_words(2, 1), vec![Word::from_ab("AB").unwrap(), Word::from_ab("BA").unwrap()]);
        let words = hmk_words(6, 3);
        assert_eq!(words.len(), 20);
        for word in &words {
            assert_eq!(word.len(), 6);
            assert_eq!(word.len() - word.degree(), 3);
        }
        let spelled: Vec<String> = words.iter().map(|w| w.to_ab_string().unwrap()).collect();
        let mut sorted = spelled.clone();
        sorted.sort();
        assert_eq!(spelled, sorted);
        assert!(hmk_words(3, 4).is_empty());
    }

    #[test]
    fn bmv_scalar_binomials() {
        let one = Matrix::<Rational>::identity(1);
        let c = bmv_coefficients(&one, &one, 5).unwrap();
        assert_eq!(c, [1, 5, 10, 10, 5, 1].map(rat).to_vec());
        let a = Matrix::<Rational>::from_int_rows([[2, 1], [1, 3]]);
        let b = Matrix::<Rational>::from_int_rows([[1, 0], [0, 4]]);
        assert_eq!(bmv_coefficients(&a, &b, 1).unwrap(), vec![rat(5), rat(5)]);
    }
}
