//! Exact witnesses: the 3x3 integer pair `A1`, `B1`, the nonuniqueness
//! determinant, word-family sign scans, the `SASAAS` negative-trace pipeline
//! and 2x2 positivity sampling.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::calculus::{det_sign_certificate, DetCertificate};
use crate::error::{Error, Result};
use crate::eval::{evaluate, trace_word, Assignment};
use crate::matrix::exact::{inverse_exact, to_rational};
use crate::matrix::{rat, Matrix, Rational};
use crate::solve::{solve, Equation, Method, SolveOptions};
use crate::word::{decompose_totally_symmetric, Letter, Step, Word};

pub fn a1() -> Matrix<Rational> {
    Matrix::from_int_rows([[1, 20, 210], [20, 402, 4240], [210, 4240, 44903]])
}

pub fn b1() -> Matrix<Rational> {
    Matrix::from_int_rows([[36501, -3820, 190], [-3820, 401, -20], [190, -20, 1]])
}

/// The word whose reduced Jacobian at `X = B1`, `B = A1` has negative determinant.
pub fn nonuniqueness_word() -> Word {
    Word::parse("X B1 X^2 B1^3 X^2 B1 X").expect("valid word")
}

/// Exact determinant of the reduced Jacobian of `XBX²B³X²BX` at `X = B1`, `B = A1`.
pub fn verify_nonuniqueness_witness() -> DetCertificate {
    let a = Assignment::new(b1(), vec![a1()]);
    det_sign_certificate(&nonuniqueness_word(), &a).expect("fixture dimensions agree")
}

/// Coefficients of the non-interlaced example `X B1 B2 X B2 B1 X`.
pub fn degenerate_example_coefficients() -> (Matrix<Rational>, Matrix<Rational>) {
    (
        Matrix::from_int_rows([[3, -1], [-1, 1]]),
        Matrix::from_int_rows([[2, 1], [1, 1]]),
    )
}

/// The two one-parameter families of solutions of `X B1 B2 X B2 B1 X = 0`.
pub fn degenerate_example_solutions(x: &Rational) -> [Matrix<Rational>; 2] {
    let z = rat(0);
    [
        Matrix::from_rows(vec![vec![z.clone(), z.clone()], vec![z, x.clone()]]).expect("2x2"),
        Matrix::from_rows(vec![
            vec![x / rat(5), -x.clone()],
            vec![-x.clone(), x * rat(5)],
        ])
        .expect("2x2"),
    ]
}

/// Word families with a free exponent `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyTemplate {
    /// `X B X^k B X`
    Xbxkbx,
    /// `X B X B^2 X^k B^2 X B X`
    Xbxb2xkb2xbx,
    /// `X B X^k B^3 X^k B X`
    Xbxkb3xkbx,
    /// `X B^2 X B X^k B X B^2 X`
    Xb2xbxkbxb2x,
}

impl FamilyTemplate {
    pub const ALL: [FamilyTemplate; 4] = [
        FamilyTemplate::Xbxkbx,
        FamilyTemplate::Xbxb2xkb2xbx,
        FamilyTemplate::Xbxkb3xkbx,
        FamilyTemplate::Xb2xbxkbxb2x,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTemplate::Xbxkbx => "XBX^kBX",
            FamilyTemplate::Xbxb2xkb2xbx => "XBXB^2X^kB^2XBX",
            FamilyTemplate::Xbxkb3xkbx => "XBX^kB^3X^kBX",
            FamilyTemplate::Xb2xbxkbxb2x => "XB^2XBX^kBXB^2X",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        let key: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        Self::ALL.into_iter().find(|t| t.name().eq_ignore_ascii_case(&key))
    }

    /// The exponent range over which this family is claimed to have multiple solutions.
    pub fn default_range(self) -> RangeInclusive<u32> {
        match self {
            FamilyTemplate::Xbxkbx => 9..=20,
            FamilyTemplate::Xbxb2xkb2xbx => 2..=16,
            FamilyTemplate::Xbxkb3xkbx => 2..=15,
            FamilyTemplate::Xb2xbxkbxb2x => 6..=40,
        }
    }

    pub fn word(self, k: u32) -> Word {
        use Letter::{B, X};
        let f: Vec<(Letter, u32)> = match self {
            FamilyTemplate::Xbxkbx => vec![(X, 1), (B(1), 1), (X, k), (B(1), 1), (X, 1)],
            FamilyTemplate::Xbxb2xkb2xbx => vec![
                (X, 1),
                (B(1), 1),
                (X, 1),
                (B(1), 2),
                (X, k),
                (B(1), 2),
                (X, 1),
                (B(1), 1),
                (X, 1),
            ],
            FamilyTemplate::Xbxkb3xkbx => vec![(X, 1), (B(1), 1), (X, k), (B(1), 3), (X, k), (B(1), 1), (X, 1)],
            FamilyTemplate::Xb2xbxkbxb2x => vec![
                (X, 1),
                (B(1), 2),
                (X, 1),
                (B(1), 1),
                (X, k),
                (B(1), 1),
                (X, 1),
                (B(1), 2),
                (X, 1),
            ],
        };
        Word::from_factors(1, f).expect("single coefficient letter")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyScan {
    pub k: u32,
    pub word: Word,
    pub sign: i8,
    pub det: Rational,
}

/// Exact reduced-Jacobian determinant signs for each family member at `(x, b)`.
pub fn scan_family(
    template: FamilyTemplate,
    ks: RangeInclusive<u32>,
    x: &Matrix<Rational>,
    b: &Matrix<Rational>,
) -> Result<Vec<FamilyScan>> {
    x.check_same_dim(b)?;
    let a = Assignment::new(x.clone(), vec![b.clone()]);
    ks.collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| {
            let word = template.word(k);
            let c = det_sign_certificate(&word, &a)?;
            Ok(FamilyScan {
                k,
                word,
                sign: c.sign,
                det: c.det,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SasaasReport {
    /// The equation actually solved, with `B` as the unknown.
    pub equation_word: Word,
    /// Solution `B2` of `S(A1, B2) = B1`.
    pub solution: Matrix<f64>,
    pub residual: f64,
    /// Whether `solution` is the exact solution rather than a float approximation.
    pub solution_exact: bool,
    /// `Tr(S A S A A S)` evaluated exactly at the rational value of `solution`.
    pub trace: Rational,
    pub trace_float: f64,
}

/// Solves `S(A1, X) = B1` for `X = B2` and evaluates `Tr(S A S A A S)` at
/// `A = A1`, `B = B2`.
///
/// `s_word` is spelled over `{A, B}` (as `X`, `B1`); the roles are swapped so
/// that `B` becomes the unknown.
pub fn sasaas_pipeline(s_word: &Word, opts: &SolveOptions) -> Result<SasaasReport> {
    if s_word.max_b_index().unwrap_or(0) > 1 {
        return Err(Error::IndexOutOfRange {
            index: s_word.max_b_index().unwrap_or(0),
            k: 1,
        });
    }
    let swapped = s_word.swap_x_with(1)?;
    let (a, b) = (a1(), b1());
    let (solution, solution_exact, residual) = if let Some(x) = exact_conjugation_solve(&swapped, &a, &b)? {
        (x.to_f64(), true, 0.0)
    } else {
        let eq = Equation::new(swapped.clone(), vec![a.to_f64()], b.to_f64(), &opts.tolerances)?;
        let r = solve(&eq, Method::Auto, opts)?;
        (r.x, false, r.residual)
    };
    let b2 = match exact_conjugation_solve(&swapped, &a, &b)? {
        Some(x) => x,
        None => to_rational(&solution)?,
    };
    let s = s_word.with_alphabet(1)?;
    let a_word = Word::from_letters(1, &[Letter::X])?;
    let outer = s.concat(&a_word).concat(&s).concat(&a_word.pow(2)).concat(&s);
    let trace = trace_word(&outer, &Assignment::new(a.clone(), vec![b2]))?;
    let trace_float = trace_word(&outer, &Assignment::new(a.to_f64(), vec![solution.clone()]))?;
    Ok(SasaasReport {
        equation_word: swapped,
        solution,
        residual,
        solution_exact,
        trace,
        trace_float,
    })
}

/// Exact solution of `C X C = P` when the word is `X` wrapped in coefficient
/// conjugations only.
fn exact_conjugation_solve(w: &Word, a: &Matrix<Rational>, p: &Matrix<Rational>) -> Result<Option<Matrix<Rational>>> {
    let Some(plan) = decompose_totally_symmetric(w) else {
        return Ok(None);
    };
    if !plan.steps.iter().all(|s| matches!(s, Step::Conj(1))) {
        return Ok(None);
    }
    let inv = inverse_exact(a)?;
    let mut q = p.clone();
    for _ in &plan.steps {
        q = &(&inv * &q) * &inv;
    }
    Ok(Some(q))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivitySample {
    pub samples: usize,
    pub min_det: Rational,
    pub all_positive: bool,
    /// Index of the sample attaining `min_det`.
    pub argmin: usize,
}

fn random_positive_rational(rng: &mut ChaCha8Rng, max: i64) -> Rational {
    Rational::new(BigInt::from(rng.random_range(1..=max)), BigInt::from(rng.random_range(1..=max)))
}

/// The sample point `X = [[x, y], [y, (1+y²)/x]]`, `B = diag(a, b)` drawn from
/// stream `index` of `seed`.
pub fn positivity_point(seed: u64, index: usize, ratio: Option<&Rational>) -> (Matrix<Rational>, Matrix<Rational>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let x = random_positive_rational(&mut rng, 1000);
    let y = Rational::new(
        BigInt::from(rng.random_range(-1000i64..=1000)),
        BigInt::from(rng.random_range(1i64..=1000)),
    );
    let z = (rat(1) + &y * &y) / &x;
    let a = random_positive_rational(&mut rng, 1000);
    let b = match ratio {
        Some(r) => &a / r,
        None => random_positive_rational(&mut rng, 1000),
    };
    let xm = Matrix::from_rows(vec![vec![x, y.clone()], vec![y, z]]).expect("2x2");
    (xm, Matrix::diagonal(&[a, b]))
}

/// Exact reduced-Jacobian determinants of `w` over `samples` random 2x2
/// points; `ratio` fixes `a/b` in `B = diag(a, b)`.
pub fn two_by_two_positivity_sample(
    w: &Word,
    samples: usize,
    seed: u64,
    ratio: Option<&Rational>,
) -> Result<PositivitySample> {
    if w.max_b_index().unwrap_or(0) > 1 {
        return Err(Error::IndexOutOfRange {
            index: w.max_b_index().unwrap_or(0),
            k: 1,
        });
    }
    let w = w.with_alphabet(1)?;
    let dets: Vec<Rational> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let (x, b) = positivity_point(seed, i, ratio);
            det_sign_certificate(&w, &Assignment::new(x, vec![b])).map(|c| c.det)
        })
        .collect::<Result<_>>()?;
    let (argmin, min_det) = dets
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, d)| (i, d.clone()))
        .unwrap_or((0, rat(0)));
    Ok(PositivitySample {
        samples,
        all_positive: dets.iter().all(|d| d > &rat(0)),
        min_det,
        argmin,
    })
}

/// Evaluates `X B1 B2 X B2 B1 X` on both solution families at `x`.
pub fn degenerate_example_residuals(x: &Rational) -> Result<[Matrix<Rational>; 2]> {
    let (c1, c2) = degenerate_example_coefficients();
    let w = Word::parse("X B1 B2 X B2 B1 X")?;
    let [f1, f2] = degenerate_example_solutions(x);
    Ok([
        evaluate(&w, &Assignment::new(f1, vec![c1.clone(), c2.clone()]))?,
        evaluate(&w, &Assignment::new(f2, vec![c1, c2]))?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::exact::{is_pd_exact, leading_principal_minors};

    #[test]
    fn fixtures_are_positive_definite() {
        assert_eq!(leading_principal_minors(&a1()), vec![rat(1), rat(2), rat(6)]);
        assert_eq!(leading_principal_minors(&b1()), vec![rat(36501), rat(44501), rat(1)]);
        assert!(is_pd_exact(&a1()) && is_pd_exact(&b1()));
    }

    #[test]
    fn nonuniqueness_determinant() {
        let c = verify_nonuniqueness_witness();
        assert_eq!(c.det.to_string(), "-633705909477329213831177437148144640");
        assert_eq!(c.sign, -1);
        assert_eq!(verify_nonuniqueness_witness(), c);
    }

    #[test]
    fn identity_point_is_positive() {
        let i = Matrix::<Rational>::identity(3);
        let c = det_sign_certificate(&nonuniqueness_word(), &Assignment::new(i.clone(), vec![i])).unwrap();
        assert_eq!(c.det, rat(6i64.pow(6)));
    }

    #[test]
    fn negative_trace() {
        let w = Word::from_ab("BABAAB").unwrap();
        assert_eq!(trace_word(&w, &Assignment::new(a1(), vec![b1()])).unwrap(), rat(-3164));
    }

    #[test]
    fn templates() {
        assert_eq!(FamilyTemplate::Xbxkbx.word(3), Word::parse("X B1 X^3 B1 X").unwrap());
        assert_eq!(FamilyTemplate::Xbxkb3xkbx.word(2), Word::parse("X B1 X^2 B1^3 X^2 B1 X").unwrap());
        for t in FamilyTemplate::ALL {
            assert_eq!(FamilyTemplate::from_name(t.name()), Some(t));
            let w = t.word(5);
            assert!(w.is_symmetric() && w.is_interlaced());
        }
    }

    #[test]
    fn scan_edges() {
        let i = Matrix::<Rational>::identity(3);
        let one = scan_family(FamilyTemplate::Xbxkbx, 1..=1, &i, &i).unwrap();
        assert_eq!(one[0].sign, 1);
        #[allow(clippy::reversed_empty_ranges)]
        let empty = scan_family(FamilyTemplate::Xbxkbx, 2..=1, &i, &i).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn sasaas_degenerate_case() {
        let r = sasaas_pipeline(&Word::from_ab("B").unwrap(), &SolveOptions::default()).unwrap();
        assert!(r.solution_exact);
        assert_eq!(r.trace, rat(-3164));
    }

    #[test]
    fn sasaas_closed_forms() {
        let opts = SolveOptions::default();
        let riccati = sasaas_pipeline(&Word::from_ab("BAB").unwrap(), &opts).unwrap();
        assert!(!riccati.solution_exact);
        assert!(riccati.trace < rat(0) && riccati.trace_float < 0.0);
        let conj = sasaas_pipeline(&Word::from_ab("ABA").unwrap(), &opts).unwrap();
        assert!(conj.solution_exact);
        // S(A1, B2) = B1 exactly, so the outer word is B1 A1 B1 A1 A1 B1 again
        assert_eq!(conj.trace, rat(-3164));
    }

    #[test]
    fn degenerate_example_families_vanish() {
        for x in [1, 2, 7] {
            for m in degenerate_example_residuals(&rat(x)).unwrap() {
                assert!(m.is_zero());
            }
        }
    }

    #[test]
    fn positivity_small_run() {
        let w = nonuniqueness_word();
        let s = two_by_two_positivity_sample(&w, 50, 7, None).unwrap();
        assert!(s.all_positive);
        let i = Matrix::<Rational>::identity(2);
        assert!(det_sign_certificate(&w, &Assignment::new(i.clone(), vec![i])).unwrap().sign == 1);
    }
}
