use proptest::prelude::*;
use symword::calculus::{directional_derivative, jacobian_fd, jacobian_full, reduced_jacobian};
use symword::eval::{bmv_coefficients, evaluate, hmk_sum, trace_word, Assignment};
use symword::matrix::exact::is_pd_exact;
use symword::matrix::random::{random_pd_rational_with, random_pd_with, random_rational_with, random_symmetric_rational_with, rng};
use symword::matrix::sym::{build_m, build_n, kron, mu_lower, vec as vec_of};
use symword::matrix::{rat, Rational};
use symword::word::decompose_totally_symmetric;
use symword::{Letter, Matrix, Word};

fn letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop_oneof![Just(Letter::X), Just(Letter::B(1)), Just(Letter::B(2))], 0..10)
}

fn word() -> impl Strategy<Value = Word> {
    letters().prop_map(|l| Word::from_letters(2, &l).unwrap())
}

/// Interlaced palindromes `w X^e reverse(w)` built from random halves.
fn symmetric_word() -> impl Strategy<Value = Word> {
    (letters(), 1u32..4).prop_map(|(half, e)| {
        let left = Word::from_letters(2, &half).unwrap();
        let mid = Word::from_factors(2, [(Letter::X, e)]).unwrap();
        left.concat(&mid).concat(&left.reverse())
    })
}

fn rational_assignment(seed: u64, n: usize) -> Assignment<Rational> {
    let mut r = rng(seed);
    Assignment::new(
        random_symmetric_rational_with(n, 6, 5, &mut r),
        vec![random_rational_with(n, n, 6, 5, &mut r), random_rational_with(n, n, 6, 5, &mut r)],
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parse_display_round_trip(w in word()) {
        if !w.is_identity() {
            prop_assert_eq!(Word::parse(&w.to_string()).unwrap().with_alphabet(2).unwrap(), w);
        }
    }

    #[test]
    fn evaluation_is_a_monoid_homomorphism(u in word(), v in word(), seed in any::<u64>(), n in 1usize..4) {
        let a = rational_assignment(seed, n);
        let uv = evaluate(&u.concat(&v), &a).unwrap();
        prop_assert_eq!(uv, &evaluate(&u, &a).unwrap() * &evaluate(&v, &a).unwrap());
        prop_assert_eq!(evaluate(&Word::identity(2), &a).unwrap(), Matrix::identity(n));
    }

    #[test]
    fn evaluation_is_homogeneous_in_x(w in word(), seed in any::<u64>(), n in 1usize..4, c in -4i64..5) {
        let a = rational_assignment(seed, n);
        let scaled = a.with_x(a.x.as_ref().unwrap().scale(&rat(c)));
        let lhs = evaluate(&w, &scaled).unwrap();
        let rhs = evaluate(&w, &a).unwrap().scale(&num_pow(c, w.degree()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reversal_transposes_for_symmetric_letters(w in word(), seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let a = Assignment::new(
            random_symmetric_rational_with(n, 6, 5, &mut r),
            vec![random_symmetric_rational_with(n, 6, 5, &mut r), random_symmetric_rational_with(n, 6, 5, &mut r)],
        );
        prop_assert_eq!(evaluate(&w.reverse(), &a).unwrap(), evaluate(&w, &a).unwrap().transpose());
    }

    #[test]
    fn symmetric_words_map_pd_to_pd(w in symmetric_word(), seed in any::<u64>(), n in 1usize..4) {
        prop_assert!(w.is_symmetric());
        let mut r = rng(seed);
        let a = Assignment::new(
            random_pd_rational_with(n, 20.0, &mut r),
            vec![random_pd_rational_with(n, 20.0, &mut r), random_pd_rational_with(n, 20.0, &mut r)],
        );
        let v = evaluate(&w, &a).unwrap();
        prop_assert!(v.is_symmetric());
        prop_assert!(is_pd_exact(&v));
    }

    #[test]
    fn vec_kron_identity(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let a = random_rational_with(n, n, 9, 7, &mut r);
        let x = random_rational_with(n, n, 9, 7, &mut r);
        let b = random_rational_with(n, n, 9, 7, &mut r);
        prop_assert_eq!(vec_of(&(&(&a * &x) * &b)), kron(&b.transpose(), &a).mul_vec(&vec_of(&x)));
    }

    #[test]
    fn restriction_is_consistent(w in word(), seed in any::<u64>(), n in 1usize..4) {
        prop_assume!(w.degree() > 0);
        let a = rational_assignment(seed, n);
        let full = jacobian_full(&w, &a).unwrap();
        let reduced = reduced_jacobian(&w, &a).unwrap();
        let m: Matrix<Rational> = build_m(n);
        let nn: Matrix<Rational> = build_n(n);
        prop_assert_eq!(&reduced, &(&(&m * &full) * &nn));
        let mut r = rng(seed ^ 1);
        let h = random_symmetric_rational_with(n, 6, 5, &mut r);
        let d = directional_derivative(&w, &a, &h).unwrap();
        prop_assert_eq!(reduced.mul_vec(&mu_lower(&h).coords), mu_lower(&d).coords);
        prop_assert_eq!(full.mul_vec(&vec_of(&h)), vec_of(&d));
    }

    #[test]
    fn jacobian_matches_finite_differences(w in word(), seed in any::<u64>(), n in 1usize..4) {
        prop_assume!(w.degree() > 0);
        let mut r = rng(seed);
        let a = Assignment::new(random_pd_with(n, 4.0, &mut r), vec![random_pd_with(n, 4.0, &mut r), random_pd_with(n, 4.0, &mut r)]);
        let exact = reduced_jacobian(&w, &a).unwrap();
        let fd = jacobian_fd(&w, &a, 1e-5).unwrap();
        let rel = (&exact - &fd).max_abs() / exact.max_abs();
        prop_assert!(rel <= 1e-6, "relative error {rel:e}");
    }

    #[test]
    fn decomposition_replays_to_the_word(w in symmetric_word()) {
        if let Some(plan) = decompose_totally_symmetric(&w) {
            prop_assert_eq!(plan.replay(2), w);
        }
    }

    #[test]
    fn bmv_coefficients_are_traces_of_sums(seed in any::<u64>(), n in 1usize..4, m in 1usize..7) {
        let mut r = rng(seed);
        let a = random_pd_rational_with(n, 20.0, &mut r);
        let b = random_pd_rational_with(n, 20.0, &mut r);
        let c = bmv_coefficients(&a, &b, m).unwrap();
        prop_assert_eq!(c.len(), m + 1);
        for (k, ck) in c.iter().enumerate() {
            prop_assert_eq!(ck, &hmk_sum(&a, &b, m, k).unwrap().trace());
            prop_assert!(ck > &rat(0));
        }
        // the coefficients of Tr((A + tB)^m) sum to Tr((A + B)^m)
        let total: Rational = c.iter().cloned().sum();
        let w = Word::from_factors(1, [(Letter::X, m as u32)]).unwrap();
        prop_assert_eq!(total, trace_word(&w, &Assignment::new(&a + &b, vec![])).unwrap());
    }
}

fn num_pow(c: i64, e: usize) -> Rational {
    (0..e).fold(rat(1), |acc, _| acc * rat(c))
}

#[test]
fn bmv_sample_at_degree_six() {
    let mut r = rng(6);
    for _ in 0..50 {
        let a = random_pd_rational_with(3, 50.0, &mut r);
        let b = random_pd_rational_with(3, 50.0, &mut r);
        assert!(bmv_coefficients(&a, &b, 6).unwrap().iter().all(|c| c > &rat(0)));
    }
}
