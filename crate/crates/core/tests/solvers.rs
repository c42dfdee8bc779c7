use proptest::prelude::*;
use serde_json::Value;
use symword::json::{matrix_from_json, matrix_to_json, solve_report_from_json, solve_report_json};
use symword::matrix::float::kernel_basis;
use symword::matrix::random::{random_orthogonal, random_pd_with, rng};
use symword::solve::{
    closed_form_solve, homotopy_solve, multi_start_newton, newton_solve, sign_sum_report, solve, Equation, Method,
    SolveOptions,
};
use symword::{AnyMatrix, Matrix, Tolerances, Word};

fn spectral(a: &Matrix<f64>) -> f64 {
    a.symmetrized().norm_spectral()
}

fn equation(word: &str, seed: u64, n: usize) -> Equation {
    let mut r = rng(seed);
    let b = vec![random_pd_with(n, 10.0, &mut r), random_pd_with(n, 10.0, &mut r)];
    let p = random_pd_with(n, 10.0, &mut r);
    Equation::new(Word::parse(word).unwrap().with_alphabet(2).unwrap(), b, p, &Tolerances::default()).unwrap()
}

const TOTALLY_SYMMETRIC: [&str; 5] = ["X B1 X", "X B1 X B1 X", "B2 X^2 B2", "X B1 X^2 B1 X", "B1 X B2 X B2 X B1"];

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn closed_form_agrees_with_iterative_solvers(idx in 0usize..5, seed in any::<u64>(), n in 1usize..4) {
        let eq = equation(TOTALLY_SYMMETRIC[idx], seed, n);
        let opts = SolveOptions::default();
        let closed = closed_form_solve(&eq, &opts).unwrap().expect("totally symmetric");
        prop_assert!(closed.residual <= 1e-10 * spectral(&eq.p).max(1.0));
        let newton = newton_solve(&eq, &eq.power_start(&opts.tolerances).unwrap(), &opts).unwrap();
        let homotopy = homotopy_solve(&eq, &opts).unwrap();
        prop_assert!(spectral(&(&newton.x - &closed.x)) <= 1e-8);
        prop_assert!(spectral(&(&homotopy.x - &closed.x)) <= 1e-8);
        prop_assert_eq!(closed.jacobian_sign, 1);
    }

    #[test]
    fn solutions_scale_with_the_right_hand_side(seed in any::<u64>(), c in 0.25f64..4.0) {
        // S(cX) = c^s S(X), so scaling P by c^s scales the solution by c
        let eq = equation("X B1 X^3 B1 X", seed, 2);
        let scaled = Equation::new(eq.word.clone(), eq.b.clone(), eq.p.scale(&c.powi(5)), &Tolerances::default()).unwrap();
        let opts = SolveOptions::default();
        let x = solve(&eq, Method::Homotopy, &opts).unwrap().x;
        let y = solve(&scaled, Method::Homotopy, &opts).unwrap().x;
        prop_assert!(spectral(&(&y - &x.scale(&c))) <= 1e-8 * c.max(1.0));
    }

    #[test]
    fn singular_right_hand_side_keeps_its_kernel(seed in any::<u64>(), rank in 1usize..3) {
        let n = 3;
        let mut r = rng(seed);
        let q = random_orthogonal(n, &mut r);
        let lambda: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 + i as f64 } else { 0.0 }).collect();
        let p = (&(&q * &Matrix::diagonal(&lambda)) * &q.transpose()).symmetrized();
        let b = vec![random_pd_with(n, 10.0, &mut r)];
        let eq = Equation::new(Word::parse("X B1 X^2 B1 X").unwrap(), b, p, &Tolerances::default()).unwrap();
        let report = solve(&eq, Method::Auto, &SolveOptions::default()).unwrap();
        prop_assert_eq!(report.reduced_rank, Some(rank));
        prop_assert!(report.residual <= 1e-8);
        let tol = Tolerances { rank_tol: 1e-8, ..Tolerances::default() };
        prop_assert_eq!(kernel_basis(&report.x, &tol).unwrap().len(), n - rank);
        for col in rank..n {
            let v: Vec<f64> = (0..n).map(|i| q[(i, col)]).collect();
            prop_assert!(report.x.mul_vec(&v).iter().all(|e| e.abs() <= 1e-8));
        }
    }

    #[test]
    fn rational_matrices_round_trip(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let m = symword::matrix::random::random_rational_with(n, n, 1_000_000, 999_983, &mut r);
        let text = matrix_to_json(&m).to_string();
        let back = matrix_from_json(&serde_json::from_str::<Value>(&text).unwrap()).unwrap();
        prop_assert_eq!(back, AnyMatrix::Rational(m));
    }

    #[test]
    fn float_matrices_round_trip_bit_exact(seed in any::<u64>(), n in 1usize..5) {
        let m = random_pd_with(n, 1e6, &mut rng(seed));
        let text = matrix_to_json(&m).to_string();
        let back = matrix_from_json(&serde_json::from_str::<Value>(&text).unwrap()).unwrap();
        let AnyMatrix::Float(f) = back else { panic!("kind changed") };
        prop_assert!(f.data().iter().zip(m.data()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}

#[test]
fn solve_report_round_trips() {
    let eq = equation("X B1 X^3 B1 X", 3, 3);
    let report = solve(&eq, Method::Homotopy, &SolveOptions::default()).unwrap();
    assert!(report.path.is_some());
    let text = solve_report_json(&report).to_string();
    let back = solve_report_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back, report);
    assert_eq!(solve_report_json(&back).to_string(), text);
}

#[test]
fn multi_start_is_deterministic_and_sums_to_one() {
    let eq = equation("X B1 X^3 B1 X", 9, 2);
    let opts = SolveOptions::default();
    let a = multi_start_newton(&eq, 12, 42, &opts);
    let b = multi_start_newton(&eq, 12, 42, &opts);
    assert_eq!(a, b);
    assert!(!a.is_empty());
    let xs: Vec<Matrix<f64>> = a.iter().map(|r| r.x.clone()).collect();
    let sum = sign_sum_report(&eq, &xs, &opts).unwrap();
    assert_eq!(sum.sum, 1);
    assert!(!sum.incomplete);
}

#[test]
fn homotopy_handles_the_shortest_open_word() {
    for seed in 0..10 {
        let eq = equation("X B1 X^3 B1 X", seed, 3);
        let report = homotopy_solve(&eq, &SolveOptions::default()).unwrap();
        assert!(report.residual <= 1e-8);
        assert_eq!(report.jacobian_sign, 1);
        let path = report.path.unwrap();
        assert_eq!(path.first().unwrap().t, 0.0);
        assert_eq!(path.last().unwrap().t, 1.0);
    }
}
