use std::path::Path;

use symword::json::{matrix_to_json, parse_matrix};
use symword::matrix::exact::leading_principal_minors;
use symword::matrix::rat;
use symword::witness::{a1, b1, degenerate_example_coefficients};
use symword::{AnyMatrix, Matrix, Rational};

fn load(name: &str) -> Matrix<Rational> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    match parse_matrix(&text).unwrap() {
        AnyMatrix::Rational(m) => m,
        AnyMatrix::Float(_) => panic!("{name} is not rational"),
    }
}

#[test]
fn fixture_files_match_the_built_in_constants() {
    assert_eq!(load("a1.json"), a1());
    assert_eq!(load("b1.json"), b1());
    let (c1, c2) = degenerate_example_coefficients();
    assert_eq!(load("degenerate_b1.json"), c1);
    assert_eq!(load("degenerate_b2.json"), c2);
}

#[test]
fn fixtures_are_positive_definite_integer_matrices() {
    for name in ["a1.json", "b1.json", "degenerate_b1.json", "degenerate_b2.json"] {
        let m = load(name);
        assert!(m.data().iter().all(|e| e.is_integer()), "{name}");
        assert!(leading_principal_minors(&m).iter().all(|d| d.is_integer() && d > &rat(0)), "{name}");
    }
}

#[test]
fn fixtures_are_written_in_the_canonical_encoding() {
    for (name, m) in [("a1.json", a1()), ("b1.json", b1())] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
        let on_disk: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(on_disk, matrix_to_json(&m));
    }
}
