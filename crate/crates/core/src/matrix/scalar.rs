use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Exact big-rational scalar.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Rational,
    Float,
}

impl ScalarKind {
    pub fn name(self) -> &'static str {
        match self {
            ScalarKind::Rational => "rational",
            ScalarKind::Float => "float",
        }
    }
}

/// Field elements the dense kernels are generic over.
///
/// Implemented for `f64` and for [`Rational`]. Exact arithmetic never falls
/// back to floating point; conversions are explicit.
pub trait Scalar: Num + Signed + Clone + Debug + PartialOrd + Send + Sync + 'static {
    const KIND: ScalarKind;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// `acc += a * b` without cloning where the type allows it.
    fn mul_add_to(acc: &mut Self, a: &Self, b: &Self);

    fn add_to(acc: &mut Self, a: &Self);

    /// Equality used by symmetry checks: exact for rationals, relative to
    /// `scale` for floats.
    fn near(a: &Self, b: &Self, scale: f64, rel_tol: f64) -> bool;
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    #[inline]
    fn mul_add_to(acc: &mut Self, a: &Self, b: &Self) {
        *acc += a * b;
    }

    #[inline]
    fn add_to(acc: &mut Self, a: &Self) {
        *acc += a;
    }

    fn near(a: &Self, b: &Self, scale: f64, rel_tol: f64) -> bool {
        (a - b).abs() <= rel_tol * scale.max(f64::MIN_POSITIVE)
    }
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn mul_add_to(acc: &mut Self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *acc += a * b;
    }

    fn add_to(acc: &mut Self, a: &Self) {
        if !a.is_zero() {
            *acc += a;
        }
    }

    fn near(a: &Self, b: &Self, _scale: f64, _rel_tol: f64) -> bool {
        a == b
    }
}

/// Exact rational from an integer.
pub fn rat(v: i64) -> Rational {
    Rational::from_i64(v)
}

/// Exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}
