//! Exact arithmetic over ℚ, imaginary quadratic fields ℚ(√−d) and real
//! algebraic fields ℚ(θ).
//!
//! Nothing in this module touches floating point. Signs of real algebraic
//! numbers are decided by bisecting an isolating interval with rational
//! midpoints.

mod poly;
mod quad;
mod realalg;
pub mod serde_rational;

pub use quad::{QuadElem, QuadField};
pub use realalg::{
    scalarize, AlgLinearSystem, RationalSystem, RealAlgElem, RealAlgField, ScalarizedSystem,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("d = {0} is not a positive squarefree integer")]
    NotSquarefree(i64),
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("minimal polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("minimal polynomial is reducible over Q")]
    Reducible,
    #[error("could not decide irreducibility of the minimal polynomial within budget")]
    IrreducibilityUndecided,
    #[error("interval [{lo}, {hi}] contains {roots} roots of the minimal polynomial, expected exactly 1")]
    BadInterval {
        lo: String,
        hi: String,
        roots: usize,
    },
    #[error("coefficient vector has length {found}, field degree is {expected}")]
    BadLength { expected: usize, found: usize },
    #[error("linear system is empty or has ragged rows")]
    MalformedSystem,
}

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`. A zero denominator is an error.
pub fn parse_rational(s: &str) -> Result<Rational, FieldError> {
    let bad = || FieldError::BadRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Operations accepted by [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Conj,
    Norm,
}

/// Result of [`field_arith`]: a field element, or a rational for `Norm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldValue<T> {
    Elem(T),
    Rational(Rational),
}

/// Common surface of the exact field element types.
pub trait ExactFieldElem: Sized + Clone {
    fn try_add(&self, other: &Self) -> Result<Self, FieldError>;
    fn try_sub(&self, other: &Self) -> Result<Self, FieldError>;
    fn try_mul(&self, other: &Self) -> Result<Self, FieldError>;
    fn try_div(&self, other: &Self) -> Result<Self, FieldError>;
    /// Nontrivial automorphism for ℚ(√−d); identity for real fields.
    fn conj(&self) -> Self;
    /// Field norm down to ℚ.
    fn norm(&self) -> Rational;
}

/// Dispatches one exact field operation. Unary operations ignore `y`.
pub fn field_arith<T: ExactFieldElem>(
    x: &T,
    y: &T,
    op: FieldOp,
) -> Result<FieldValue<T>, FieldError> {
    Ok(match op {
        FieldOp::Add => FieldValue::Elem(x.try_add(y)?),
        FieldOp::Sub => FieldValue::Elem(x.try_sub(y)?),
        FieldOp::Mul => FieldValue::Elem(x.try_mul(y)?),
        FieldOp::Div => FieldValue::Elem(x.try_div(y)?),
        FieldOp::Conj => FieldValue::Elem(x.conj()),
        FieldOp::Norm => FieldValue::Rational(x.norm()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rational(-4));
        assert_eq!(parse_rational("2/-4").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(6, 3)), "2");
        assert_eq!(format_rational(&ratio(-1, 2)), "-1/2");
    }
}
