use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{rational, serde_rational, ExactFieldElem, FieldError, Rational};

/// The imaginary quadratic field ℚ(√−d), d ≥ 1 squarefree.
///
/// √−d is embedded in ℂ with positive imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadField {
    d: u64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self, FieldError> {
        if d < 1 || !is_squarefree(d as u64) {
            return Err(FieldError::NotSquarefree(d));
        }
        Ok(QuadField { d: d as u64 })
    }

    pub fn gaussian() -> Self {
        QuadField { d: 1 }
    }

    pub fn eisenstein() -> Self {
        QuadField { d: 3 }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn d_rational(&self) -> Rational {
        rational(self.d as i64)
    }

    pub fn zero(&self) -> QuadElem {
        QuadElem::new(*self, Rational::zero(), Rational::zero())
    }

    pub fn one(&self) -> QuadElem {
        QuadElem::new(*self, Rational::one(), Rational::zero())
    }

    /// √−d.
    pub fn sqrt_neg_d(&self) -> QuadElem {
        QuadElem::new(*self, Rational::zero(), Rational::one())
    }

    pub fn from_rational(&self, a: Rational) -> QuadElem {
        QuadElem::new(*self, a, Rational::zero())
    }

    pub fn elem(&self, a: Rational, b: Rational) -> QuadElem {
        QuadElem::new(*self, a, b)
    }

    /// The element ω with O_K = ℤ + ℤω: (1 + √−d)/2 when −d ≡ 1 (mod 4), √−d otherwise.
    pub fn integral_generator(&self) -> QuadElem {
        if self.d % 4 == 3 {
            QuadElem::new(*self, super::ratio(1, 2), super::ratio(1, 2))
        } else {
            self.sqrt_neg_d()
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt(-{}))", self.d)
    }
}

impl<'de> Deserialize<'de> for QuadField {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            d: i64,
        }
        let raw = Raw::deserialize(de)?;
        QuadField::new(raw.d).map_err(serde::de::Error::custom)
    }
}

fn is_squarefree(n: u64) -> bool {
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// a + b√−d.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuadElem {
    #[serde(rename = "d", serialize_with = "ser_d")]
    field: QuadField,
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
}

fn ser_d<S: serde::Serializer>(f: &QuadField, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(f.d)
}

impl<'de> Deserialize<'de> for QuadElem {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            d: i64,
            #[serde(with = "serde_rational")]
            a: Rational,
            #[serde(with = "serde_rational")]
            b: Rational,
        }
        let raw = Raw::deserialize(de)?;
        let field = QuadField::new(raw.d).map_err(serde::de::Error::custom)?;
        Ok(QuadElem::new(field, raw.a, raw.b))
    }
}

impl QuadElem {
    pub fn new(field: QuadField, a: Rational, b: Rational) -> Self {
        QuadElem { field, a, b }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem::new(self.field, self.a.clone(), -&self.b)
    }

    /// a² + d·b², nonnegative and zero only at 0.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + self.field.d_rational() * &self.b * &self.b
    }

    pub fn scale(&self, k: &Rational) -> QuadElem {
        QuadElem::new(self.field, &self.a * k, &self.b * k)
    }

    /// Multiplication by √−d.
    pub fn times_sqrt(&self) -> QuadElem {
        QuadElem::new(
            self.field,
            -(self.field.d_rational() * &self.b),
            self.a.clone(),
        )
    }

    /// Coordinates (a, b) in the ℚ-basis (1, √−d).
    pub fn to_q2(&self) -> [Rational; 2] {
        [self.a.clone(), self.b.clone()]
    }

    fn check(&self, other: &QuadElem) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn inv(&self) -> Result<QuadElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.norm();
        Ok(self.conj().scale(&(Rational::one() / n)))
    }
}

impl ExactFieldElem for QuadElem {
    fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(QuadElem::new(
            self.field,
            &self.a + &other.a,
            &self.b + &other.b,
        ))
    }

    fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(QuadElem::new(
            self.field,
            &self.a - &other.a,
            &self.b - &other.b,
        ))
    }

    fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let d = self.field.d_rational();
        Ok(QuadElem::new(
            self.field,
            &self.a * &other.a - d * &self.b * &other.b,
            &self.a * &other.b + &self.b * &other.a,
        ))
    }

    fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    fn conj(&self) -> Self {
        QuadElem::conj(self)
    }

    fn norm(&self) -> Rational {
        QuadElem::norm(self)
    }
}

// Operator impls panic on mismatched fields; use the `try_*` methods on untrusted input.
impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(self.field, -&self.a, -&self.b)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{} {} {}*sqrt(-{})",
            self.a,
            sign,
            self.b.abs(),
            self.field.d
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{field_arith, ratio, FieldOp, FieldValue};
    use proptest::prelude::*;

    fn el(f: QuadField, a: i64, b: i64) -> QuadElem {
        f.elem(rational(a), rational(b))
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(QuadField::new(4).is_err());
        assert!(QuadField::new(12).is_err());
        assert!(QuadField::new(0).is_err());
        assert!(QuadField::new(-3).is_err());
        assert!(QuadField::new(15).is_ok());
    }

    #[test]
    fn norm_and_conj_examples() {
        let g = QuadField::gaussian();
        assert_eq!(el(g, 1, 1).norm(), rational(2));
        let x = el(g, 3, -7);
        assert_eq!(x.conj().conj(), x);
        let e = QuadField::eisenstein();
        let prod = field_arith(&el(e, 1, 1), &el(e, 1, -1), FieldOp::Mul).unwrap();
        assert_eq!(prod, FieldValue::Elem(el(e, 4, 0)));
        assert_eq!(
            field_arith(&el(g, 1, 1), &el(g, 0, 0), FieldOp::Norm).unwrap(),
            FieldValue::Rational(rational(2))
        );
    }

    #[test]
    fn errors() {
        let g = QuadField::gaussian();
        let e = QuadField::eisenstein();
        assert!(matches!(
            el(g, 1, 0).try_add(&el(e, 1, 0)),
            Err(FieldError::FieldMismatch(..))
        ));
        assert_eq!(
            el(g, 1, 0).try_div(&g.zero()),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn integral_generators() {
        assert_eq!(
            QuadField::gaussian().integral_generator(),
            el(QuadField::gaussian(), 0, 1)
        );
        let e = QuadField::eisenstein();
        assert_eq!(e.integral_generator(), e.elem(ratio(1, 2), ratio(1, 2)));
    }

    #[test]
    fn serde_shape() {
        let x = QuadField::new(2).unwrap().elem(ratio(1, 2), rational(-3));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"d":2,"a":"1/2","b":"-3"}"#);
        let back: QuadElem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<QuadElem>(r#"{"d":4,"a":"1","b":"0"}"#).is_err());
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..6).prop_map(|(n, d)| ratio(n, d))
    }

    fn field() -> impl Strategy<Value = QuadField> {
        prop::sample::select(vec![1i64, 2, 3, 5, 7, 11]).prop_map(|d| QuadField::new(d).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(f in field(), a in small(), b in small(), c in small(),
                        d in small(), e in small(), h in small()) {
            let x = f.elem(a, b);
            let y = f.elem(c, d);
            let z = f.elem(e, h);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), f.one());
            }
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            prop_assert_eq!(&x * &x.conj(), f.from_rational(x.norm()));
            prop_assert!(x.norm() >= Rational::zero());
        }
    }
}
