use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{self, Irreducibility, Poly};
use super::{rational, serde_rational, ExactFieldElem, FieldError, Rational};
use crate::linalg;

#[derive(Debug)]
struct FieldInner {
    minpoly: Poly,
    lo: Rational,
    hi: Rational,
}

/// A real number field ℚ(θ): θ is the unique root of a monic irreducible
/// polynomial inside a rational isolating interval.
#[derive(Debug, Clone)]
pub struct RealAlgField {
    inner: Arc<FieldInner>,
}

impl RealAlgField {
    /// `minpoly` lists coefficients in ascending degree and must be monic.
    pub fn new(minpoly: Vec<Rational>, lo: Rational, hi: Rational) -> Result<Self, FieldError> {
        let mut minpoly = minpoly;
        poly::trim(&mut minpoly);
        match poly::degree(&minpoly) {
            Some(d) if d >= 1 && minpoly[d].is_one() => {}
            _ => return Err(FieldError::NotMonic),
        }
        match poly::irreducibility(&minpoly) {
            Irreducibility::Irreducible => {}
            Irreducibility::Reducible => return Err(FieldError::Reducible),
            Irreducibility::Undecided => return Err(FieldError::IrreducibilityUndecided),
        }
        let bad = |roots| FieldError::BadInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
            roots,
        };
        if lo >= hi {
            return Err(bad(0));
        }
        if poly::eval(&minpoly, &lo).is_zero() || poly::eval(&minpoly, &hi).is_zero() {
            return Err(bad(usize::MAX));
        }
        let roots = poly::count_roots(&minpoly, &lo, &hi);
        if roots != 1 {
            return Err(bad(roots));
        }
        Ok(RealAlgField {
            inner: Arc::new(FieldInner { minpoly, lo, hi }),
        })
    }

    /// ℚ itself, presented as ℚ(θ) with θ = 0.
    pub fn rationals() -> Self {
        RealAlgField::new(
            vec![Rational::zero(), Rational::one()],
            rational(-1),
            rational(1),
        )
        .expect("t is irreducible")
    }

    /// ℚ(√n) together with the element √n, for a positive squarefree `n`.
    /// For `n = 1` this is ℚ with √1 = 1.
    pub fn sqrt_of(n: u64) -> Result<(Self, RealAlgElem), FieldError> {
        if n == 1 {
            let f = RealAlgField::rationals();
            let one = f.one();
            return Ok((f, one));
        }
        let f = RealAlgField::new(
            vec![-rational(n as i64), Rational::zero(), Rational::one()],
            rational(1),
            rational(n as i64),
        )?;
        let theta = f.theta();
        Ok((f, theta))
    }

    pub fn degree(&self) -> usize {
        self.inner.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[Rational] {
        &self.inner.minpoly
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.inner.lo, &self.inner.hi)
    }

    pub fn zero(&self) -> RealAlgElem {
        RealAlgElem {
            field: self.clone(),
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> RealAlgElem {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, x: Rational) -> RealAlgElem {
        let mut e = self.zero();
        e.coeffs[0] = x;
        e
    }

    /// The generator θ (for a degree-one field, θ is the rational root).
    pub fn theta(&self) -> RealAlgElem {
        self.from_poly(vec![Rational::zero(), Rational::one()])
    }

    /// Reduces an arbitrary polynomial in θ modulo the minimal polynomial.
    pub fn from_poly(&self, p: Vec<Rational>) -> RealAlgElem {
        let (_, r) = poly::div_rem(&p, &self.inner.minpoly);
        let mut coeffs = r;
        coeffs.resize(self.degree(), Rational::zero());
        RealAlgElem {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn elem(&self, coeffs: Vec<Rational>) -> Result<RealAlgElem, FieldError> {
        if coeffs.len() != self.degree() {
            return Err(FieldError::BadLength {
                expected: self.degree(),
                found: coeffs.len(),
            });
        }
        Ok(RealAlgElem {
            field: self.clone(),
            coeffs,
        })
    }
}

impl PartialEq for RealAlgField {
    /// Same minimal polynomial and the two intervals isolate the same root.
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return true;
        }
        if self.inner.minpoly != other.inner.minpoly {
            return false;
        }
        let lo = (&self.inner.lo).max(&other.inner.lo);
        let hi = (&self.inner.hi).min(&other.inner.hi);
        lo < hi && poly::count_roots(&self.inner.minpoly, lo, hi) == 1
    }
}

impl Eq for RealAlgField {}

impl Hash for RealAlgField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.minpoly.hash(state);
    }
}

impl fmt::Display for RealAlgField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(θ), minpoly [")?;
        for (i, c) in self.inner.minpoly.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "], θ in [{}, {}]", self.inner.lo, self.inner.hi)
    }
}

/// Σ cᵢθⁱ with `deg(minpoly)` rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RealAlgElem {
    field: RealAlgField,
    coeffs: Vec<Rational>,
}

impl RealAlgElem {
    pub fn field(&self) -> &RealAlgField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &Rational) -> RealAlgElem {
        RealAlgElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn check(&self, other: &RealAlgElem) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn inv(&self) -> Result<RealAlgElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let (g, s) = poly::gcd_inverse(&self.coeffs, self.field.minpoly());
        // g is 1 since the minimal polynomial is irreducible and self ≠ 0
        debug_assert_eq!(poly::degree(&g), Some(0));
        Ok(self.field.from_poly(s))
    }

    /// Matrix of multiplication by `self` in the power basis (columns are images of θʲ).
    fn mult_matrix(&self) -> Vec<Vec<Rational>> {
        let e = self.field.degree();
        let mut cols = Vec::with_capacity(e);
        let mut basis = self.field.one();
        for _ in 0..e {
            cols.push((self * &basis).coeffs);
            basis = &basis * &self.field.theta();
        }
        linalg::transpose(&cols)
    }

    /// Exact sign of the real number Σ cᵢθⁱ.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let f = self.field.minpoly();
        let sgn = |x: &Rational| -> i8 {
            if x.is_positive() {
                1
            } else if x.is_negative() {
                -1
            } else {
                0
            }
        };
        if self.field.degree() == 1 {
            return sgn(&self.coeffs[0]);
        }
        let (mut lo, mut hi) = (self.field.inner.lo.clone(), self.field.inner.hi.clone());
        let s_lo = sgn(&poly::eval(f, &lo));
        loop {
            let (min, max) = interval_horner(&self.coeffs, &lo, &hi);
            if min.is_positive() {
                return 1;
            }
            if max.is_negative() {
                return -1;
            }
            let mid = (&lo + &hi) / rational(2);
            let fm = poly::eval(f, &mid);
            if fm.is_zero() {
                // unreachable for an irreducible minimal polynomial of degree ≥ 2
                return sgn(&poly::eval(&self.coeffs, &mid));
            }
            if sgn(&fm) == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
}

/// Range of the polynomial `p` over [lo, hi] by interval Horner evaluation.
fn interval_horner(p: &[Rational], lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mut acc = (Rational::zero(), Rational::zero());
    for c in p.iter().rev() {
        let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let min = prods.iter().min().unwrap().clone();
        let max = prods.iter().max().unwrap().clone();
        acc = (min + c, max + c);
    }
    acc
}

impl ExactFieldElem for RealAlgElem {
    fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(RealAlgElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(RealAlgElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.from_poly(poly::mul(&self.coeffs, &other.coeffs)))
    }

    fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn norm(&self) -> Rational {
        linalg::det(&self.mult_matrix())
    }
}

impl Add for &RealAlgElem {
    type Output = RealAlgElem;
    fn add(self, rhs: &RealAlgElem) -> RealAlgElem {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &RealAlgElem {
    type Output = RealAlgElem;
    fn sub(self, rhs: &RealAlgElem) -> RealAlgElem {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &RealAlgElem {
    type Output = RealAlgElem;
    fn mul(self, rhs: &RealAlgElem) -> RealAlgElem {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &RealAlgElem {
    type Output = RealAlgElem;
    fn neg(self) -> RealAlgElem {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for RealAlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*θ")?,
                _ => write!(f, "{c}*θ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RealAlgElemRepr {
    #[serde(with = "serde_rational::vec")]
    minpoly: Vec<Rational>,
    #[serde(with = "serde_rational::vec")]
    interval: Vec<Rational>,
    #[serde(with = "serde_rational::vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for RealAlgElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RealAlgElemRepr {
            minpoly: self.field.inner.minpoly.clone(),
            interval: vec![self.field.inner.lo.clone(), self.field.inner.hi.clone()],
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealAlgElem {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RealAlgElemRepr::deserialize(de)?;
        if raw.interval.len() != 2 {
            return Err(D::Error::custom("interval must have exactly two endpoints"));
        }
        let mut it = raw.interval.into_iter();
        let (lo, hi) = (it.next().unwrap(), it.next().unwrap());
        let field = RealAlgField::new(raw.minpoly, lo, hi).map_err(D::Error::custom)?;
        field.elem(raw.coeffs).map_err(D::Error::custom)
    }
}

/// A linear system `coeffs · x = rhs` with coefficients in one real field,
/// whose unknowns are constrained to be rational.
#[derive(Debug, Clone)]
pub struct AlgLinearSystem {
    pub coeffs: Vec<Vec<RealAlgElem>>,
    pub rhs: Vec<RealAlgElem>,
}

impl AlgLinearSystem {
    pub fn new(coeffs: Vec<Vec<RealAlgElem>>, rhs: Vec<RealAlgElem>) -> Result<Self, FieldError> {
        if coeffs.len() != rhs.len() {
            return Err(FieldError::MalformedSystem);
        }
        if let Some(first) = coeffs.first() {
            if coeffs.iter().any(|r| r.len() != first.len()) {
                return Err(FieldError::MalformedSystem);
            }
        }
        Ok(AlgLinearSystem { coeffs, rhs })
    }

    pub fn homogeneous(
        field: &RealAlgField,
        coeffs: Vec<Vec<RealAlgElem>>,
    ) -> Result<Self, FieldError> {
        let rhs = vec![field.zero(); coeffs.len()];
        AlgLinearSystem::new(coeffs, rhs)
    }

    pub fn num_unknowns(&self) -> usize {
        self.coeffs.first().map_or(0, |r| r.len())
    }
}

/// A linear system over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSystem {
    pub coeffs: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl RationalSystem {
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        self.coeffs.iter().zip(&self.rhs).all(|(row, b)| {
            let lhs: Rational = row.iter().zip(x).map(|(a, v)| a * v).sum();
            &lhs == b
        })
    }

    /// Basis of the solution space of the homogeneous part.
    pub fn homogeneous_solutions(&self, num_unknowns: usize) -> Vec<Vec<Rational>> {
        if self.coeffs.is_empty() {
            return linalg::identity(num_unknowns);
        }
        linalg::nullspace(&self.coeffs)
    }
}

/// One ℚ-system per power θᵏ, k = 0..e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarizedSystem {
    pub blocks: Vec<RationalSystem>,
}

impl ScalarizedSystem {
    /// All blocks stacked, with identically trivial rows `0 = 0` removed.
    pub fn equations(&self) -> RationalSystem {
        let mut coeffs = Vec::new();
        let mut rhs = Vec::new();
        for block in &self.blocks {
            for (row, b) in block.coeffs.iter().zip(&block.rhs) {
                if row.iter().all(|c| c.is_zero()) && b.is_zero() {
                    continue;
                }
                coeffs.push(row.clone());
                rhs.push(b.clone());
            }
        }
        RationalSystem { coeffs, rhs }
    }
}

/// Expands every equation in the power basis 1, θ, …, θ^{e−1}. Because the
/// unknowns are rational, an equation holds iff each θ-component holds.
pub fn scalarize(system: &AlgLinearSystem) -> Result<ScalarizedSystem, FieldError> {
    let field = match system.rhs.first() {
        Some(x) => x.field().clone(),
        None => return Ok(ScalarizedSystem { blocks: Vec::new() }),
    };
    for x in system.coeffs.iter().flatten().chain(&system.rhs) {
        if x.field() != &field {
            return Err(FieldError::FieldMismatch(
                field.to_string(),
                x.field().to_string(),
            ));
        }
    }
    let blocks = (0..field.degree())
        .map(|k| RationalSystem {
            coeffs: system
                .coeffs
                .iter()
                .map(|row| row.iter().map(|x| x.coeffs[k].clone()).collect())
                .collect(),
            rhs: system.rhs.iter().map(|x| x.coeffs[k].clone()).collect(),
        })
        .collect();
    Ok(ScalarizedSystem { blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ratio;
    use proptest::prelude::*;

    fn sqrt2() -> (RealAlgField, RealAlgElem) {
        RealAlgField::sqrt_of(2).unwrap()
    }

    #[test]
    fn field_validation() {
        let p = |v: &[i64]| v.iter().map(|&c| rational(c)).collect::<Vec<_>>();
        assert!(RealAlgField::new(p(&[-2, 0, 1]), rational(1), rational(2)).is_ok());
        assert_eq!(
            RealAlgField::new(p(&[-4, 0, 1]), rational(1), rational(3)).unwrap_err(),
            FieldError::Reducible
        );
        assert!(matches!(
            RealAlgField::new(p(&[-2, 0, 1]), rational(-2), rational(2)),
            Err(FieldError::BadInterval { roots: 2, .. })
        ));
        assert_eq!(
            RealAlgField::new(p(&[-2, 0, 2]), rational(1), rational(2)).unwrap_err(),
            FieldError::NotMonic
        );
        // same root, different interval
        let a = RealAlgField::new(p(&[-2, 0, 1]), rational(1), rational(2)).unwrap();
        let b = RealAlgField::new(p(&[-2, 0, 1]), ratio(13, 10), ratio(3, 2)).unwrap();
        let c = RealAlgField::new(p(&[-2, 0, 1]), rational(-2), rational(-1)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sign_examples() {
        let (f, t) = sqrt2();
        assert_eq!(f.zero().sign(), 0);
        assert_eq!(t.sign(), 1);
        let x = &f.from_rational(rational(3)) - &t.scale(&rational(2));
        assert_eq!(x.sign(), 1);
        // 1.41 < √2 < 1.42
        assert_eq!((&t - &f.from_rational(ratio(141, 100))).sign(), 1);
        assert_eq!((&t - &f.from_rational(ratio(142, 100))).sign(), -1);
        // negative root of t^2 - 2
        let g = RealAlgField::new(
            vec![rational(-2), rational(0), rational(1)],
            rational(-2),
            rational(-1),
        )
        .unwrap();
        assert_eq!(g.theta().sign(), -1);
    }

    #[test]
    fn arithmetic_in_qsqrt2() {
        let (f, t) = sqrt2();
        assert_eq!(&t * &t, f.from_rational(rational(2)));
        let one_plus = &f.one() + &t;
        assert_eq!(&one_plus * &one_plus.inv().unwrap(), f.one());
        assert_eq!(one_plus.norm(), rational(-1));
        assert_eq!(t.conj(), t);
    }

    #[test]
    fn scalarize_examples() {
        // e = 1: unchanged
        let q = RealAlgField::rationals();
        let sys = AlgLinearSystem::homogeneous(
            &q,
            vec![vec![
                q.from_rational(rational(2)),
                q.from_rational(rational(-1)),
            ]],
        )
        .unwrap();
        let out = scalarize(&sys).unwrap();
        assert_eq!(out.blocks.len(), 1);
        assert_eq!(out.blocks[0].coeffs, vec![vec![rational(2), rational(-1)]]);

        // √2 x = 0  ->  x = 0
        let (f, t) = sqrt2();
        let sys = AlgLinearSystem::homogeneous(&f, vec![vec![t.clone()]]).unwrap();
        let eqs = scalarize(&sys).unwrap().equations();
        assert_eq!(eqs.coeffs, vec![vec![rational(1)]]);

        // (1+√2) x + √2 y = 0  ->  {x = 0, x + y = 0}
        let sys = AlgLinearSystem::homogeneous(&f, vec![vec![&f.one() + &t, t.clone()]]).unwrap();
        let eqs = scalarize(&sys).unwrap().equations();
        assert_eq!(
            eqs.coeffs,
            vec![
                vec![rational(1), rational(0)],
                vec![rational(1), rational(1)]
            ]
        );
    }

    #[test]
    fn scalarize_rejects_mixed_fields() {
        let (f, t) = sqrt2();
        let (g, s) = RealAlgField::sqrt_of(3).unwrap();
        let sys = AlgLinearSystem::new(vec![vec![t, s]], vec![f.zero()]).unwrap();
        assert!(matches!(
            scalarize(&sys),
            Err(FieldError::FieldMismatch(..))
        ));
        let _ = g;
    }

    #[test]
    fn serde_shape() {
        let (_, t) = sqrt2();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"minpoly":["-2","0","1"],"interval":["1","2"],"coeffs":["0","1"]}"#
        );
        let back: RealAlgElem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-9i64..10, 1i64..4).prop_map(|(n, d)| ratio(n, d))
    }

    fn elem(f: RealAlgField) -> impl Strategy<Value = RealAlgElem> {
        let e = f.degree();
        prop::collection::vec(small(), e).prop_map(move |c| f.elem(c).unwrap())
    }

    fn cube_root_two() -> RealAlgField {
        RealAlgField::new(
            vec![rational(-2), rational(0), rational(0), rational(1)],
            rational(1),
            rational(2),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn field_axioms_cubic(x in elem(cube_root_two()), y in elem(cube_root_two()), z in elem(cube_root_two())) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), x.field().one());
                prop_assert!(x.sign() != 0);
            }
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        // sign agrees with a crude rational enclosure of the cube root of 2
        #[test]
        fn sign_matches_enclosure(a in -50i64..50, b in -50i64..50) {
            let f = cube_root_two();
            let x = f.elem(vec![rational(a), rational(b), rational(0)]).unwrap();
            // 1.2599 < 2^(1/3) < 1.26
            let lo = rational(a) + rational(b) * if b >= 0 { ratio(12599, 10000) } else { ratio(126, 100) };
            let hi = rational(a) + rational(b) * if b >= 0 { ratio(126, 100) } else { ratio(12599, 10000) };
            let s = x.sign();
            if lo.is_positive() { prop_assert_eq!(s, 1); }
            if hi.is_negative() { prop_assert_eq!(s, -1); }
            if a == 0 && b == 0 { prop_assert_eq!(s, 0); }
        }

        // every rational solution of the scalarized system solves the original and vice versa
        #[test]
        fn scalarize_round_trip(
            rows in prop::collection::vec(prop::collection::vec((small(), small()), 3), 1..3),
            x in prop::collection::vec(small(), 3),
        ) {
            let (f, _) = sqrt2();
            let coeffs: Vec<Vec<RealAlgElem>> = rows.iter()
                .map(|r| r.iter().map(|(a, b)| f.elem(vec![a.clone(), b.clone()]).unwrap()).collect())
                .collect();
            let sys = AlgLinearSystem::homogeneous(&f, coeffs.clone()).unwrap();
            let eqs = scalarize(&sys).unwrap().equations();
            let original_holds = coeffs.iter().all(|row| {
                row.iter().zip(&x).fold(f.zero(), |acc, (c, v)| &acc + &c.scale(v)).is_zero()
            });
            prop_assert_eq!(eqs.is_satisfied_by(&x), original_holds);
            for sol in eqs.homogeneous_solutions(3) {
                for row in &coeffs {
                    let s = row.iter().zip(&sol).fold(f.zero(), |acc, (c, v)| &acc + &c.scale(v));
                    prop_assert!(s.is_zero());
                }
            }
        }
    }
}
