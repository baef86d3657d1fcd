//! Finitely generated subgroups of ℚᵐ in canonical Hermite form.
//!
//! A lattice is stored by its canonical basis: rows in echelon form with
//! positive pivots and every entry above a pivot reduced into `[0, pivot)`.
//! Rational generators are handled by scaling with the common denominator,
//! taking the integer Hermite form and scaling back; the canonical form does
//! not depend on the scale, so two lattices are equal iff their bases are.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{serde_rational, Rational};
use crate::linalg::{self, QMatrix, ZMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a sublattice")]
    NotSublattice,
}

/// Index of a sublattice: finite, or infinite when the ranks differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl Index {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Index::Finite(n) => Some(n),
            Index::Infinite => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZLattice {
    ambient_dim: usize,
    basis: QMatrix,
}

fn check_len(expected: usize, v: &[Rational]) -> Result<(), LatticeError> {
    if v.len() != expected {
        return Err(LatticeError::DimensionMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

fn scale_to_integers(rows: &[Vec<Rational>], scale: &BigInt) -> ZMatrix {
    let s = Rational::from_integer(scale.clone());
    rows.iter()
        .map(|r| r.iter().map(|x| (x * &s).to_integer()).collect())
        .collect()
}

fn unscale(rows: ZMatrix, scale: &BigInt) -> QMatrix {
    rows.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| Rational::new(x, scale.clone()))
                .collect()
        })
        .collect()
}

impl ZLattice {
    /// Canonical form of the ℤ-span of `gens` inside ℚᵐ.
    pub fn from_generators(m: usize, gens: &[Vec<Rational>]) -> Result<Self, LatticeError> {
        for g in gens {
            check_len(m, g)?;
        }
        let scale = linalg::common_denominator(gens.iter().flatten());
        let h = linalg::hermite_rows(&scale_to_integers(gens, &scale));
        Ok(ZLattice {
            ambient_dim: m,
            basis: unscale(h, &scale),
        })
    }

    pub fn zero(m: usize) -> Self {
        ZLattice {
            ambient_dim: m,
            basis: Vec::new(),
        }
    }

    /// The standard lattice ℤᵐ.
    pub fn standard(m: usize) -> Self {
        ZLattice {
            ambient_dim: m,
            basis: linalg::identity(m),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    pub fn scaled(&self, k: &Rational) -> ZLattice {
        let gens: QMatrix = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x * k).collect())
            .collect();
        ZLattice::from_generators(self.ambient_dim, &gens).expect("same dimension")
    }

    fn check_same(&self, other: &ZLattice) -> Result<(), LatticeError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LatticeError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// L1 + L2.
    pub fn sum(&self, other: &ZLattice) -> Result<ZLattice, LatticeError> {
        self.check_same(other)?;
        let gens: QMatrix = self.basis.iter().chain(&other.basis).cloned().collect();
        ZLattice::from_generators(self.ambient_dim, &gens)
    }

    /// Integer coordinates of `v` in the canonical basis, by back-substitution
    /// along the pivots; `None` when `v` is not in the lattice.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<BigInt>>, LatticeError> {
        check_len(self.ambient_dim, v)?;
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for row in &self.basis {
            let p = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("basis rows are nonzero");
            let c = &rest[p] / &row[p];
            if !c.is_integer() {
                return Ok(None);
            }
            if !c.is_zero() {
                for (x, b) in rest.iter_mut().zip(row) {
                    *x -= &c * b;
                }
            }
            coords.push(c.to_integer());
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(coords))
    }

    pub fn member(&self, v: &[Rational]) -> Result<bool, LatticeError> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_sublattice_of(&self, other: &ZLattice) -> Result<bool, LatticeError> {
        self.check_same(other)?;
        for b in &self.basis {
            if !other.member(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// L1 ∩ L2 through the integer left kernel of the stacked bases.
    ///
    /// (x, y) with x·B1 = y·B2 ranges over the left kernel of [B1; −B2]; the
    /// intersection is spanned by the vectors x·B1.
    pub fn intersect(&self, other: &ZLattice) -> Result<ZLattice, LatticeError> {
        self.check_same(other)?;
        if self.rank() == 0 || other.rank() == 0 {
            return Ok(ZLattice::zero(self.ambient_dim));
        }
        let scale = linalg::common_denominator(self.basis.iter().chain(&other.basis).flatten());
        let b1 = scale_to_integers(&self.basis, &scale);
        let b2 = scale_to_integers(&other.basis, &scale);
        let stacked: ZMatrix = b1
            .iter()
            .cloned()
            .chain(b2.iter().map(|r| r.iter().map(|x| -x).collect()))
            .collect();
        let kernel = linalg::integer_left_kernel(&stacked);
        let r1 = self.rank();
        let gens: ZMatrix = kernel
            .iter()
            .map(|k| linalg::zmat_mul(&[k[..r1].to_vec()], &b1).remove(0))
            .collect();
        let h = linalg::hermite_rows(&gens);
        Ok(ZLattice {
            ambient_dim: self.ambient_dim,
            basis: unscale(h, &scale),
        })
    }

    /// span_ℚ(self) ∩ `ambient`.
    pub fn saturate_in(&self, ambient: &ZLattice) -> Result<ZLattice, LatticeError> {
        self.check_same(ambient)?;
        if ambient.rank() == 0 {
            return Ok(ZLattice::zero(self.ambient_dim));
        }
        // linear functionals cutting out the span: columns of `fns`
        let fns = linalg::transpose(&linalg::nullspace(&self.basis_or_zero_row()));
        if fns.is_empty() || fns[0].is_empty() {
            return Ok(ambient.clone());
        }
        // c·B_A·N = 0 over c ∈ ℤ^r
        let values = linalg::mat_mul(&ambient.basis, &fns);
        let scale = linalg::common_denominator(values.iter().flatten());
        let kernel = linalg::integer_left_kernel(&scale_to_integers(&values, &scale));
        let gens: QMatrix = kernel
            .iter()
            .map(|k| {
                let kq: Vec<Rational> = k
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect();
                linalg::vec_mat(&kq, &ambient.basis)
            })
            .collect();
        ZLattice::from_generators(self.ambient_dim, &gens)
    }

    fn basis_or_zero_row(&self) -> QMatrix {
        if self.basis.is_empty() {
            vec![vec![Rational::zero(); self.ambient_dim]]
        } else {
            self.basis.clone()
        }
    }

    /// Saturation inside the frame ℤᵐ + L: the largest lattice with the same
    /// ℚ-span that contains L with finite index. For integral L this is
    /// span_ℚ(L) ∩ ℤᵐ.
    pub fn saturate(&self) -> ZLattice {
        let frame = self
            .sum(&ZLattice::standard(self.ambient_dim))
            .expect("same dimension");
        self.saturate_in(&frame).expect("same dimension")
    }

    /// [L : L_sub] for `self = L_sub ⊆ L = sup`.
    pub fn index_in(&self, sup: &ZLattice) -> Result<Index, LatticeError> {
        if !self.is_sublattice_of(sup)? {
            return Err(LatticeError::NotSublattice);
        }
        if self.rank() < sup.rank() {
            return Ok(Index::Infinite);
        }
        if self.rank() == 0 {
            return Ok(Index::Finite(BigInt::one()));
        }
        let coords: ZMatrix = self
            .basis
            .iter()
            .map(|b| sup.coordinates(b).expect("dims checked").expect("member"))
            .collect();
        let snf = linalg::smith_normal_form(&coords);
        let idx = snf.diagonal().iter().fold(BigInt::one(), |acc, d| acc * d);
        Ok(Index::Finite(idx.abs()))
    }

    /// M·L ⊆ L, with M acting on column vectors.
    pub fn stable_under(&self, m: &[Vec<Rational>]) -> Result<bool, LatticeError> {
        check_square(self.ambient_dim, m)?;
        for b in &self.basis {
            if !self.member(&linalg::mat_vec(m, b))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn span(&self) -> Subspace {
        Subspace::from_vectors(self.ambient_dim, &self.basis).expect("same dimension")
    }
}

fn check_square(n: usize, m: &[Vec<Rational>]) -> Result<(), LatticeError> {
    if m.len() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: m.len(),
        });
    }
    for row in m {
        check_len(n, row)?;
    }
    Ok(())
}

impl fmt::Display for ZLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, row) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}} in Q^{}", self.ambient_dim)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZLatticeRepr {
    ambient_dim: usize,
    #[serde(with = "serde_rational::matrix")]
    basis: QMatrix,
}

impl Serialize for ZLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ZLatticeRepr {
            ambient_dim: self.ambient_dim,
            basis: self.basis.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZLattice {
    /// Accepts any generating set and canonicalizes it.
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = ZLatticeRepr::deserialize(de)?;
        ZLattice::from_generators(raw.ambient_dim, &raw.basis).map_err(serde::de::Error::custom)
    }
}

/// A ℚ-subspace of ℚᵐ, stored by its reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: QMatrix,
}

impl Subspace {
    pub fn from_vectors(m: usize, vs: &[Vec<Rational>]) -> Result<Self, LatticeError> {
        for v in vs {
            check_len(m, v)?;
        }
        let basis = if vs.is_empty() {
            Vec::new()
        } else {
            linalg::rref(vs).0
        };
        Ok(Subspace {
            ambient_dim: m,
            basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, LatticeError> {
        check_len(self.ambient_dim, v)?;
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Ok(linalg::rank(&rows) == self.dim())
    }

    /// M·W ⊆ W, with M acting on column vectors.
    pub fn stable_under(&self, m: &[Vec<Rational>]) -> Result<bool, LatticeError> {
        check_square(self.ambient_dim, m)?;
        for b in &self.basis {
            if !self.contains(&linalg::mat_vec(m, b))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Smith normal form of an integer matrix, re-exported for callers that only
/// think in lattice terms.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> linalg::Smith {
    linalg::smith_normal_form(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ratio, rational};

    fn q(rows: &[&[i64]]) -> QMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| rational(x)).collect())
            .collect()
    }

    fn lat(rows: &[&[i64]]) -> ZLattice {
        let m = rows.first().map_or(2, |r| r.len());
        ZLattice::from_generators(m, &q(rows)).unwrap()
    }

    #[test]
    fn from_generators_examples() {
        assert_eq!(
            lat(&[&[2, 0], &[1, 1]]).basis(),
            q(&[&[1, 1], &[0, 2]]).as_slice()
        );
        assert_eq!(lat(&[&[1, 0], &[1, 0]]).basis(), q(&[&[1, 0]]).as_slice());
        assert_eq!(ZLattice::from_generators(3, &[]).unwrap().rank(), 0);
        assert!(matches!(
            ZLattice::from_generators(2, &q(&[&[1, 2, 3]])),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rational_generators() {
        let l = ZLattice::from_generators(
            2,
            &[
                vec![ratio(1, 2), rational(0)],
                vec![rational(0), ratio(1, 3)],
            ],
        )
        .unwrap();
        assert_eq!(
            l.basis(),
            &[
                vec![ratio(1, 2), rational(0)],
                vec![rational(0), ratio(1, 3)]
            ]
        );
        assert!(l.member(&[rational(1), ratio(2, 3)]).unwrap());
        assert!(!l.member(&[ratio(1, 4), rational(0)]).unwrap());
    }

    #[test]
    fn intersections() {
        let z2 = ZLattice::standard(2);
        let two = z2.scaled(&rational(2));
        assert_eq!(z2.intersect(&two).unwrap(), two);
        assert_eq!(
            lat(&[&[1, 0]]).intersect(&lat(&[&[0, 1]])).unwrap().rank(),
            0
        );
        let i = lat(&[&[2, 0], &[1, 1]])
            .intersect(&lat(&[&[0, 2], &[1, 1]]))
            .unwrap();
        assert!(i.member(&[rational(1), rational(1)]).unwrap());
    }

    #[test]
    fn saturation() {
        assert_eq!(lat(&[&[2, 0]]).saturate(), lat(&[&[1, 0]]));
        let s = lat(&[&[1, 0]]);
        assert_eq!(s.saturate(), s);
        let l = lat(&[&[2, 2], &[0, 4]]);
        assert_eq!(l.saturate(), ZLattice::standard(2));
        let l = lat(&[&[2, 2, 0]]);
        assert_eq!(l.saturate(), lat(&[&[1, 1, 0]]));
    }

    #[test]
    fn indices() {
        let z2 = ZLattice::standard(2);
        assert_eq!(
            z2.scaled(&rational(2)).index_in(&z2).unwrap(),
            Index::Finite(BigInt::from(4))
        );
        assert_eq!(z2.index_in(&z2).unwrap(), Index::Finite(BigInt::one()));
        assert_eq!(
            lat(&[&[1, 1], &[0, 2]]).index_in(&z2).unwrap(),
            Index::Finite(BigInt::from(2))
        );
        assert_eq!(lat(&[&[1, 0]]).index_in(&z2).unwrap(), Index::Infinite);
        assert_eq!(
            z2.index_in(&lat(&[&[1, 1], &[0, 2]])),
            Err(LatticeError::NotSublattice)
        );
    }

    #[test]
    fn membership() {
        let l = lat(&[&[2, 0], &[1, 1]]);
        assert!(l.member(&[rational(0), rational(0)]).unwrap());
        assert!(l.member(&[rational(3), rational(1)]).unwrap());
        assert!(!ZLattice::standard(2)
            .member(&[ratio(1, 2), rational(0)])
            .unwrap());
        assert!(l.member(&[rational(1)]).is_err());
    }

    #[test]
    fn stability() {
        let rot = q(&[&[0, -1], &[1, 0]]);
        let w = Subspace::from_vectors(2, &q(&[&[1, 0]])).unwrap();
        assert!(w.stable_under(&linalg::identity(2)).unwrap());
        assert!(!w.stable_under(&rot).unwrap());
        let block = q(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        let w = Subspace::from_vectors(4, &q(&[&[1, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
        assert!(w.stable_under(&block).unwrap());
        assert!(ZLattice::standard(4).stable_under(&block).unwrap());
        assert!(!lat(&[&[1, 0]]).stable_under(&rot).unwrap());
        assert!(w.stable_under(&rot).is_err());
    }

    #[test]
    fn serde_canonicalizes() {
        let l: ZLattice =
            serde_json::from_str(r#"{"ambient_dim":2,"basis":[["2","0"],["1","1"]]}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&l).unwrap(),
            r#"{"ambient_dim":2,"basis":[["1","1"],["0","2"]]}"#
        );
    }
}
