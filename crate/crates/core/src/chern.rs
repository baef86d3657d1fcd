//! The first Chern class of the Iwasawa bundle, represented by its values on
//! lattice 2-cycles: the K-valued bracket cocycle q on Delta.
//!
//! "Type (2,0)" is checked as K-bilinearity of the alternating form, which
//! needs no Hodge decomposition. Holomorphic subtori are K-lines, and an
//! alternating K-bilinear form on a one-dimensional K-space vanishes, so the
//! restriction to any elliptic subtorus must be the zero form.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::field::{QuadElem, QuadField, Rational};
use crate::heisenberg::{cocycle, times_sqrt_q4, IwasawaData};
use crate::hodge::{self, HodgeError};
use crate::linalg;
use crate::zlattice::{LatticeError, Subspace, ZLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error("the restricting lattice is not contained in Delta")]
    NotSublattice,
    #[error("the restricting lattice has rank {0}, expected 2")]
    Rank(usize),
    #[error("the span of the restricting lattice is not a K-line")]
    NotKLine,
    #[error("form matrix must be 4×4")]
    BadShape,
}

/// A K-valued ℚ-bilinear form on ℚ⁴ ≅ K², together with the lattices it is
/// evaluated on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleForm {
    pub field: QuadField,
    pub delta: ZLattice,
    pub gamma: ZLattice,
    /// Values on pairs of standard basis vectors of ℚ⁴.
    standard: Vec<Vec<QuadElem>>,
}

impl CocycleForm {
    /// The form with the given values on standard basis pairs.
    pub fn from_standard_matrix(
        field: QuadField,
        delta: ZLattice,
        gamma: ZLattice,
        standard: Vec<Vec<QuadElem>>,
    ) -> Result<Self, ChernError> {
        if standard.len() != 4 || standard.iter().any(|r| r.len() != 4) {
            return Err(ChernError::BadShape);
        }
        if delta.ambient_dim() != 4 {
            return Err(LatticeError::DimensionMismatch {
                expected: 4,
                found: delta.ambient_dim(),
            }
            .into());
        }
        if gamma.ambient_dim() != 2 {
            return Err(LatticeError::DimensionMismatch {
                expected: 2,
                found: gamma.ambient_dim(),
            }
            .into());
        }
        Ok(CocycleForm {
            field,
            delta,
            gamma,
            standard,
        })
    }

    pub fn eval(&self, v: &[Rational], w: &[Rational]) -> QuadElem {
        let mut acc = self.field.zero();
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in w.iter().enumerate() {
                if !y.is_zero() {
                    acc = &acc + &self.standard[i][j].scale(&(x * y));
                }
            }
        }
        acc
    }

    /// Values on Delta's canonical basis.
    pub fn matrix(&self) -> Vec<Vec<QuadElem>> {
        let b = self.delta.basis();
        b.iter()
            .map(|v| b.iter().map(|w| self.eval(v, w)).collect())
            .collect()
    }

    /// The form with every value replaced by its rational part.
    pub fn real_part(&self) -> CocycleForm {
        let standard = self
            .standard
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| self.field.from_rational(x.a.clone()))
                    .collect()
            })
            .collect();
        CocycleForm {
            standard,
            ..self.clone()
        }
    }

    pub fn zero_like(&self) -> CocycleForm {
        CocycleForm {
            standard: vec![vec![self.field.zero(); 4]; 4],
            ..self.clone()
        }
    }

    /// A pair of Delta basis vectors whose value leaves Gamma.
    pub fn gamma_violation(&self) -> Option<(usize, usize, QuadElem)> {
        let m = self.matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate().skip(i + 1) {
                if !self
                    .gamma
                    .member(&[x.a.clone(), x.b.clone()])
                    .unwrap_or(false)
                {
                    return Some((i, j, x.clone()));
                }
            }
        }
        None
    }

    /// The ℤ-span of all values on basis pairs.
    pub fn value_lattice(&self) -> ZLattice {
        let gens: Vec<Vec<Rational>> = self
            .matrix()
            .iter()
            .flatten()
            .map(|x| vec![x.a.clone(), x.b.clone()])
            .collect();
        ZLattice::from_generators(2, &gens).expect("vectors in ℚ²")
    }
}

/// The bracket cocycle q((a, b), (a′, b′)) = ab′ − ba′ of the Iwasawa data.
pub fn chern_form(data: &IwasawaData) -> CocycleForm {
    let e = linalg::identity(4);
    let standard = e
        .iter()
        .map(|v| e.iter().map(|w| cocycle(data.field, v, w)).collect())
        .collect();
    CocycleForm {
        field: data.field,
        delta: data.delta.clone(),
        gamma: data.gamma.clone(),
        standard,
    }
}

/// Outcome of [`verify_holomorphic_type`], with a witness for each failed part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HolomorphicTypeCertificate {
    pub alternating: bool,
    /// (i, j) with q(δᵢ, δⱼ) ≠ −q(δⱼ, δᵢ).
    pub alternating_witness: Option<(usize, usize)>,
    pub k_bilinear: bool,
    /// (i, j, q(√−d·δᵢ, δⱼ), √−d·q(δᵢ, δⱼ)) for a failing basis pair.
    pub bilinearity_witness: Option<(usize, usize, QuadElem, QuadElem)>,
    /// det of the Gram matrix on the K-basis (1, 0), (0, 1).
    pub gram_det: QuadElem,
    pub nondegenerate: bool,
    /// A nonzero v ∈ ℚ⁴ with q(v, ·) = 0, when degenerate.
    #[serde(with = "crate::field::serde_rational::vec")]
    pub kernel_vector: Vec<Rational>,
    pub pass: bool,
}

pub fn verify_holomorphic_type(c: &CocycleForm) -> HolomorphicTypeCertificate {
    let basis = c.delta.basis();
    let m = c.matrix();
    let mut alternating_witness = None;
    'alt: for i in 0..basis.len() {
        for j in i..basis.len() {
            if m[i][j] != -&m[j][i] {
                alternating_witness = Some((i, j));
                break 'alt;
            }
        }
    }
    let mut bilinearity_witness = None;
    'bil: for (i, v) in basis.iter().enumerate() {
        let sv = times_sqrt_q4(c.field, v);
        for (j, w) in basis.iter().enumerate() {
            let lhs = c.eval(&sv, w);
            let rhs = m[i][j].times_sqrt();
            if lhs != rhs {
                bilinearity_witness = Some((i, j, lhs, rhs));
                break 'bil;
            }
        }
    }
    let e = linalg::identity(4);
    let (k1, k2) = (&e[0], &e[2]);
    let gram_det = &(&c.eval(k1, k1) * &c.eval(k2, k2)) - &(&c.eval(k1, k2) * &c.eval(k2, k1));
    // q(v, eⱼ) = 0 for all j, over ℚ: rows are v ↦ components of q(v, eⱼ)
    let mut rows = Vec::new();
    for j in 0..4 {
        rows.push(
            (0..4)
                .map(|i| c.standard[i][j].a.clone())
                .collect::<Vec<_>>(),
        );
        rows.push(
            (0..4)
                .map(|i| c.standard[i][j].b.clone())
                .collect::<Vec<_>>(),
        );
    }
    let kernel_vector = linalg::nullspace(&rows)
        .into_iter()
        .next()
        .unwrap_or_default();
    let alternating = alternating_witness.is_none();
    let k_bilinear = bilinearity_witness.is_none();
    let nondegenerate = !gram_det.is_zero() && kernel_vector.is_empty();
    HolomorphicTypeCertificate {
        alternating,
        alternating_witness,
        k_bilinear,
        bilinearity_witness,
        gram_det,
        nondegenerate,
        kernel_vector,
        pass: alternating && k_bilinear && nondegenerate,
    }
}

/// q restricted to Λ²M for a rank-2 sublattice M of Delta spanning a K-line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictedForm {
    pub sublattice: ZLattice,
    /// Values on M's canonical basis.
    pub values: Vec<Vec<QuadElem>>,
}

impl RestrictedForm {
    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|x| x.is_zero())
    }
}

pub fn restrict_to_subtorus(c: &CocycleForm, m: &ZLattice) -> Result<RestrictedForm, ChernError> {
    if m.ambient_dim() != 4 {
        return Err(LatticeError::DimensionMismatch {
            expected: 4,
            found: m.ambient_dim(),
        }
        .into());
    }
    if m.rank() != 2 {
        return Err(ChernError::Rank(m.rank()));
    }
    if !m.is_sublattice_of(&c.delta)? {
        return Err(ChernError::NotSublattice);
    }
    let span = Subspace::from_vectors(4, m.basis())?;
    if !span.stable_under(&hodge::sqrt_neg_d_matrix(c.field, 2))? {
        return Err(ChernError::NotKLine);
    }
    let b = m.basis();
    let values = b
        .iter()
        .map(|v| b.iter().map(|w| c.eval(v, w)).collect())
        .collect();
    Ok(RestrictedForm {
        sublattice: m.clone(),
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineRestriction {
    #[serde(with = "crate::field::serde_rational::vec")]
    pub line: Vec<Rational>,
    pub zero: bool,
}

/// The combined certificate: type check plus restrictions to every elliptic
/// subtorus of bounded height.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChernReport {
    pub type_check: HolomorphicTypeCertificate,
    pub nondegenerate: bool,
    pub values_in_gamma: bool,
    pub restrictions: Vec<LineRestriction>,
}

impl ChernReport {
    pub fn pass(&self) -> bool {
        self.type_check.pass && self.values_in_gamma && self.restrictions.iter().all(|r| r.zero)
    }
}

pub fn chern_report(data: &IwasawaData, height: u32) -> Result<ChernReport, ChernError> {
    let c = chern_form(data);
    let type_check = verify_holomorphic_type(&c);
    let t = hodge::torus_from_klattice(&data.delta, data.field)?;
    let restrictions = hodge::enumerate_elliptic_subtori(&t, height)?
        .into_iter()
        .map(|s| {
            Ok(LineRestriction {
                zero: restrict_to_subtorus(&c, &s.sublattice)?.is_zero(),
                line: s.line,
            })
        })
        .collect::<Result<_, ChernError>>()?;
    Ok(ChernReport {
        nondegenerate: type_check.nondegenerate,
        values_in_gamma: c.gamma_violation().is_none(),
        type_check,
        restrictions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;
    use crate::heisenberg::{construct_iwasawa, extract_iwasawa, LieVector};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rational(x)).collect()
    }

    fn gaussian() -> IwasawaData {
        let l = construct_iwasawa(
            &ZLattice::standard(4),
            &ZLattice::standard(2),
            QuadField::gaussian(),
        )
        .unwrap();
        extract_iwasawa(&l)
    }

    #[test]
    fn gaussian_values() {
        let c = chern_form(&gaussian());
        let gi = QuadField::gaussian();
        assert_eq!(c.eval(&q(&[1, 0, 0, 0]), &q(&[0, 0, 1, 0])), gi.one());
        assert!(c.eval(&q(&[1, 0, 0, 0]), &q(&[0, 1, 0, 0])).is_zero());
        assert_eq!(c.value_lattice(), ZLattice::standard(2));
        assert_eq!(c.gamma_violation(), None);
    }

    #[test]
    fn type_checks() {
        let c = chern_form(&gaussian());
        let cert = verify_holomorphic_type(&c);
        assert!(cert.pass && cert.nondegenerate);

        let re = verify_holomorphic_type(&c.real_part());
        assert!(!re.k_bilinear && re.alternating);
        let (_, _, lhs, rhs) = re.bilinearity_witness.unwrap();
        assert_ne!(lhs, rhs);

        let zero = verify_holomorphic_type(&c.zero_like());
        assert!(zero.k_bilinear && !zero.nondegenerate && !zero.pass);
        assert_eq!(zero.kernel_vector.len(), 4);
    }

    #[test]
    fn restrictions() {
        let data = gaussian();
        let c = chern_form(&data);
        let diag = hodge::line_sublattice(data.field, &data.delta, &q(&[1, 0, 1, 0])).unwrap();
        assert!(restrict_to_subtorus(&c, &diag).unwrap().is_zero());

        let axis = ZLattice::from_generators(4, &[q(&[2, 0, 0, 0]), q(&[0, 3, 0, 0])]).unwrap();
        assert!(restrict_to_subtorus(&c, &axis).unwrap().is_zero());

        let (v, w) = (q(&[1, 0, 0, 0]), q(&[0, 0, 1, 0]));
        let plane = ZLattice::from_generators(4, &[v.clone(), w.clone()]).unwrap();
        assert_eq!(restrict_to_subtorus(&c, &plane), Err(ChernError::NotKLine));
        assert_eq!(c.eval(&v, &w), data.field.one());

        let half = crate::field::ratio(1, 2);
        let outside = ZLattice::from_generators(
            4,
            &[
                vec![half.clone(), half, rational(0), rational(0)],
                q(&[-1, 1, 0, 0]),
            ],
        )
        .unwrap();
        assert_eq!(
            restrict_to_subtorus(&c, &outside),
            Err(ChernError::NotSublattice)
        );
    }

    #[test]
    fn matches_bracket() {
        let data = gaussian();
        let c = chern_form(&data);
        let f = data.field;
        let vs = [q(&[1, 2, -1, 0]), q(&[0, 1, 3, -2]), q(&[2, -1, 1, 1])];
        for v in &vs {
            for w in &vs {
                let h = |u: &[Rational]| {
                    let (a, b) = crate::heisenberg::q4_to_k2(f, u);
                    LieVector::new(a, b, f.zero()).unwrap()
                };
                assert_eq!(h(v).bracket(&h(w)).unwrap().z, c.eval(v, w));
            }
        }
    }

    #[test]
    fn report_on_gaussian() {
        let r = chern_report(&gaussian(), 1).unwrap();
        assert!(r.pass());
        assert!(r.restrictions.len() >= 6);
    }
}
