//! Complex tori ℝ^{2g}/ℤ^{2g} with an exact complex structure J.
//!
//! J is a matrix over a real number field F acting on column vectors of
//! H₁(T, ℚ) = ℚ^{2g}. Every question asked here (commuting endomorphisms,
//! J-invariant rational 2-forms) is linear in rational unknowns with
//! coefficients in F, so it is answered exactly through [`scalarize`].
//!
//! Tori coming from a lattice in K^g, K = ℚ(√−d), keep the lattice as a
//! backing: J is then M/√d with M the matrix of multiplication by √−d.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::field::{
    scalarize, AlgLinearSystem, FieldError, QuadElem, QuadField, Rational, RealAlgElem,
    RealAlgField,
};
use crate::linalg::{self, QMatrix};
use crate::zlattice::{Index, LatticeError, ZLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HodgeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("J must be a nonempty 2g×2g matrix, got {rows}×{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("J² ≠ −I")]
    NotComplexStructure,
    #[error("lattice of rank {rank} in ℚ^{ambient} is not a full lattice in K^g")]
    NotFullLattice { rank: usize, ambient: usize },
    #[error("expected genus {expected}, got {found}")]
    WrongGenus { expected: usize, found: usize },
    #[error("torus is not backed by a lattice in K^g")]
    NotKLatticeBacked,
    #[error("imaginary part of the period must be positive")]
    NotUpperHalfPlane,
    #[error("change of basis is not unimodular")]
    NotUnimodular,
    #[error("multiplier ring is not of the form ℤ + f·O_K")]
    NotAnOrder,
}

/// The K-lattice a torus was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KBacking {
    pub field: QuadField,
    /// Lattice in K^g read as ℚ^{2g}.
    pub lattice: ZLattice,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusJ {
    g: usize,
    field: RealAlgField,
    j: Vec<Vec<RealAlgElem>>,
    backing: Option<KBacking>,
}

fn alg_mat_mul(
    a: &[Vec<RealAlgElem>],
    b: &[Vec<RealAlgElem>],
    f: &RealAlgField,
) -> Vec<Vec<RealAlgElem>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| (0..n).fold(f.zero(), |acc, j| &acc + &(&a[i][j] * &b[j][k])))
                .collect()
        })
        .collect()
}

fn lift(f: &RealAlgField, m: &[Vec<Rational>]) -> Vec<Vec<RealAlgElem>> {
    m.iter()
        .map(|r| r.iter().map(|x| f.from_rational(x.clone())).collect())
        .collect()
}

/// Multiplication by √−d on K^g in ℚ^{2g} coordinates, acting on columns.
pub fn sqrt_neg_d_matrix(field: QuadField, g: usize) -> QMatrix {
    let d = field.d_rational();
    let mut s = vec![vec![Rational::zero(); 2 * g]; 2 * g];
    for k in 0..g {
        // (a₀ + a₁√−d)·√−d = −d·a₁ + a₀√−d
        s[2 * k][2 * k + 1] = -d.clone();
        s[2 * k + 1][2 * k] = Rational::one();
    }
    s
}

impl TorusJ {
    /// Validates J² = −I over a common field.
    pub fn new(j: Vec<Vec<RealAlgElem>>) -> Result<Self, HodgeError> {
        let rows = j.len();
        let cols = j.first().map_or(0, |r| r.len());
        if rows == 0 || !rows.is_multiple_of(2) || j.iter().any(|r| r.len() != rows) {
            return Err(HodgeError::BadShape { rows, cols });
        }
        let field = j[0][0].field().clone();
        for x in j.iter().flatten() {
            if x.field() != &field {
                return Err(
                    FieldError::FieldMismatch(field.to_string(), x.field().to_string()).into(),
                );
            }
        }
        let sq = alg_mat_mul(&j, &j, &field);
        for (i, row) in sq.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                let expected = if i == k {
                    -Rational::one()
                } else {
                    Rational::zero()
                };
                if *x != field.from_rational(expected) {
                    return Err(HodgeError::NotComplexStructure);
                }
            }
        }
        Ok(TorusJ {
            g: rows / 2,
            field,
            j,
            backing: None,
        })
    }

    /// The elliptic curve ℂ/(ℤ + ℤτ), τ = x + iy, in the basis (1, τ).
    pub fn elliptic(x: &RealAlgElem, y: &RealAlgElem) -> Result<Self, HodgeError> {
        if y.sign() <= 0 {
            return Err(HodgeError::NotUpperHalfPlane);
        }
        let f = x.field().clone();
        if y.field() != &f {
            return Err(FieldError::FieldMismatch(f.to_string(), y.field().to_string()).into());
        }
        let inv_y = y.inv()?;
        let x_over_y = x * &inv_y;
        let j = vec![
            vec![-&x_over_y, -&(&(x * &x_over_y) + y)],
            vec![inv_y, x_over_y],
        ];
        TorusJ::new(j)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn field(&self) -> &RealAlgField {
        &self.field
    }

    pub fn j(&self) -> &[Vec<RealAlgElem>] {
        &self.j
    }

    pub fn backing(&self) -> Option<&KBacking> {
        self.backing.as_ref()
    }

    fn dim(&self) -> usize {
        2 * self.g
    }

    /// T × T′ with block-diagonal J. The K-lattice backing survives when both
    /// factors are backed over the same K.
    pub fn product(&self, other: &TorusJ) -> Result<TorusJ, HodgeError> {
        if self.field != other.field {
            return Err(
                FieldError::FieldMismatch(self.field.to_string(), other.field.to_string()).into(),
            );
        }
        let (n1, n2) = (self.dim(), other.dim());
        let n = n1 + n2;
        let mut j = vec![vec![self.field.zero(); n]; n];
        for i in 0..n1 {
            for k in 0..n1 {
                j[i][k] = self.j[i][k].clone();
            }
        }
        for i in 0..n2 {
            for k in 0..n2 {
                j[n1 + i][n1 + k] = other.j[i][k].clone();
            }
        }
        let backing = match (&self.backing, &other.backing) {
            (Some(a), Some(b)) if a.field == b.field => {
                let zeros1 = vec![Rational::zero(); n1];
                let zeros2 = vec![Rational::zero(); n2];
                let gens: Vec<Vec<Rational>> = a
                    .lattice
                    .basis()
                    .iter()
                    .map(|v| v.iter().cloned().chain(zeros2.iter().cloned()).collect())
                    .chain(
                        b.lattice
                            .basis()
                            .iter()
                            .map(|v| zeros1.iter().cloned().chain(v.iter().cloned()).collect()),
                    )
                    .collect();
                Some(KBacking {
                    field: a.field,
                    lattice: ZLattice::from_generators(n, &gens)?,
                })
            }
            _ => None,
        };
        Ok(TorusJ {
            g: self.g + other.g,
            field: self.field.clone(),
            j,
            backing,
        })
    }

    /// The same torus in the lattice basis e′ = e·U for unimodular `u`:
    /// J′ = U⁻¹·J·U. The K-lattice backing is dropped.
    pub fn change_basis(&self, u: &[Vec<Rational>]) -> Result<TorusJ, HodgeError> {
        let n = self.dim();
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(HodgeError::BadShape {
                rows: u.len(),
                cols: u.first().map_or(0, |r| r.len()),
            });
        }
        let integral = u.iter().flatten().all(|x| x.is_integer());
        if !integral || linalg::det(u).abs() != Rational::one() {
            return Err(HodgeError::NotUnimodular);
        }
        let u_inv = linalg::inverse(u).ok_or(HodgeError::NotUnimodular)?;
        let j = alg_mat_mul(
            &alg_mat_mul(&lift(&self.field, &u_inv), &self.j, &self.field),
            &lift(&self.field, u),
            &self.field,
        );
        TorusJ::new(j)
    }
}

impl Serialize for TorusJ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TorusJ", 3)?;
        st.serialize_field("g", &self.g)?;
        st.serialize_field("J", &self.j)?;
        st.serialize_field("klattice", &self.backing)?;
        st.end()
    }
}

/// ℂ^g/L for a full lattice L ⊂ K^g, with J = M/√d where M is the matrix of
/// multiplication by √−d in the canonical basis of L.
pub fn torus_from_klattice(l: &ZLattice, field: QuadField) -> Result<TorusJ, HodgeError> {
    let n = l.ambient_dim();
    if n == 0 || !n.is_multiple_of(2) || !l.is_full_rank() {
        return Err(HodgeError::NotFullLattice {
            rank: l.rank(),
            ambient: n,
        });
    }
    let s = sqrt_neg_d_matrix(field, n / 2);
    let bt = linalg::transpose(l.basis());
    // column i of M: coordinates of √−d·bᵢ in the basis
    let cols: Vec<Vec<Rational>> = l
        .basis()
        .iter()
        .map(|b| linalg::solve(&bt, &linalg::mat_vec(&s, b)).expect("full-rank basis"))
        .collect();
    let m = linalg::transpose(&cols);
    let (f, sqrt_d) = RealAlgField::sqrt_of(field.d())?;
    let d = field.d_rational();
    // 1/√d = √d/d
    let j = m
        .iter()
        .map(|r| r.iter().map(|x| sqrt_d.scale(&(x / &d))).collect())
        .collect();
    let mut t = TorusJ::new(j)?;
    debug_assert_eq!(t.field, f);
    t.backing = Some(KBacking {
        field,
        lattice: l.clone(),
    });
    Ok(t)
}

/// A ℚ-basis of End(T) ⊗ ℚ acting on H₁(T, ℚ).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndAlgebra {
    #[serde(with = "crate::field::serde_rational::matrix_list")]
    pub basis: Vec<QMatrix>,
}

impl EndAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn flat(m: &[Vec<Rational>]) -> Vec<Rational> {
        m.iter().flatten().cloned().collect()
    }

    /// Whether `m` lies in the ℚ-span of the basis.
    pub fn contains(&self, m: &[Vec<Rational>]) -> bool {
        let rows: Vec<Vec<Rational>> = self.basis.iter().map(|b| Self::flat(b)).collect();
        if rows.is_empty() {
            return Self::flat(m).iter().all(|x| x.is_zero());
        }
        let base = linalg::rank(&rows);
        let mut with = rows;
        with.push(Self::flat(m));
        linalg::rank(&with) == base
    }

    pub fn contains_identity(&self) -> bool {
        let n = self.basis.first().map_or(0, |b| b.len());
        self.contains(&linalg::identity(n))
    }

    pub fn is_closed_under_product(&self) -> bool {
        self.basis.iter().all(|a| {
            self.basis
                .iter()
                .all(|b| self.contains(&linalg::mat_mul(a, b)))
        })
    }

    /// For a two-dimensional algebra ℚ[φ] with φ² − tφ + n = 0 of negative
    /// discriminant, the imaginary quadratic field ℚ(√(t² − 4n)).
    pub fn quadratic_field(&self) -> Option<QuadField> {
        if self.dim() != 2 {
            return None;
        }
        let n = self.basis[0].len();
        let id = linalg::identity(n);
        let phi = self
            .basis
            .iter()
            .find(|b| linalg::rank(&[Self::flat(b), Self::flat(&id)]) == 2)?;
        // φ restricted to the plane spanned by v, φv for any nonzero v
        // satisfies the same quadratic; read it off from φ² = tφ − n.
        let phi2 = linalg::mat_mul(phi, phi);
        let rows = vec![Self::flat(phi), Self::flat(&id)];
        let coeffs = linalg::solve(&linalg::transpose(&rows), &Self::flat(&phi2))?;
        let (t, neg_n) = (&coeffs[0], &coeffs[1]);
        let disc = t * t + neg_n * Rational::from_integer(BigInt::from(4));
        if !disc.is_negative() {
            return None;
        }
        let d = squarefree_part(&(-disc))?;
        QuadField::new(d).ok()
    }
}

/// Squarefree integer s with x = s·r² for some rational r.
fn squarefree_part(x: &Rational) -> Option<i64> {
    let mut n: i64 = (x.numer() * x.denom()).to_i64()?;
    let mut out = 1i64;
    let mut p = 2i64;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
        }
        if n % p == 0 {
            out *= p;
            n /= p;
        }
        p += 1;
    }
    Some(out * n)
}

/// Solves M·J = J·M over rational 2g×2g matrices M.
pub fn endomorphism_algebra(t: &TorusJ) -> EndAlgebra {
    let n = t.dim();
    let f = &t.field;
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            // (MJ − JM)_{ik} as a linear form in the entries M_{pq}
            let mut row = vec![f.zero(); n * n];
            for q in 0..n {
                row[i * n + q] = &row[i * n + q] + &t.j[q][k];
            }
            for p in 0..n {
                row[p * n + k] = &row[p * n + k] - &t.j[i][p];
            }
            rows.push(row);
        }
    }
    let basis = solve_homogeneous(f, rows, n * n)
        .into_iter()
        .map(|v| v.chunks(n).map(|c| c.to_vec()).collect())
        .collect();
    EndAlgebra { basis }
}

fn solve_homogeneous(
    f: &RealAlgField,
    rows: Vec<Vec<RealAlgElem>>,
    unknowns: usize,
) -> Vec<Vec<Rational>> {
    let system = AlgLinearSystem::homogeneous(f, rows).expect("rectangular system");
    scalarize(&system)
        .expect("single field")
        .equations()
        .homogeneous_solutions(unknowns)
}

/// Index pairs (p, q), p < q, labelling the coordinates of an alternating form.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
        .collect()
}

/// Rational alternating forms W with JᵀWJ = sign·W, as full antisymmetric matrices.
pub fn invariant_forms(t: &TorusJ, sign: i8) -> Vec<QMatrix> {
    let n = t.dim();
    let f = &t.field;
    let ps = pairs(n);
    let s = f.from_rational(Rational::from_integer(BigInt::from(sign)));
    let rows: Vec<Vec<RealAlgElem>> = ps
        .iter()
        .map(|&(i, k)| {
            // (JᵀWJ − sign·W)_{ik}
            ps.iter()
                .map(|&(p, q)| {
                    let mut c = &(&t.j[p][i] * &t.j[q][k]) - &(&t.j[q][i] * &t.j[p][k]);
                    if (p, q) == (i, k) {
                        c = &c - &s;
                    }
                    c
                })
                .collect()
        })
        .collect();
    solve_homogeneous(f, rows, ps.len())
        .into_iter()
        .map(|w| {
            let mut m = vec![vec![Rational::zero(); n]; n];
            for (&(p, q), x) in ps.iter().zip(&w) {
                m[p][q] = x.clone();
                m[q][p] = -x.clone();
            }
            m
        })
        .collect()
}

/// Dimension of the rational (1,1) classes.
pub fn picard_number(t: &TorusJ) -> usize {
    invariant_forms(t, 1).len()
}

/// Dimension of the rational part of H^{2,0} ⊕ H^{0,2}.
pub fn h20_02_dim(t: &TorusJ) -> usize {
    invariant_forms(t, -1).len()
}

fn binom2(n: usize) -> usize {
    n * (n - 1) / 2
}

/// The three maximality conditions for a torus A of dimension g:
/// ρ = g², dim H^{2,0+0,2}_ℚ = g(g − 1), dim End ⊗ ℚ = 2g².
///
/// A curve satisfies ρ = 1 trivially, so for g = 1 the conditions are
/// evaluated on E × E.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmReport {
    pub g: usize,
    /// Genus of the torus the conditions were evaluated on.
    pub evaluated_genus: usize,
    pub picard: usize,
    pub h20_02: usize,
    pub end_dim: usize,
    pub maximal_picard: bool,
    pub rational_h20_02: bool,
    pub maximal_end: bool,
    /// All three conditions agree.
    pub consistent: bool,
    /// ρ + h20_02 = binom(2g, 2) on the evaluated torus.
    pub hodge_count_full: bool,
}

impl CmReport {
    pub fn verdict(&self) -> bool {
        self.maximal_picard && self.rational_h20_02 && self.maximal_end
    }
}

pub fn cm_report(t: &TorusJ) -> Result<CmReport, HodgeError> {
    let square;
    let a = if t.g == 1 {
        square = t.product(t)?;
        &square
    } else {
        t
    };
    let g = a.g;
    let picard = picard_number(a);
    let h20_02 = h20_02_dim(a);
    let end_dim = endomorphism_algebra(a).dim();
    let maximal_picard = picard == g * g;
    let rational_h20_02 = h20_02 == g * (g - 1);
    let maximal_end = end_dim == 2 * g * g;
    Ok(CmReport {
        g: t.g,
        evaluated_genus: g,
        picard,
        h20_02,
        end_dim,
        maximal_picard,
        rational_h20_02,
        maximal_end,
        consistent: maximal_picard == rational_h20_02 && rational_h20_02 == maximal_end,
        hodge_count_full: picard + h20_02 == binom2(2 * g),
    })
}

/// The order ℤ + conductor·O_K of an imaginary quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CMOrder {
    pub field: QuadField,
    pub conductor: BigInt,
}

fn ring_of_integers(field: QuadField) -> ZLattice {
    let w = field.integral_generator();
    ZLattice::from_generators(
        2,
        &[vec![Rational::one(), Rational::zero()], vec![w.a, w.b]],
    )
    .expect("two vectors in ℚ²")
}

/// {λ ∈ K : λΓ ⊆ Γ} for a full lattice Γ ⊂ K ≅ ℚ², identified as ℤ + f·O_K.
pub fn multiplier_order(gamma: &ZLattice, field: QuadField) -> Result<CMOrder, HodgeError> {
    if gamma.ambient_dim() != 2 || !gamma.is_full_rank() {
        return Err(HodgeError::NotFullLattice {
            rank: gamma.rank(),
            ambient: gamma.ambient_dim(),
        });
    }
    let elems: Vec<QuadElem> = gamma
        .basis()
        .iter()
        .map(|v| field.elem(v[0].clone(), v[1].clone()))
        .collect();
    // λ·γᵢ ∈ Γ for all i  ⇔  λ ∈ ∩ᵢ γᵢ⁻¹Γ
    let mut order: Option<ZLattice> = None;
    for gi in &elems {
        let inv = gi.inv()?;
        let gens: Vec<Vec<Rational>> = elems
            .iter()
            .map(|gj| {
                let x = &inv * gj;
                vec![x.a, x.b]
            })
            .collect();
        let l = ZLattice::from_generators(2, &gens)?;
        order = Some(match order {
            None => l,
            Some(o) => o.intersect(&l)?,
        });
    }
    let order = order.expect("rank-2 basis");
    let ok = ring_of_integers(field);
    let conductor = match order.index_in(&ok) {
        Ok(Index::Finite(f)) => f,
        _ => return Err(HodgeError::NotAnOrder),
    };
    let w = field.integral_generator();
    let expected = ZLattice::from_generators(
        2,
        &[
            vec![Rational::one(), Rational::zero()],
            vec![
                &w.a * Rational::from_integer(conductor.clone()),
                &w.b * Rational::from_integer(conductor.clone()),
            ],
        ],
    )?;
    if expected != order {
        return Err(HodgeError::NotAnOrder);
    }
    Ok(CMOrder { field, conductor })
}

/// The endomorphism order of a K-lattice-backed elliptic curve.
pub fn endomorphism_order(e: &TorusJ) -> Result<CMOrder, HodgeError> {
    if e.g != 1 {
        return Err(HodgeError::WrongGenus {
            expected: 1,
            found: e.g,
        });
    }
    let b = e.backing.as_ref().ok_or(HodgeError::NotKLatticeBacked)?;
    multiplier_order(&b.lattice, b.field)
}

fn require_surface_backing(t: &TorusJ) -> Result<&KBacking, HodgeError> {
    if t.g != 2 {
        return Err(HodgeError::WrongGenus {
            expected: 2,
            found: t.g,
        });
    }
    t.backing.as_ref().ok_or(HodgeError::NotKLatticeBacked)
}

/// Canonical representative of the K-line through v ∈ K²: the first nonzero
/// coordinate is scaled to 1.
pub fn line_representative(field: QuadField, v: &[Rational]) -> Option<Vec<Rational>> {
    let a = field.elem(v[0].clone(), v[1].clone());
    let b = field.elem(v[2].clone(), v[3].clone());
    if !a.is_zero() {
        let t = &b * &a.inv().ok()?;
        Some(vec![Rational::one(), Rational::zero(), t.a, t.b])
    } else if !b.is_zero() {
        Some(vec![
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
            Rational::zero(),
        ])
    } else {
        None
    }
}

/// K·v ∩ Δ for nonzero v.
pub fn line_sublattice(
    field: QuadField,
    delta: &ZLattice,
    v: &[Rational],
) -> Result<ZLattice, HodgeError> {
    let sv = linalg::mat_vec(&sqrt_neg_d_matrix(field, 2), v);
    Ok(ZLattice::from_generators(4, &[v.to_vec(), sv])?.saturate_in(delta)?)
}

/// The lattice Γ′ ⊂ K with M = Γ′·rep, for a sublattice M of the K-line
/// through the canonical representative `rep`.
pub fn curve_lattice(
    field: QuadField,
    rep: &[Rational],
    m: &ZLattice,
) -> Result<ZLattice, HodgeError> {
    let a = field.elem(rep[0].clone(), rep[1].clone());
    let (first, r) = if !a.is_zero() {
        (0, a)
    } else {
        (2, field.elem(rep[2].clone(), rep[3].clone()))
    };
    let r_inv = r.inv()?;
    let gens: Vec<Vec<Rational>> = m
        .basis()
        .iter()
        .map(|v| {
            let t = &field.elem(v[first].clone(), v[first + 1].clone()) * &r_inv;
            vec![t.a, t.b]
        })
        .collect();
    Ok(ZLattice::from_generators(2, &gens)?)
}

/// A holomorphic elliptic subtorus K·v ∩ Δ of a surface ℂ²/Δ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllipticSubtorus {
    /// Canonical line representative in ℚ⁴.
    #[serde(with = "crate::field::serde_rational::vec")]
    pub line: Vec<Rational>,
    /// A primitive vector of Δ of least height on the line.
    #[serde(with = "crate::field::serde_rational::vec")]
    pub witness: Vec<Rational>,
    pub witness_height: BigInt,
    /// M = K·v ∩ Δ.
    pub sublattice: ZLattice,
    /// [M : M ∩ (ℤv + ℤ√−d·v)].
    pub witness_index: Index,
    /// Γ′ ⊂ K with ℂ/Γ′ ≅ ℂ·v/M.
    pub curve: ZLattice,
}

fn norm2(v: &[Rational]) -> Rational {
    v.iter().map(|x| x * x).sum()
}

fn primitive(c: &[BigInt]) -> bool {
    c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).is_one()
}

/// Primitive vectors of Δ with canonical-basis coordinates bounded by
/// `height`, grouped by K-line and ordered by line representative.
pub fn enumerate_elliptic_subtori(
    t: &TorusJ,
    height: u32,
) -> Result<Vec<EllipticSubtorus>, HodgeError> {
    let b = require_surface_backing(t)?;
    let delta = &b.lattice;
    let h = height as i64;
    let side = (2 * h + 1) as usize;
    let mut best: BTreeMap<Vec<Rational>, (BigInt, Vec<Rational>)> = BTreeMap::new();
    for idx in 0..side.pow(4) {
        let mut rest = idx;
        let coeffs: Vec<BigInt> = (0..4)
            .map(|_| {
                let c = (rest % side) as i64 - h;
                rest /= side;
                BigInt::from(c)
            })
            .collect();
        if !primitive(&coeffs) {
            continue;
        }
        let ht = coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .expect("four coefficients");
        let kq: Vec<Rational> = coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let v = linalg::vec_mat(&kq, delta.basis());
        let rep = line_representative(b.field, &v).expect("primitive vectors are nonzero");
        // least height, then shortest, then lexicographically largest
        let replace = match best.get(&rep) {
            None => true,
            Some((bh, bv)) => (&ht, norm2(&v), Reverse(&v)) < (bh, norm2(bv), Reverse(bv)),
        };
        if replace {
            best.insert(rep, (ht, v));
        }
    }
    let s = sqrt_neg_d_matrix(b.field, 2);
    best.into_iter()
        .map(|(line, (witness_height, witness))| {
            let sublattice = line_sublattice(b.field, delta, &witness)?;
            let sv = linalg::mat_vec(&s, &witness);
            let generated = ZLattice::from_generators(4, &[witness.clone(), sv])?;
            let witness_index = sublattice.intersect(&generated)?.index_in(&sublattice)?;
            let curve = curve_lattice(b.field, &line, &sublattice)?;
            Ok(EllipticSubtorus {
                line,
                witness,
                witness_height,
                sublattice,
                witness_index,
                curve,
            })
        })
        .collect()
}

/// Δ ⊇ M₁ ⊕ M₂ along the coordinate lines K·(1,0) and K·(0,1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsogenyDecomposition {
    #[serde(with = "crate::field::serde_rational::matrix")]
    pub lines: Vec<Vec<Rational>>,
    pub m1: ZLattice,
    pub m2: ZLattice,
    /// [Δ : M₁ ⊕ M₂], the degree of ℂ/M₁ × ℂ/M₂ → ℂ²/Δ.
    pub degree: BigInt,
    /// Γ′, Γ″ ⊂ K with ℂ/Γ′ ≅ ℂ/M₁ and ℂ/Γ″ ≅ ℂ/M₂.
    pub curves: [ZLattice; 2],
}

pub fn decompose_isogeny(t: &TorusJ) -> Result<IsogenyDecomposition, HodgeError> {
    let b = require_surface_backing(t)?;
    let e = linalg::identity(4);
    let (l1, l2) = (e[0].clone(), e[2].clone());
    let m1 = line_sublattice(b.field, &b.lattice, &l1)?;
    let m2 = line_sublattice(b.field, &b.lattice, &l2)?;
    let degree = match m1.sum(&m2)?.index_in(&b.lattice)? {
        Index::Finite(n) => n,
        Index::Infinite => unreachable!("complementary K-lines give a full-rank sum"),
    };
    let curves = [
        curve_lattice(b.field, &l1, &m1)?,
        curve_lattice(b.field, &l2, &m2)?,
    ];
    Ok(IsogenyDecomposition {
        lines: vec![l1, l2],
        m1,
        m2,
        degree,
        curves,
    })
}
