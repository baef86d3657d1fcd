//! The complex Heisenberg group over K = ℚ(√−d) and its cocompact lattices.
//!
//! A point `(a, b, c)` is the unipotent matrix with first row `(1, a, c)` and
//! second row `(0, 1, b)`. Lattices are carried by group generators rather
//! than by log-lattices: `log Λ` is in general not additively closed (it picks
//! up half-integer central corrections), so validation reduces words to the
//! normal form `(abelian part)·(central part)` and computes the central
//! defect of every relation explicitly.
//!
//! Coordinates: K² is read as ℚ⁴ via `(a, b) ↦ (a₀, a₁, b₀, b₁)` where
//! `a = a₀ + a₁√−d`, and the center K as ℚ².

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{ExactFieldElem, FieldError, QuadElem, QuadField, Rational};
use crate::linalg;
use crate::zlattice::{LatticeError, ZLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeisError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("empty generator list")]
    NoGenerators,
    #[error(
        "not cocompact: abelian rank {delta_rank} (need 4), central rank {gamma_rank} (need 2)"
    )]
    NotCocompact {
        delta_rank: usize,
        gamma_rank: usize,
    },
    #[error("{which} has rank {found}, expected {expected}")]
    Rank {
        which: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("cocycle condition violated: q(δ{i}, δ{j}) = {value} is not in Gamma")]
    CocycleConditionViolated {
        i: usize,
        j: usize,
        first: Vec<Rational>,
        second: Vec<Rational>,
        value: QuadElem,
    },
    #[error("zero vector does not span a line")]
    ZeroVector,
}

fn same_field(x: &QuadElem, f: QuadField) -> Result<(), FieldError> {
    if x.field() != f {
        return Err(FieldError::FieldMismatch(
            f.to_string(),
            x.field().to_string(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisPoint {
    pub a: QuadElem,
    pub b: QuadElem,
    pub c: QuadElem,
}

impl HeisPoint {
    pub fn new(a: QuadElem, b: QuadElem, c: QuadElem) -> Result<Self, FieldError> {
        let f = a.field();
        same_field(&b, f)?;
        same_field(&c, f)?;
        Ok(HeisPoint { a, b, c })
    }

    pub fn identity(f: QuadField) -> Self {
        HeisPoint {
            a: f.zero(),
            b: f.zero(),
            c: f.zero(),
        }
    }

    pub fn field(&self) -> QuadField {
        self.a.field()
    }

    pub fn mul(&self, h: &HeisPoint) -> Result<HeisPoint, FieldError> {
        same_field(&h.a, self.field())?;
        Ok(HeisPoint {
            a: &self.a + &h.a,
            b: &self.b + &h.b,
            c: &(&self.c + &h.c) + &(&self.a * &h.b),
        })
    }

    pub fn inv(&self) -> HeisPoint {
        HeisPoint {
            a: -&self.a,
            b: -&self.b,
            c: &(&self.a * &self.b) - &self.c,
        }
    }

    /// gⁿ = (na, nb, nc + n(n−1)/2·ab), valid for all integers n.
    pub fn pow(&self, n: &BigInt) -> HeisPoint {
        let nq = Rational::from_integer(n.clone());
        let tri = Rational::new(n * (n - BigInt::one()), BigInt::from(2));
        HeisPoint {
            a: self.a.scale(&nq),
            b: self.b.scale(&nq),
            c: &self.c.scale(&nq) + &(&self.a * &self.b).scale(&tri),
        }
    }

    /// Group commutator g h g⁻¹ h⁻¹.
    pub fn commutator(&self, h: &HeisPoint) -> Result<HeisPoint, FieldError> {
        self.mul(h)?.mul(&self.inv())?.mul(&h.inv())
    }

    pub fn is_central(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Projection to the abelianization K², read in ℚ⁴.
    pub fn abelian_part(&self) -> Vec<Rational> {
        k2_to_q4(&self.a, &self.b)
    }

    pub fn log(&self) -> LieVector {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        LieVector {
            x: self.a.clone(),
            y: self.b.clone(),
            z: &self.c - &(&self.a * &self.b).scale(&half),
        }
    }
}

pub fn heis_mul(g: &HeisPoint, h: &HeisPoint) -> Result<HeisPoint, FieldError> {
    g.mul(h)
}

pub fn heis_inv(g: &HeisPoint) -> HeisPoint {
    g.inv()
}

pub fn heis_log(g: &HeisPoint) -> LieVector {
    g.log()
}

pub fn heis_exp(x: &LieVector) -> HeisPoint {
    x.exp()
}

/// An element of the Lie algebra 𝔤 = K³ with center 𝔷 = {(0, 0, z)}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieVector {
    pub x: QuadElem,
    pub y: QuadElem,
    pub z: QuadElem,
}

impl LieVector {
    pub fn new(x: QuadElem, y: QuadElem, z: QuadElem) -> Result<Self, FieldError> {
        let f = x.field();
        same_field(&y, f)?;
        same_field(&z, f)?;
        Ok(LieVector { x, y, z })
    }

    pub fn zero(f: QuadField) -> Self {
        LieVector {
            x: f.zero(),
            y: f.zero(),
            z: f.zero(),
        }
    }

    pub fn field(&self) -> QuadField {
        self.x.field()
    }

    pub fn add(&self, o: &LieVector) -> Result<LieVector, FieldError> {
        Ok(LieVector {
            x: self.x.try_add(&o.x)?,
            y: self.y.try_add(&o.y)?,
            z: self.z.try_add(&o.z)?,
        })
    }

    pub fn scale(&self, k: &QuadElem) -> LieVector {
        LieVector {
            x: &self.x * k,
            y: &self.y * k,
            z: &self.z * k,
        }
    }

    /// [(x₁,y₁,z₁), (x₂,y₂,z₂)] = (0, 0, x₁y₂ − y₁x₂).
    pub fn bracket(&self, o: &LieVector) -> Result<LieVector, FieldError> {
        let f = self.field();
        same_field(&o.x, f)?;
        Ok(LieVector {
            x: f.zero(),
            y: f.zero(),
            z: &(&self.x * &o.y) - &(&self.y * &o.x),
        })
    }

    pub fn exp(&self) -> HeisPoint {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        HeisPoint {
            a: self.x.clone(),
            b: self.y.clone(),
            c: &self.z + &(&self.x * &self.y).scale(&half),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

/// Baker–Campbell–Hausdorff for a 2-step nilpotent algebra: X + Y + ½[X, Y].
/// The series terminates, so exp(bch(X, Y)) = exp(X)·exp(Y) exactly.
pub fn bch(x: &LieVector, y: &LieVector) -> Result<LieVector, FieldError> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let br = x.bracket(y)?;
    let mut out = x.add(y)?;
    out.z = &out.z + &br.z.scale(&half);
    Ok(out)
}

pub fn k2_to_q4(a: &QuadElem, b: &QuadElem) -> Vec<Rational> {
    vec![a.a.clone(), a.b.clone(), b.a.clone(), b.b.clone()]
}

pub fn q4_to_k2(f: QuadField, v: &[Rational]) -> (QuadElem, QuadElem) {
    (
        f.elem(v[0].clone(), v[1].clone()),
        f.elem(v[2].clone(), v[3].clone()),
    )
}

pub fn k_to_q2(c: &QuadElem) -> Vec<Rational> {
    vec![c.a.clone(), c.b.clone()]
}

pub fn q2_to_k(f: QuadField, v: &[Rational]) -> QuadElem {
    f.elem(v[0].clone(), v[1].clone())
}

/// Multiplication by √−d on K² in ℚ⁴ coordinates.
pub fn times_sqrt_q4(f: QuadField, v: &[Rational]) -> Vec<Rational> {
    let (a, b) = q4_to_k2(f, v);
    k2_to_q4(&a.times_sqrt(), &b.times_sqrt())
}

/// The 4×4 rational matrix of multiplication by √−d on ℚ⁴ (acting on columns).
pub fn sqrt_matrix_q4(f: QuadField) -> Vec<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = linalg::identity(4)
        .iter()
        .map(|e| times_sqrt_q4(f, e))
        .collect();
    linalg::transpose(&cols)
}

/// The bracket cocycle q((a, b), (a′, b′)) = ab′ − ba′ on ℚ⁴ vectors.
pub fn cocycle(f: QuadField, v: &[Rational], w: &[Rational]) -> QuadElem {
    let (a, b) = q4_to_k2(f, v);
    let (a2, b2) = q4_to_k2(f, w);
    &(&a * &b2) - &(&b * &a2)
}

/// A validated cocompact lattice Λ ⊂ G(K) with its derived invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisLattice {
    pub(crate) field: QuadField,
    pub(crate) generators: Vec<HeisPoint>,
    pub(crate) delta: ZLattice,
    pub(crate) gamma: ZLattice,
    /// Elements of Λ projecting onto the canonical basis of Delta.
    pub(crate) delta_lifts: Vec<HeisPoint>,
    /// q(δᵢ, δⱼ) on Delta's canonical basis.
    pub(crate) cocycle_matrix: Vec<Vec<QuadElem>>,
}

impl HeisLattice {
    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn generators(&self) -> &[HeisPoint] {
        &self.generators
    }

    /// Image of Λ in the abelianization, a lattice in ℚ⁴.
    pub fn delta(&self) -> &ZLattice {
        &self.delta
    }

    /// Λ ∩ Z(G), a lattice in ℚ².
    pub fn gamma(&self) -> &ZLattice {
        &self.gamma
    }

    pub fn delta_lifts(&self) -> &[HeisPoint] {
        &self.delta_lifts
    }

    pub fn cocycle_matrix(&self) -> &[Vec<QuadElem>] {
        &self.cocycle_matrix
    }

    /// Membership of a group element in Λ: its abelian part must lie in
    /// Delta, and after dividing off the normal-form lift the remaining
    /// central element must lie in Gamma.
    pub fn contains(&self, g: &HeisPoint) -> Result<bool, HeisError> {
        same_field(&g.a, self.field)?;
        let Some(coords) = self.delta.coordinates(&g.abelian_part())? else {
            return Ok(false);
        };
        let nf = normal_form_word(&self.delta_lifts, &coords)?;
        let rest = g.mul(&nf.inv())?;
        debug_assert!(rest.is_central());
        Ok(self.gamma.member(&k_to_q2(&rest.c))?)
    }
}

/// g₁^{n₁}·g₂^{n₂}⋯ in the given order.
fn normal_form_word(gens: &[HeisPoint], exps: &[BigInt]) -> Result<HeisPoint, FieldError> {
    let f = gens
        .first()
        .map(|g| g.field())
        .unwrap_or_else(QuadField::gaussian);
    gens.iter()
        .zip(exps)
        .try_fold(HeisPoint::identity(f), |acc, (g, n)| acc.mul(&g.pow(n)))
}

/// Validates a finitely generated subgroup as a cocompact lattice.
///
/// Delta is the ℤ-span of the generators' abelian parts. The central lattice
/// Λ ∩ Z(G) is generated by the central parts of central generators, the
/// commutator values q(δᵢ, δⱼ), and the central defects of the normal-form
/// words attached to a ℤ-basis of the relation module {n : Σ nᵢδᵢ = 0}.
pub fn validate_lattice(gens: &[HeisPoint]) -> Result<HeisLattice, HeisError> {
    let first = gens.first().ok_or(HeisError::NoGenerators)?;
    let field = first.field();
    for g in gens {
        same_field(&g.a, field)?;
        same_field(&g.b, field)?;
        same_field(&g.c, field)?;
    }
    let projections: Vec<Vec<Rational>> = gens.iter().map(|g| g.abelian_part()).collect();
    let delta = ZLattice::from_generators(4, &projections)?;

    let mut central: Vec<Vec<Rational>> = Vec::new();
    for g in gens.iter().filter(|g| g.is_central()) {
        central.push(k_to_q2(&g.c));
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            central.push(k_to_q2(&cocycle(field, &projections[i], &projections[j])));
        }
    }
    let scale = linalg::common_denominator(projections.iter().flatten());
    let s = Rational::from_integer(scale);
    let int_proj: Vec<Vec<BigInt>> = projections
        .iter()
        .map(|r| r.iter().map(|x| (x * &s).to_integer()).collect())
        .collect();
    for relation in linalg::integer_left_kernel(&int_proj) {
        let w = normal_form_word(gens, &relation)?;
        debug_assert!(w.is_central());
        central.push(k_to_q2(&w.c));
    }
    let gamma = ZLattice::from_generators(2, &central)?;

    if delta.rank() != 4 || gamma.rank() != 2 {
        return Err(HeisError::NotCocompact {
            delta_rank: delta.rank(),
            gamma_rank: gamma.rank(),
        });
    }

    // express each canonical Delta basis vector through the generators
    let mut delta_lifts = Vec::with_capacity(4);
    for b in delta.basis() {
        let lift = integer_preimage(b, &int_proj, &s)
            .expect("basis vectors of Delta are integer combinations of the generators");
        delta_lifts.push(normal_form_word(gens, &lift)?);
    }

    let cocycle_matrix = delta
        .basis()
        .iter()
        .map(|v| delta.basis().iter().map(|w| cocycle(field, v, w)).collect())
        .collect();

    Ok(HeisLattice {
        field,
        generators: gens.to_vec(),
        delta,
        gamma,
        delta_lifts,
        cocycle_matrix,
    })
}

/// An integer vector n with Σ nᵢ·projᵢ = target.
fn integer_preimage(
    target: &[Rational],
    int_proj: &[Vec<BigInt>],
    scale: &Rational,
) -> Option<Vec<BigInt>> {
    // Solve n · P = t over ℤ with P = int_proj, t = scale·target, via SNF:
    // U P V = D, so n = y U with y D = t V.
    let t: Vec<BigInt> = target.iter().map(|x| (x * scale).to_integer()).collect();
    let snf = linalg::smith_normal_form(int_proj);
    let tv: Vec<BigInt> = (0..snf.v[0].len())
        .map(|j| t.iter().zip(&snf.v).map(|(a, row)| a * &row[j]).sum())
        .collect();
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); int_proj.len()];
    for (j, tj) in tv.iter().enumerate() {
        match diag.get(j) {
            Some(d) if !d.is_zero() => {
                if !(tj % d).is_zero() {
                    return None;
                }
                y[j] = tj / d;
            }
            _ => {
                if !tj.is_zero() {
                    return None;
                }
            }
        }
    }
    let n: Vec<BigInt> = (0..int_proj.len())
        .map(|k| y.iter().zip(&snf.u).map(|(a, row)| a * &row[k]).sum())
        .collect();
    Some(n)
}

/// Base lattice, fibre lattice and cocycle of the Iwasawa bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IwasawaData {
    pub field: QuadField,
    /// Base-torus lattice in K² ≅ ℚ⁴.
    pub delta: ZLattice,
    /// Fibre lattice in K ≅ ℚ².
    pub gamma: ZLattice,
}

impl IwasawaData {
    /// q(v, w) for v, w ∈ ℚ⁴.
    pub fn q(&self, v: &[Rational], w: &[Rational]) -> QuadElem {
        cocycle(self.field, v, w)
    }

    /// q expanded over ℚ: `(re, im)` with q(v, w) = vᵀ·re·w + (vᵀ·im·w)·√−d
    /// in the standard coordinates of ℚ⁴.
    pub fn q_matrices(&self) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
        let e = linalg::identity(4);
        let mut re = vec![vec![Rational::zero(); 4]; 4];
        let mut im = vec![vec![Rational::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let v = self.q(&e[i], &e[j]);
                re[i][j] = v.a;
                im[i][j] = v.b;
            }
        }
        (re, im)
    }

    /// q on the canonical basis of Delta.
    pub fn cocycle_on_basis(&self) -> Vec<Vec<QuadElem>> {
        let b = self.delta.basis();
        b.iter()
            .map(|v| b.iter().map(|w| self.q(v, w)).collect())
            .collect()
    }

    /// First basis pair (i < j) whose q-value leaves Gamma.
    pub fn cocycle_violation(&self) -> Option<(usize, usize, QuadElem)> {
        let b = self.delta.basis();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let v = self.q(&b[i], &b[j]);
                if !self.gamma.member(&k_to_q2(&v)).unwrap_or(false) {
                    return Some((i, j, v));
                }
            }
        }
        None
    }

    /// K-bilinearity of q on a basis: q(√−d·v, w) = √−d·q(v, w).
    pub fn is_k_bilinear(&self) -> bool {
        let b = self.delta.basis();
        b.iter().all(|v| {
            let sv = times_sqrt_q4(self.field, v);
            b.iter()
                .all(|w| self.q(&sv, w) == self.q(v, w).times_sqrt())
        })
    }
}

pub fn extract_iwasawa(l: &HeisLattice) -> IwasawaData {
    let data = IwasawaData {
        field: l.field,
        delta: l.delta.clone(),
        gamma: l.gamma.clone(),
    };
    debug_assert!(data.cocycle_violation().is_none());
    data
}

/// Builds Λ from exponentials of the lifts (δᵢ, 0) and of (0, 0, γⱼ), after
/// checking q(Λ²Δ) ⊆ Γ on a basis.
pub fn construct_iwasawa(
    delta: &ZLattice,
    gamma: &ZLattice,
    field: QuadField,
) -> Result<HeisLattice, HeisError> {
    if delta.ambient_dim() != 4 || delta.rank() != 4 {
        return Err(HeisError::Rank {
            which: "Delta",
            expected: 4,
            found: delta.rank(),
        });
    }
    if gamma.ambient_dim() != 2 || gamma.rank() != 2 {
        return Err(HeisError::Rank {
            which: "Gamma",
            expected: 2,
            found: gamma.rank(),
        });
    }
    let data = IwasawaData {
        field,
        delta: delta.clone(),
        gamma: gamma.clone(),
    };
    if let Some((i, j, value)) = data.cocycle_violation() {
        return Err(HeisError::CocycleConditionViolated {
            i,
            j,
            first: delta.basis()[i].clone(),
            second: delta.basis()[j].clone(),
            value,
        });
    }
    let mut gens = Vec::with_capacity(6);
    for v in delta.basis() {
        let (a, b) = q4_to_k2(field, v);
        gens.push(
            LieVector {
                x: a,
                y: b,
                z: field.zero(),
            }
            .exp(),
        );
    }
    for g in gamma.basis() {
        let z = q2_to_k(field, g);
        gens.push(
            LieVector {
                x: field.zero(),
                y: field.zero(),
                z,
            }
            .exp(),
        );
    }
    let lattice = validate_lattice(&gens)?;
    debug_assert_eq!(&lattice.delta, delta);
    debug_assert_eq!(&lattice.gamma, gamma);
    Ok(lattice)
}

/// Lift of a K-line to 𝔤 together with the bracket certificate showing that
/// the central extension splits over it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineSplitting {
    /// h(v), h(√−d·v) with h(w) = (w, 0).
    pub basis: [LieVector; 2],
    /// All brackets [h(w), h(w′)] between basis elements.
    pub brackets: Vec<LieVector>,
    /// q(λv, μv) on the ℚ-basis {v, √−d·v} of the line.
    pub restricted_q: Vec<QuadElem>,
}

impl LineSplitting {
    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(|b| b.is_zero())
    }

    pub fn q_vanishes(&self) -> bool {
        self.restricted_q.iter().all(|x| x.is_zero())
    }

    pub fn holds(&self) -> bool {
        self.is_abelian() && self.q_vanishes()
    }
}

pub fn split_over_line(data: &IwasawaData, v: &[Rational]) -> Result<LineSplitting, HeisError> {
    if v.len() != 4 {
        return Err(LatticeError::DimensionMismatch {
            expected: 4,
            found: v.len(),
        }
        .into());
    }
    if v.iter().all(|x| x.is_zero()) {
        return Err(HeisError::ZeroVector);
    }
    let f = data.field;
    let sv = times_sqrt_q4(f, v);
    let lift = |w: &[Rational]| {
        let (a, b) = q4_to_k2(f, w);
        LieVector {
            x: a,
            y: b,
            z: f.zero(),
        }
    };
    let basis = [lift(v), lift(&sv)];
    let vecs = [v.to_vec(), sv];
    let mut brackets = Vec::new();
    let mut restricted_q = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            brackets.push(basis[i].bracket(&basis[j])?);
            restricted_q.push(data.q(&vecs[i], &vecs[j]));
        }
    }
    Ok(LineSplitting {
        basis,
        brackets,
        restricted_q,
    })
}

/// Outcome of enumerating all words of bounded length in the generators and
/// their inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordOracleReport {
    pub max_len: usize,
    pub distinct_elements: usize,
    /// Lattice spanned by the central values of the central elements found.
    pub central_lattice: ZLattice,
    /// Every element found lies in Λ as predicted by the normal-form model.
    pub all_in_normal_form: bool,
}

/// Brute-force products of at most `max_len` generators and inverses.
/// Independent of the relation-module computation in [`validate_lattice`]:
/// it only uses the group law.
pub fn word_oracle(l: &HeisLattice, max_len: usize) -> Result<WordOracleReport, HeisError> {
    let mut letters: Vec<HeisPoint> = Vec::new();
    for g in &l.generators {
        letters.push(g.clone());
        letters.push(g.inv());
    }
    let mut seen: HashSet<HeisPoint> = HashSet::new();
    let id = HeisPoint::identity(l.field);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for x in &letters {
                let p = w.mul(x)?;
                if seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    let mut central = Vec::new();
    let mut all_in = true;
    for p in &seen {
        if p.is_central() {
            central.push(k_to_q2(&p.c));
        }
        if !l.contains(p)? {
            all_in = false;
        }
    }
    Ok(WordOracleReport {
        max_len,
        distinct_elements: seen.len(),
        central_lattice: ZLattice::from_generators(2, &central)?,
        all_in_normal_form: all_in,
    })
}
