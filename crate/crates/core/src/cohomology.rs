//! Chevalley–Eilenberg algebras of nilpotent Lie algebras: exterior algebras
//! on degree-1 generators with a differential fixed on generators.
//!
//! Monomials are bitmasks over generator indices; a monomial's sign is that of
//! the increasing wedge product of its generators. Generators may carry a
//! bidegree (1,0) or (0,1), which turns the algebra into a double complex for
//! the Frölicher spectral sequence. Conjugate generators are independent
//! symbols, so the complexified model stays exact over ℚ.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{format_rational, parse_rational, FieldError, Rational};
use crate::linalg::{self, QMatrix};

/// Largest supported number of generators.
pub const MAX_GENERATORS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CEError {
    #[error("need between 1 and {MAX_GENERATORS} generators, got {0}")]
    GeneratorCount(usize),
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator index {0} out of range")]
    BadIndex(usize),
    #[error("d({generator}) contains the square of generator {index}")]
    RepeatedFactor { generator: String, index: usize },
    #[error("bidegree of {0:?} must be (1,0) or (0,1)")]
    BadBidegree(String),
    #[error("d({0}) is not the sum of a (1,0) and a (0,1) part")]
    NotBigraded(String),
    #[error("generator {0:?} carries no bidegree")]
    MissingBidegree(String),
    #[error("d² ≠ 0 on {0}")]
    SquareNonzero(String),
    #[error("structure constants must form an n×n×n array")]
    BadShape,
    #[error("structure constants not antisymmetric at ({i}, {j}, {k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("Jacobi identity fails for (e{i}, e{j}, e{k})")]
    JacobiViolated { i: usize, j: usize, k: usize },
    #[error("Lie algebra is not nilpotent")]
    NotNilpotent,
    #[error("elements of different algebras or degrees")]
    Mismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A degree-1 generator with an optional bidegree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
}

impl Generator {
    pub fn new(name: &str, bidegree: Option<(u32, u32)>) -> Self {
        Generator {
            name: name.to_string(),
            p: bidegree.map(|b| b.0),
            q: bidegree.map(|b| b.1),
        }
    }

    pub fn bidegree(&self) -> Option<(u32, u32)> {
        Some((self.p?, self.q?))
    }
}

/// Textual form `{generators: [{name, p, q}], d: {name: [[coeff, gen_i, gen_j], ...]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CEAlgebraSpec {
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub d: BTreeMap<String, Vec<(String, String, String)>>,
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    generators: Vec<Generator>,
    /// d(ξⁱ) as (pair mask, coefficient), pair masks with two bits.
    d: Vec<Vec<(u32, Rational)>>,
    basis: Vec<Vec<u32>>,
    position: HashMap<u32, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CEAlgebra {
    inner: Arc<Inner>,
}

/// Sign of a∧b relative to the sorted monomial a|b, or `None` if they share a factor.
fn wedge_sign(a: u32, b: u32) -> Option<i8> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps.is_multiple_of(2) { 1 } else { -1 })
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

fn basis_of_degree(n: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            rec(i + 1, n, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, 0, &mut out);
    out
}

impl CEAlgebra {
    /// `d[i]` lists terms `(c, j, k)` meaning d(ξⁱ) ∋ c·ξʲ∧ξᵏ. Rejects d² ≠ 0.
    pub fn new(
        generators: Vec<Generator>,
        d: Vec<Vec<(Rational, usize, usize)>>,
    ) -> Result<Self, CEError> {
        let n = generators.len();
        if n == 0 || n > MAX_GENERATORS {
            return Err(CEError::GeneratorCount(n));
        }
        let mut seen = HashMap::new();
        for g in &generators {
            if seen.insert(g.name.clone(), ()).is_some() {
                return Err(CEError::DuplicateName(g.name.clone()));
            }
            match (g.p, g.q) {
                (None, None) | (Some(1), Some(0)) | (Some(0), Some(1)) => {}
                _ => return Err(CEError::BadBidegree(g.name.clone())),
            }
        }
        if d.len() > n {
            return Err(CEError::BadIndex(d.len() - 1));
        }
        let mut dm: Vec<BTreeMap<u32, Rational>> = vec![BTreeMap::new(); n];
        for (i, terms) in d.into_iter().enumerate() {
            for (c, j, k) in terms {
                for idx in [j, k] {
                    if idx >= n {
                        return Err(CEError::BadIndex(idx));
                    }
                }
                if j == k {
                    return Err(CEError::RepeatedFactor {
                        generator: generators[i].name.clone(),
                        index: j,
                    });
                }
                let (c, j, k) = if j < k { (c, j, k) } else { (-c, k, j) };
                *dm[i]
                    .entry((1 << j) | (1 << k))
                    .or_insert_with(Rational::zero) += c;
            }
        }
        let d: Vec<Vec<(u32, Rational)>> = dm
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        let basis: Vec<Vec<u32>> = (0..=n).map(|k| basis_of_degree(n, k)).collect();
        let position = basis
            .iter()
            .flat_map(|b| b.iter().enumerate().map(|(i, &m)| (m, i)))
            .collect();
        let alg = CEAlgebra {
            inner: Arc::new(Inner {
                generators,
                d,
                basis,
                position,
            }),
        };
        for i in 0..n {
            if !alg.generator(i).d().d().is_zero() {
                return Err(CEError::SquareNonzero(alg.inner.generators[i].name.clone()));
            }
        }
        Ok(alg)
    }

    pub fn from_spec(spec: &CEAlgebraSpec) -> Result<Self, CEError> {
        let index: HashMap<&str, usize> = spec
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.as_str(), i))
            .collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| CEError::UnknownGenerator(name.to_string()))
        };
        let mut d = vec![Vec::new(); spec.generators.len()];
        for (name, terms) in &spec.d {
            let i = lookup(name)?;
            for (c, a, b) in terms {
                d[i].push((parse_rational(c)?, lookup(a)?, lookup(b)?));
            }
        }
        CEAlgebra::new(spec.generators.clone(), d)
    }

    pub fn to_spec(&self) -> CEAlgebraSpec {
        let names: Vec<&str> = self
            .inner
            .generators
            .iter()
            .map(|g| g.name.as_str())
            .collect();
        let d = self
            .inner
            .d
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_empty())
            .map(|(i, terms)| {
                let list = terms
                    .iter()
                    .map(|(m, c)| {
                        let mut it = bits(*m);
                        let (j, k) = (it.next().unwrap(), it.next().unwrap());
                        (
                            format_rational(c),
                            names[j].to_string(),
                            names[k].to_string(),
                        )
                    })
                    .collect();
                (names[i].to_string(), list)
            })
            .collect();
        CEAlgebraSpec {
            generators: self.inner.generators.clone(),
            d,
        }
    }

    pub fn num_generators(&self) -> usize {
        self.inner.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.inner.generators
    }

    /// Monomials of exterior degree `k`, lexicographic in generator indices.
    pub fn basis(&self, k: usize) -> &[u32] {
        self.inner.basis.get(k).map_or(&[], |b| b.as_slice())
    }

    pub fn dim(&self, k: usize) -> usize {
        self.basis(k).len()
    }

    pub fn zero(&self, degree: usize) -> DGElement {
        DGElement {
            algebra: self.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> DGElement {
        self.monomial(0, Rational::one())
    }

    pub fn generator(&self, i: usize) -> DGElement {
        self.monomial(1 << i, Rational::one())
    }

    pub fn named(&self, name: &str) -> Result<DGElement, CEError> {
        let i = self
            .inner
            .generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| CEError::UnknownGenerator(name.to_string()))?;
        Ok(self.generator(i))
    }

    fn monomial(&self, mask: u32, c: Rational) -> DGElement {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mask, c);
        }
        DGElement {
            algebra: self.clone(),
            degree: mask.count_ones() as usize,
            terms,
        }
    }

    /// Element with the given coefficients over `basis(degree)`.
    pub fn from_coeffs(&self, degree: usize, coeffs: &[Rational]) -> DGElement {
        let terms = self
            .basis(degree)
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&m, c)| (m, c.clone()))
            .collect();
        DGElement {
            algebra: self.clone(),
            degree,
            terms,
        }
    }

    fn d_monomial(&self, mask: u32) -> Vec<(u32, Rational)> {
        let mut out = Vec::new();
        for (t, i) in bits(mask).enumerate() {
            let prefix = mask & ((1u32 << i) - 1);
            let suffix = mask & !((1u32 << (i + 1)) - 1);
            for (pair, c) in &self.inner.d[i] {
                let Some(s1) = wedge_sign(prefix, *pair) else {
                    continue;
                };
                let Some(s2) = wedge_sign(prefix | pair, suffix) else {
                    continue;
                };
                let sign = if t % 2 == 0 { s1 * s2 } else { -s1 * s2 };
                let c = if sign > 0 { c.clone() } else { -c.clone() };
                out.push((prefix | pair | suffix, c));
            }
        }
        out
    }

    /// Matrix of d: Cᵏ → Cᵏ⁺¹ acting on coefficient columns.
    pub fn d_matrix(&self, k: usize) -> QMatrix {
        let rows = self.dim(k + 1);
        let cols = self.basis(k);
        let mut m = vec![vec![Rational::zero(); cols.len()]; rows];
        for (j, &mono) in cols.iter().enumerate() {
            for (target, c) in self.d_monomial(mono) {
                let i = self.inner.position[&target];
                m[i][j] += c;
            }
        }
        m
    }

    fn pdeg(&self, mask: u32) -> u32 {
        bits(mask)
            .map(|i| self.inner.generators[i].p.unwrap_or(0))
            .sum()
    }

    /// Checks that every generator has a bidegree and d = ∂ + ∂̄.
    pub fn check_bigraded(&self) -> Result<(), CEError> {
        for (i, g) in self.inner.generators.iter().enumerate() {
            let (p, _) = g
                .bidegree()
                .ok_or_else(|| CEError::MissingBidegree(g.name.clone()))?;
            for (pair, _) in &self.inner.d[i] {
                let pp = self.pdeg(*pair);
                if pp != p && pp != p + 1 {
                    return Err(CEError::NotBigraded(g.name.clone()));
                }
            }
        }
        Ok(())
    }
}

impl Serialize for CEAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CEAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let spec = CEAlgebraSpec::deserialize(d)?;
        CEAlgebra::from_spec(&spec).map_err(serde::de::Error::custom)
    }
}

/// A homogeneous element of a [`CEAlgebra`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DGElement {
    algebra: CEAlgebra,
    degree: usize,
    terms: BTreeMap<u32, Rational>,
}

impl DGElement {
    pub fn algebra(&self) -> &CEAlgebra {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficients over `basis(degree)`.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.algebra
            .basis(self.degree)
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    fn combine(&self, other: &DGElement, sign: &Rational) -> Result<DGElement, CEError> {
        if self.algebra != other.algebra
            || (self.degree != other.degree && !self.is_zero() && !other.is_zero())
        {
            return Err(CEError::Mismatch);
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(*m).or_insert_with(Rational::zero);
            *e += c * sign;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        let degree = if self.is_zero() {
            other.degree
        } else {
            self.degree
        };
        Ok(DGElement {
            algebra: self.algebra.clone(),
            degree,
            terms,
        })
    }

    pub fn add(&self, other: &DGElement) -> Result<DGElement, CEError> {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &DGElement) -> Result<DGElement, CEError> {
        self.combine(other, &-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> DGElement {
        let terms = if k.is_zero() {
            BTreeMap::new()
        } else {
            self.terms.iter().map(|(m, c)| (*m, c * k)).collect()
        };
        DGElement {
            algebra: self.algebra.clone(),
            degree: self.degree,
            terms,
        }
    }

    pub fn wedge(&self, other: &DGElement) -> Result<DGElement, CEError> {
        if self.algebra != other.algebra {
            return Err(CEError::Mismatch);
        }
        let mut terms: BTreeMap<u32, Rational> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(s) = wedge_sign(*a, *b) {
                    let c = x * y;
                    let e = terms.entry(a | b).or_insert_with(Rational::zero);
                    if s > 0 {
                        *e += c;
                    } else {
                        *e -= c;
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(DGElement {
            algebra: self.algebra.clone(),
            degree: self.degree + other.degree,
            terms,
        })
    }

    pub fn d(&self) -> DGElement {
        let mut terms: BTreeMap<u32, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (t, e) in self.algebra.d_monomial(*m) {
                *terms.entry(t).or_insert_with(Rational::zero) += c * e;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        DGElement {
            algebra: self.algebra.clone(),
            degree: self.degree + 1,
            terms,
        }
    }
}

impl fmt::Display for DGElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let gens = self.algebra.generators();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = if *m == 0 {
                    "1".to_string()
                } else {
                    bits(*m)
                        .map(|i| gens[i].name.as_str())
                        .collect::<Vec<_>>()
                        .join("∧")
                };
                if c.is_one() {
                    mono
                } else {
                    format!("({})·{}", format_rational(c), mono)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn is_closed(x: &DGElement) -> bool {
    x.d().is_zero()
}

/// Some y with dy = x, or `None` if x is not exact.
pub fn is_exact(x: &DGElement) -> Option<DGElement> {
    let alg = &x.algebra;
    if x.degree == 0 {
        return x.is_zero().then(|| alg.zero(0));
    }
    let m = alg.d_matrix(x.degree - 1);
    if m.first().is_none_or(|r| r.is_empty()) {
        return x.is_zero().then(|| alg.zero(x.degree - 1));
    }
    let y = linalg::solve(&m, &x.coeffs())?;
    Some(alg.from_coeffs(x.degree - 1, &y))
}

fn ranks(alg: &CEAlgebra) -> Vec<usize> {
    let n = alg.num_generators();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..n)
            .map(|k| s.spawn(move || linalg::rank(&alg.d_matrix(k))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("rank worker"))
            .collect()
    })
}

/// bₖ = dim ker dₖ − rank dₖ₋₁ for k = 0..n.
pub fn betti_numbers(alg: &CEAlgebra) -> Vec<usize> {
    let n = alg.num_generators();
    let r = ranks(alg);
    (0..=n)
        .map(|k| {
            let rank_out = r.get(k).copied().unwrap_or(0);
            let rank_in = if k == 0 { 0 } else { r[k - 1] };
            alg.dim(k) - rank_out - rank_in
        })
        .collect()
}

/// The Chevalley–Eilenberg algebra of the Lie algebra with brackets
/// [eᵢ, eⱼ] = Σₖ c[i][j][k]·eₖ: dξᵏ = −Σ_{i<j} cᵏᵢⱼ ξⁱ∧ξʲ.
pub fn ce_from_nilpotent_algebra(c: &[Vec<Vec<Rational>>]) -> Result<CEAlgebra, CEError> {
    let n = c.len();
    if c.iter()
        .any(|m| m.len() != n || m.iter().any(|r| r.len() != n))
    {
        return Err(CEError::BadShape);
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if c[i][j][k] != -c[j][i][k].clone() {
                    return Err(CEError::NotAntisymmetric { i, j, k });
                }
            }
        }
    }
    // [[eᵢ, eⱼ], eₖ] + cyclic = 0
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    let mut s = Rational::zero();
                    for l in 0..n {
                        s += &c[i][j][l] * &c[l][k][m];
                        s += &c[j][k][l] * &c[l][i][m];
                        s += &c[k][i][l] * &c[l][j][m];
                    }
                    if !s.is_zero() {
                        return Err(CEError::JacobiViolated { i, j, k });
                    }
                }
            }
        }
    }
    if !is_nilpotent(c) {
        return Err(CEError::NotNilpotent);
    }
    let generators = (1..=n)
        .map(|i| Generator::new(&format!("x{i}"), None))
        .collect();
    let d = (0..n)
        .map(|k| {
            let mut terms = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if !c[i][j][k].is_zero() {
                        terms.push((-c[i][j][k].clone(), i, j));
                    }
                }
            }
            terms
        })
        .collect();
    CEAlgebra::new(generators, d)
}

/// Lower central series 𝔤 ⊇ [𝔤,𝔤] ⊇ … reaches zero.
fn is_nilpotent(c: &[Vec<Vec<Rational>>]) -> bool {
    let n = c.len();
    let mut current: QMatrix = linalg::identity(n);
    for _ in 0..=n {
        if current.is_empty() {
            return true;
        }
        let mut next = Vec::new();
        for i in 0..n {
            for v in &current {
                // [eᵢ, v]
                let w: Vec<Rational> = (0..n)
                    .map(|k| (0..n).map(|j| &v[j] * &c[i][j][k]).sum())
                    .collect();
                next.push(w);
            }
        }
        let (r, _) = linalg::rref(&next);
        if r.len() == current.len() {
            return false;
        }
        current = r;
    }
    current.is_empty()
}

/// Generators α, β, γ of bidegree (1,0) and ᾱ, β̄, γ̄ of bidegree (0,1) with
/// dγ = α∧β, dγ̄ = ᾱ∧β̄ and all other generators closed.
pub fn iwasawa_model() -> CEAlgebra {
    iwasawa_model_signed(1)
}

/// The Iwasawa model with dγ = sign·α∧β and dγ̄ = sign·ᾱ∧β̄.
pub fn iwasawa_model_signed(sign: i64) -> CEAlgebra {
    let gens = vec![
        Generator::new("alpha", Some((1, 0))),
        Generator::new("beta", Some((1, 0))),
        Generator::new("gamma", Some((1, 0))),
        Generator::new("alphabar", Some((0, 1))),
        Generator::new("betabar", Some((0, 1))),
        Generator::new("gammabar", Some((0, 1))),
    ];
    let c = Rational::from_integer(sign.into());
    let d = vec![
        vec![],
        vec![],
        vec![(c.clone(), 0, 1)],
        vec![],
        vec![],
        vec![(c, 3, 4)],
    ];
    CEAlgebra::new(gens, d).expect("valid model")
}

/// d = 0 on `n` generators; with `bigraded`, the first half have bidegree
/// (1,0) and the rest (0,1).
pub fn abelian_model(n: usize, bigraded: bool) -> Result<CEAlgebra, CEError> {
    let gens = (0..n)
        .map(|i| {
            let b = bigraded.then_some(if i < n / 2 { (1, 0) } else { (0, 1) });
            Generator::new(&format!("x{}", i + 1), b)
        })
        .collect();
    CEAlgebra::new(gens, Vec::new())
}

fn structure_tensor(n: usize, brackets: &[(usize, usize, usize, i64)]) -> Vec<Vec<Vec<Rational>>> {
    let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
    for &(i, j, k, v) in brackets {
        c[i][j][k] = Rational::from_integer(v.into());
        c[j][i][k] = -Rational::from_integer(v.into());
    }
    c
}

/// The real Heisenberg algebra: [e₁, e₂] = e₃.
pub fn heisenberg3_constants() -> Vec<Vec<Vec<Rational>>> {
    structure_tensor(3, &[(0, 1, 2, 1)])
}

/// The complex Heisenberg algebra over ℂ = ℝ ⊕ iℝ as a real algebra, basis
/// (x₁, x₂, y₁, y₂, z₁, z₂) with [x, y] = z computed by complex multiplication.
pub fn real_iwasawa_constants() -> Vec<Vec<Vec<Rational>>> {
    structure_tensor(
        6,
        &[(0, 2, 4, 1), (1, 3, 4, -1), (0, 3, 5, 1), (1, 2, 5, 1)],
    )
}

/// Dimensions E_r^{p,q}, indexed `dims[p][q]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Page {
    pub r: usize,
    pub dims: Vec<Vec<usize>>,
}

impl Page {
    pub fn total(&self) -> usize {
        self.dims.iter().flatten().sum()
    }

    /// Σ_{p+q=k} dim E^{p,q}.
    pub fn total_in_degree(&self, k: usize) -> usize {
        self.dims
            .iter()
            .enumerate()
            .flat_map(|(p, row)| row.iter().enumerate().map(move |(q, v)| (p + q, *v)))
            .filter(|(deg, _)| *deg == k)
            .map(|(_, v)| v)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrolicherReport {
    pub pages: Vec<Page>,
    /// The page at which the sequence has certainly stabilized.
    pub limit: Page,
    pub betti: Vec<usize>,
}

impl FrolicherReport {
    pub fn degenerates_at_e1(&self) -> bool {
        self.pages.first().is_some_and(|p| {
            *p == Page {
                r: 1,
                ..self.limit.clone()
            }
        })
    }
}

struct Filtration<'a> {
    alg: &'a CEAlgebra,
    max_p: i64,
}

impl Filtration<'_> {
    /// Basis vectors (in Cᵏ coordinates) of Z_r^p = {x ∈ FᵖCᵏ : dx ∈ F^{p+r}}.
    fn z(&self, r: i64, p: i64, k: usize) -> QMatrix {
        let alg = self.alg;
        let basis = alg.basis(k);
        let in_fp: Vec<usize> = (0..basis.len())
            .filter(|&i| alg.pdeg(basis[i]) as i64 >= p)
            .collect();
        if in_fp.is_empty() {
            return Vec::new();
        }
        let embed = |coords: &[Rational]| {
            let mut v = vec![Rational::zero(); basis.len()];
            for (&i, c) in in_fp.iter().zip(coords) {
                v[i] = c.clone();
            }
            v
        };
        let d = alg.d_matrix(k);
        let target = alg.basis(k + 1);
        let eqs: QMatrix = target
            .iter()
            .zip(&d)
            .filter(|(m, _)| (alg.pdeg(**m) as i64) < p + r)
            .map(|(_, row)| in_fp.iter().map(|&i| row[i].clone()).collect())
            .collect();
        if eqs.is_empty() {
            return in_fp
                .iter()
                .map(|&i| {
                    let mut v = vec![Rational::zero(); basis.len()];
                    v[i] = Rational::one();
                    v
                })
                .collect();
        }
        linalg::nullspace(&eqs).iter().map(|c| embed(c)).collect()
    }

    fn page_entry(&self, r: i64, p: i64, k: usize) -> usize {
        let zr = self.z(r, p, k);
        if zr.is_empty() {
            return 0;
        }
        let mut denom = self.z(r - 1, p + 1, k);
        if k > 0 {
            let d = self.alg.d_matrix(k - 1);
            for y in self.z(r - 1, p - r + 1, k - 1) {
                denom.push(linalg::mat_vec(&d, &y));
            }
        }
        linalg::rank(&zr) - linalg::rank(&denom)
    }

    fn page(&self, r: usize) -> Page {
        let n = self.alg.num_generators();
        let max_q = n as i64 - self.max_p;
        let dims = (0..=self.max_p)
            .map(|p| {
                (0..=max_q)
                    .map(|q| self.page_entry(r as i64, p, (p + q) as usize))
                    .collect()
            })
            .collect();
        Page { r, dims }
    }
}

/// Pages E₁ … E_{r_max} of the spectral sequence of the filtration by p.
pub fn frolicher_pages(alg: &CEAlgebra, r_max: usize) -> Result<FrolicherReport, CEError> {
    alg.check_bigraded()?;
    let max_p = alg.generators().iter().filter(|g| g.p == Some(1)).count() as i64;
    let f = Filtration { alg, max_p };
    let pages = (1..=r_max).map(|r| f.page(r)).collect();
    // the filtration has length max_p + 1, so E_r is final once r > max_p
    let limit = f.page(max_p as usize + 1);
    Ok(FrolicherReport {
        pages,
        limit,
        betti: betti_numbers(alg),
    })
}
