//! Dense univariate polynomials over ℚ, coefficients in ascending degree order.
//!
//! Only what the real algebraic field backend needs: Euclidean division,
//! extended gcd, Sturm sequences and an exact irreducibility test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

pub(crate) type Poly = Vec<Rational>;

pub(crate) fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of a trimmed polynomial; `None` for the zero polynomial.
pub(crate) fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub(crate) fn sub(a: &[Rational], b: &[Rational]) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[Rational], b: &[Rational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by the nonzero polynomial `b`.
pub(crate) fn div_rem(a: &[Rational], b: &[Rational]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut rem: Poly = a.to_vec();
    trim(&mut rem);
    let mut quot = vec![Rational::zero(); rem.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let factor = &rem[dr] / &lead;
        let shift = dr - db;
        for (i, c) in b.iter().enumerate().take(db + 1) {
            rem[i + shift] -= &factor * c;
        }
        quot[shift] = factor;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub(crate) fn derivative(p: &[Rational]) -> Poly {
    let mut out: Poly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut out);
    out
}

fn make_monic(mut p: Poly) -> Poly {
    if let Some(d) = degree(&p) {
        let lead = p[d].clone();
        for c in p.iter_mut() {
            *c = &*c / &lead;
        }
    }
    p
}

/// Extended Euclid: returns `(g, s)` with `s·a ≡ g (mod m)` and `g = gcd(a, m)` monic.
pub(crate) fn gcd_inverse(a: &[Rational], m: &[Rational]) -> (Poly, Poly) {
    let mut r0: Poly = m.to_vec();
    let mut r1: Poly = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Poly = Vec::new();
    let mut s1: Poly = vec![Rational::one()];
    while degree(&r1).is_some() {
        let (q, r) = div_rem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    let d = degree(&r0)
        .map(|d| r0[d].clone())
        .unwrap_or_else(Rational::one);
    let s0: Poly = s0.into_iter().map(|c| c / &d).collect();
    (make_monic(r0), s0)
}

/// Sturm sequence p, p', -rem(p, p'), ...
pub(crate) fn sturm_sequence(p: &[Rational]) -> Vec<Poly> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if degree(&seq[n - 1]).is_none() {
            seq.pop();
            break;
        }
        let (_, r) = div_rem(&seq[n - 2], &seq[n - 1]);
        if degree(&r).is_none() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = eval(p, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in the half-open interval (lo, hi].
pub(crate) fn count_roots(p: &[Rational], lo: &Rational, hi: &Rational) -> usize {
    let seq = sturm_sequence(p);
    sign_changes(&seq, lo).saturating_sub(sign_changes(&seq, hi))
}

/// Integer multiple of `p` with coprime integer coefficients and positive leading term.
fn primitive_integer(p: &[Rational]) -> Vec<BigInt> {
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = p.iter().map(|c| (c * &den).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() {
        for c in ints.iter_mut() {
            *c = &*c / &content;
        }
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    ints
}

fn positive_divisors(n: u128) -> Vec<u128> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i: u128 = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Lagrange interpolation through `(xs[i], ys[i])` over ℚ.
fn interpolate(xs: &[i128], ys: &[i128]) -> Poly {
    let mut out: Poly = Vec::new();
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis: Poly = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, &xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = mul(
                &basis,
                &[Rational::from_integer(BigInt::from(-xj)), Rational::one()],
            );
            denom *= Rational::from_integer(BigInt::from(xi - xj));
        }
        let scale = Rational::from_integer(BigInt::from(yi)) / denom;
        let term: Poly = basis.into_iter().map(|c| c * &scale).collect();
        out = sub(&out, &term.into_iter().map(|c| -c).collect::<Vec<_>>());
    }
    trim(&mut out);
    out
}

/// Upper bound on divisor combinations tried by the Kronecker search.
const KRONECKER_BUDGET: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Irreducibility {
    Irreducible,
    Reducible,
    /// The Kronecker search would exceed its combination budget.
    Undecided,
}

/// Exact irreducibility over ℚ by Kronecker's factor search.
///
/// By Gauss's lemma it suffices to look for integer factors of degree
/// `1..=n/2` of the primitive integer multiple; a factor of degree `k` is
/// pinned down by its values at `k + 1` integer points, each of which must
/// divide the corresponding value of the polynomial.
pub(crate) fn irreducibility(p: &[Rational]) -> Irreducibility {
    let n = match degree(p) {
        None | Some(0) => return Irreducibility::Reducible,
        Some(1) => return Irreducibility::Irreducible,
        Some(n) => n,
    };
    let f = primitive_integer(p);
    let fq: Poly = f
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect();
    let eval_int = |x: i128| -> Option<i128> {
        let mut acc = BigInt::zero();
        for c in f.iter().rev() {
            acc = acc * BigInt::from(x) + c;
        }
        acc.to_i128()
    };

    for k in 1..=n / 2 {
        // Pick k + 1 integer points with small nonzero values.
        let mut points: Vec<(i128, i128)> = Vec::new();
        let mut candidate: i128 = 0;
        let mut step = 0;
        while points.len() < k + 1 {
            let x = if step % 2 == 0 { candidate } else { -candidate };
            step += 1;
            if step % 2 == 0 {
                candidate += 1;
            }
            if points.iter().any(|(px, _)| *px == x) {
                continue;
            }
            match eval_int(x) {
                Some(0) => return Irreducibility::Reducible,
                Some(v) => points.push((x, v)),
                None => return Irreducibility::Undecided,
            }
        }
        let divisor_sets: Vec<Vec<i128>> = points
            .iter()
            .enumerate()
            .map(|(i, (_, v))| {
                let pos = positive_divisors(v.unsigned_abs());
                if i == 0 {
                    pos.into_iter().map(|d| d as i128).collect()
                } else {
                    pos.into_iter()
                        .flat_map(|d| [d as i128, -(d as i128)])
                        .collect()
                }
            })
            .collect();
        let combos: u128 = divisor_sets
            .iter()
            .map(|s| s.len() as u128)
            .try_fold(1u128, |acc, l| acc.checked_mul(l))
            .unwrap_or(u128::MAX);
        if combos > KRONECKER_BUDGET {
            return Irreducibility::Undecided;
        }
        let xs: Vec<i128> = points.iter().map(|(x, _)| *x).collect();
        let mut idx = vec![0usize; k + 1];
        loop {
            let ys: Vec<i128> = idx
                .iter()
                .enumerate()
                .map(|(i, &j)| divisor_sets[i][j])
                .collect();
            let cand = interpolate(&xs, &ys);
            if let Some(dc) = degree(&cand) {
                if dc >= 1 && cand.iter().all(|c| c.is_integer()) {
                    let (_, r) = div_rem(&fq, &cand);
                    if degree(&r).is_none() {
                        return Irreducibility::Reducible;
                    }
                }
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < divisor_sets[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    Irreducibility::Irreducible
}
