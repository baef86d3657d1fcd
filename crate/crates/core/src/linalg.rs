//! Dense exact linear algebra over ℚ and ℤ.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Everything here is exact; sizes in
//! this crate stay small (at most a few dozen rows and columns), so plain
//! Gaussian elimination is enough.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::Rational;

pub type QMatrix = Vec<Vec<Rational>>;
pub type ZMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn zidentity(n: usize) -> ZMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let Some(first) = m.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> QMatrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .map(|(x, brow)| x * &brow[j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub fn zmat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> ZMatrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

/// `m · v` for a column vector `v`.
pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Row vector times matrix, `v · m`.
pub fn vec_mat(v: &[Rational], m: &[Vec<Rational>]) -> Vec<Rational> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| v.iter().zip(m).map(|(a, row)| a * &row[j]).sum())
        .collect()
}

pub fn to_rational(m: &[Vec<BigInt>]) -> QMatrix {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form and the pivot columns.
pub fn rref(m: &[Vec<Rational>]) -> (QMatrix, Vec<usize>) {
    let mut a: QMatrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel {x : m·x = 0}, one vector per free column.
pub fn nullspace(m: &[Vec<Rational>]) -> QMatrix {
    let cols = m.first().map_or(0, |r| r.len());
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// One solution of m·x = b with free variables set to zero, if consistent.
pub fn solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = m.first().map_or(0, |r| r.len());
    let aug: QMatrix = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<QMatrix> {
    let n = m.len();
    let aug: QMatrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, e)| row.iter().cloned().chain(e).collect())
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
    }
    det
}

pub fn zdet(m: &[Vec<BigInt>]) -> BigInt {
    det(&to_rational(m)).to_integer()
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(entries: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    entries
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Row-style Hermite normal form of the ℤ-row-span: echelon, positive
/// pivots, entries above each pivot reduced into [0, pivot). Zero rows are dropped.
pub fn hermite_rows(m: &[Vec<BigInt>]) -> ZMatrix {
    let mut a: ZMatrix = m
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // smallest nonzero entry in column c at or below row r
            let best = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(best) = best else { break };
            a.swap(r, best);
            let mut done = true;
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = a[r].clone();
        for i in 0..r {
            let q = a[i][c].div_floor(&pivot_row[c]);
            if q.is_zero() {
                continue;
            }
            for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &q * p;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Smith normal form with transforms: `d = u · m · v`, `u`, `v` unimodular,
/// `d` diagonal with nonnegative entries and `d[i][i] | d[i+1][i+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub u: ZMatrix,
    pub d: ZMatrix,
    pub v: ZMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Smith {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: ZMatrix = m.to_vec();
    let mut u = zidentity(rows);
    let mut v = zidentity(cols);

    fn row_axpy(a: &mut ZMatrix, dst: usize, src: usize, q: &BigInt) {
        let s = a[src].clone();
        for (x, y) in a[dst].iter_mut().zip(&s) {
            *x -= q * y;
        }
    }
    fn col_axpy(a: &mut ZMatrix, dst: usize, src: usize, q: &BigInt) {
        for row in a.iter_mut() {
            let y = row[src].clone();
            row[dst] -= q * y;
        }
    }
    fn col_swap(a: &mut ZMatrix, i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    for t in 0..rows.min(cols) {
        loop {
            // move the smallest nonzero entry of the trailing block to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                // trailing block is zero
                return Smith { u, d: a, v };
            };
            a.swap(t, bi);
            u.swap(t, bi);
            col_swap(&mut a, t, bj);
            col_swap(&mut v, t, bj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let offending =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match offending {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    Smith { u, d: a, v }
}

/// ℤ-basis of the integer left kernel {x ∈ ℤⁿ : x·m = 0} of an n×k integer matrix.
pub fn integer_left_kernel(m: &[Vec<BigInt>]) -> ZMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    let snf = smith_normal_form(m);
    let r = snf.rank();
    snf.u[r..].to_vec()
}
