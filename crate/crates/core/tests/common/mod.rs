//! Helpers shared by the integration tests.
#![allow(dead_code)]

use iwasawa::field::{rational, Rational};
use iwasawa::linalg::{QMatrix, ZMatrix};
use num_bigint::BigInt;
use rand::Rng;

pub fn qv(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rational(x)).collect()
}

pub fn qm(rows: &[Vec<i64>]) -> QMatrix {
    rows.iter().map(|r| qv(r)).collect()
}

pub fn zm(rows: &[Vec<i64>]) -> ZMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// A product of `steps` random elementary integer row operations and row
/// swaps applied to the identity.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    if n < 2 {
        return u;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        if rng.gen_bool(0.2) {
            u.swap(i, j);
        } else {
            let k = rng.gen_range(-2..=2);
            let src = u[j].clone();
            for (x, y) in u[i].iter_mut().zip(&src) {
                *x += k * y;
            }
        }
    }
    u
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

/// Integer row combinations `u · rows`.
pub fn combine(u: &[Vec<i64>], rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    u.iter()
        .map(|coeffs| {
            let mut out = vec![rational(0); rows[0].len()];
            for (c, r) in coeffs.iter().zip(rows) {
                for (o, x) in out.iter_mut().zip(r) {
                    *o += rational(*c) * x;
                }
            }
            out
        })
        .collect()
}
