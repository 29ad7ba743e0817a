// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Shared fixtures and independent oracles for the integration tests.

#![allow(dead_code)]

use epmat_core::RealMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn m(rows: &[&[f64]]) -> RealMatrix {
    RealMatrix::from_rows(rows).unwrap()
}

/// Three-node tridiagonal example with a signature-Jacobi structure.
pub fn tridiagonal_example() -> RealMatrix {
    m(&[&[0.0, -1.0, 0.0], &[-2.0, 0.0, -2.0], &[0.0, -1.0, 0.0]])
}

pub fn nilpotent() -> RealMatrix {
    m(&[&[0.0, 1.0], &[0.0, 0.0]])
}

pub fn similar_nilpotent() -> RealMatrix {
    m(&[&[1.0, 1.0], &[-1.0, -1.0]])
}

pub fn rotation(w: f64) -> RealMatrix {
    m(&[&[-1.0, w], &[-w, -1.0]])
}

pub fn block_example() -> RealMatrix {
    m(&[&[-4.0, 1.0, -6.0], &[2.0, -5.0, 6.0], &[0.0, 0.0, -9.0]])
}

pub fn eigvec_t() -> RealMatrix {
    m(&[&[3.0, 3.0, -3.0], &[3.0, -1.0, -1.0], &[1.0, 1.0, 1.0]])
}

/// `T diag(0, 12, 18) T^{-1}`.
pub fn diagonalized_example() -> RealMatrix {
    m(&[&[15.0, -9.0, -18.0], &[1.0, 3.0, -12.0], &[-1.0, -3.0, 12.0]])
}

pub fn projection() -> RealMatrix {
    m(&[&[4.0, -3.0, -3.0], &[0.0, 1.0, -3.0], &[0.0, -1.0, 3.0]]).scale(0.25)
}

pub fn leading_block() -> RealMatrix {
    m(&[&[15.0, -9.0], &[1.0, 3.0]])
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> RealMatrix {
    let data = (0..n * n).map(|_| rng.random_range(lo..hi)).collect();
    RealMatrix::new(n, n, data).unwrap()
}

pub fn normal_matrix(rng: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    let data = (0..n * n).map(|_| StandardNormal.sample(rng)).collect();
    RealMatrix::new(n, n, data).unwrap()
}

/// `B B^T + n I`, a P-matrix by construction.
pub fn random_p_matrix(rng: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    let b = uniform_matrix(rng, n, -1.0, 1.0);
    b.matmul(&b.transpose()).shift_diagonal(n as f64)
}

pub fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.random_range(0..=i));
    }
    p
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(a: &[Vec<f64>]) -> f64 {
    let k = a.len();
    match k {
        0 => 1.0,
        1 => a[0][0],
        _ => (0..k)
            .map(|j| {
                let sub: Vec<Vec<f64>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| *v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[0][j] * cofactor_det(&sub)
            })
            .sum(),
    }
}

/// Minor by cofactor expansion on 1-based index lists.
pub fn cofactor_minor(a: &RealMatrix, rows: &[usize], cols: &[usize]) -> f64 {
    let sub: Vec<Vec<f64>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| a[(i - 1, j - 1)]).collect())
        .collect();
    cofactor_det(&sub)
}

/// All k-subsets of 1..=n by brute force over bitmasks, sorted.
pub fn brute_subsets(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();
    out.sort();
    out
}

/// Taylor series for `exp(A t)` with scaling and squaring, as an oracle.
pub fn taylor_expm(a: &RealMatrix, t: f64) -> RealMatrix {
    let n = a.nrows();
    let nrm = a.max_abs() * n as f64 * t.abs();
    let s = if nrm > 0.5 { (nrm / 0.5).log2().ceil() as i32 } else { 0 };
    let x = a.scale(t / 2f64.powi(s));
    let mut term = RealMatrix::identity(n);
    let mut sum = RealMatrix::identity(n);
    for j in 1..40 {
        term = term.matmul(&x).scale(1.0 / j as f64);
        sum = sum.add(&term);
    }
    for _ in 0..s {
        sum = sum.matmul(&sum);
    }
    sum
}

pub mod strategies {
    use epmat_core::RealMatrix;
    use proptest::prelude::*;

    /// Square matrices of order `lo..=hi` with entries in `[-r, r]`.
    pub fn square(lo: usize, hi: usize, r: f64) -> impl Strategy<Value = RealMatrix> {
        (lo..=hi).prop_flat_map(move |n| {
            proptest::collection::vec(-r..r, n * n)
                .prop_map(move |d| RealMatrix::new(n, n, d).unwrap())
        })
    }

    /// Pairs of same-order square matrices.
    pub fn square_pair(lo: usize, hi: usize, r: f64) -> impl Strategy<Value = (RealMatrix, RealMatrix)> {
        (lo..=hi).prop_flat_map(move |n| {
            (proptest::collection::vec(-r..r, n * n), proptest::collection::vec(-r..r, n * n)).prop_map(
                move |(a, b)| (RealMatrix::new(n, n, a).unwrap(), RealMatrix::new(n, n, b).unwrap()),
            )
        })
    }
}

pub fn rel_dev(a: &RealMatrix, b: &RealMatrix) -> f64 {
    a.max_abs_diff(b) / (1.0 + a.max_abs().max(b.max_abs()))
}
