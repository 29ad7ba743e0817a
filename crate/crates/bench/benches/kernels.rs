// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use epmat_core::ep::{falsify_ep, TimeGrid};
use epmat_core::{
    add_compound, classify_ep, expm, is_p_matrix, mult_compound, solve_enumerate, EpOptions, LCPInstance,
    RealMatrix, RealVector,
};

/// Deterministic dense test matrix with entries in `[-1, 1)`.
fn dense(n: usize, seed: u64) -> RealMatrix {
    let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let data = (0..n * n)
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x >> 11) as f64 / (1u64 << 52) as f64 - 1.0
        })
        .collect();
    RealMatrix::new(n, n, data).unwrap()
}

fn p_matrix(n: usize) -> RealMatrix {
    let b = dense(n, 3);
    b.matmul(&b.transpose()).shift_diagonal(n as f64)
}

fn bench_expm(c: &mut Criterion) {
    let mut g = c.benchmark_group("expm");
    for n in [4, 8, 16, 32] {
        let a = dense(n, 1).scale(4.0);
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| expm(black_box(a), 1.0)));
    }
    g.finish();
}

fn bench_compounds(c: &mut Criterion) {
    let mut g = c.benchmark_group("compound");
    for (n, k) in [(6, 3), (8, 4), (10, 5)] {
        let a = dense(n, 2);
        g.bench_with_input(BenchmarkId::new("multiplicative", format!("{n}/{k}")), &a, |b, a| {
            b.iter(|| mult_compound(black_box(a), k))
        });
        g.bench_with_input(BenchmarkId::new("additive", format!("{n}/{k}")), &a, |b, a| {
            b.iter(|| add_compound(black_box(a), k))
        });
    }
    g.finish();
}

fn bench_p_decider(c: &mut Criterion) {
    let mut g = c.benchmark_group("is_p_matrix");
    for n in [6, 10, 14] {
        let a = p_matrix(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| is_p_matrix(black_box(a), 1e-9)));
    }
    g.finish();
}

fn bench_ep(c: &mut Criterion) {
    let mut g = c.benchmark_group("ep");
    g.sample_size(10);
    let block = RealMatrix::from_rows(&[[-4.0, 1.0, -6.0], [2.0, -5.0, 6.0], [0.0, 0.0, -9.0]]).unwrap();
    let diag = RealMatrix::from_rows(&[[15.0, -9.0, -18.0], [1.0, 3.0, -12.0], [-1.0, -3.0, 12.0]]).unwrap();
    g.bench_function("classify/block", |b| b.iter(|| classify_ep(black_box(&block), &EpOptions::default())));
    g.bench_function("classify/minor_symmetry", |b| {
        b.iter(|| classify_ep(black_box(&diag), &EpOptions::default()))
    });
    for n in [4, 8, 10] {
        let a = dense(n, 5);
        let grid = TimeGrid::log_linear(10.0, 256, 256);
        g.bench_with_input(BenchmarkId::new("falsify", n), &a, |b, a| b.iter(|| falsify_ep(black_box(a), &grid)));
    }
    g.finish();
}

fn bench_lcp(c: &mut Criterion) {
    let mut g = c.benchmark_group("lcp_enumerate");
    for n in [4, 8, 12] {
        let q: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { -1.0 } else { 0.5 }).collect();
        let inst = LCPInstance::new(p_matrix(n), RealVector::new(q).unwrap()).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, i| b.iter(|| solve_enumerate(black_box(i))));
    }
    g.finish();
}

criterion_group!(benches, bench_expm, bench_compounds, bench_p_decider, bench_ep, bench_lcp);
criterion_main!(benches);
