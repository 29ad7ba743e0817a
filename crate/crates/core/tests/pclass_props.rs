// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::strategies::square;
use common::*;
use epmat_core::pclass::{check_sign_reversal, is_totally_nonnegative};
use epmat_core::{
    is_p0_matrix, is_p_matrix, is_q_matrix, is_sign_symmetric, kellogg_wedge_check, nonneg_horizon,
    sign_reversal_search, solve_enumerate, LCPInstance, RealMatrix, RealVector,
};
use proptest::prelude::*;
use rand::Rng;

const TOL: f64 = 1e-9;

fn assert_p(a: &RealMatrix, what: &str) {
    let v = is_p_matrix(a, TOL).unwrap();
    assert!(v.is_p, "{what}: {a:?} min minor {}", v.min_principal_minor);
    let k = kellogg_wedge_check(a).unwrap();
    assert!(k.passes, "{what}: wedge violated by {:?}", k.violating_eigenvalue);
}

fn signatures(n: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..1usize << n).map(move |b| (0..n).map(|i| if b >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
}

/// A strictly positive `x` with `M x > 0`, from the LCP with `q = -1`.
fn positive_vector(m: &RealMatrix) -> Option<Vec<f64>> {
    let n = m.nrows();
    let inst = LCPInstance::new(m.clone(), RealVector::new(vec![-1.0; n]).unwrap()).unwrap();
    let sol = solve_enumerate(&inst).unwrap().solutions.into_iter().next()?;
    let delta = 0.5 / m.norm_1().max(m.transpose().norm_1()).max(1.0);
    let x: Vec<f64> = sol.z.as_slice().iter().map(|z| z.max(0.0) + delta).collect();
    m.matvec(&x).iter().all(|&v| v > 0.0).then_some(x)
}

#[test]
fn p_preserving_transformations() {
    let mut r = rng(101);
    for trial in 0..100 {
        let n = 2 + trial % 5;
        let a = random_p_matrix(&mut r, n);
        assert_p(&a, "base");
        assert_p(&a.transpose(), "transpose");
        assert_p(&a.permute_symmetric(&random_perm(&mut r, n)), "permutation similarity");
        let d1: Vec<f64> = (0..n).map(|_| r.random_range(0.1..5.0)).collect();
        let d2: Vec<f64> = (0..n).map(|_| r.random_range(0.1..5.0)).collect();
        let scaled = RealMatrix::from_diagonal(&d1).matmul(&a).matmul(&RealMatrix::from_diagonal(&d2));
        assert_p(&scaled, "diagonal scaling");
        if n <= 5 {
            for s in signatures(n) {
                assert_p(&a.diag_similarity(&s), "signature similarity");
            }
        }
        let d: Vec<f64> = (0..n).map(|_| r.random_range(0.0..3.0)).collect();
        assert_p(&a.add(&RealMatrix::from_diagonal(&d)), "nonnegative diagonal shift");
        let d: Vec<f64> = (0..n).map(|_| r.random_range(0.0..1.0)).collect();
        let id_minus: Vec<f64> = d.iter().map(|x| 1.0 - x).collect();
        let convex = RealMatrix::from_diagonal(&d).add(&RealMatrix::from_diagonal(&id_minus).matmul(&a));
        assert_p(&convex, "diagonal convex combination with I");
        assert_p(&a.inverse().unwrap(), "inverse");
    }
}

#[test]
fn p_matrices_admit_positive_vectors_in_every_orthant() {
    let mut r = rng(7);
    for trial in 0..30 {
        let n = 2 + trial % 3;
        let a = random_p_matrix(&mut r, n);
        for s in signatures(n) {
            assert!(positive_vector(&a.diag_similarity(&s)).is_some());
        }
    }
    // Not P: some signature similarity has no positive vector.
    let a = m(&[&[2.0, 1.0], &[-1.0, 0.0]]);
    assert!(signatures(2).any(|s| positive_vector(&a.diag_similarity(&s)).is_none()));
}

#[test]
fn small_classes_by_hand() {
    let id = RealMatrix::identity(3);
    assert!(is_p_matrix(&id, TOL).unwrap().is_p);
    assert!(is_totally_nonnegative(&id, TOL).unwrap());
    let z = RealMatrix::zeros(2, 2);
    assert!(is_p0_matrix(&z, TOL).unwrap());
    assert!(!is_p_matrix(&z, TOL).unwrap().is_p);
    assert_eq!(nonneg_horizon(&z), Some(f64::INFINITY));
    let swap = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
    assert!((nonneg_horizon(&swap).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(nonneg_horizon(&m(&[&[0.0, -1.0], &[1.0, 0.0]])), None);
    let w = check_sign_reversal(&m(&[&[2.0, 1.0], &[-1.0, 0.0]]), &[0.0, 1.0]).unwrap();
    assert!(w.products.iter().all(|&p| p <= 0.0));
}

#[test]
fn horizon_keeps_exponential_in_p() {
    let mut r = rng(23);
    for _ in 0..20 {
        let a = uniform_matrix(&mut r, 4, 0.0, 2.0);
        let h = nonneg_horizon(&a).unwrap();
        for f in [0.1, 0.5, 0.9] {
            let e = epmat_core::expm(&a, f * h).unwrap();
            assert!(is_p_matrix(&e, TOL).unwrap().is_p);
        }
    }
}

fn exhaustive_trials(n: usize) -> usize {
    (3usize.pow(n as u32) - 1) / 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn sign_reversal_search_agrees_with_minors(a in square(1, 5, 3.0)) {
        let n = a.nrows();
        let v = is_p_matrix(&a, TOL).unwrap();
        prop_assume!(!v.marginal);
        let w = sign_reversal_search(&a, exhaustive_trials(n), 0);
        if let Some(w) = &w {
            prop_assert!(!v.is_p);
            prop_assert!(check_sign_reversal(&a, w.x.as_slice()).is_some());
        } else {
            prop_assert!(v.is_p, "exhaustive search missed a non-P matrix");
        }
    }

    #[test]
    fn sampled_sign_reversal_is_sound(a in square(6, 6, 3.0), seed in 0u64..1000) {
        if sign_reversal_search(&a, 100, seed).is_some() {
            prop_assert!(!is_p_matrix(&a, TOL).unwrap().is_p);
        }
    }

    #[test]
    fn q_matrices_avoid_wedge(a in square(2, 6, 3.0)) {
        if is_q_matrix(&a, TOL).unwrap() {
            prop_assert!(kellogg_wedge_check(&a).unwrap().passes);
        }
        if is_p_matrix(&a, TOL).unwrap().is_p {
            prop_assert!(is_q_matrix(&a, TOL).unwrap());
            prop_assert!(is_p0_matrix(&a, TOL).unwrap());
        }
    }

    #[test]
    fn symmetric_matrices_are_sign_symmetric(a in square(2, 5, 3.0)) {
        let s = a.add(&a.transpose());
        prop_assert!(is_sign_symmetric(&s, TOL).unwrap());
    }
}
