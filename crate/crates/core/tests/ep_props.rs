// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::strategies::square;
use common::*;
use epmat_core::ep::{falsify_ep, minor_symmetry_certificate, MinorSymmetryOutcome, TimeGrid};
use epmat_core::{classify_ep, expm, is_p_matrix, minor, spectrum, EPStatus, EpOptions, RealMatrix};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// 2001 points on `[-10, 10]`.
fn soundness_grid() -> TimeGrid {
    TimeGrid::log_linear(10.0, 500, 500).merged(&[0.0])
}

fn grid_passes(a: &RealMatrix) -> bool {
    falsify_ep(a, &soundness_grid()).unwrap().witness.is_none()
}

fn ep_or_grid_pass(a: &RealMatrix) -> bool {
    let v = classify_ep(a, &EpOptions { certificates_only: true, ..EpOptions::default() });
    if v.status == EPStatus::EP {
        return v.certificate.unwrap().verify(1e-8);
    }
    v.status != EPStatus::NotEP && grid_passes(a)
}

fn random_symmetric(r: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    let b = uniform_matrix(r, n, -2.0, 2.0);
    b.add(&b.transpose())
}

fn random_upper(r: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    let mut a = uniform_matrix(r, n, -2.0, 2.0);
    for i in 0..n {
        for j in 0..i {
            a[(i, j)] = 0.0;
        }
    }
    a
}

fn random_jacobi(r: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    let mut a = RealMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = r.random_range(-2.0..2.0);
        if i + 1 < n {
            a[(i, i + 1)] = r.random_range(0.1..2.0);
            a[(i + 1, i)] = r.random_range(0.1..2.0);
        }
    }
    a
}

fn random_signature(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if r.random_bool(0.5) { 1.0 } else { -1.0 }).collect()
}

fn random_positive(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.random_range(0.2..5.0)).collect()
}

/// Block upper triangular with a 2x2 EP block and a 1x1 block, permuted.
fn random_block(r: &mut ChaCha8Rng) -> RealMatrix {
    let mut a = uniform_matrix(r, 3, -2.0, 2.0);
    let s = if r.random_bool(0.5) { 1.0 } else { -1.0 };
    a[(0, 1)] = s * r.random_range(0.1..2.0);
    a[(1, 0)] = s * r.random_range(0.1..2.0);
    a[(2, 0)] = 0.0;
    a[(2, 1)] = 0.0;
    a.permute_symmetric(&random_perm(r, 3))
}

fn ep_generators(r: &mut ChaCha8Rng) -> Vec<(&'static str, RealMatrix)> {
    let n = r.random_range(3..=5);
    let sym = random_symmetric(r, n);
    let d = random_positive(r, n);
    let jac = random_jacobi(r, n);
    let sig = random_signature(r, n);
    vec![
        ("symmetric", sym.clone()),
        ("upper", random_upper(r, n)),
        ("jacobi", jac.clone()),
        ("signed jacobi", jac.diag_similarity(&sig)),
        ("diagonal similarity", sym.diag_similarity(&d)),
        ("block", random_block(r)),
    ]
}

fn fixtures() -> Vec<(&'static str, RealMatrix)> {
    vec![
        ("tridiagonal", tridiagonal_example()),
        ("nilpotent", nilpotent()),
        ("block", block_example()),
        ("diagonalized", diagonalized_example()),
        ("projection", projection()),
    ]
}

#[test]
fn fixtures_and_generated_matrices_certify() {
    let mut r = rng(5);
    let mut all = fixtures();
    for _ in 0..10 {
        all.extend(ep_generators(&mut r));
    }
    for (name, a) in all {
        let v = classify_ep(&a, &EpOptions::default());
        assert_eq!(v.status, EPStatus::EP, "{name}: {a:?}");
        assert!(v.certificate.as_ref().unwrap().verify(1e-8), "{name}");
        assert!(grid_passes(&a), "{name}: grid found a witness");
        assert!(grid_passes(&a.scale(-1.0)), "{name}: negation failed on grid");
    }
}

#[test]
fn ep_preserving_transformations() {
    let mut r = rng(19);
    let mut all = fixtures();
    for _ in 0..3 {
        all.extend(ep_generators(&mut r));
    }
    for (name, a) in all {
        let n = a.nrows();
        let c = r.random_range(0.2..3.0) * if r.random_bool(0.5) { 1.0 } else { -1.0 };
        let is_diag = (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] == 0.0));
        let shift: Vec<f64> = if is_diag {
            (0..n).map(|_| r.random_range(-3.0..3.0)).collect()
        } else {
            vec![r.random_range(-3.0..3.0); n]
        };
        let cases = vec![
            ("scale", a.scale(c)),
            ("transpose", a.transpose()),
            ("permutation", a.permute_symmetric(&random_perm(&mut r, n))),
            ("positive diagonal", a.diag_similarity(&random_positive(&mut r, n))),
            ("signature", a.diag_similarity(&random_signature(&mut r, n))),
            ("shift", a.add(&RealMatrix::from_diagonal(&shift))),
        ];
        for (what, b) in cases {
            assert!(ep_or_grid_pass(&b), "{name} under {what}: {b:?}");
        }
    }
}

#[test]
fn similarity_does_not_preserve_ep() {
    assert_eq!(classify_ep(&nilpotent(), &EpOptions::default()).status, EPStatus::EP);
    let v = classify_ep(&similar_nilpotent(), &EpOptions::default());
    assert_eq!(v.status, EPStatus::NotEP);
    let w = v.witness.unwrap();
    assert!(w.t >= 1.0);
    assert_eq!(w.alpha.elems(), &[2]);
}

#[test]
fn minor_symmetry_is_invariant_to_column_scaling_and_order() {
    let t = eigvec_t();
    let d = RealMatrix::from_diagonal(&[0.0, 12.0, 18.0]);
    let a = t.matmul(&d).matmul(&t.inverse().unwrap());
    assert!(matches!(minor_symmetry_certificate(&a), MinorSymmetryOutcome::Certified(_)));
    let ts = t.matmul(&RealMatrix::from_diagonal(&[2.0, -0.5, 3.0]));
    assert!(epmat_core::ep::condition_holds(&t));
    assert!(epmat_core::ep::condition_holds(&ts));
    assert!(epmat_core::ep::condition_holds(&ts.select(&[0, 1, 2], &[2, 0, 1])));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn verdicts_are_sound(a in square(2, 5, 2.0)) {
        let v = classify_ep(&a, &EpOptions::default());
        let spec = spectrum(&a).unwrap();
        match v.status {
            EPStatus::EP => {
                prop_assert!(spec.all_real);
                prop_assert!(v.certificate.as_ref().unwrap().verify(1e-8));
            }
            EPStatus::NotEP => {
                if let Some(w) = &v.witness {
                    let e = expm(&a, w.t).unwrap();
                    let val = minor(&e, &w.alpha, &w.alpha).unwrap();
                    prop_assert!(w.verified);
                    prop_assert!(!is_p_matrix(&e, 1e-9).unwrap().is_p || val <= 1e-9 * e.max_abs().max(1.0));
                } else {
                    prop_assert!(v.complex_spectrum.is_some());
                }
            }
            EPStatus::Undecided => {}
        }
    }

    #[test]
    fn complex_spectrum_never_ep(a in square(3, 5, 2.0)) {
        let spec = spectrum(&a).unwrap();
        if !spec.all_real {
            prop_assert_ne!(classify_ep(&a, &EpOptions::default()).status, EPStatus::EP);
        }
    }
}
