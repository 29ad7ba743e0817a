// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use epmat_core::lcp::multiplicity_witness_q;
use epmat_core::{
    classify_ep, expm, is_p_matrix, sign_reversal_search, solve_enumerate, uniqueness_crosscheck, EPStatus,
    EpOptions, LCPInstance, RealMatrix, RealVector,
};
use proptest::prelude::*;
use rand::Rng;

fn inst(m: RealMatrix, q: Vec<f64>) -> LCPInstance {
    LCPInstance::new(m, RealVector::new(q).unwrap()).unwrap()
}

#[test]
fn hand_enumerations() {
    let e = solve_enumerate(&inst(RealMatrix::identity(2), vec![-1.0, -2.0])).unwrap();
    assert_eq!(e.solutions.len(), 1);
    assert_eq!(e.solutions[0].z.as_slice(), &[1.0, 2.0]);
    let e = solve_enumerate(&inst(RealMatrix::identity(2), vec![1.0, 1.0])).unwrap();
    assert_eq!(e.solutions.len(), 1);
    assert_eq!(e.solutions[0].w.as_slice(), &[1.0, 1.0]);
    let e = solve_enumerate(&inst(m(&[&[-1.0]]), vec![1.0])).unwrap();
    let mut zs: Vec<f64> = e.solutions.iter().map(|s| s.z[0]).collect();
    zs.sort_by(f64::total_cmp);
    assert_eq!(zs, vec![0.0, 1.0]);
}

#[test]
fn non_p_matrix_has_nonunique_sample() {
    let r = uniqueness_crosscheck(&similar_nilpotent(), 200, 3).unwrap();
    assert!(!r.all_unique() || r.histogram.contains_key(&0) || r.degenerate_trials > 0);
}

#[test]
fn exponentials_of_ep_matrices_give_unique_solutions() {
    let mut r = rng(8);
    for a in [tridiagonal_example(), block_example(), projection()] {
        assert_eq!(classify_ep(&a, &EpOptions::default()).status, EPStatus::EP);
        let t = r.random_range(-1.0..1.0);
        let e = expm(&a, t).unwrap();
        assert!(uniqueness_crosscheck(&e, 50, 1).unwrap().all_unique());
    }
}

/// Murty agreement on `N + c I` with `N` standard normal; returns the number
/// of logged finite-sampling cases.
fn agreement(n: usize, count: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    let mut logged = 0;
    for i in 0..count {
        let c = r.random_range(0.0..2.0 * n as f64);
        let mm = normal_matrix(&mut r, n).shift_diagonal(c);
        let p = is_p_matrix(&mm, 1e-9).unwrap();
        let report = uniqueness_crosscheck(&mm, 100, i as u64).unwrap();
        if p.is_p {
            assert!(report.all_unique(), "P-matrix with non-unique sample: {mm:?}");
            assert!(!report.nondegenerate_histogram.contains_key(&0));
        }
        let witness = sign_reversal_search(&mm, (3usize.pow(n as u32) - 1) / 2, 0);
        if let Some(w) = witness {
            assert!(!p.is_p);
            if report.all_unique() {
                logged += 1;
                let q = multiplicity_witness_q(&mm, w.x.as_slice());
                let e = solve_enumerate(&inst(mm.clone(), q)).unwrap();
                assert!(e.solutions.len() >= 2 || e.degenerate, "witness q failed for {mm:?}");
            }
        } else if !p.marginal {
            assert!(p.is_p);
        }
    }
    logged
}

#[test]
fn murty_agreement_order_three() {
    agreement(3, 200, 31);
}

#[test]
fn murty_agreement_order_four() {
    agreement(4, 100, 41);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solutions_reverify(
        data in proptest::collection::vec(-3.0f64..3.0, 9),
        q in proptest::collection::vec(-3.0f64..3.0, 3),
    ) {
        let i = inst(RealMatrix::new(3, 3, data).unwrap(), q);
        for s in solve_enumerate(&i).unwrap().solutions {
            prop_assert!(s.verify(&i));
        }
    }
}
