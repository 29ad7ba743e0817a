// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-matrix classification: P, P0, Q, sign symmetry, the Kellogg
//! eigenvalue wedge, sign-reversal witnesses and the nonnegative horizon.
//!
//! Tolerances passed to the deciders are relative: a minor of order `k` on
//! rows `alpha` counts as positive when it exceeds
//! `tol * max(1, |A[alpha|alpha]|_max^k)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::compound::mult_compound;
use crate::error::{Error, Result};
use crate::expm::spectrum;
use crate::index::{all_nonempty_subsets, IndexSet};
use crate::matrix::{RealMatrix, RealVector};
use crate::minor::minor_unchecked;
use crate::simplex::{minimize, LpOutcome};

/// Default relative positivity tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Largest order for exhaustive principal-minor enumeration.
pub const PRINCIPAL_MINOR_LIMIT: usize = 16;
/// Largest order for the full sign-symmetry check.
pub const SIGN_SYMMETRY_LIMIT: usize = 10;
/// Largest order for the total-nonnegativity check.
pub const TN_LIMIT: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct PVerdict {
    pub is_p: bool,
    pub failing_minor: Option<(IndexSet, f64)>,
    pub min_principal_minor: f64,
    pub tolerance_used: f64,
    /// Some principal minor lies within its tolerance band around zero.
    pub marginal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignReversalWitness {
    pub x: RealVector,
    /// `x_i (A x)_i` for every `i`.
    pub products: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KelloggCheck {
    pub passes: bool,
    pub violating_eigenvalue: Option<(f64, f64)>,
}

/// Scaled threshold for the minor on `alpha`.
pub fn minor_tol(a: &RealMatrix, alpha: &IndexSet, tol: f64) -> f64 {
    let m = alpha
        .zero_based()
        .flat_map(|i| alpha.zero_based().map(move |j| (i, j)))
        .map(|(i, j)| a[(i, j)].abs())
        .fold(0.0, f64::max);
    tol * m.powi(alpha.len() as i32).max(1.0)
}

fn check_capacity(n: usize, limit: usize, what: &'static str, hint: &'static str) -> Result<()> {
    if n > limit {
        return Err(Error::Capacity { what, limit, requested: n, hint });
    }
    Ok(())
}

/// Every nonempty principal minor, ordered by `(k, rank)`.
pub fn principal_minors(a: &RealMatrix) -> Result<Vec<(IndexSet, f64)>> {
    let n = a.order()?;
    check_capacity(
        n,
        PRINCIPAL_MINOR_LIMIT,
        "principal-minor enumeration order",
        "; use sign_reversal_search or the EP falsifier for larger matrices",
    )?;
    Ok(all_nonempty_subsets(n)
        .into_par_iter()
        .map(|al| {
            let v = minor_unchecked(a, &al, &al);
            (al, v)
        })
        .collect())
}

pub fn is_p_matrix(a: &RealMatrix, tol: f64) -> Result<PVerdict> {
    let minors = principal_minors(a)?;
    let mut failing = None;
    let mut marginal = false;
    let mut min = (f64::INFINITY, 0.0);
    for (al, v) in minors {
        let t = minor_tol(a, &al, tol);
        marginal |= v.abs() <= t;
        if v < min.0 {
            min = (v, t);
        }
        if failing.is_none() && v <= t {
            failing = Some((al, v, t));
        }
    }
    Ok(match failing {
        Some((al, v, t)) => PVerdict {
            is_p: false,
            failing_minor: Some((al, v)),
            min_principal_minor: min.0,
            tolerance_used: t,
            marginal,
        },
        None => PVerdict {
            is_p: true,
            failing_minor: None,
            min_principal_minor: min.0,
            tolerance_used: min.1,
            marginal,
        },
    })
}

pub fn is_p0_matrix(a: &RealMatrix, tol: f64) -> Result<bool> {
    Ok(principal_minors(a)?.iter().all(|(al, v)| *v >= -minor_tol(a, al, tol)))
}

/// For every `k`, the sum of the order-`k` principal minors is positive.
pub fn is_q_matrix(a: &RealMatrix, tol: f64) -> Result<bool> {
    let n = a.order()?;
    let minors = principal_minors(a)?;
    let scale = a.max_abs();
    Ok((1..=n).all(|k| {
        let s: f64 = minors.iter().filter(|(al, _)| al.len() == k).map(|(_, v)| v).sum();
        s > tol * scale.powi(k as i32).max(1.0)
    }))
}

/// `A(alpha|beta) A(beta|alpha) >= 0` for all equal-size index sets.
pub fn is_sign_symmetric(a: &RealMatrix, tol: f64) -> Result<bool> {
    let n = a.order()?;
    check_capacity(n, SIGN_SYMMETRY_LIMIT, "sign-symmetry check order", "")?;
    let scale = a.max_abs();
    for k in 1..=n {
        let c = mult_compound(a, k)?.data;
        let floor = -tol * scale.powi(2 * k as i32).max(1.0);
        let m = c.nrows();
        for i in 0..m {
            for j in i + 1..m {
                if c[(i, j)] * c[(j, i)] < floor {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `a_ij a_ji >= 0` for all `i, j`.
pub fn is_sign_pattern_symmetric(a: &RealMatrix, tol: f64) -> bool {
    let n = a.nrows();
    let floor = -tol * a.max_abs().powi(2).max(1.0);
    (0..n).all(|i| (i + 1..n).all(|j| a[(i, j)] * a[(j, i)] >= floor))
}

/// All minors of every order are nonnegative.
pub fn is_totally_nonnegative(a: &RealMatrix, tol: f64) -> Result<bool> {
    let n = a.order()?;
    check_capacity(n, TN_LIMIT, "total-nonnegativity check order", "")?;
    let scale = a.max_abs();
    for k in 1..=n {
        let floor = -tol * scale.powi(k as i32).max(1.0);
        if mult_compound(a, k)?.data.as_slice().iter().any(|&v| v < floor) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Angular slack used by the wedge test.
pub const KELLOGG_ANGLE_TOL: f64 = 1e-9;

/// Checks `|arg(lambda)| < pi - pi/n` for every eigenvalue.
///
/// Only eigenvalues clearly inside the forbidden sector (by more than
/// [`KELLOGG_ANGLE_TOL`]) or numerically zero are reported, so a failure is a
/// reliable certificate that `A` is not a Q-matrix.
pub fn kellogg_wedge_check(a: &RealMatrix) -> Result<KelloggCheck> {
    let n = a.order()?;
    if n < 2 {
        return Err(Error::domain("the eigenvalue wedge needs n >= 2"));
    }
    let spec = spectrum(a)?;
    let bound = PI - PI / n as f64;
    let zero = 1e-14 * (1.0 + spec.spectral_radius);
    let bad = spec.eigenvalues.iter().copied().find(|&(re, im)| {
        re.hypot(im) <= zero || im.atan2(re).abs() >= bound + KELLOGG_ANGLE_TOL
    });
    Ok(KelloggCheck { passes: bad.is_none(), violating_eigenvalue: bad })
}

fn products(a: &RealMatrix, x: &[f64]) -> Vec<f64> {
    a.matvec(x).iter().zip(x).map(|(ax, xi)| ax * xi).collect()
}

/// Relative acceptance threshold for witness products.
pub const WITNESS_TOL: f64 = 1e-12;

/// Builds a witness from `x` when every product is below the noise floor.
pub fn check_sign_reversal(a: &RealMatrix, x: &[f64]) -> Option<SignReversalWitness> {
    let nx: f64 = x.iter().map(|v| v * v).sum();
    if nx == 0.0 {
        return None;
    }
    let p = products(a, x);
    let floor = WITNESS_TOL * a.max_abs().max(1.0) * nx;
    p.iter().all(|&v| v <= floor).then(|| SignReversalWitness {
        x: RealVector::from_raw(x.to_vec()),
        products: p,
    })
}

/// For support `alpha` and signs `s`, solve
/// `min z  s.t.  (S A S)[alpha|alpha] y <= z 1,  1^T y = 1,  y >= 0`.
/// A nonpositive optimum yields `x = S y` with every `x_i (A x)_i <= 0`.
fn orthant_candidate(a: &RealMatrix, alpha: &[usize], signs: &[f64]) -> Option<Vec<f64>> {
    let k = alpha.len();
    // variables: y (k), z+, z-, slack (k)
    let nv = 2 * k + 2;
    let mut c = vec![0.0; nv];
    c[k] = 1.0;
    c[k + 1] = -1.0;
    let mut rows = Vec::with_capacity(k + 1);
    let mut rhs = Vec::with_capacity(k + 1);
    for (r, &i) in alpha.iter().enumerate() {
        let mut row = vec![0.0; nv];
        for (q, &j) in alpha.iter().enumerate() {
            row[q] = signs[r] * a[(i, j)] * signs[q];
        }
        row[k] = -1.0;
        row[k + 1] = 1.0;
        row[k + 2 + r] = 1.0;
        rows.push(row);
        rhs.push(0.0);
    }
    let mut row = vec![0.0; nv];
    row[..k].iter_mut().for_each(|v| *v = 1.0);
    rows.push(row);
    rhs.push(1.0);
    let LpOutcome::Optimal { x, value } = minimize(&c, &rows, &rhs) else {
        return None;
    };
    let scale = WITNESS_TOL * a.max_abs().max(1.0);
    if value > scale {
        return None;
    }
    let mut full = vec![0.0; a.nrows()];
    for (q, &i) in alpha.iter().enumerate() {
        full[i] = signs[q] * x[q].max(0.0);
    }
    Some(full)
}

/// Searches for `x != 0` with `x_i (A x)_i <= 0` for all `i`.
///
/// Each candidate is a support set with a sign pattern (an orthant face),
/// refined by a small linear program. When all `(3^n - 1) / 2` faces fit in
/// the trial budget they are enumerated, which makes the search exhaustive;
/// otherwise `trials` faces are drawn from a seeded generator.
pub fn sign_reversal_search(a: &RealMatrix, trials: usize, seed: u64) -> Option<SignReversalWitness> {
    let n = a.order().ok()?;
    let faces = 3f64.powi(n as i32);
    let candidates: Vec<(Vec<usize>, Vec<f64>)> = if (faces - 1.0) / 2.0 <= trials as f64 {
        let mut out = Vec::new();
        for al in all_nonempty_subsets(n) {
            let sup: Vec<usize> = al.zero_based().collect();
            let k = sup.len();
            for bits in 0..(1usize << (k - 1)) {
                let signs = (0..k)
                    .map(|q| if q > 0 && bits >> (q - 1) & 1 == 1 { -1.0 } else { 1.0 })
                    .collect();
                out.push((sup.clone(), signs));
            }
        }
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..trials)
            .map(|_| loop {
                let mut sup = Vec::new();
                let mut signs = Vec::new();
                for i in 0..n {
                    match rng.random_range(0..3) {
                        0 => {}
                        1 => {
                            sup.push(i);
                            signs.push(1.0);
                        }
                        _ => {
                            sup.push(i);
                            signs.push(-1.0);
                        }
                    }
                }
                if !sup.is_empty() {
                    break (sup, signs);
                }
            })
            .collect()
    };
    candidates
        .par_iter()
        .find_map_first(|(sup, signs)| {
            let x = orthant_candidate(a, sup, signs)?;
            check_sign_reversal(a, &x)
        })
}

/// `1 / rho(A)` for entrywise nonnegative `A`: `exp(A t)` is a P-matrix on
/// `[0, 1/rho(A))`. Infinite when `rho(A) = 0`.
pub fn nonneg_horizon(a: &RealMatrix) -> Option<f64> {
    if !a.is_square() || a.as_slice().iter().any(|&v| v < 0.0) {
        return None;
    }
    let rho = spectrum(a).ok()?.spectral_radius;
    Some(if rho == 0.0 { f64::INFINITY } else { 1.0 / rho })
}
