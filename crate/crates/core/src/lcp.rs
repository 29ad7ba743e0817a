// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Linear complementarity by exhaustive enumeration of complementary bases.
//!
//! Find `z >= 0` with `w = M z + q >= 0` and `w^T z = 0`. `M` is a P-matrix
//! exactly when every `q` admits a unique solution, which makes this solver
//! an independent oracle for the P-property at small orders.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::matrix::{RealMatrix, RealVector};

/// Largest order accepted by the enumerator (`2^n` bases).
pub const LCP_LIMIT: usize = 12;

#[derive(Debug, Clone, Serialize)]
pub struct LCPInstance {
    pub m: RealMatrix,
    pub q: RealVector,
}

impl LCPInstance {
    pub fn new(m: RealMatrix, q: RealVector) -> Result<Self> {
        let n = m.order()?;
        if q.len() != n {
            return Err(Error::domain(format!("q has length {}, M is {n}x{n}", q.len())));
        }
        Ok(LCPInstance { m, q })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// Feasibility tolerance: `1e-9 * max(1, |q|_inf)`.
    pub fn tol(&self) -> f64 {
        1e-9 * self.q.as_slice().iter().fold(1.0f64, |acc, v| acc.max(v.abs()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LCPSolution {
    pub z: RealVector,
    pub w: RealVector,
    /// Indices with `z_i > tol`.
    pub support: IndexSet,
    /// Some index has both `z_i` and `w_i` within tolerance of zero.
    pub degenerate: bool,
}

impl LCPSolution {
    /// Re-checks `w = M z + q`, nonnegativity and complementarity.
    pub fn verify(&self, inst: &LCPInstance) -> bool {
        let tol = inst.tol();
        let z = self.z.as_slice();
        let w = self.w.as_slice();
        let mz = inst.m.matvec(z);
        let scale = 1.0 + inst.m.max_abs() * z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        (0..inst.n()).all(|i| {
            (mz[i] + inst.q[i] - w[i]).abs() <= 1e-8 * scale
                && z[i] >= -tol
                && w[i] >= -tol
                && z[i] * w[i] <= tol * scale
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LcpEnumeration {
    pub solutions: Vec<LCPSolution>,
    /// A singular basis admitted a consistent (underdetermined) system.
    pub degenerate_family: bool,
    /// Some solution is degenerate, or `degenerate_family` holds.
    pub degenerate: bool,
}

fn solve_basis(m: &RealMatrix, q: &[f64], alpha: &[usize]) -> (Option<Vec<f64>>, bool) {
    let k = alpha.len();
    let sub = DMatrix::from_fn(k, k, |i, j| m[(alpha[i], alpha[j])]);
    let rhs = DVector::from_fn(k, |i, _| -q[alpha[i]]);
    let svd = sub.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin > 1e-12 * smax.max(1e-300) {
        return (sub.lu().solve(&rhs).map(|v| v.iter().copied().collect()), false);
    }
    // Singular basis: flag consistency, do not enumerate the family.
    let consistent = svd
        .solve(&rhs, 1e-12 * smax.max(1.0))
        .map(|x| (&sub * x - &rhs).amax() <= 1e-9 * (1.0 + rhs.amax()))
        .unwrap_or(false);
    (None, consistent)
}

/// All solutions, enumerated over the `2^n` complementary bases.
pub fn solve_enumerate(inst: &LCPInstance) -> Result<LcpEnumeration> {
    let n = inst.n();
    if n > LCP_LIMIT {
        return Err(Error::Capacity {
            what: "LCP enumeration order",
            limit: LCP_LIMIT,
            requested: n,
            hint: "",
        });
    }
    let tol = inst.tol();
    let q = inst.q.as_slice();
    let found: Vec<(Option<LCPSolution>, bool)> = (0..1usize << n)
        .into_par_iter()
        .map(|mask| {
            let alpha: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let (za, family) = if alpha.is_empty() { (Some(vec![]), false) } else { solve_basis(&inst.m, q, &alpha) };
            let Some(za) = za else {
                return (None, family);
            };
            let mut z = vec![0.0; n];
            for (v, &i) in za.iter().zip(&alpha) {
                z[i] = *v;
            }
            if z.iter().any(|&v| v < -tol) {
                return (None, false);
            }
            let mut w = inst.m.matvec(&z);
            for i in 0..n {
                w[i] += q[i];
            }
            for &i in &alpha {
                w[i] = 0.0;
            }
            if w.iter().any(|&v| v < -tol) {
                return (None, false);
            }
            let support: Vec<usize> = (0..n).filter(|&i| z[i] > tol).collect();
            let degenerate = (0..n).any(|i| z[i].abs() <= tol && w[i].abs() <= tol);
            let sol = LCPSolution {
                z: RealVector::from_raw(z),
                w: RealVector::from_raw(w),
                support: IndexSet::from_zero_based(n, &support).expect("sorted support"),
                degenerate,
            };
            (Some(sol), false)
        })
        .collect();
    let degenerate_family = found.iter().any(|f| f.1);
    let mut solutions: Vec<LCPSolution> = Vec::new();
    for sol in found.into_iter().filter_map(|f| f.0) {
        let dup = solutions.iter().any(|s| {
            s.z.as_slice().iter().zip(sol.z.as_slice()).all(|(a, b)| (a - b).abs() <= 1e-8 * (1.0 + a.abs()))
        });
        if !dup {
            solutions.push(sol);
        }
    }
    let degenerate = degenerate_family || solutions.iter().any(|s| s.degenerate);
    Ok(LcpEnumeration { solutions, degenerate_family, degenerate })
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub trials: usize,
    /// Multiplicity -> number of sampled `q`, over all trials.
    pub histogram: BTreeMap<usize, usize>,
    /// Same, restricted to non-degenerate trials.
    pub nondegenerate_histogram: BTreeMap<usize, usize>,
    pub degenerate_trials: usize,
    /// First non-degenerate `q` whose multiplicity is not one.
    pub first_nonunique: Option<(Vec<f64>, usize)>,
}

impl UniquenessReport {
    /// Every non-degenerate sample had exactly one solution.
    pub fn all_unique(&self) -> bool {
        self.nondegenerate_histogram.keys().all(|&k| k == 1)
    }
}

/// Solution multiplicities over `trials` standard-normal `q`.
pub fn uniqueness_crosscheck(m: &RealMatrix, trials: usize, seed: u64) -> Result<UniquenessReport> {
    let n = m.order()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qs: Vec<Vec<f64>> = (0..trials)
        .map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect();
    let mut report = UniquenessReport {
        trials,
        histogram: BTreeMap::new(),
        nondegenerate_histogram: BTreeMap::new(),
        degenerate_trials: 0,
        first_nonunique: None,
    };
    for q in qs {
        let inst = LCPInstance::new(m.clone(), RealVector::from_raw(q.clone()))?;
        let e = solve_enumerate(&inst)?;
        let k = e.solutions.len();
        *report.histogram.entry(k).or_default() += 1;
        if e.degenerate {
            report.degenerate_trials += 1;
            continue;
        }
        *report.nondegenerate_histogram.entry(k).or_default() += 1;
        if k != 1 && report.first_nonunique.is_none() {
            report.first_nonunique = Some((q, k));
        }
    }
    Ok(report)
}

/// A `q` with at least two solutions, built from a sign-reversal vector `x`
/// (`x_i (M x)_i <= 0` for all `i`): the positive and negative parts of `x`
/// both solve LCP(q, M).
pub fn multiplicity_witness_q(m: &RealMatrix, x: &[f64]) -> Vec<f64> {
    let mx = m.matvec(x);
    let zp: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    let w1: Vec<f64> = x
        .iter()
        .zip(&mx)
        .map(|(&xi, &yi)| if xi > 0.0 { 0.0 } else { yi.max(0.0) })
        .collect();
    let mz = m.matvec(&zp);
    w1.iter().zip(&mz).map(|(w, v)| w - v).collect()
}
