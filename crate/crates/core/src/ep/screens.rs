// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Heuristic screens. They only ever contribute evidence: both underlying
//! sufficient conditions quantify over all powers and cannot be discharged
//! by a finite computation.

use serde::Serialize;

use crate::compound::mult_compound;
use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::pclass::{is_sign_pattern_symmetric, is_totally_nonnegative, TN_LIMIT};
use crate::structure::{is_tridiagonal, structural_tol};

use super::certificate::{CertificateKind, EPCertificate};

/// Largest order accepted by the screens.
pub const SCREEN_LIMIT: usize = 8;

/// Power sign-pattern symmetry screen outcome.
#[derive(Debug, Clone, Serialize)]
pub struct PowerScreenReport {
    pub eps_grid: Vec<f64>,
    pub ell_max: usize,
    pub k_range: (usize, usize),
    pub checks: usize,
    /// All checked powers were sign-pattern symmetric.
    pub passed: bool,
    /// First `(eps, k, ell)` whose power is not sign-pattern symmetric.
    pub failure: Option<(f64, usize, usize)>,
}

/// `eps` values used when none are given: `{1e-1, 1e-2, 1e-3} / max(1, |A|)`.
pub fn default_eps_grid(a: &RealMatrix) -> Vec<f64> {
    let s = a.norm_1().max(1.0);
    vec![1e-1 / s, 1e-2 / s, 1e-3 / s]
}

/// Checks sign-pattern symmetry of `((I + eps A)^(k))^ell` over the grids.
pub fn power_sign_symmetry_screen(
    a: &RealMatrix,
    eps_grid: &[f64],
    ell_max: usize,
    k_range: (usize, usize),
) -> Result<PowerScreenReport> {
    let n = a.order()?;
    if n > SCREEN_LIMIT {
        return Err(Error::Capacity {
            what: "power sign-symmetry screen order",
            limit: SCREEN_LIMIT,
            requested: n,
            hint: "",
        });
    }
    let (k_lo, k_hi) = (k_range.0.max(1), k_range.1.min(n));
    let mut checks = 0;
    for &eps in eps_grid {
        let base = RealMatrix::identity(n).add(&a.scale(eps));
        for k in k_lo..=k_hi {
            let c = mult_compound(&base, k)?.data;
            let mut p = c.clone();
            for ell in 1..=ell_max {
                checks += 1;
                if !is_sign_pattern_symmetric(&p, 1e-12) {
                    return Ok(PowerScreenReport {
                        eps_grid: eps_grid.to_vec(),
                        ell_max,
                        k_range: (k_lo, k_hi),
                        checks,
                        passed: false,
                        failure: Some((eps, k, ell)),
                    });
                }
                p = p.matmul(&c);
            }
        }
    }
    Ok(PowerScreenReport {
        eps_grid: eps_grid.to_vec(),
        ell_max,
        k_range: (k_lo, k_hi),
        checks,
        passed: true,
        failure: None,
    })
}

/// Total nonnegativity of `I + eps A` over sampled `eps`.
#[derive(Debug, Clone, Serialize)]
pub struct TnScreenReport {
    pub eps_grid: Vec<f64>,
    /// Whether `I + eps A` was TN, per grid entry.
    pub tn: Vec<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TnOutcome {
    pub certificate: Option<EPCertificate>,
    pub screen: Option<TnScreenReport>,
}

/// Exact for weak Jacobi matrices, whose exponentials are totally
/// nonnegative and nonsingular. For other matrices of order at most
/// [`TN_LIMIT`] the result carries a screen of `I + eps A` as evidence.
pub fn tn_perturbation_certificate(a: &RealMatrix, rel: f64) -> TnOutcome {
    let n = a.nrows();
    let tol = structural_tol(a, rel);
    if a.is_square()
        && is_tridiagonal(a, tol)
        && (0..n.saturating_sub(1)).all(|i| a[(i, i + 1)] >= -tol && a[(i + 1, i)] >= -tol)
    {
        return TnOutcome {
            certificate: Some(EPCertificate::new(a.clone(), CertificateKind::WeakJacobi)),
            screen: None,
        };
    }
    if !a.is_square() || n > TN_LIMIT {
        return TnOutcome { certificate: None, screen: None };
    }
    let eps_grid = default_eps_grid(a);
    let tn = eps_grid
        .iter()
        .map(|&e| {
            let m = RealMatrix::identity(n).add(&a.scale(e));
            is_totally_nonnegative(&m, 1e-12).unwrap_or(false)
        })
        .collect();
    TnOutcome { certificate: None, screen: Some(TnScreenReport { eps_grid, tn }) }
}
