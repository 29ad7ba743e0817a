// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Certificate from a real diagonalization `A = T D T^{-1}`.
//!
//! By Cauchy-Binet and Jacobi's complementary-minor identity, each principal
//! minor of `exp(A t)` is a combination of exponentials whose coefficients
//! have the sign of `det(T) s(alpha, beta) T(alpha|beta) T(alpha'|beta')`.
//! When all of those are nonnegative, and some is positive for each `alpha`,
//! every principal minor stays positive.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::expm::spectrum;
use crate::index::{enumerate_index_sets, signature, IndexSet};
use crate::matrix::RealMatrix;
use crate::minor::{determinant, minor_unchecked};

use super::certificate::{CertificateKind, EPCertificate};

/// Condition-number ceiling for the eigenvector matrix.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Serialize)]
pub struct RTableEntry {
    pub alpha: IndexSet,
    pub beta: IndexSet,
    /// `s(alpha, beta) T(alpha|beta) T(complement alpha | complement beta)`.
    pub r: f64,
}

#[derive(Debug, Clone, Serialize)]
pub enum MinorSymmetryOutcome {
    Certified(EPCertificate),
    /// The signed product for `(alpha, beta)` is negative, or no `beta` gives
    /// a positive product (then `beta` is `None`).
    Fails { alpha: IndexSet, beta: Option<IndexSet>, value: f64 },
    NotApplicable(String),
}

/// `r(alpha, beta)` for every `alpha, beta` of order `k`, row-major in rank.
pub fn r_table(t: &RealMatrix, k: usize) -> Vec<RTableEntry> {
    let n = t.nrows();
    let sets = enumerate_index_sets(k, n).unwrap_or_default();
    let mut out = Vec::with_capacity(sets.len() * sets.len());
    for al in &sets {
        let alc = al.complement();
        for be in &sets {
            let r = f64::from(signature(al, be))
                * minor_unchecked(t, al, be)
                * minor_unchecked(t, &alc, &be.complement());
            out.push(RTableEntry { alpha: al.clone(), beta: be.clone(), r });
        }
    }
    out
}

/// Orders `k` that need checking; the rest follow by complementation.
pub fn orders(n: usize) -> std::ops::RangeInclusive<usize> {
    1..=n / 2
}

fn first_failure(t: &RealMatrix) -> Option<(IndexSet, Option<IndexSet>, f64)> {
    let n = t.nrows();
    let det = determinant(t).ok()?;
    for k in orders(n) {
        let table = r_table(t, k);
        let scale = table.iter().map(|e| (det * e.r).abs()).fold(0.0, f64::max);
        let tol = 1e-9 * scale;
        let m = table.len().isqrt();
        for row in table.chunks(m) {
            if let Some(bad) = row.iter().find(|e| det * e.r < -tol) {
                return Some((bad.alpha.clone(), Some(bad.beta.clone()), det * bad.r));
            }
            if !row.iter().any(|e| det * e.r > tol) {
                return Some((row[0].alpha.clone(), None, 0.0));
            }
        }
    }
    None
}

/// Whether `T` satisfies the signed minor-product condition.
pub fn condition_holds(t: &RealMatrix) -> bool {
    t.is_square() && determinant(t).is_ok_and(|d| d != 0.0) && first_failure(t).is_none()
}

/// Real eigenvector matrix with unit columns, and the matching eigenvalues.
pub fn eigenvector_matrix(a: &RealMatrix) -> Result<(RealMatrix, Vec<f64>), String> {
    let n = a.nrows();
    let spec = spectrum(a).map_err(|e| e.to_string())?;
    if !spec.all_real {
        return Err("spectrum is not real".into());
    }
    let lam = spec.real_parts();
    let scale = a.max_abs().max(1.0);
    let am = a.to_nalgebra();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut eig = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && lam[j] - lam[j - 1] <= 1e-7 * scale {
            j += 1;
        }
        let mult = j - i;
        let mean = lam[i..j].iter().sum::<f64>() / mult as f64;
        let shifted = &am - DMatrix::<f64>::identity(n, n) * mean;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.ok_or("SVD failed")?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]));
        for &q in order.iter().take(mult) {
            if svd.singular_values[q] > 1e-7 * scale * n as f64 {
                return Err(format!("eigenvalue {mean} is defective"));
            }
            let v: Vec<f64> = vt.row(q).iter().copied().collect();
            let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            cols.push(v.iter().map(|x| x / nrm).collect());
            eig.push(mean);
        }
        i = j;
    }
    let mut t = RealMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (r, v) in c.iter().enumerate() {
            t[(r, j)] = *v;
        }
    }
    let sv = t.to_nalgebra().singular_values();
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| (hi.max(s), lo.min(s)));
    if smin == 0.0 || smax / smin > MAX_CONDITION {
        return Err(format!("eigenvector matrix condition number {:.3e} too large", smax / smin));
    }
    let tinv = t.inverse().ok_or("eigenvector matrix is singular")?;
    let rebuilt = t.matmul(&RealMatrix::from_diagonal(&eig)).matmul(&tinv);
    if rebuilt.max_abs_diff(a) > 1e-8 * scale {
        return Err("diagonalization does not reproduce the matrix".into());
    }
    Ok((t, eig))
}

pub fn minor_symmetry_certificate(a: &RealMatrix) -> MinorSymmetryOutcome {
    if !a.is_square() {
        return MinorSymmetryOutcome::NotApplicable("matrix is not square".into());
    }
    let (t, eigenvalues) = match eigenvector_matrix(a) {
        Ok(x) => x,
        Err(e) => return MinorSymmetryOutcome::NotApplicable(e),
    };
    if let Some((alpha, beta, value)) = first_failure(&t) {
        return MinorSymmetryOutcome::Fails { alpha, beta, value };
    }
    let det_t = determinant(&t).unwrap_or(0.0);
    let r = orders(a.nrows()).flat_map(|k| r_table(&t, k)).collect();
    MinorSymmetryOutcome::Certified(EPCertificate::new(
        a.clone(),
        CertificateKind::MinorSymmetry { t_matrix: t, eigenvalues, det_t, r_table: r },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t4() -> RealMatrix {
        RealMatrix::from_rows(&[[3.0, 3.0, -3.0], [3.0, -1.0, -1.0], [1.0, 1.0, 1.0]]).unwrap()
    }

    #[test]
    fn example_table() {
        let table: Vec<f64> = r_table(&t4(), 1).iter().map(|e| e.r).collect();
        let want = [0.0, -12.0, -12.0, -18.0, -6.0, 0.0, -6.0, -6.0, -12.0];
        for (g, w) in table.iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "{table:?}");
        }
        assert!(condition_holds(&t4()));
    }

    #[test]
    fn column_scaling_is_harmless() {
        let ts = t4().matmul(&RealMatrix::from_diagonal(&[-2.0, 0.5, 3.0]));
        assert!(condition_holds(&ts));
    }

    #[test]
    fn similarity_example_certifies() {
        let a = RealMatrix::from_rows(&[[15.0, -9.0, -18.0], [1.0, 3.0, -12.0], [-1.0, -3.0, 12.0]])
            .unwrap();
        let MinorSymmetryOutcome::Certified(c) = minor_symmetry_certificate(&a) else {
            panic!()
        };
        let CertificateKind::MinorSymmetry { eigenvalues, .. } = &c.kind else { panic!() };
        for (g, w) in eigenvalues.iter().zip([0.0, 12.0, 18.0]) {
            assert!((g - w).abs() < 1e-8);
        }
        assert!(c.verify(1e-14));
    }

    #[test]
    fn defective_is_not_applicable() {
        let j = RealMatrix::from_rows(&[[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]]).unwrap();
        let p = RealMatrix::from_rows(&[[1.0, 2.0, 0.0], [0.0, 1.0, 3.0], [1.0, 0.0, 1.0]]).unwrap();
        let a = p.matmul(&j).matmul(&p.inverse().unwrap());
        assert!(matches!(minor_symmetry_certificate(&a), MinorSymmetryOutcome::NotApplicable(_)));
    }

    #[test]
    fn two_by_two_not_ep_fails() {
        let a = RealMatrix::from_rows(&[[15.0, -9.0], [1.0, 3.0]]).unwrap();
        assert!(matches!(minor_symmetry_certificate(&a), MinorSymmetryOutcome::Fails { .. }));
    }
}
