// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Certificates read off the zero/sign structure of `A`.

use crate::matrix::RealMatrix;
use crate::structure::{
    diagonal_symmetrizer, is_lower_triangular, is_tridiagonal, is_upper_triangular, structural_tol,
};

use super::certificate::{CertificateKind, EPCertificate, Transform};

fn jacobi_d(a: &RealMatrix) -> Vec<f64> {
    let n = a.nrows();
    let mut d = vec![1.0; n];
    for i in 1..n {
        d[i] = d[i - 1] * (a[(i - 1, i)] / a[(i, i - 1)]).sqrt();
    }
    d
}

fn jacobi_or_weak(a: &RealMatrix, tol: f64) -> Option<EPCertificate> {
    let n = a.nrows();
    if !is_tridiagonal(a, tol) {
        return None;
    }
    let pairs = || (0..n - 1).map(|i| (a[(i, i + 1)], a[(i + 1, i)]));
    if pairs().all(|(b, c)| b > tol && c > tol) {
        return Some(EPCertificate::new(a.clone(), CertificateKind::Jacobi { d: jacobi_d(a) }));
    }
    if pairs().all(|(b, c)| b >= -tol && c >= -tol) {
        return Some(EPCertificate::new(a.clone(), CertificateKind::WeakJacobi));
    }
    None
}

/// Signature `s` with `S A S` (weak) Jacobi, found by propagating signs down
/// the tridiagonal: `s_{i+1} = s_i sign(a_{i,i+1})`.
fn signature_to_jacobi(a: &RealMatrix, tol: f64) -> Option<EPCertificate> {
    let n = a.nrows();
    if n < 2 || !is_tridiagonal(a, tol) {
        return None;
    }
    let mut s = vec![1.0; n];
    for i in 0..n - 1 {
        let (b, c) = (a[(i, i + 1)], a[(i + 1, i)]);
        let lead = if b.abs() > tol { b } else { c };
        s[i + 1] = if lead < -tol { -s[i] } else { s[i] };
    }
    if s.iter().all(|&x| x == 1.0) {
        return None;
    }
    let base = jacobi_or_weak(&a.diag_similarity(&s), tol)?;
    Some(EPCertificate::transform_of(base, Transform::SignatureSimilarity(s)))
}

/// First structural certificate among: triangular, symmetric, Jacobi, weak
/// Jacobi, signature similarity to a (weak) Jacobi matrix, and positive
/// diagonal similarity to a symmetric matrix.
///
/// Entries with magnitude at most `rel * max(1, |A|_max)` count as zero.
pub fn structural_certificates(a: &RealMatrix, rel: f64) -> Option<EPCertificate> {
    if !a.is_square() {
        return None;
    }
    let tol = structural_tol(a, rel);
    if is_upper_triangular(a, tol) {
        return Some(EPCertificate::new(a.clone(), CertificateKind::Triangular { upper: true }));
    }
    if is_lower_triangular(a, tol) {
        return Some(EPCertificate::new(a.clone(), CertificateKind::Triangular { upper: false }));
    }
    if a.is_symmetric(tol) {
        return Some(EPCertificate::new(a.clone(), CertificateKind::Symmetric));
    }
    if let Some(c) = jacobi_or_weak(a, tol) {
        return Some(c);
    }
    if let Some(c) = signature_to_jacobi(a, tol) {
        return Some(c);
    }
    let d = diagonal_symmetrizer(a, tol, 1e-12)?;
    let sym = a.diag_similarity(&d);
    let sym = sym.add(&sym.transpose()).scale(0.5);
    let inv: Vec<f64> = d.iter().map(|x| 1.0 / x).collect();
    let cert = EPCertificate::transform_of(
        EPCertificate::new(sym, CertificateKind::Symmetric),
        Transform::PosDiagSimilarity(inv),
    );
    // Replace the rebuilt matrix by the input so the certificate speaks
    // about exactly the matrix that was asked about.
    Some(EPCertificate { matrix: a.clone(), ..cert })
}
