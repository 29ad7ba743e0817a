// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

use crate::matrix::RealMatrix;
use crate::pclass::{is_sign_symmetric, SIGN_SYMMETRY_LIMIT};

use super::certificate::{CertificateKind, EPCertificate, Transform};

/// Certificate for a sign-symmetric projection, or for a nonzero multiple
/// `c B` of one (with `c = tr(A^2) / tr(A)`).
pub fn projection_certificate(a: &RealMatrix, tol: f64) -> Option<EPCertificate> {
    let n = a.nrows();
    if !a.is_square() || n > SIGN_SYMMETRY_LIMIT {
        return None;
    }
    let sq = a.matmul(a);
    let scale = a.max_abs().max(1.0);
    let idempotent = |b: &RealMatrix, b2: &RealMatrix| b2.max_abs_diff(b) <= 1e-10 * scale.max(b.max_abs());
    if idempotent(a, &sq) {
        return is_sign_symmetric(a, tol)
            .ok()?
            .then(|| EPCertificate::new(a.clone(), CertificateKind::SignSymProjection));
    }
    let tr = a.trace();
    if tr.abs() <= 1e-12 * scale {
        return None;
    }
    let c = sq.trace() / tr;
    if !c.is_finite() || c.abs() <= 1e-12 * scale {
        return None;
    }
    let b = a.scale(1.0 / c);
    if !idempotent(&b, &b.matmul(&b)) || !is_sign_symmetric(&b, tol).ok()? {
        return None;
    }
    let cert = EPCertificate::transform_of(
        EPCertificate::new(b, CertificateKind::SignSymProjection),
        Transform::Scale(c),
    );
    Some(EPCertificate { matrix: a.clone(), ..cert })
}
