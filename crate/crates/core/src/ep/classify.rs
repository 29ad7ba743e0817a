// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::Serialize;

use crate::expm::{expm, spectrum, SpectralInfo};
use crate::matrix::RealMatrix;
use crate::minor::minor_unchecked;
use crate::pclass::{is_sign_pattern_symmetric, minor_tol, DEFAULT_TOL};

use super::block::block_reduce;
use super::certificate::{lift_index_set, CertificateKind, EPCertificate};
use super::falsify::{default_horizon, falsify_ep_with, EPWitness, FalsifyMethod, GridEvidence, TimeGrid};
use super::minor_symmetry::{minor_symmetry_certificate, MinorSymmetryOutcome};
use super::projection::projection_certificate;
use super::screens::{
    default_eps_grid, power_sign_symmetry_screen, tn_perturbation_certificate, PowerScreenReport,
    TnScreenReport, SCREEN_LIMIT,
};
use super::structural::structural_certificates;
use super::two_by_two::{check_2x2, TwoByTwo};

/// Imaginary parts above this relative size are taken as genuinely complex.
pub const CLEARLY_COMPLEX: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EPStatus {
    EP,
    NotEP,
    Undecided,
}

/// A non-real eigenvalue `a + ib`, `b > 0`, and the time `(n-1) pi / (n b)`
/// at which it reaches the edge of the eigenvalue wedge.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexSpectrum {
    pub eigenvalue: (f64, f64),
    pub kellogg_time: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SignPatternStats {
    pub positive_off_diagonal: usize,
    pub negative_off_diagonal: usize,
    pub zero_off_diagonal: usize,
    pub sign_pattern_symmetric: bool,
}

impl SignPatternStats {
    pub fn of(a: &RealMatrix) -> Self {
        let n = a.nrows();
        let mut s = SignPatternStats {
            sign_pattern_symmetric: is_sign_pattern_symmetric(a, 0.0),
            ..Default::default()
        };
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                match a[(i, j)] {
                    v if v > 0.0 => s.positive_off_diagonal += 1,
                    v if v < 0.0 => s.negative_off_diagonal += 1,
                    _ => s.zero_off_diagonal += 1,
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Evidence {
    pub spectrum: Option<SpectralInfo>,
    pub grid: Option<GridEvidence>,
    pub power_screen: Option<PowerScreenReport>,
    pub tn_screen: Option<TnScreenReport>,
    pub sign_pattern: SignPatternStats,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EPVerdict {
    pub status: EPStatus,
    pub certificate: Option<EPCertificate>,
    pub witness: Option<EPWitness>,
    pub complex_spectrum: Option<ComplexSpectrum>,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpOptions {
    /// Relative positivity tolerance for minors.
    pub tol: f64,
    /// Relative threshold below which entries count as structural zeros.
    pub zero_tol: f64,
    /// Explicit grid; the default grid is derived from the spectrum.
    pub grid: Option<TimeGrid>,
    /// Horizon for the default grid, overriding the spectral choice.
    pub t_max: Option<f64>,
    /// Points per log/linear half of the default grid.
    pub grid_points: usize,
    pub certificates_only: bool,
    pub method: FalsifyMethod,
    /// Run the heuristic screens when the verdict stays undecided.
    pub screens: bool,
}

impl Default for EpOptions {
    fn default() -> Self {
        EpOptions {
            tol: DEFAULT_TOL,
            zero_tol: 1e-14,
            grid: None,
            t_max: None,
            grid_points: 512,
            certificates_only: false,
            method: FalsifyMethod::Auto,
            screens: true,
        }
    }
}

impl EPVerdict {
    fn ep(certificate: EPCertificate, evidence: Evidence) -> Self {
        EPVerdict {
            status: EPStatus::EP,
            certificate: Some(certificate),
            witness: None,
            complex_spectrum: None,
            evidence,
        }
    }

    fn not_ep(witness: Option<EPWitness>, complex: Option<ComplexSpectrum>, evidence: Evidence) -> Self {
        EPVerdict { status: EPStatus::NotEP, certificate: None, witness, complex_spectrum: complex, evidence }
    }
}

fn exact_witness(a: &RealMatrix, t: f64, alpha: crate::index::IndexSet, value: f64, tol: f64) -> EPWitness {
    let verified = expm(a, t)
        .map(|e| value <= minor_tol(&e, &alpha, tol))
        .unwrap_or(value <= 0.0);
    EPWitness { t, alpha, minor_value: value, grid_t: t, grid_value: value, verified }
}

fn complex_spectrum(spec: &SpectralInfo, n: usize) -> Option<ComplexSpectrum> {
    spec.complex_pair(CLEARLY_COMPLEX).map(|(re, im)| ComplexSpectrum {
        eigenvalue: (re, im),
        kellogg_time: (n as f64 - 1.0) * PI / (n as f64 * im),
    })
}

fn grid_for(a: &RealMatrix, spec: Option<&SpectralInfo>, opts: &EpOptions) -> TimeGrid {
    if let Some(g) = &opts.grid {
        return g.clone();
    }
    let t = opts
        .t_max
        .unwrap_or_else(|| spec.map(default_horizon).unwrap_or(10.0));
    let mut grid = TimeGrid::log_linear(t, opts.grid_points, opts.grid_points);
    // Times at which a complex eigenvalue of exp(A t) lies inside the
    // forbidden sector of the eigenvalue wedge.
    if let Some((_, b)) = spec.and_then(|s| s.complex_pair(crate::expm::REAL_TOL)) {
        let n = a.nrows() as f64;
        let t0 = (n - 1.0) * PI / (n * b);
        let t1 = PI / b;
        let extra: Vec<f64> = (0..=64)
            .map(|i| t0 + (t1 - t0) * i as f64 / 64.0)
            .flat_map(|t| [t, -t])
            .collect();
        grid = grid.merged(&extra);
    }
    grid
}

/// Three-valued EP classification.
///
/// Exact rules come first (order one and two, non-real spectrum), then the
/// certificate chain (structural, projection, block reduction, minor
/// symmetry, weak Jacobi), then the grid falsifier. Anything left is
/// `Undecided`, with the heuristic screens attached as evidence.
pub fn classify_ep(a: &RealMatrix, opts: &EpOptions) -> EPVerdict {
    let mut ev = Evidence::default();
    let n = match a.order() {
        Ok(n) => n,
        Err(e) => {
            ev.notes.push(e.to_string());
            return EPVerdict {
                status: EPStatus::Undecided,
                certificate: None,
                witness: None,
                complex_spectrum: None,
                evidence: ev,
            };
        }
    };
    ev.sign_pattern = SignPatternStats::of(a);
    if n == 1 {
        return EPVerdict::ep(
            EPCertificate::new(a.clone(), CertificateKind::Triangular { upper: true }),
            ev,
        );
    }
    if n == 2 {
        return match check_2x2(a) {
            Ok(TwoByTwo::EP) => EPVerdict::ep(EPCertificate::new(a.clone(), CertificateKind::TwoByTwoSign), ev),
            Ok(TwoByTwo::NotEP { t, alpha, value }) => {
                let w = exact_witness(a, t, alpha, value, opts.tol);
                let spec = spectrum(a).ok();
                let complex = spec.as_ref().and_then(|s| complex_spectrum(s, n));
                ev.spectrum = spec;
                EPVerdict::not_ep(Some(w), complex, ev)
            }
            Err(e) => {
                ev.notes.push(e.to_string());
                EPVerdict { status: EPStatus::Undecided, certificate: None, witness: None, complex_spectrum: None, evidence: ev }
            }
        };
    }

    let spec = match spectrum(a) {
        Ok(s) => Some(s),
        Err(e) => {
            ev.notes.push(format!("spectrum unavailable: {e}"));
            None
        }
    };
    ev.spectrum = spec.clone();
    let all_real = spec.as_ref().is_some_and(|s| s.all_real);
    let complex = spec.as_ref().and_then(|s| complex_spectrum(s, n));

    if let Some(c) = complex {
        ev.notes.push("non-real eigenvalue: exp(A t) leaves P at the wedge time".into());
        let grid = grid_for(a, spec.as_ref(), opts);
        let witness = match falsify_ep_with(a, &grid, opts.method, opts.tol) {
            Ok(r) => {
                ev.grid = Some(r.evidence);
                r.witness
            }
            Err(e) => {
                ev.notes.push(format!("falsifier: {e}"));
                None
            }
        };
        return EPVerdict::not_ep(witness, Some(c), ev);
    }

    if all_real {
        if let Some(c) = certificate_chain(a, opts, &mut ev) {
            return EPVerdict::ep(c, ev);
        }
    } else {
        ev.notes.push("spectrum is borderline real; certificates skipped".into());
    }

    // Block reduction can also expose a failing block.
    let form = block_reduce(a, opts.zero_tol);
    if !form.is_irreducible() {
        for (idx, b) in form.block_indices.iter().zip(&form.blocks) {
            let child = classify_ep(b, opts);
            if child.status == EPStatus::NotEP {
                if let Some(w) = child.witness {
                    let alpha = lift_index_set(&w.alpha, idx, n);
                    if let Ok(e) = expm(a, w.t) {
                        let v = minor_unchecked(&e, &alpha, &alpha);
                        let verified = v <= minor_tol(&e, &alpha, opts.tol);
                        ev.notes.push(format!("diagonal block {idx:?} is not EP"));
                        let lifted = EPWitness { alpha, minor_value: v, verified, ..w };
                        return EPVerdict::not_ep(Some(lifted), child.complex_spectrum, ev);
                    }
                }
            }
        }
    }

    if !opts.certificates_only {
        let grid = grid_for(a, spec.as_ref(), opts);
        match falsify_ep_with(a, &grid, opts.method, opts.tol) {
            Ok(r) => {
                ev.grid = Some(r.evidence);
                if let Some(w) = r.witness {
                    return EPVerdict::not_ep(Some(w), None, ev);
                }
            }
            Err(e) => ev.notes.push(format!("falsifier: {e}")),
        }
    }

    if opts.screens && n <= SCREEN_LIMIT {
        match power_sign_symmetry_screen(a, &default_eps_grid(a), 20, (1, n - 1)) {
            Ok(r) => ev.power_screen = Some(r),
            Err(e) => ev.notes.push(format!("power screen: {e}")),
        }
        ev.tn_screen = tn_perturbation_certificate(a, opts.zero_tol).screen;
    }
    EPVerdict { status: EPStatus::Undecided, certificate: None, witness: None, complex_spectrum: None, evidence: ev }
}

fn certificate_chain(a: &RealMatrix, opts: &EpOptions, ev: &mut Evidence) -> Option<EPCertificate> {
    if let Some(c) = structural_certificates(a, opts.zero_tol) {
        return Some(c);
    }
    if let Some(c) = projection_certificate(a, opts.tol) {
        return Some(c);
    }
    let form = block_reduce(a, opts.zero_tol);
    if !form.is_irreducible() {
        let mut children = Vec::with_capacity(form.blocks.len());
        for b in &form.blocks {
            let child = classify_ep(b, &EpOptions { certificates_only: true, screens: false, ..opts.clone() });
            match child.certificate {
                Some(c) if child.status == EPStatus::EP => children.push(c),
                _ => break,
            }
        }
        if children.len() == form.blocks.len() {
            return Some(EPCertificate::new(
                a.clone(),
                CertificateKind::BlockReduction { perm: form.perm.clone(), children },
            ));
        }
    }
    match minor_symmetry_certificate(a) {
        MinorSymmetryOutcome::Certified(c) => return Some(c),
        MinorSymmetryOutcome::Fails { alpha, beta, value } => ev.notes.push(format!(
            "minor-symmetry condition fails at alpha {alpha}{}: {value:e}",
            beta.map(|b| format!(", beta {b}")).unwrap_or_default()
        )),
        MinorSymmetryOutcome::NotApplicable(why) => {
            ev.notes.push(format!("minor-symmetry certificate not applicable: {why}"))
        }
    }
    tn_perturbation_certificate(a, opts.zero_tol).certificate
}
