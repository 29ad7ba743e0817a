// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! EP-matrix engine: exact rules, a certificate chain and a grid falsifier.

mod block;
mod certificate;
mod classify;
mod falsify;
mod minor_symmetry;
mod projection;
mod screens;
mod structural;
mod two_by_two;

pub use block::{block_reduce, BlockForm};
pub use certificate::{CertificateKind, EPCertificate, Transform};
pub use classify::{
    classify_ep, ComplexSpectrum, EPStatus, EPVerdict, EpOptions, Evidence, SignPatternStats,
    CLEARLY_COMPLEX,
};
pub use falsify::{
    default_horizon, falsify_ep, falsify_ep_with, EPWitness, FalsifyMethod, FalsifyResult,
    GridEvidence, TimeGrid, COMPOUND_ROUTE_LIMIT,
};
pub use minor_symmetry::{
    condition_holds, eigenvector_matrix, minor_symmetry_certificate, r_table, MinorSymmetryOutcome,
    RTableEntry, MAX_CONDITION,
};
pub use projection::projection_certificate;
pub use screens::{
    default_eps_grid, power_sign_symmetry_screen, tn_perturbation_certificate, PowerScreenReport,
    TnOutcome, TnScreenReport, SCREEN_LIMIT,
};
pub use structural::structural_certificates;
pub use two_by_two::{check_2x2, first_zero_time, TwoByTwo};
