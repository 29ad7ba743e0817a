// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Deciders, certificates and falsifiers for P-matrices and for matrices
//! whose exponential is a P-matrix at every time (EP-matrices).

pub mod compound;
pub mod consensus;
pub mod ep;
pub mod error;
pub mod expm;
pub mod index;
pub mod lcp;
pub mod matrix;
pub mod minor;
pub mod pclass;
mod simplex;
pub mod structure;

pub use compound::{add_compound, exp_compound_identity_check, mult_compound, CompoundKind, CompoundMatrix};
pub use consensus::{
    audit_sign_nonreversal, is_pm_matrix, laplacian, simulate, SignReversalAudit, WeightedDigraph,
};
pub use ep::{classify_ep, EPCertificate, EPStatus, EPVerdict, EpOptions};
pub use error::{Error, Result};
pub use expm::{expm, spectrum, spectrum_with_tol, SpectralInfo};
pub use index::{binomial, enumerate_index_sets, signature, IndexSet};
pub use lcp::{solve_enumerate, uniqueness_crosscheck, LCPInstance, LCPSolution};
pub use matrix::{RealMatrix, RealVector};
pub use minor::{determinant, minor, minor_first_order, Dual};
pub use pclass::{
    is_p0_matrix, is_p_matrix, is_q_matrix, is_sign_pattern_symmetric, is_sign_symmetric,
    kellogg_wedge_check, nonneg_horizon, principal_minors, sign_reversal_search, KelloggCheck,
    PVerdict, SignReversalWitness,
};
