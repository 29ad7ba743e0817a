// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TolSource {
    Default,
    Env,
    Flag,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub tol: f64,
    pub source: TolSource,
    pub zero_tol: f64,
}

/// Resolves the positivity tolerance: flag, then `EPMAT_TOL`, then default.
pub fn resolve_tol(flag: Option<f64>, env: Option<&str>) -> Result<(f64, TolSource), CliError> {
    let check = |t: f64, what: &str| {
        if t.is_finite() && t >= 0.0 {
            Ok(t)
        } else {
            Err(CliError::Parse(format!("{what}: tolerance must be finite and nonnegative, got {t}")))
        }
    };
    if let Some(t) = flag {
        return Ok((check(t, "--tol")?, TolSource::Flag));
    }
    if let Some(s) = env {
        let t: f64 = s.trim().parse().map_err(|_| CliError::Parse(format!("EPMAT_TOL: not a number: {s:?}")))?;
        return Ok((check(t, "EPMAT_TOL")?, TolSource::Env));
    }
    Ok((epmat_core::pclass::DEFAULT_TOL, TolSource::Default))
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// Machine-readable result of one command. Everything except `timing` is a
/// function of the command line and the input bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub input_digest: String,
    pub tool_version: &'static str,
    pub tolerances: Tolerances,
    pub verdicts: serde_json::Value,
    pub timing: Timing,
}

/// SHA-256 of the concatenated inputs, hex encoded.
pub fn digest(inputs: &[&str]) -> String {
    let mut h = Sha256::new();
    for s in inputs {
        h.update(s.as_bytes());
    }
    hex::encode(h.finalize())
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
