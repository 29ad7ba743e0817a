// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Tool failures. Mathematical verdicts, including undecided ones, are
/// reported, never raised.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot read input: {0}")]
    Io(String),
    #[error("{0}")]
    Capacity(String),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("{0}")]
    Core(epmat_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Output(_) | CliError::Core(_) => 1,
        }
    }
}

impl From<epmat_core::Error> for CliError {
    fn from(e: epmat_core::Error) -> Self {
        match e {
            epmat_core::Error::Capacity { .. } => CliError::Capacity(e.to_string()),
            e => CliError::Core(e),
        }
    }
}
