// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Plot-ready CSV: a header row, then one record per time.

use std::fmt::Write as _;
use std::path::Path;

use crate::docs::float17;
use crate::error::CliError;

pub fn render(header: &[String], records: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in records {
        let cells: Vec<String> = r.iter().map(|&v| float17(v)).collect();
        writeln!(s, "{}", cells.join(",")).unwrap();
    }
    s
}

pub fn write(path: &Path, header: &[String], records: &[Vec<f64>]) -> Result<(), CliError> {
    std::fs::write(path, render(header, records)).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}
