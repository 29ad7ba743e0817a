// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Input documents. All three are TOML; `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;

use epmat_core::{RealMatrix, RealVector, WeightedDigraph};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A named square matrix.
///
/// ```toml
/// name = "example"
/// n = 2
/// rows = [[1, 0], [0, 1]]
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    #[serde(default)]
    pub name: String,
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorDocument {
    pub n: usize,
    pub entries: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    #[default]
    Linear,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { t_max: 20.0, points: 200, spacing: Spacing::Linear }
    }
}

impl GridSpec {
    /// Nonnegative times, starting at 0.
    pub fn times(&self) -> Vec<f64> {
        let p = self.points.max(2);
        let linear = (0..p).map(|i| self.t_max * i as f64 / (p - 1) as f64);
        let lo = (1e-3f64).min(self.t_max);
        let log = (0..p).map(|i| (lo.ln() + (self.t_max.ln() - lo.ln()) * i as f64 / (p - 1) as f64).exp());
        let mut v: Vec<f64> = match self.spacing {
            Spacing::Linear => linear.collect(),
            Spacing::Log => std::iter::once(0.0).chain(log).collect(),
            Spacing::Both => linear.chain(log).collect(),
        };
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

/// A consensus scenario: weighted arcs `[from, to, weight]` (1-based), the
/// initial vectors to audit, and the time grid.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    #[serde(default)]
    pub name: String,
    pub n: usize,
    #[serde(default)]
    pub arcs: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub x0s: Vec<Vec<f64>>,
    #[serde(default)]
    pub grid: GridSpec,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

impl MatrixDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: MatrixDocument = parse(text, "matrix document")?;
        if doc.rows.len() != doc.n || doc.rows.iter().any(|r| r.len() != doc.n) {
            return Err(CliError::Parse(format!("matrix document: expected {0} rows of {0} entries", doc.n)));
        }
        if doc.n == 0 {
            return Err(CliError::Parse("matrix document: n must be positive".into()));
        }
        if doc.rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(CliError::Parse("matrix document: entries must be finite".into()));
        }
        Ok(doc)
    }

    pub fn matrix(&self) -> RealMatrix {
        RealMatrix::from_rows(&self.rows).expect("validated on parse")
    }

    pub fn from_matrix(name: &str, a: &RealMatrix) -> Self {
        MatrixDocument { name: name.to_string(), n: a.nrows(), rows: a.to_rows() }
    }

    /// TOML text with every entry written to 17 significant digits, enough
    /// for a bit-exact round trip.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        writeln!(s, "name = {}", toml_string(&self.name)).unwrap();
        writeln!(s, "n = {}", self.n).unwrap();
        writeln!(s, "rows = [").unwrap();
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|&v| float17(v)).collect();
            writeln!(s, "  [{}],", cells.join(", ")).unwrap();
        }
        writeln!(s, "]").unwrap();
        s
    }
}

impl VectorDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: VectorDocument = parse(text, "vector document")?;
        if doc.entries.len() != doc.n {
            return Err(CliError::Parse(format!("vector document: expected {} entries", doc.n)));
        }
        if doc.entries.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Parse("vector document: entries must be finite".into()));
        }
        Ok(doc)
    }

    pub fn vector(&self) -> RealVector {
        RealVector::new(self.entries.clone()).expect("validated on parse")
    }
}

impl ScenarioDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: ScenarioDocument = parse(text, "scenario document")?;
        if doc.n == 0 {
            return Err(CliError::Parse("scenario document: n must be positive".into()));
        }
        if let Some(x) = doc.x0s.iter().find(|x| x.len() != doc.n) {
            return Err(CliError::Parse(format!("scenario document: initial vector {x:?} is not of length {}", doc.n)));
        }
        if doc.x0s.iter().flatten().any(|v| !v.is_finite()) {
            return Err(CliError::Parse("scenario document: initial vectors must be finite".into()));
        }
        if !(doc.grid.t_max.is_finite() && doc.grid.t_max > 0.0) || doc.grid.points < 2 {
            return Err(CliError::Parse("scenario document: grid needs t_max > 0 and points >= 2".into()));
        }
        WeightedDigraph::new(doc.n, doc.arcs.clone())
            .map_err(|e| CliError::Parse(format!("scenario document: {e}")))?;
        Ok(doc)
    }

    pub fn graph(&self) -> WeightedDigraph {
        WeightedDigraph::new(self.n, self.arcs.clone()).expect("validated on parse")
    }

    pub fn initial_vectors(&self) -> Vec<RealVector> {
        self.x0s.iter().map(|x| RealVector::new(x.clone()).expect("validated on parse")).collect()
    }
}

/// `v` with 17 significant digits in TOML/CSV-compatible notation.
pub fn float17(v: f64) -> String {
    format!("{v:.16e}")
}

fn toml_string(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if c.is_control() => write!(out, "\\u{:04X}", c as u32).unwrap(),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
