// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::Serialize;

use crate::index::IndexSet;
use crate::matrix::RealMatrix;
use crate::pclass::is_sign_symmetric;
use crate::structure::{is_lower_triangular, is_tridiagonal, is_upper_triangular, structural_tol};

use super::minor_symmetry::{condition_holds, RTableEntry};

/// A transformation under which the EP property is preserved.
///
/// `apply` maps the base matrix of a [`CertificateKind::TransformOf`] node to
/// the node's own matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", content = "data", rename_all = "snake_case")]
pub enum Transform {
    /// `c B` for a nonzero real `c`.
    Scale(f64),
    Transpose,
    /// `P B P^T`, row `i` of the result being row `perm[i]` of `B` (0-based).
    PermSimilarity(Vec<usize>),
    /// `D B D^{-1}` for a positive diagonal `D`.
    PosDiagSimilarity(Vec<f64>),
    /// `S B S` for a signature matrix `S`.
    SignatureSimilarity(Vec<f64>),
    /// `B + D` for a diagonal `D` commuting with `B`.
    CommutingDiagShift(Vec<f64>),
    Negate,
}

impl Transform {
    pub fn apply(&self, b: &RealMatrix) -> RealMatrix {
        match self {
            Transform::Scale(c) => b.scale(*c),
            Transform::Transpose => b.transpose(),
            Transform::PermSimilarity(p) => b.permute_symmetric(p),
            Transform::PosDiagSimilarity(d) | Transform::SignatureSimilarity(d) => {
                b.diag_similarity(d)
            }
            Transform::CommutingDiagShift(d) => b.add(&RealMatrix::from_diagonal(d)),
            Transform::Negate => b.scale(-1.0),
        }
    }

    fn admissible(&self, b: &RealMatrix, tol: f64) -> bool {
        let n = b.nrows();
        match self {
            Transform::Scale(c) => *c != 0.0 && c.is_finite(),
            Transform::Transpose | Transform::Negate => true,
            Transform::PermSimilarity(p) => {
                let mut seen = vec![false; n];
                p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
            }
            Transform::PosDiagSimilarity(d) => d.len() == n && d.iter().all(|&x| x > 0.0),
            Transform::SignatureSimilarity(s) => {
                s.len() == n && s.iter().all(|&x| x == 1.0 || x == -1.0)
            }
            Transform::CommutingDiagShift(d) => {
                if d.len() != n {
                    return false;
                }
                let dm = RealMatrix::from_diagonal(d);
                dm.matmul(b).max_abs_diff(&b.matmul(&dm)) <= tol
            }
        }
    }

    fn label(&self) -> String {
        match self {
            Transform::Scale(c) => format!("scale by {c}"),
            Transform::Transpose => "transpose".into(),
            Transform::PermSimilarity(p) => format!("permutation similarity {p:?}"),
            Transform::PosDiagSimilarity(d) => format!("positive diagonal similarity {d:?}"),
            Transform::SignatureSimilarity(s) => format!("signature similarity {s:?}"),
            Transform::CommutingDiagShift(d) => format!("commuting diagonal shift {d:?}"),
            Transform::Negate => "negation".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateKind {
    /// 2x2 with `a12 a21 >= 0`.
    TwoByTwoSign,
    Triangular { upper: bool },
    Symmetric,
    /// Tridiagonal with positive off-diagonal pairs; `d` symmetrizes by
    /// `D A D^{-1}`.
    Jacobi { d: Vec<f64> },
    /// Tridiagonal with nonnegative off-diagonal entries.
    WeakJacobi,
    /// `perm` puts the matrix in block upper triangular form whose diagonal
    /// blocks are the children's matrices, in order.
    BlockReduction { perm: Vec<usize>, children: Vec<EPCertificate> },
    /// Diagonalization `A = T diag(eigenvalues) T^{-1}` satisfying the
    /// signed minor-product condition.
    MinorSymmetry {
        t_matrix: RealMatrix,
        eigenvalues: Vec<f64>,
        det_t: f64,
        r_table: Vec<RTableEntry>,
    },
    /// Sign-symmetric idempotent matrix.
    SignSymProjection,
    TransformOf { base: Box<EPCertificate>, transform: Transform },
}

/// Machine-checkable evidence that `matrix` is an EP-matrix.
#[derive(Debug, Clone, Serialize)]
pub struct EPCertificate {
    pub matrix: RealMatrix,
    #[serde(flatten)]
    pub kind: CertificateKind,
}

impl EPCertificate {
    pub fn new(matrix: RealMatrix, kind: CertificateKind) -> Self {
        EPCertificate { matrix, kind }
    }

    pub fn transform_of(base: EPCertificate, transform: Transform) -> Self {
        let matrix = transform.apply(&base.matrix);
        EPCertificate::new(matrix, CertificateKind::TransformOf { base: Box::new(base), transform })
    }

    /// Short name of the outermost kind.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            CertificateKind::TwoByTwoSign => "TwoByTwoSign",
            CertificateKind::Triangular { .. } => "Triangular",
            CertificateKind::Symmetric => "Symmetric",
            CertificateKind::Jacobi { .. } => "Jacobi",
            CertificateKind::WeakJacobi => "WeakJacobi",
            CertificateKind::BlockReduction { .. } => "BlockReduction",
            CertificateKind::MinorSymmetry { .. } => "MinorSymmetry",
            CertificateKind::SignSymProjection => "SignSymProjection",
            CertificateKind::TransformOf { .. } => "TransformOf",
        }
    }

    /// The leaf reached by following `TransformOf` links.
    pub fn leaf(&self) -> &EPCertificate {
        match &self.kind {
            CertificateKind::TransformOf { base, .. } => base.leaf(),
            _ => self,
        }
    }

    /// Re-checks every defining predicate against the stored matrices,
    /// using relative tolerance `rel`.
    pub fn verify(&self, rel: f64) -> bool {
        let a = &self.matrix;
        if !a.is_square() {
            return false;
        }
        let n = a.nrows();
        let tol = structural_tol(a, rel);
        match &self.kind {
            CertificateKind::TwoByTwoSign => n == 2 && a[(0, 1)] * a[(1, 0)] >= 0.0,
            CertificateKind::Triangular { upper } => {
                if *upper {
                    is_upper_triangular(a, tol)
                } else {
                    is_lower_triangular(a, tol)
                }
            }
            CertificateKind::Symmetric => a.is_symmetric(tol),
            CertificateKind::Jacobi { d } => {
                d.len() == n
                    && d.iter().all(|&x| x > 0.0)
                    && is_tridiagonal(a, tol)
                    && (0..n.saturating_sub(1)).all(|i| a[(i, i + 1)] > tol && a[(i + 1, i)] > tol)
                    && a.diag_similarity(d).is_symmetric(1e-10 * a.max_abs().max(1.0))
            }
            CertificateKind::WeakJacobi => {
                is_tridiagonal(a, tol)
                    && (0..n.saturating_sub(1))
                        .all(|i| a[(i, i + 1)] >= -tol && a[(i + 1, i)] >= -tol)
            }
            CertificateKind::BlockReduction { perm, children } => {
                let p = a.permute_symmetric(perm);
                let mut start = 0;
                for c in children {
                    let k = c.matrix.nrows();
                    if start + k > n || !c.verify(rel) {
                        return false;
                    }
                    let idx: Vec<usize> = (start..start + k).collect();
                    if p.select(&idx, &idx).max_abs_diff(&c.matrix) > tol {
                        return false;
                    }
                    // Nothing below the diagonal block.
                    for i in start + k..n {
                        if idx.iter().any(|&j| p[(i, j)].abs() > tol) {
                            return false;
                        }
                    }
                    start += k;
                }
                start == n && Transform::PermSimilarity(perm.clone()).admissible(a, tol)
            }
            CertificateKind::MinorSymmetry { t_matrix, eigenvalues, .. } => {
                let Some(tinv) = t_matrix.inverse() else {
                    return false;
                };
                let rebuilt = t_matrix.matmul(&RealMatrix::from_diagonal(eigenvalues)).matmul(&tinv);
                rebuilt.max_abs_diff(a) <= 1e-8 * a.max_abs().max(1.0) && condition_holds(t_matrix)
            }
            CertificateKind::SignSymProjection => {
                a.matmul(a).max_abs_diff(a) <= 1e-10 * a.max_abs().max(1.0)
                    && is_sign_symmetric(a, 1e-9).unwrap_or(false)
            }
            CertificateKind::TransformOf { base, transform } => {
                base.verify(rel)
                    && transform.admissible(&base.matrix, structural_tol(&base.matrix, 1e-12))
                    && transform.apply(&base.matrix).max_abs_diff(a)
                        <= 1e-12 * a.max_abs().max(1.0)
            }
        }
    }

    fn write_chain(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        match &self.kind {
            CertificateKind::TransformOf { base, transform } => {
                writeln!(f, "{pad}TransformOf: {}", transform.label())?;
                base.write_chain(f, depth + 1)
            }
            CertificateKind::BlockReduction { perm, children } => {
                writeln!(f, "{pad}BlockReduction: permutation {perm:?}")?;
                children.iter().try_for_each(|c| c.write_chain(f, depth + 1))
            }
            CertificateKind::Jacobi { d } => writeln!(f, "{pad}Jacobi: D = diag{d:?}"),
            CertificateKind::Triangular { upper } => {
                writeln!(f, "{pad}Triangular ({})", if *upper { "upper" } else { "lower" })
            }
            CertificateKind::MinorSymmetry { eigenvalues, det_t, .. } => {
                writeln!(f, "{pad}MinorSymmetry: eigenvalues {eigenvalues:?}, det(T) = {det_t}")
            }
            _ => writeln!(f, "{pad}{}", self.kind_name()),
        }
    }
}

impl fmt::Display for EPCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_chain(f, 0)
    }
}

/// Maps a witness index set from a permuted block back to original indices.
pub(crate) fn lift_index_set(alpha: &IndexSet, block: &[usize], n: usize) -> IndexSet {
    let zero: Vec<usize> = {
        let mut v: Vec<usize> = alpha.zero_based().map(|i| block[i]).collect();
        v.sort_unstable();
        v
    };
    IndexSet::from_zero_based(n, &zero).expect("lifted indices are in range")
}
