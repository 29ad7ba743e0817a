// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Multiplicative and additive compound matrices.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::index::{binomial, enumerate_index_sets, IndexSet};
use crate::matrix::RealMatrix;
use crate::minor::{minor_first_order_unchecked, minor_unchecked};

/// Largest admissible compound dimension C(n, k).
pub const COMPOUND_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompoundKind {
    Multiplicative,
    Additive,
}

/// A compound of an `n x n` matrix, indexed by `Q^{k,n}` in lexicographic order.
#[derive(Debug, Clone, Serialize)]
pub struct CompoundMatrix {
    pub source_n: usize,
    pub k: usize,
    pub kind: CompoundKind,
    pub data: RealMatrix,
}

impl CompoundMatrix {
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Entry at rows `alpha`, columns `beta`.
    pub fn at(&self, alpha: &IndexSet, beta: &IndexSet) -> f64 {
        self.data[(alpha.rank(), beta.rank())]
    }
}

pub(crate) fn check_order(n: usize, k: usize) -> Result<usize> {
    if k == 0 || k > n {
        return Err(Error::domain(format!("compound order k={k} outside 1..={n}")));
    }
    let m = binomial(n, k);
    if m > COMPOUND_LIMIT {
        return Err(Error::Capacity {
            what: "compound dimension C(n,k)",
            limit: COMPOUND_LIMIT,
            requested: m,
            hint: "; use the sampled falsifier on exp(At) minors instead",
        });
    }
    Ok(m)
}

fn assemble(m: usize, sets: &[IndexSet], entry: impl Fn(&IndexSet, &IndexSet) -> f64 + Sync) -> RealMatrix {
    let data: Vec<f64> = sets
        .par_iter()
        .flat_map_iter(|a| sets.iter().map(|b| entry(a, b)).collect::<Vec<_>>())
        .collect();
    RealMatrix::from_raw(m, m, data)
}

/// `A^(k)`: all k-minors in lexicographic row and column order.
pub fn mult_compound(a: &RealMatrix, k: usize) -> Result<CompoundMatrix> {
    let n = a.order()?;
    let m = check_order(n, k)?;
    let sets = enumerate_index_sets(k, n)?;
    let data = assemble(m, &sets, |al, be| minor_unchecked(a, al, be));
    Ok(CompoundMatrix { source_n: n, k, kind: CompoundKind::Multiplicative, data })
}

/// `A^[k]`: the coefficient of eps in `(I + eps A)^(k)`.
pub fn add_compound(a: &RealMatrix, k: usize) -> Result<CompoundMatrix> {
    let n = a.order()?;
    let m = check_order(n, k)?;
    let sets = enumerate_index_sets(k, n)?;
    let id = RealMatrix::identity(n);
    let data = assemble(m, &sets, |al, be| minor_first_order_unchecked(&id, a, al, be).eps);
    Ok(CompoundMatrix { source_n: n, k, kind: CompoundKind::Additive, data })
}

/// `max |(exp(At))^(k) - exp(A^[k] t)|`, a self-test of both kernels.
pub fn exp_compound_identity_check(a: &RealMatrix, k: usize, t: f64) -> Result<f64> {
    let lhs = mult_compound(&expm(a, t)?, k)?;
    let rhs = expm(&add_compound(a, k)?.data, t)?;
    Ok(lhs.data.max_abs_diff(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> RealMatrix {
        RealMatrix::from_rows(&[[0.0, -1.0, 0.0], [-2.0, 0.0, -2.0], [0.0, -1.0, 0.0]]).unwrap()
    }

    #[test]
    fn first_compound_is_identity_map() {
        let a = ex1();
        assert_eq!(mult_compound(&a, 1).unwrap().data, a);
        assert_eq!(add_compound(&a, 1).unwrap().data, a);
    }

    #[test]
    fn top_compounds_are_det_and_trace() {
        let a = RealMatrix::from_rows(&[[1.0, 2.0, 0.5], [0.0, 3.0, 1.0], [4.0, -1.0, 2.0]]).unwrap();
        let d = crate::minor::determinant(&a).unwrap();
        assert!((mult_compound(&a, 3).unwrap().data[(0, 0)] - d).abs() < 1e-12);
        assert!((add_compound(&a, 3).unwrap().data[(0, 0)] - a.trace()).abs() < 1e-12);
    }

    #[test]
    fn identity_compound_is_identity() {
        for k in 1..=4 {
            let c = mult_compound(&RealMatrix::identity(4), k).unwrap();
            assert_eq!(c.data, RealMatrix::identity(binomial(4, k)));
        }
    }

    #[test]
    fn additive_diagonal_is_sum_of_diagonal() {
        let a = RealMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]).unwrap();
        let c = add_compound(&a, 2).unwrap();
        for al in enumerate_index_sets(2, 3).unwrap() {
            let s: f64 = al.zero_based().map(|i| a[(i, i)]).sum();
            assert!((c.at(&al, &al) - s).abs() < 1e-12);
        }
    }

    #[test]
    fn capacity_guard() {
        let a = RealMatrix::identity(20);
        assert!(matches!(mult_compound(&a, 10), Err(Error::Capacity { .. })));
        assert!(matches!(add_compound(&a, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn exp_identity_on_example_matrix() {
        assert!(exp_compound_identity_check(&ex1(), 2, 0.7).unwrap() < 1e-8);
    }
}
