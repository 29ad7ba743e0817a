// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Consensus dynamics `x' = -L x` on weighted digraphs and the audit of
//! sign non-reversal along trajectories.
//!
//! `L` uses the in-neighbour convention: `L_ij = -w(j -> i)` for `i != j`
//! and zero row sums, so `L 1 = 0`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expm::{expm, spectrum};
use crate::matrix::{RealMatrix, RealVector};
use crate::pclass::{is_p_matrix, principal_minors, sign_reversal_search, PVerdict};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedDigraph {
    n: usize,
    /// `(from, to, weight)` with 1-based nodes.
    arcs: Vec<(usize, usize, f64)>,
}

impl WeightedDigraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("a graph needs at least one node"));
        }
        for &(f, t, w) in &arcs {
            if f == 0 || t == 0 || f > n || t > n {
                return Err(Error::domain(format!("arc ({f},{t}) outside nodes 1..={n}")));
            }
            if f == t {
                return Err(Error::domain(format!("self-loop at node {f}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::domain(format!("arc ({f},{t}) has non-positive weight {w}")));
            }
        }
        Ok(WeightedDigraph { n, arcs })
    }

    /// Symmetric arc pairs for each undirected edge.
    pub fn undirected(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let arcs = edges.iter().flat_map(|&(a, b, w)| [(a, b, w), (b, a, w)]).collect();
        WeightedDigraph::new(n, arcs)
    }

    pub fn path(n: usize) -> Result<Self> {
        let e: Vec<_> = (1..n).map(|i| (i, i + 1, 1.0)).collect();
        WeightedDigraph::undirected(n, &e)
    }

    pub fn star(n: usize) -> Result<Self> {
        let e: Vec<_> = (2..=n).map(|i| (1, i, 1.0)).collect();
        WeightedDigraph::undirected(n, &e)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let e: Vec<_> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j, 1.0))).collect();
        WeightedDigraph::undirected(n, &e)
    }

    /// Directed cycle `1 -> 2 -> ... -> n -> 1`.
    pub fn directed_cycle(n: usize) -> Result<Self> {
        let arcs = (1..=n).map(|i| (i, i % n + 1, 1.0)).collect();
        WeightedDigraph::new(n, arcs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize, f64)] {
        &self.arcs
    }
}

pub fn laplacian(g: &WeightedDigraph) -> RealMatrix {
    let mut l = RealMatrix::zeros(g.n, g.n);
    for &(from, to, w) in &g.arcs {
        let (i, j) = (to - 1, from - 1);
        l[(i, j)] -= w;
        l[(i, i)] += w;
    }
    l
}

/// States `exp(-L t) x0`, one per grid time.
pub fn simulate(l: &RealMatrix, x0: &RealVector, grid: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = l.order()?;
    if x0.len() != n {
        return Err(Error::domain("initial vector length does not match L"));
    }
    let neg = l.scale(-1.0);
    grid.par_iter()
        .map(|&t| Ok(expm(&neg, t)?.matvec(x0.as_slice())))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SignTable {
    pub t: f64,
    pub x: Vec<f64>,
    /// `x_i(t) x_i(0)`.
    pub products: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignReversalAudit {
    pub x0: RealVector,
    pub grid: Vec<f64>,
    /// First grid time at which no index keeps its sign.
    pub first_violation: Option<SignTable>,
    /// Per grid time, the (1-based) index with the largest positive
    /// `x_i(t) x_i(0)`, or `None` when no index qualifies.
    pub preserved_index_trace: Vec<Option<usize>>,
}

impl SignReversalAudit {
    pub fn violations(&self) -> usize {
        self.preserved_index_trace.iter().filter(|i| i.is_none()).count()
    }
}

/// Product threshold `1e-12 |x0|^2`.
pub fn product_tol(x0: &RealVector) -> f64 {
    1e-12 * x0.norm_sq()
}

fn audit_one(traj: &[Vec<f64>], x0: &RealVector, grid: &[f64]) -> SignReversalAudit {
    let tol = product_tol(x0);
    let mut first_violation = None;
    let mut trace = Vec::with_capacity(grid.len());
    for (x, &t) in traj.iter().zip(grid) {
        let products: Vec<f64> = x.iter().zip(x0.as_slice()).map(|(a, b)| a * b).collect();
        let best = (0..products.len())
            .filter(|&i| x0[i] != 0.0 && products[i] > tol)
            .max_by(|&i, &j| products[i].total_cmp(&products[j]));
        if best.is_none() && first_violation.is_none() {
            first_violation = Some(SignTable { t, x: x.clone(), products });
        }
        trace.push(best.map(|i| i + 1));
    }
    SignReversalAudit { x0: x0.clone(), grid: grid.to_vec(), first_violation, preserved_index_trace: trace }
}

/// Audits every initial vector for a time at which all signs flip or vanish.
pub fn audit_sign_nonreversal(
    l: &RealMatrix,
    x0s: &[RealVector],
    grid: &[f64],
) -> Result<Vec<SignReversalAudit>> {
    let n = l.order()?;
    let neg = l.scale(-1.0);
    let props: Vec<RealMatrix> = grid.par_iter().map(|&t| expm(&neg, t)).collect::<Result<_>>()?;
    x0s.par_iter()
        .map(|x0| {
            if x0.len() != n {
                return Err(Error::domain("initial vector length does not match L"));
            }
            let traj: Vec<Vec<f64>> = props.iter().map(|e| e.matvec(x0.as_slice())).collect();
            Ok(audit_one(&traj, x0, grid))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationWitness {
    pub t: f64,
    pub x0: RealVector,
    pub x_t: Vec<f64>,
    pub products: Vec<f64>,
    /// Smallest principal minor of `exp(-L t)` at the chosen time.
    pub min_principal_minor: f64,
}

/// Picks the grid time where `exp(-L t)` has its smallest principal minor
/// and searches that matrix for a sign-reversing initial vector.
pub fn find_violation(
    l: &RealMatrix,
    grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Option<ViolationWitness>> {
    l.order()?;
    let neg = l.scale(-1.0);
    let mins: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&t| {
            let e = expm(&neg, t)?;
            let s = e.max_abs().max(1.0);
            let m = principal_minors(&e)?
                .iter()
                .map(|(al, v)| v / s.powi(al.len() as i32))
                .fold(f64::INFINITY, f64::min);
            Ok((t, m))
        })
        .collect::<Result<_>>()?;
    let Some(&(t, m)) = mins.iter().min_by(|a, b| a.1.total_cmp(&b.1)) else {
        return Ok(None);
    };
    let e = expm(&neg, t)?;
    let Some(w) = sign_reversal_search(&e, trials, seed) else {
        return Ok(None);
    };
    let x_t = e.matvec(w.x.as_slice());
    let products = x_t.iter().zip(w.x.as_slice()).map(|(a, b)| a * b).collect();
    Ok(Some(ViolationWitness { t, x0: w.x, x_t, products, min_principal_minor: m }))
}

/// Smallest nonzero real part among the eigenvalues of `L`.
pub fn algebraic_connectivity(l: &RealMatrix) -> Option<f64> {
    let s = spectrum(l).ok()?;
    let floor = 1e-9 * (1.0 + s.spectral_radius);
    s.eigenvalues.iter().map(|e| e.0).filter(|&re| re > floor).min_by(f64::total_cmp)
}

/// `50 / lambda_2`, long enough for ten-digit convergence.
pub fn consensus_time(l: &RealMatrix) -> Option<f64> {
    algebraic_connectivity(l).map(|l2| 50.0 / l2)
}

/// State at `consensus_time(L)` and its mean as the consensus estimate.
pub fn consensus_estimate(l: &RealMatrix, x0: &RealVector) -> Result<(f64, Vec<f64>)> {
    let t = consensus_time(l).unwrap_or(0.0);
    let x = simulate(l, x0, &[t])?.remove(0);
    let c = x.iter().sum::<f64>() / x.len() as f64;
    Ok((c, x))
}

#[derive(Debug, Clone, Serialize)]
pub struct PmVerdict {
    pub k_max: usize,
    pub is_pm: bool,
    pub first_failing_power: Option<usize>,
    pub failing_verdict: Option<PVerdict>,
}

/// Checks `A^0, A^1, ..., A^k_max` for the P-property.
pub fn is_pm_matrix(a: &RealMatrix, k_max: usize, tol: f64) -> Result<PmVerdict> {
    let n = a.order()?;
    let mut p = RealMatrix::identity(n);
    for k in 0..=k_max {
        if k > 0 {
            p = p.matmul(a);
        }
        let v = is_p_matrix(&p, tol)?;
        if !v.is_p {
            return Ok(PmVerdict { k_max, is_pm: false, first_failing_power: Some(k), failing_verdict: Some(v) });
        }
    }
    Ok(PmVerdict { k_max, is_pm: true, first_failing_power: None, failing_verdict: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_cycle_laplacians() {
        let l = laplacian(&WeightedDigraph::path(3).unwrap());
        let want = RealMatrix::from_rows(&[[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]]).unwrap();
        assert_eq!(l, want);
        let c = laplacian(&WeightedDigraph::directed_cycle(3).unwrap());
        let want = RealMatrix::from_rows(&[[1.0, 0.0, -1.0], [-1.0, 1.0, 0.0], [0.0, -1.0, 1.0]]).unwrap();
        assert_eq!(c, want);
        let e = laplacian(&WeightedDigraph::new(3, vec![]).unwrap());
        assert_eq!(e, RealMatrix::zeros(3, 3));
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(WeightedDigraph::new(2, vec![(1, 1, 1.0)]).is_err());
        assert!(WeightedDigraph::new(2, vec![(1, 3, 1.0)]).is_err());
        assert!(WeightedDigraph::new(2, vec![(1, 2, 0.0)]).is_err());
    }

    #[test]
    fn trajectories() {
        let l = laplacian(&WeightedDigraph::path(3).unwrap());
        let ones = RealVector::new(vec![1.0; 3]).unwrap();
        for x in simulate(&l, &ones, &[0.0, 1.0, 10.0]).unwrap() {
            for v in x {
                assert!((v - 1.0).abs() < 1e-12);
            }
        }
        let x0 = RealVector::new(vec![1.0, 0.0, -1.0]).unwrap();
        let end = simulate(&l, &x0, &[60.0]).unwrap().remove(0);
        assert!(end.iter().all(|v| v.abs() < 1e-10));
        let z = RealMatrix::zeros(3, 3);
        assert_eq!(simulate(&z, &x0, &[5.0]).unwrap()[0], x0.as_slice());
    }

    #[test]
    fn cycle_has_violation() {
        let l = laplacian(&WeightedDigraph::directed_cycle(3).unwrap());
        let grid: Vec<f64> = (1..=200).map(|i| 20.0 * i as f64 / 200.0).collect();
        let w = find_violation(&l, &grid, 10_000, 1).unwrap().unwrap();
        let audit = audit_sign_nonreversal(&l, &[w.x0.clone()], &[w.t]).unwrap();
        assert!(audit[0].first_violation.is_some(), "{w:?}");
    }

    #[test]
    fn ones_never_violate() {
        let l = laplacian(&WeightedDigraph::directed_cycle(3).unwrap());
        let grid: Vec<f64> = (0..50).map(|i| i as f64 * 0.4).collect();
        let a = audit_sign_nonreversal(&l, &[RealVector::new(vec![1.0; 3]).unwrap()], &grid).unwrap();
        assert_eq!(a[0].violations(), 0);
    }

    #[test]
    fn pm_examples() {
        assert!(is_pm_matrix(&RealMatrix::identity(3), 30, 1e-9).unwrap().is_pm);
        let s = RealMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(is_pm_matrix(&s, 5, 1e-9).unwrap().first_failing_power, Some(1));
    }
}
