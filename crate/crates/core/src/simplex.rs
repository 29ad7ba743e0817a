// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense two-phase simplex for the tiny standard-form programs used by the
//! sign-reversal search. Bland's rule keeps it cycle-free.

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

const EPS: f64 = 1e-11;

struct Tableau {
    rows: usize,
    cols: usize,
    t: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.cols + j]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.cols;
        let p = self.t[r * w + c];
        for j in 0..w {
            self.t[r * w + j] /= p;
        }
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * w + c];
            if f != 0.0 {
                for j in 0..w {
                    self.t[i * w + j] -= f * self.t[r * w + j];
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimise the objective stored in the last row over the first
    /// `allowed` columns. Returns false when unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        let obj = self.rows - 1;
        let rhs = self.cols - 1;
        loop {
            let Some(c) = (0..allowed).find(|&j| self.at(obj, j) < -EPS) else {
                return true;
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..obj {
                let a = self.at(i, c);
                if a > EPS {
                    let ratio = self.at(i, rhs) / a;
                    let better = match best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < br - EPS || (ratio <= br + EPS && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c);
        }
    }
}

/// `min c^T x` subject to `A x = b`, `x >= 0`, with `A` given by rows.
pub(crate) fn minimize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> LpOutcome {
    let m = a.len();
    let nv = c.len();
    let cols = nv + m + 1;
    let rows = m + 1;
    let mut t = vec![0.0; rows * cols];
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..nv {
            t[i * cols + j] = sign * a[i][j];
        }
        t[i * cols + nv + i] = 1.0;
        t[i * cols + cols - 1] = sign * b[i];
    }
    // Phase one objective: sum of artificials, expressed in non-basic terms.
    for i in 0..m {
        for j in 0..cols {
            if !(nv..nv + m).contains(&j) {
                t[m * cols + j] -= t[i * cols + j];
            }
        }
    }
    let mut tab = Tableau { rows, cols, t, basis: (nv..nv + m).collect() };
    tab.run(nv + m);
    let infeas = -tab.at(m, cols - 1);
    let scale = 1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if infeas > 1e-9 * scale {
        return LpOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis where possible.
    for r in 0..m {
        if tab.basis[r] >= nv {
            if let Some(c) = (0..nv).find(|&j| tab.at(r, j).abs() > EPS) {
                tab.pivot(r, c);
            }
        }
    }
    // Phase two objective.
    for j in 0..cols {
        tab.t[m * cols + j] = if j < nv { c[j] } else { 0.0 };
    }
    for r in 0..m {
        let bj = tab.basis[r];
        if bj < nv && c[bj] != 0.0 {
            let f = c[bj];
            for j in 0..cols {
                tab.t[m * cols + j] -= f * tab.t[r * cols + j];
            }
        }
    }
    if !tab.run(nv) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![0.0; nv];
    for r in 0..m {
        if tab.basis[r] < nv {
            x[tab.basis[r]] = tab.at(r, cols - 1);
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { x, value }
}
