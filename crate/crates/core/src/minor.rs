// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Determinants of extracted submatrices.
//!
//! Real minors use LU with partial pivoting. First-order minors of a pencil
//! `B + eps C` use the same elimination over dual numbers, with complete
//! pivoting on the real parts so that no division by a pure infinitesimal
//! ever happens.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::matrix::RealMatrix;

/// Determinant of a row-major `k x k` buffer, destroyed in place.
pub(crate) fn det_in_place(m: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..k {
        let (p, best) = (c..k)
            .map(|r| (r, m[r * k + c].abs()))
            .fold((c, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return 0.0;
        }
        if p != c {
            for j in 0..k {
                m.swap(c * k + j, p * k + j);
            }
            det = -det;
        }
        let pivot = m[c * k + c];
        det *= pivot;
        for r in c + 1..k {
            let f = m[r * k + c] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in c + 1..k {
                m[r * k + j] -= f * m[c * k + j];
            }
        }
    }
    det
}

/// Determinant of a square matrix.
pub fn determinant(a: &RealMatrix) -> Result<f64> {
    let n = a.order()?;
    let mut buf = a.as_slice().to_vec();
    Ok(det_in_place(&mut buf, n))
}

fn check_pair(a_rows: usize, a_cols: usize, alpha: &IndexSet, beta: &IndexSet) -> Result<()> {
    if alpha.len() != beta.len() {
        return Err(Error::domain(format!(
            "minor needs |alpha| = |beta|, got {} and {}",
            alpha.len(),
            beta.len()
        )));
    }
    if alpha.elems().last().is_some_and(|&i| i > a_rows)
        || beta.elems().last().is_some_and(|&j| j > a_cols)
    {
        return Err(Error::domain(format!(
            "index sets {alpha} / {beta} exceed a {a_rows}x{a_cols} matrix"
        )));
    }
    Ok(())
}

/// `A(alpha|beta) = det A[alpha|beta]`. The empty minor is 1.
pub fn minor(a: &RealMatrix, alpha: &IndexSet, beta: &IndexSet) -> Result<f64> {
    check_pair(a.nrows(), a.ncols(), alpha, beta)?;
    Ok(minor_unchecked(a, alpha, beta))
}

pub(crate) fn minor_unchecked(a: &RealMatrix, alpha: &IndexSet, beta: &IndexSet) -> f64 {
    let k = alpha.len();
    if k == 0 {
        return 1.0;
    }
    let mut buf = Vec::with_capacity(k * k);
    for i in alpha.zero_based() {
        for j in beta.zero_based() {
            buf.push(a[(i, j)]);
        }
    }
    det_in_place(&mut buf, k)
}

/// Truncated first-order number `re + eps * eps_part`, with `eps^2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub const ZERO: Dual = Dual { re: 0.0, eps: 0.0 };
    pub const ONE: Dual = Dual { re: 1.0, eps: 0.0 };

    pub fn new(re: f64, eps: f64) -> Self {
        Dual { re, eps }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl Div for Dual {
    type Output = Dual;
    /// Only defined for divisors with a nonzero real part.
    fn div(self, o: Dual) -> Dual {
        debug_assert!(o.re != 0.0, "division by a non-unit dual number");
        let re = self.re / o.re;
        Dual::new(re, (self.eps - re * o.eps) / o.re)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

/// Determinant of a `k x k` dual buffer.
pub(crate) fn det_dual_in_place(m: &mut [Dual], k: usize) -> Dual {
    let mut det = Dual::ONE;
    for c in 0..k {
        let mut best = (c, c, 0.0);
        for r in c..k {
            for j in c..k {
                let v = m[r * k + j].re.abs();
                if v > best.2 {
                    best = (r, j, v);
                }
            }
        }
        if best.2 == 0.0 {
            // The trailing block is a multiple of eps; its determinant
            // vanishes to first order unless it is 1x1.
            return if k - c == 1 { det * m[c * k + c] } else { Dual::ZERO };
        }
        let (p, q, _) = best;
        if p != c {
            for j in 0..k {
                m.swap(c * k + j, p * k + j);
            }
            det = -det;
        }
        if q != c {
            for r in 0..k {
                m.swap(r * k + c, r * k + q);
            }
            det = -det;
        }
        let pivot = m[c * k + c];
        det = det * pivot;
        for r in c + 1..k {
            let f = m[r * k + c] / pivot;
            for j in c + 1..k {
                let v = m[c * k + j];
                m[r * k + j] = m[r * k + j] - f * v;
            }
        }
    }
    det
}

/// `det (B + eps C)[alpha|beta]` to first order in `eps`.
pub fn minor_first_order(
    base: &RealMatrix,
    direction: &RealMatrix,
    alpha: &IndexSet,
    beta: &IndexSet,
) -> Result<Dual> {
    if (base.nrows(), base.ncols()) != (direction.nrows(), direction.ncols()) {
        return Err(Error::domain("pencil matrices must have the same shape"));
    }
    check_pair(base.nrows(), base.ncols(), alpha, beta)?;
    Ok(minor_first_order_unchecked(base, direction, alpha, beta))
}

pub(crate) fn minor_first_order_unchecked(
    base: &RealMatrix,
    direction: &RealMatrix,
    alpha: &IndexSet,
    beta: &IndexSet,
) -> Dual {
    let k = alpha.len();
    if k == 0 {
        return Dual::ONE;
    }
    let mut buf = Vec::with_capacity(k * k);
    for i in alpha.zero_based() {
        for j in beta.zero_based() {
            buf.push(Dual::new(base[(i, j)], direction[(i, j)]));
        }
    }
    det_dual_in_place(&mut buf, k)
}
