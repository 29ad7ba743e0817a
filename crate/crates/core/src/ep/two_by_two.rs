// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact decision for 2x2 matrices: EP iff `a12 a21 >= 0`.

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::index::IndexSet;
use crate::matrix::RealMatrix;
use crate::minor::minor_unchecked;

#[derive(Debug, Clone, PartialEq)]
pub enum TwoByTwo {
    EP,
    /// `exp(A t)` has the nonpositive diagonal entry `alpha` at time `t`.
    NotEP { t: f64, alpha: IndexSet, value: f64 },
}

/// First time at which a diagonal entry of `exp(A t)` reaches zero, for
/// `a12 a21 < 0`.
///
/// With `A' = A - (tr A / 2) I = [[a, b], [c, -a]]` one has `A'^2 = d I`,
/// `d = a^2 + bc`, so `exp(A' t)` is an explicit combination of `I` and `A'`
/// (trigonometric, linear or hyperbolic in `t` as `d < 0`, `= 0`, `> 0`).
/// The entry `cosh - |a| sinh / s` (and its analogues) vanishes first.
pub fn first_zero_time(a: &RealMatrix) -> Option<(f64, usize)> {
    let (b, c) = (a[(0, 1)], a[(1, 0)]);
    if b * c >= 0.0 {
        return None;
    }
    let h = 0.5 * (a[(0, 0)] - a[(1, 1)]);
    let d = h * h + b * c;
    // The entry with -|h| is the second one when h >= 0.
    let idx = if h >= 0.0 { 2 } else { 1 };
    let ha = h.abs();
    let t = if d < 0.0 {
        let beta = (-d).sqrt();
        beta.atan2(ha) / beta
    } else if d == 0.0 {
        1.0 / ha
    } else {
        let s = d.sqrt();
        (s / ha).atanh() / s
    };
    Some((t, idx))
}

pub fn check_2x2(a: &RealMatrix) -> Result<TwoByTwo> {
    if a.nrows() != 2 || a.ncols() != 2 {
        return Err(Error::domain("check_2x2 needs a 2x2 matrix"));
    }
    let Some((t, idx)) = first_zero_time(a) else {
        return Ok(TwoByTwo::EP);
    };
    let alpha = IndexSet::singleton(2, idx)?;
    let value = match expm(a, t) {
        Ok(e) => minor_unchecked(&e, &alpha, &alpha),
        Err(_) => {
            let shifted = a.shift_diagonal(-0.5 * a.trace());
            minor_unchecked(&expm(&shifted, t)?, &alpha, &alpha)
        }
    };
    Ok(TwoByTwo::NotEP { t, alpha, value })
}
