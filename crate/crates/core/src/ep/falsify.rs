// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Grid falsifier: scan principal minors of `exp(A t)` for a nonpositive
//! value.
//!
//! The scan runs on `A - (tr A / n) I`, which changes every minor of order
//! `k` by the positive factor `exp(-k t tr A / n)` and keeps magnitudes near
//! one for much longer. For order up to [`COMPOUND_ROUTE_LIMIT`] the minors of
//! order `k` are read off the diagonal of `exp(A^[k] t)`; larger matrices use
//! direct minors of `exp(A t)`. Any hit is refined by bisection and then
//! re-verified against the original matrix.

use rayon::prelude::*;
use serde::Serialize;

use crate::compound::add_compound;
use crate::error::{Error, Result};
use crate::expm::{expm, spectrum, SpectralInfo};
use crate::index::{all_nonempty_subsets, enumerate_index_sets, IndexSet};
use crate::matrix::RealMatrix;
use crate::minor::minor_unchecked;
use crate::pclass::minor_tol;

/// Largest order for which the additive-compound route is used by default.
pub const COMPOUND_ROUTE_LIMIT: usize = 8;
/// Relative noise floor: a grid value must be below `-NOISE * scale`.
pub const NOISE: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct TimeGrid {
    pub points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(mut points: Vec<f64>) -> Self {
        points.retain(|t| t.is_finite());
        points.sort_by(f64::total_cmp);
        points.dedup();
        TimeGrid { points }
    }

    /// Linear points on `(0, t_max]`, optionally mirrored to negative times.
    pub fn linear(t_max: f64, points: usize, mirror: bool) -> Self {
        let mut v: Vec<f64> = (1..=points).map(|i| t_max * i as f64 / points as f64).collect();
        if mirror {
            v.extend(v.clone().iter().map(|t| -t));
        }
        TimeGrid::new(v)
    }

    /// Log-spaced points on `[t_min, t_max]`.
    pub fn log(t_min: f64, t_max: f64, points: usize, mirror: bool) -> Self {
        let (a, b) = (t_min.ln(), t_max.ln());
        let mut v: Vec<f64> = (0..points)
            .map(|i| (a + (b - a) * i as f64 / (points.max(2) - 1) as f64).exp())
            .collect();
        if mirror {
            v.extend(v.clone().iter().map(|t| -t));
        }
        TimeGrid::new(v)
    }

    /// Union of `log_points` log-spaced points on `[1e-3, t_max]` and
    /// `linear_points` linear points on `(0, t_max]`, mirrored.
    pub fn log_linear(t_max: f64, log_points: usize, linear_points: usize) -> Self {
        let mut v = TimeGrid::log(1e-3_f64.min(t_max), t_max, log_points, true).points;
        v.extend(TimeGrid::linear(t_max, linear_points, true).points);
        TimeGrid::new(v)
    }

    pub fn default_for(a: &RealMatrix) -> Self {
        let t = spectrum(a).map(|s| default_horizon(&s)).unwrap_or(10.0);
        TimeGrid::log_linear(t, 512, 512)
    }

    pub fn merged(mut self, extra: &[f64]) -> Self {
        self.points.extend_from_slice(extra);
        TimeGrid::new(self.points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `max(10, 10 / gap)`, `gap` being the smallest nonzero eigenvalue
/// separation; capped at `1e6`.
pub fn default_horizon(spec: &SpectralInfo) -> f64 {
    let ev = &spec.eigenvalues;
    let floor = 1e-9 * (1.0 + spec.spectral_radius);
    let mut gap = f64::INFINITY;
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            let d = (ev[i].0 - ev[j].0).hypot(ev[i].1 - ev[j].1);
            if d > floor {
                gap = gap.min(d);
            }
        }
    }
    (10.0 / gap).clamp(10.0, 1e6)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FalsifyMethod {
    Auto,
    /// Diagonals of `exp(A^[k] t)`.
    Compound,
    /// Principal minors of `exp(A t)`.
    Direct,
}

/// A time and principal index set at which `exp(A t)` fails to be P.
#[derive(Debug, Clone, Serialize)]
pub struct EPWitness {
    pub t: f64,
    pub alpha: IndexSet,
    /// `minor(exp(A t), alpha, alpha)` for the original matrix.
    pub minor_value: f64,
    /// Grid point that first exposed the failure, before refinement.
    pub grid_t: f64,
    pub grid_value: f64,
    /// `minor_value` is within the positivity tolerance of being nonpositive.
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridEvidence {
    pub method: FalsifyMethod,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub evaluated: usize,
    /// Smallest `minor / scale` seen, where `scale` is the noise reference.
    pub min_relative_minor: f64,
    pub min_at: Option<(f64, IndexSet)>,
    /// First times (per direction) at which `exp` overflowed.
    pub truncated_at: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FalsifyResult {
    pub witness: Option<EPWitness>,
    pub evidence: GridEvidence,
}

struct PointScan {
    min_rel: f64,
    min_alpha: IndexSet,
    hit: Option<(IndexSet, f64)>,
}

enum Route {
    Compound(Vec<(Vec<IndexSet>, RealMatrix)>),
    Direct(Vec<IndexSet>),
}

fn scan_point(shifted: &RealMatrix, route: &Route, t: f64) -> Result<Option<PointScan>> {
    let mut best: Option<PointScan> = None;
    let consider = |al: &IndexSet, v: f64, scale: f64, best: &mut Option<PointScan>| {
        let rel = v / scale;
        let entry = best.get_or_insert_with(|| PointScan {
            min_rel: f64::INFINITY,
            min_alpha: al.clone(),
            hit: None,
        });
        if rel < entry.min_rel {
            entry.min_rel = rel;
            entry.min_alpha = al.clone();
        }
        if entry.hit.is_none() && v <= -NOISE * scale {
            entry.hit = Some((al.clone(), v));
        }
    };
    match route {
        Route::Compound(blocks) => {
            for (sets, c) in blocks {
                let e = expm(c, t)?;
                let scale = e.max_abs().max(1.0);
                for (r, al) in sets.iter().enumerate() {
                    consider(al, e[(r, r)], scale, &mut best);
                }
            }
        }
        Route::Direct(sets) => {
            let e = expm(shifted, t)?;
            let s = e.max_abs().max(1.0);
            for al in sets {
                let scale = s.powi(al.len() as i32);
                consider(al, minor_unchecked(&e, al, al), scale, &mut best);
            }
        }
    }
    Ok(best)
}

fn bisect(shifted: &RealMatrix, alpha: &IndexSet, good: f64, bad: f64) -> f64 {
    let f = |t: f64| expm(shifted, t).map(|e| minor_unchecked(&e, alpha, alpha));
    match (f(good), f(bad)) {
        (Ok(g), _) if g <= 0.0 => return good,
        (Ok(_), Ok(b)) if b <= 0.0 => {}
        _ => return bad,
    }
    let (mut lo, mut hi) = (good, bad);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi || (hi - lo).abs() <= 1e-14 * hi.abs().max(1.0) {
            break;
        }
        match f(mid) {
            Ok(v) if v <= 0.0 => hi = mid,
            Ok(_) => lo = mid,
            Err(_) => break,
        }
    }
    hi
}

fn build_route(shifted: &RealMatrix, method: FalsifyMethod) -> Result<(Route, FalsifyMethod)> {
    let n = shifted.nrows();
    let method = match method {
        FalsifyMethod::Auto if n <= COMPOUND_ROUTE_LIMIT => FalsifyMethod::Compound,
        FalsifyMethod::Auto => FalsifyMethod::Direct,
        m => m,
    };
    Ok(match method {
        FalsifyMethod::Compound => {
            // Order n is exp(t tr) > 0 and never fails.
            let blocks = (1..n)
                .map(|k| Ok((enumerate_index_sets(k, n)?, add_compound(shifted, k)?.data)))
                .collect::<Result<Vec<_>>>()?;
            (Route::Compound(blocks), method)
        }
        _ => {
            if n > crate::pclass::PRINCIPAL_MINOR_LIMIT {
                return Err(Error::Capacity {
                    what: "falsifier principal-minor order",
                    limit: crate::pclass::PRINCIPAL_MINOR_LIMIT,
                    requested: n,
                    hint: "",
                });
            }
            let sets = all_nonempty_subsets(n).into_iter().filter(|s| s.len() < n).collect();
            (Route::Direct(sets), FalsifyMethod::Direct)
        }
    })
}

pub fn falsify_ep(a: &RealMatrix, grid: &TimeGrid) -> Result<FalsifyResult> {
    falsify_ep_with(a, grid, FalsifyMethod::Auto, crate::pclass::DEFAULT_TOL)
}

/// Grid search for `t` and `alpha` with `minor(exp(A t), alpha, alpha) <= 0`.
///
/// `tol` is the relative positivity tolerance used to mark the refined
/// witness as verified.
pub fn falsify_ep_with(
    a: &RealMatrix,
    grid: &TimeGrid,
    method: FalsifyMethod,
    tol: f64,
) -> Result<FalsifyResult> {
    let n = a.order()?;
    let shifted = a.shift_diagonal(-a.trace() / n as f64);
    let (route, method) = build_route(&shifted, method)?;
    let positive: Vec<f64> = grid.points.iter().copied().filter(|&t| t > 0.0).collect();
    let negative: Vec<f64> = grid.points.iter().rev().copied().filter(|&t| t < 0.0).collect();
    let mut evidence = GridEvidence {
        method,
        t_min: grid.points.first().copied().unwrap_or(0.0),
        t_max: grid.points.last().copied().unwrap_or(0.0),
        points: grid.len(),
        evaluated: 0,
        min_relative_minor: f64::INFINITY,
        min_at: None,
        truncated_at: Vec::new(),
    };
    for sweep in [positive, negative] {
        let scans: Vec<Result<Option<PointScan>>> =
            sweep.par_iter().map(|&t| scan_point(&shifted, &route, t)).collect();
        let mut prev = 0.0;
        for (&t, scan) in sweep.iter().zip(scans) {
            let scan = match scan {
                Ok(Some(s)) => s,
                Ok(None) => continue,
                Err(Error::Overflow { .. }) => {
                    evidence.truncated_at.push(t);
                    break;
                }
                Err(e) => return Err(e),
            };
            evidence.evaluated += 1;
            if scan.min_rel < evidence.min_relative_minor {
                evidence.min_relative_minor = scan.min_rel;
                evidence.min_at = Some((t, scan.min_alpha.clone()));
            }
            if let Some((alpha, grid_value)) = scan.hit {
                let refined = bisect(&shifted, &alpha, prev, t);
                let minor_value = match expm(a, refined) {
                    Ok(e) => minor_unchecked(&e, &alpha, &alpha),
                    Err(_) => minor_unchecked(&expm(&shifted, refined)?, &alpha, &alpha),
                };
                let check = expm(a, refined).unwrap_or_else(|_| RealMatrix::identity(n));
                let verified = minor_value <= minor_tol(&check, &alpha, tol);
                return Ok(FalsifyResult {
                    witness: Some(EPWitness {
                        t: refined,
                        alpha,
                        minor_value,
                        grid_t: t,
                        grid_value,
                        verified,
                    }),
                    evidence,
                });
            }
            prev = t;
        }
    }
    Ok(FalsifyResult { witness: None, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn m(rows: &[&[f64]]) -> RealMatrix {
        RealMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn rotation_witness_refines_to_quarter_turn() {
        for w in [0.5, 1.0, 2.0] {
            let a = m(&[&[-1.0, w], &[-w, -1.0]]);
            let r = falsify_ep(&a, &TimeGrid::default_for(&a)).unwrap();
            let wit = r.witness.unwrap();
            assert!((wit.t - FRAC_PI_2 / w).abs() <= 1e-6, "w={w} t={}", wit.t);
            assert!(wit.verified);
        }
    }

    #[test]
    fn similarity_counterexample_witness() {
        let b = m(&[&[1.0, 1.0], &[-1.0, -1.0]]);
        let wit = falsify_ep(&b, &TimeGrid::default_for(&b)).unwrap().witness.unwrap();
        assert!(wit.t >= 1.0 && wit.t <= 1.0 + 1e-6, "{}", wit.t);
        assert_eq!(wit.alpha.elems(), &[2]);
    }

    #[test]
    fn first_example_survives_symmetric_grid() {
        let a = m(&[&[0.0, -1.0, 0.0], &[-2.0, 0.0, -2.0], &[0.0, -1.0, 0.0]]);
        let grid = TimeGrid::linear(10.0, 1000, true).merged(&[0.0]);
        for method in [FalsifyMethod::Compound, FalsifyMethod::Direct] {
            let r = falsify_ep_with(&a, &grid, method, 1e-9).unwrap();
            assert!(r.witness.is_none(), "{:?}", r.witness);
        }
    }

    #[test]
    fn negative_times_are_scanned() {
        // exp(At) diag for t < 0 mirrors this matrix's negation.
        let b = m(&[&[-1.0, -1.0], &[1.0, 1.0]]);
        let grid = TimeGrid::linear(3.0, 300, true);
        let wit = falsify_ep(&b, &grid).unwrap().witness.unwrap();
        assert!(wit.t > 0.0);
        let neg = TimeGrid::new(grid.points.iter().copied().filter(|t| *t < 0.0).collect());
        let wit = falsify_ep(&b.scale(-1.0), &neg).unwrap().witness.unwrap();
        assert!((wit.t + 1.0).abs() < 1e-6, "{wit:?}");
    }

    #[test]
    fn overflow_truncates_grid() {
        let a = m(&[&[1000.0, 1.0], &[0.0, -1000.0]]);
        let r = falsify_ep(&a, &TimeGrid::linear(10.0, 10, false)).unwrap();
        assert!(r.witness.is_none());
        assert!(!r.evidence.truncated_at.is_empty());
    }
}
