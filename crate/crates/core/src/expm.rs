// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential and eigenvalues.
//!
//! `expm` is scaling and squaring with diagonal Padé approximants of degree
//! 3, 5, 7, 9 or 13 chosen from the 1-norm (Higham, 2005).

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::structure::{diagonal_symmetrizer, strongly_connected_components};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `exp(A t)`.
pub fn expm(a: &RealMatrix, t: f64) -> Result<RealMatrix> {
    let n = a.order()?;
    if t == 0.0 {
        return Ok(RealMatrix::identity(n));
    }
    if !t.is_finite() {
        return Err(Error::Overflow { t });
    }
    let x = a.to_nalgebra() * t;
    let out = expm_nalgebra(&x).ok_or(Error::Overflow { t })?;
    let r = RealMatrix::from_nalgebra(&out);
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Overflow { t })
    }
}

fn norm1(x: &DMatrix<f64>) -> f64 {
    x.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn expm_nalgebra(x: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let nrm = norm1(x);
    if !nrm.is_finite() {
        return None;
    }
    for &(m, theta) in &THETA {
        if nrm <= theta {
            let b: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            return pade_low(x, b);
        }
    }
    let s = (nrm / THETA_13).log2().ceil().max(0.0) as i32;
    let xs = x * 2f64.powi(-s);
    let mut r = pade_13(&xs)?;
    for _ in 0..s {
        r = &r * &r;
        if r.iter().any(|v| !v.is_finite()) {
            return None;
        }
    }
    Some(r)
}

fn solve_pade(u: DMatrix<f64>, v: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let p = &v + &u;
    let q = v - u;
    q.lu().solve(&p)
}

fn pade_low(x: &DMatrix<f64>, b: &[f64]) -> Option<DMatrix<f64>> {
    let n = x.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let x2 = x * x;
    let mut u = &id * b[1];
    let mut v = &id * b[0];
    let mut p = id.clone();
    let mut j = 2;
    while j < b.len() {
        p = &p * &x2;
        v += &p * b[j];
        if j + 1 < b.len() {
            u += &p * b[j + 1];
        }
        j += 2;
    }
    solve_pade(x * u, v)
}

fn pade_13(x: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = x.nrows();
    let b = &B13;
    let id = DMatrix::<f64>::identity(n, n);
    let x2 = x * x;
    let x4 = &x2 * &x2;
    let x6 = &x4 * &x2;
    let u_inner = &x6 * b[13] + &x4 * b[11] + &x2 * b[9];
    let u = x * (&x6 * u_inner + &x6 * b[7] + &x4 * b[5] + &x2 * b[3] + &id * b[1]);
    let v_inner = &x6 * b[12] + &x4 * b[10] + &x2 * b[8];
    let v = &x6 * v_inner + &x6 * b[6] + &x4 * b[4] + &x2 * b[2] + &id * b[0];
    solve_pade(u, v)
}

/// Default relative tolerance for treating an eigenvalue as real.
pub const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct SpectralInfo {
    /// `(re, im)` pairs, sorted by real part then imaginary part.
    pub eigenvalues: Vec<(f64, f64)>,
    pub spectral_radius: f64,
    pub all_real: bool,
    pub real_tolerance: f64,
}

impl SpectralInfo {
    /// Largest `|im| / (1 + |lambda|)` over the spectrum.
    pub fn max_relative_imag(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|&(re, im)| im.abs() / (1.0 + re.hypot(im)))
            .fold(0.0, f64::max)
    }

    /// Eigenvalue with the largest imaginary part, if it is clearly non-real.
    pub fn complex_pair(&self, rel: f64) -> Option<(f64, f64)> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|&(re, im)| im > rel * (1.0 + re.hypot(im)))
            .max_by(|x, y| x.1.total_cmp(&y.1))
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.0).collect()
    }
}

pub fn spectrum(a: &RealMatrix) -> Result<SpectralInfo> {
    spectrum_with_tol(a, REAL_TOL)
}

/// Eigenvalues of `A`.
///
/// The matrix is first split along its exact zero pattern into irreducible
/// diagonal blocks. Scalar blocks are read off, symmetric and diagonally
/// symmetrizable blocks go through the symmetric solver, and only the rest
/// reach the general Schur iteration.
pub fn spectrum_with_tol(a: &RealMatrix, real_tol: f64) -> Result<SpectralInfo> {
    a.order()?;
    let mut eig = Vec::with_capacity(a.nrows());
    for block in strongly_connected_components(a, 0.0) {
        let b = a.select(&block, &block);
        eig.extend(block_eigenvalues(&b)?);
    }
    eig.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let spectral_radius = eig.iter().map(|&(re, im)| re.hypot(im)).fold(0.0, f64::max);
    let all_real = eig.iter().all(|&(re, im)| im.abs() <= real_tol * (1.0 + re.hypot(im)));
    Ok(SpectralInfo { eigenvalues: eig, spectral_radius, all_real, real_tolerance: real_tol })
}

fn symmetric_eigenvalues(b: &RealMatrix) -> Vec<(f64, f64)> {
    let m = b.to_nalgebra();
    let sym = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().map(|&l| (l, 0.0)).collect()
}

fn block_eigenvalues(b: &RealMatrix) -> Result<Vec<(f64, f64)>> {
    let k = b.nrows();
    if k == 1 {
        return Ok(vec![(b[(0, 0)], 0.0)]);
    }
    if b.is_symmetric(0.0) {
        return Ok(symmetric_eigenvalues(b));
    }
    if let Some(d) = diagonal_symmetrizer(b, 0.0, 1e-12) {
        return Ok(symmetric_eigenvalues(&b.diag_similarity(&d)));
    }
    let max_iter = 200 * k.max(10);
    let schur = b
        .to_nalgebra()
        .try_schur(f64::EPSILON, max_iter)
        .ok_or(Error::NoConvergence { what: "Schur iteration", iterations: max_iter })?;
    Ok(schur.complex_eigenvalues().iter().map(|c| (c.re, c.im)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_is_identity() {
        let a = RealMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(expm(&a, 0.0).unwrap(), RealMatrix::identity(2));
    }

    #[test]
    fn example_entries() {
        let a = RealMatrix::from_rows(&[[0.0, -1.0, 0.0], [-2.0, 0.0, -2.0], [0.0, -1.0, 0.0]])
            .unwrap();
        let e = expm(&a, 1.0).unwrap();
        assert!((e[(0, 0)] - 1f64.cosh().powi(2)).abs() < 1e-12);
        let b = RealMatrix::from_rows(&[[-4.0, 1.0, -6.0], [2.0, -5.0, 6.0], [0.0, 0.0, -9.0]])
            .unwrap();
        let e = expm(&b, 1.0).unwrap();
        let want = (2.0 * (-3f64).exp() + (-6f64).exp()) / 3.0;
        assert!((e[(0, 0)] - want).abs() < 1e-12);
    }

    #[test]
    fn small_norm_branches_agree_with_series() {
        for scale in [1e-3, 0.1, 0.5, 1.5, 4.0, 40.0] {
            let a = RealMatrix::from_rows(&[[0.3, -0.7], [0.2, 0.1]]).unwrap().scale(scale);
            let e = expm(&a, 1.0).unwrap();
            // Taylor series with enough terms, evaluated after scaling down.
            let s = 10;
            let x = a.scale(1.0 / 1024.0);
            let mut term = RealMatrix::identity(2);
            let mut sum = RealMatrix::identity(2);
            for j in 1..30 {
                term = term.matmul(&x).scale(1.0 / j as f64);
                sum = sum.add(&term);
            }
            for _ in 0..s {
                sum = sum.matmul(&sum);
            }
            assert!(e.max_abs_diff(&sum) <= 1e-12 * (1.0 + sum.max_abs()), "scale {scale}");
        }
    }

    #[test]
    fn overflow_is_reported() {
        let a = RealMatrix::from_rows(&[[1.0]]).unwrap();
        assert_eq!(expm(&a, 1000.0), Err(Error::Overflow { t: 1000.0 }));
    }

    #[test]
    fn rotation_spectrum() {
        let a = RealMatrix::from_rows(&[[-1.0, 2.0], [-2.0, -1.0]]).unwrap();
        let s = spectrum(&a).unwrap();
        assert!(!s.all_real);
        assert!((s.eigenvalues[0].0 + 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[0].1.abs() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn similarity_example_spectrum() {
        let a = RealMatrix::from_rows(&[[15.0, -9.0, -18.0], [1.0, 3.0, -12.0], [-1.0, -3.0, 12.0]])
            .unwrap();
        let s = spectrum(&a).unwrap();
        assert!(s.all_real, "{s:?}");
        for (got, want) in s.eigenvalues.iter().zip([0.0, 12.0, 18.0]) {
            assert!((got.0 - want).abs() < 1e-9, "{got:?}");
        }
    }

    #[test]
    fn nilpotent_block_is_exactly_real() {
        let a = RealMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        let s = spectrum(&a).unwrap();
        assert!(s.all_real);
        assert_eq!(s.eigenvalues, vec![(0.0, 0.0), (0.0, 0.0)]);
    }
}
