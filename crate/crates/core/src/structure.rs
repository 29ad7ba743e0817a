// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Zero-pattern structure: triangularity, tridiagonality, strongly connected
//! components and diagonal symmetrizers.

use std::collections::{BTreeSet, VecDeque};

use crate::matrix::RealMatrix;

/// Scale-aware threshold below which an entry counts as a structural zero.
pub fn structural_tol(a: &RealMatrix, rel: f64) -> f64 {
    rel * a.max_abs().max(1.0)
}

pub fn is_upper_triangular(a: &RealMatrix, tol: f64) -> bool {
    let n = a.nrows();
    a.is_square() && (0..n).all(|i| (0..i).all(|j| a[(i, j)].abs() <= tol))
}

pub fn is_lower_triangular(a: &RealMatrix, tol: f64) -> bool {
    is_upper_triangular(&a.transpose(), tol)
}

pub fn is_tridiagonal(a: &RealMatrix, tol: f64) -> bool {
    let n = a.nrows();
    a.is_square()
        && (0..n).all(|i| (0..n).all(|j| i.abs_diff(j) <= 1 || a[(i, j)].abs() <= tol))
}

/// Strongly connected components of the digraph with an arc `i -> j`
/// whenever `|a_ij| > tol`, `i != j`.
///
/// Components are listed so that every arc between different components goes
/// from an earlier component to a later one; permuting `A` by the
/// concatenation therefore makes it block upper triangular. Ties are broken
/// by smallest member, and members are sorted, so the output is
/// deterministic. Indices are 0-based.
pub fn strongly_connected_components(a: &RealMatrix, tol: f64) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && a[(i, j)].abs() > tol).collect())
        .collect();

    // Tarjan, iterative.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp_of[w] = comps.len();
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }

    // Kahn's algorithm on the condensation, smallest member first.
    let c = comps.len();
    let mut succ = vec![BTreeSet::new(); c];
    let mut indeg = vec![0usize; c];
    for i in 0..n {
        for &j in &adj[i] {
            let (ci, cj) = (comp_of[i], comp_of[j]);
            if ci != cj && succ[ci].insert(cj) {
                indeg[cj] += 1;
            }
        }
    }
    let mut ready: BTreeSet<(usize, usize)> =
        (0..c).filter(|&x| indeg[x] == 0).map(|x| (comps[x][0], x)).collect();
    let mut order = Vec::with_capacity(c);
    while let Some(first) = ready.iter().next().copied() {
        ready.remove(&first);
        let x = first.1;
        order.push(x);
        for &y in &succ[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                ready.insert((comps[y][0], y));
            }
        }
    }
    order.into_iter().map(|x| comps[x].clone()).collect()
}

/// A positive diagonal `d` with `D A D^{-1}` symmetric, if one exists.
///
/// Requires `a_ij a_ji > 0` wherever either entry exceeds `tol`; the ratios
/// are then propagated along a spanning forest of the pattern graph and every
/// remaining edge is checked to relative accuracy `rel`.
pub fn diagonal_symmetrizer(a: &RealMatrix, tol: f64, rel: f64) -> Option<Vec<f64>> {
    let n = a.nrows();
    if !a.is_square() {
        return None;
    }
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (a[(i, j)], a[(j, i)]);
            let (zx, zy) = (x.abs() <= tol, y.abs() <= tol);
            if zx && zy {
                continue;
            }
            if zx || zy || x * y <= 0.0 {
                return None;
            }
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    // d_j / d_i = sqrt(a_ij / a_ji)
    let mut d = vec![0.0; n];
    for root in 0..n {
        if d[root] != 0.0 {
            continue;
        }
        d[root] = 1.0;
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if d[j] == 0.0 {
                    d[j] = d[i] * (a[(i, j)] / a[(j, i)]).sqrt();
                    queue.push_back(j);
                }
            }
        }
    }
    for i in 0..n {
        for &j in &adj[i] {
            let lhs = d[i] * a[(i, j)] / d[j];
            let rhs = d[j] * a[(j, i)] / d[i];
            if (lhs - rhs).abs() > rel * lhs.abs().max(rhs.abs()) {
                return None;
            }
        }
    }
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_order_is_upper_triangular() {
        let a = RealMatrix::from_rows(&[[-4.0, 1.0, -6.0], [2.0, -5.0, 6.0], [0.0, 0.0, -9.0]])
            .unwrap();
        assert_eq!(strongly_connected_components(&a, 0.0), vec![vec![0, 1], vec![2]]);
        // Reversed dependency puts the sink last.
        let b = RealMatrix::from_rows(&[[-9.0, 0.0, 0.0], [6.0, -4.0, 1.0], [-6.0, 2.0, -5.0]])
            .unwrap();
        assert_eq!(strongly_connected_components(&b, 0.0), vec![vec![1, 2], vec![0]]);
    }

    #[test]
    fn irreducible_and_diagonal() {
        let c = RealMatrix::from_rows(&[[1.0, 0.0, -1.0], [-1.0, 1.0, 0.0], [0.0, -1.0, 1.0]])
            .unwrap();
        assert_eq!(strongly_connected_components(&c, 0.0), vec![vec![0, 1, 2]]);
        let d = RealMatrix::from_diagonal(&[1.0, -1.0]);
        assert_eq!(strongly_connected_components(&d, 0.0), vec![vec![0], vec![1]]);
    }

    #[test]
    fn jacobi_symmetrizer_matches_closed_form() {
        let a = RealMatrix::from_rows(&[[1.0, 2.0, 0.0], [8.0, 0.0, 3.0], [0.0, 12.0, 5.0]])
            .unwrap();
        let d = diagonal_symmetrizer(&a, 0.0, 1e-12).unwrap();
        assert!((d[1] - (2.0f64 / 8.0).sqrt()).abs() < 1e-15);
        assert!(a.diag_similarity(&d).is_symmetric(1e-12));
    }

    #[test]
    fn inconsistent_cycle_rejected() {
        let a = RealMatrix::from_rows(&[[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]])
            .unwrap();
        assert!(diagonal_symmetrizer(&a, 0.0, 1e-12).is_none());
        let b = RealMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        assert!(diagonal_symmetrizer(&b, 0.0, 1e-12).is_none());
    }
}
