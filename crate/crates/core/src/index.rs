// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Increasing index tuples drawn from `{1, ..., n}` and their lexicographic
//! ranks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A strictly increasing tuple of 1-based indices from `{1, ..., n}`.
///
/// Ordering is by cardinality first, then lexicographic, so sorting a mixed
/// collection yields the `(k, rank)` order used for principal-minor reports.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    n: usize,
    elems: Vec<usize>,
}

impl IndexSet {
    pub fn new(n: usize, elems: Vec<usize>) -> Result<Self> {
        if elems.iter().any(|&e| e == 0 || e > n) {
            return Err(Error::domain(format!("index set {elems:?} out of range 1..={n}")));
        }
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(format!("index set {elems:?} is not strictly increasing")));
        }
        Ok(IndexSet { n, elems })
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        IndexSet { n, elems: (1..=n).collect() }
    }

    pub fn singleton(n: usize, i: usize) -> Result<Self> {
        IndexSet::new(n, vec![i])
    }

    /// Builds from 0-based positions, which must already be increasing.
    pub fn from_zero_based(n: usize, positions: &[usize]) -> Result<Self> {
        IndexSet::new(n, positions.iter().map(|p| p + 1).collect())
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn zero_based(&self) -> impl Iterator<Item = usize> + '_ {
        self.elems.iter().map(|e| e - 1)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elems.binary_search(&i).is_ok()
    }

    pub fn sum(&self) -> usize {
        self.elems.iter().sum()
    }

    /// `{1..n} \ self`, increasing.
    pub fn complement(&self) -> IndexSet {
        let elems = (1..=self.n).filter(|i| !self.contains(*i)).collect();
        IndexSet { n: self.n, elems }
    }

    /// 0-based lexicographic position within `Q^{k,n}`.
    pub fn rank(&self) -> usize {
        let k = self.elems.len();
        let mut rank = 0usize;
        let mut prev = 0usize;
        for (i, &e) in self.elems.iter().enumerate() {
            for skipped in prev + 1..e {
                rank += binomial(self.n - skipped, k - i - 1);
            }
            prev = e;
        }
        rank
    }

    /// Inverse of [`IndexSet::rank`].
    pub fn unrank(n: usize, k: usize, mut rank: usize) -> Result<Self> {
        if k > n || rank >= binomial(n, k) {
            return Err(Error::domain(format!("rank {rank} out of range for Q^({k},{n})")));
        }
        let mut elems = Vec::with_capacity(k);
        let mut next = 1usize;
        for i in 0..k {
            loop {
                let block = binomial(n - next, k - i - 1);
                if rank < block {
                    break;
                }
                rank -= block;
                next += 1;
            }
            elems.push(next);
            next += 1;
        }
        Ok(IndexSet { n, elems })
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elems
            .len()
            .cmp(&other.elems.len())
            .then_with(|| self.elems.cmp(&other.elems))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Serialized as the list of its (1-based) elements.
impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

/// `C(n, k)`, saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// All of `Q^{k,n}` in lexicographic order; position `i` has rank `i`.
pub fn enumerate_index_sets(k: usize, n: usize) -> Result<Vec<IndexSet>> {
    if k == 0 || k > n {
        return Err(Error::domain(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(IndexSet { n, elems: current.clone() });
        // Rightmost position that can still advance.
        let Some(pos) = (0..k).rev().find(|&i| current[i] < n - (k - 1 - i)) else {
            break;
        };
        current[pos] += 1;
        for i in pos + 1..k {
            current[i] = current[i - 1] + 1;
        }
    }
    Ok(out)
}

/// Every nonempty subset of `{1..n}` in `(k, rank)` order.
pub fn all_nonempty_subsets(n: usize) -> Vec<IndexSet> {
    (1..=n)
        .flat_map(|k| enumerate_index_sets(k, n).expect("k in range"))
        .collect()
}

/// `s(alpha, beta) = (-1)^(sum(alpha) + sum(beta))`.
pub fn signature(alpha: &IndexSet, beta: &IndexSet) -> i8 {
    if (alpha.sum() + beta.sum()) % 2 == 0 {
        1
    } else {
        -1
    }
}
