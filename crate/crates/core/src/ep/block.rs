// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::matrix::RealMatrix;
use crate::structure::{strongly_connected_components, structural_tol};

/// Block upper triangular form `P A P^T` obtained from the strongly
/// connected components of the pattern digraph.
#[derive(Debug, Clone, Serialize)]
pub struct BlockForm {
    /// Concatenation of the blocks' (0-based) indices.
    pub perm: Vec<usize>,
    /// Original indices of each diagonal block, in order.
    pub block_indices: Vec<Vec<usize>>,
    pub blocks: Vec<RealMatrix>,
}

impl BlockForm {
    pub fn is_irreducible(&self) -> bool {
        self.blocks.len() == 1
    }
}

/// Splits `A` into irreducible diagonal blocks. Entries with magnitude at
/// most `rel * max(1, |A|_max)` are treated as zero.
pub fn block_reduce(a: &RealMatrix, rel: f64) -> BlockForm {
    let comps = strongly_connected_components(a, structural_tol(a, rel));
    let perm = comps.concat();
    let blocks = comps.iter().map(|c| a.select(c, c)).collect();
    BlockForm { perm, block_indices: comps, blocks }
}
