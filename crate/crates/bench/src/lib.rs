// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! Benchmarks for the epmat kernels live under `benches/`.
