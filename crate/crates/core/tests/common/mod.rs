// Copyright 2026 The wflsa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use wflsa::WeightMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each pair gets a weight in `[lo, hi)` with probability `density`, else 0.
pub fn random_weights(
    rng: &mut impl Rng,
    p: usize,
    density: f64,
    lo: f64,
    hi: f64,
) -> WeightMatrix {
    let mut triples = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            if rng.random::<f64>() < density {
                triples.push((i, j, rng.random_range(lo..hi)));
            }
        }
    }
    WeightMatrix::from_triples(p, &triples).unwrap()
}

/// Random spanning tree plus extra edges, all with unit weight.
pub fn connected_unit_graph(rng: &mut impl Rng, p: usize, extra: f64) -> WeightMatrix {
    let mut triples = Vec::new();
    for k in 1..p {
        triples.push((rng.random_range(0..k), k, 1.0));
    }
    for i in 0..p {
        for j in (i + 1)..p {
            if rng.random::<f64>() < extra {
                triples.push((i, j, 1.0));
            }
        }
    }
    WeightMatrix::from_triples(p, &triples).unwrap()
}

pub fn random_y(rng: &mut impl Rng, p: usize, scale: f64) -> Vec<f64> {
    (0..p)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Largest eigenvalue of a symmetric matrix, dense solver.
pub fn max_eigenvalue(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mat = DMatrix::from_fn(n, n, |r, c| m[r][c]);
    mat.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
