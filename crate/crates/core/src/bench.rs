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

//! Per-iteration timing of the structured ADMM against a dense incidence matvec.

use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::graph::{EdgeList, WeightMatrix};
use crate::oracle::materialize_d_with_limit;
use crate::solver::{Admm, SolverConfig};

/// Sizes used for the dense contrast timing.
pub const NAIVE_SIZES: [usize; 3] = [32, 64, 128];
const NAIVE_LIMIT: usize = 256;
const MIN_SAMPLE_TIME: Duration = Duration::from_millis(30);
const MIN_REPEATS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub p: usize,
    /// Seconds.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub iters: usize,
    pub structured: Vec<Timing>,
    pub structured_slope: Option<f64>,
    pub naive: Vec<Timing>,
    pub naive_slope: Option<f64>,
}

/// Complete graph with weights in `(0, 1]` and standard-normal observations.
pub fn random_complete_instance(p: usize, seed: u64) -> (Vec<f64>, WeightMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = vec![0.0; p * p];
    for i in 0..p {
        for j in (i + 1)..p {
            let w = 1.0 - rng.random::<f64>();
            data[i * p + j] = w;
            data[j * p + i] = w;
        }
    }
    let y = (0..p).map(|_| rng.sample(StandardNormal)).collect();
    let w = WeightMatrix::from_row_major(p, &data).expect("random weights are valid");
    (y, w)
}

/// Repeats `run` until at least [`MIN_SAMPLE_TIME`] and [`MIN_REPEATS`] have
/// elapsed; returns the fastest repeat divided by `units`.
fn best_of(units: usize, mut run: impl FnMut()) -> f64 {
    let start = Instant::now();
    let mut best = f64::INFINITY;
    let mut reps = 0;
    while reps < MIN_REPEATS || start.elapsed() < MIN_SAMPLE_TIME {
        let t = Instant::now();
        run();
        best = best.min(t.elapsed().as_secs_f64());
        reps += 1;
    }
    best / units as f64
}

/// Seconds per ADMM iteration (β- plus α-update) on a random complete graph.
pub fn time_structured_iteration(p: usize, iters: usize, seed: u64) -> Result<f64> {
    let (y, w) = random_complete_instance(p, seed);
    let edges = EdgeList::from_weights(&w);
    let cfg = SolverConfig::new(0.0, 0.5);
    let q = cfg.q_for(&edges);
    let mut admm = Admm::new(&y, &edges, cfg.lambda2, cfg.rho, q)?;
    let iters = iters.max(1);
    Ok(best_of(iters, || {
        for _ in 0..iters {
            black_box(admm.step());
        }
    }))
}

/// Seconds per product of the dense incidence matrix with a vector.
pub fn time_naive_matvec(p: usize, seed: u64) -> Result<f64> {
    let (y, w) = random_complete_instance(p, seed);
    let d = materialize_d_with_limit(&w, NAIVE_LIMIT)?;
    Ok(best_of(1, || {
        black_box(d.matvec(black_box(&y)).expect("dimensions agree"));
    }))
}

/// Least-squares slope of `log(seconds)` against `log(p)`; `None` for fewer than two points.
pub fn loglog_slope(timings: &[Timing]) -> Option<f64> {
    if timings.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = timings.iter().map(|t| (t.p as f64).ln()).collect();
    let ys: Vec<f64> = timings.iter().map(|t| t.seconds.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

pub fn run_bench(
    sizes: &[usize],
    naive_sizes: &[usize],
    iters: usize,
    seed: u64,
) -> Result<BenchReport> {
    let structured = sizes
        .iter()
        .map(|&p| time_structured_iteration(p, iters, seed).map(|seconds| Timing { p, seconds }))
        .collect::<Result<Vec<_>>>()?;
    let naive = naive_sizes
        .iter()
        .map(|&p| time_naive_matvec(p, seed).map(|seconds| Timing { p, seconds }))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport {
        iters,
        structured_slope: loglog_slope(&structured),
        naive_slope: loglog_slope(&naive),
        structured,
        naive,
    })
}
