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

//! Desk-scale reference computations used to check the solver.
//!
//! Everything here works on the dense incidence matrix over all `p(p-1)/2`
//! pairs and on plain double loops over the weight matrix, never on
//! [`EdgeList`](crate::graph::EdgeList), so that it stays an independent
//! code path.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::WeightMatrix;

pub const MATERIALIZE_LIMIT: usize = 64;
pub const ORACLE_SOLVE_LIMIT: usize = 12;

/// The full oriented incidence matrix, zero-weight rows included.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseIncidence {
    pub p: usize,
    /// `p(p-1)/2` rows of length `p`, pairs in lexicographic order.
    pub rows: Vec<Vec<f64>>,
    /// 0-based `(i, j)` to row position.
    pub row_index: BTreeMap<(usize, usize), usize>,
}

impl DenseIncidence {
    pub fn matvec(&self, beta: &[f64]) -> Result<Vec<f64>> {
        if beta.len() != self.p {
            return Err(Error::dims("dense D input", self.p, beta.len()));
        }
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().zip(beta).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn matvec_t(&self, alpha: &[f64]) -> Result<Vec<f64>> {
        if alpha.len() != self.rows.len() {
            return Err(Error::dims("dense Dᵀ input", self.rows.len(), alpha.len()));
        }
        let mut out = vec![0.0; self.p];
        for (r, &a) in self.rows.iter().zip(alpha) {
            for (o, &d) in out.iter_mut().zip(r) {
                *o += d * a;
            }
        }
        Ok(out)
    }

    /// `DᵀD` by explicit triple loop.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        let p = self.p;
        let mut g = vec![vec![0.0; p]; p];
        for r in &self.rows {
            for s in 0..p {
                for t in 0..p {
                    g[s][t] += r[s] * r[t];
                }
            }
        }
        g
    }
}

/// Builds the dense incidence matrix; refuses `p > 64`.
pub fn materialize_d(w: &WeightMatrix) -> Result<DenseIncidence> {
    materialize_d_with_limit(w, MATERIALIZE_LIMIT)
}

/// [`materialize_d`] with a caller-chosen size guard.
pub fn materialize_d_with_limit(w: &WeightMatrix, limit: usize) -> Result<DenseIncidence> {
    let p = w.p();
    if p > limit {
        return Err(Error::TooLarge {
            what: "materialized incidence matrix",
            p,
            limit,
        });
    }
    let mut rows = Vec::with_capacity(p * p.saturating_sub(1) / 2);
    let mut row_index = BTreeMap::new();
    for i in 0..p {
        for j in (i + 1)..p {
            let mut row = vec![0.0; p];
            row[i] = w.get(i, j);
            row[j] = -w.get(i, j);
            row_index.insert((i, j), rows.len());
            rows.push(row);
        }
    }
    Ok(DenseIncidence { p, rows, row_index })
}

/// Objective value by double loop over all pairs `i < j`.
pub fn oracle_objective(
    y: &[f64],
    beta: &[f64],
    w: &WeightMatrix,
    lambda1: f64,
    lambda2: f64,
) -> Result<f64> {
    let p = w.p();
    if y.len() != p {
        return Err(Error::dims("oracle y", p, y.len()));
    }
    if beta.len() != p {
        return Err(Error::dims("oracle beta", p, beta.len()));
    }
    Ok(objective_unchecked(y, beta, w, lambda1, lambda2))
}

fn objective_unchecked(
    y: &[f64],
    beta: &[f64],
    w: &WeightMatrix,
    lambda1: f64,
    lambda2: f64,
) -> f64 {
    let p = w.p();
    let mut fit = 0.0;
    let mut l1 = 0.0;
    for i in 0..p {
        fit += (y[i] - beta[i]) * (y[i] - beta[i]);
        l1 += beta[i].abs();
    }
    let mut fusion = 0.0;
    for i in 0..p {
        for j in (i + 1)..p {
            fusion += w.get(i, j) * (beta[i] - beta[j]).abs();
        }
    }
    0.5 * fit + lambda1 * l1 + lambda2 * fusion
}

/// Output of [`oracle_solve_detailed`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub beta: Vec<f64>,
    pub objective: f64,
    /// Primal objective minus a dual lower bound; the distance to the optimum is at most this.
    pub gap: f64,
    pub iterations: usize,
}

/// Minimizes the full objective directly (any `λ₁`), to within `tol` of the optimum.
pub fn oracle_solve(
    y: &[f64],
    w: &WeightMatrix,
    lambda1: f64,
    lambda2: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    oracle_solve_detailed(y, w, lambda1, lambda2, tol).map(|s| s.beta)
}

const ORACLE_MAX_ITER: usize = 20_000_000;

/// Reference solver.
///
/// Writing both penalties as `‖Kβ‖₁` with `K = [λ₁ I; λ₂ D]`, the dual is the
/// box-constrained least-squares problem
///
/// ```text
/// maximize_{‖u‖∞ ≤ 1}  ½‖y‖² − ½‖y − Kᵀu‖²,    β = y − Kᵀu,
/// ```
///
/// solved by accelerated projected gradient with adaptive restart until the
/// duality gap drops below `tol / 100`. A coordinate-wise golden-section
/// polish on the primal objective follows; it only accepts improvements.
pub fn oracle_solve_detailed(
    y: &[f64],
    w: &WeightMatrix,
    lambda1: f64,
    lambda2: f64,
    tol: f64,
) -> Result<OracleSolution> {
    let p = w.p();
    if p > ORACLE_SOLVE_LIMIT {
        return Err(Error::TooLarge {
            what: "oracle solve",
            p,
            limit: ORACLE_SOLVE_LIMIT,
        });
    }
    if y.len() != p {
        return Err(Error::dims("oracle y", p, y.len()));
    }
    let target = tol * 1e-2;

    // sparse rows of K: (column, coefficient) pairs
    let d = materialize_d(w)?;
    let mut k_rows: Vec<Vec<(usize, f64)>> = Vec::new();
    for row in &d.rows {
        let nz: Vec<(usize, f64)> = row
            .iter()
            .enumerate()
            .map(|(c, v)| (c, lambda2 * v))
            .filter(|(_, v)| *v != 0.0)
            .collect();
        if !nz.is_empty() {
            k_rows.push(nz);
        }
    }
    if lambda1 > 0.0 {
        for i in 0..p {
            k_rows.push(vec![(i, lambda1)]);
        }
    }
    let lipschitz: f64 = k_rows
        .iter()
        .flat_map(|r| r.iter().map(|(_, v)| v * v))
        .sum();

    let primal_from = |u: &[f64], out: &mut Vec<f64>| {
        out.clear();
        out.extend_from_slice(y);
        for (r, &ur) in k_rows.iter().zip(u) {
            for &(c, v) in r {
                out[c] -= v * ur;
            }
        }
    };
    let y_sq: f64 = y.iter().map(|v| v * v).sum();
    let dual_value = |beta: &[f64]| 0.5 * y_sq - 0.5 * beta.iter().map(|v| v * v).sum::<f64>();

    let n = k_rows.len();
    let mut u = vec![0.0; n];
    let mut beta = y.to_vec();
    let mut iterations = 0;

    if n > 0 && lipschitz > 0.0 {
        let mut z = u.clone();
        let mut u_next = vec![0.0; n];
        let mut resid = Vec::with_capacity(p);
        let mut t = 1.0_f64;
        while iterations < ORACLE_MAX_ITER {
            iterations += 1;
            primal_from(&z, &mut resid);
            for ((un, r), &zr) in u_next.iter_mut().zip(&k_rows).zip(&z) {
                let kr: f64 = r.iter().map(|&(c, v)| v * resid[c]).sum();
                *un = (zr + kr / lipschitz).clamp(-1.0, 1.0);
            }
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let restart: f64 = z
                .iter()
                .zip(&u_next)
                .zip(&u)
                .map(|((zr, un), uo)| (zr - un) * (un - uo))
                .sum();
            if restart > 0.0 {
                t = 1.0;
                z.copy_from_slice(&u_next);
            } else {
                let mom = (t - 1.0) / t_next;
                for ((zr, un), uo) in z.iter_mut().zip(&u_next).zip(&u) {
                    *zr = un + mom * (un - uo);
                }
                t = t_next;
            }
            std::mem::swap(&mut u, &mut u_next);
            if iterations % 64 == 0 {
                primal_from(&u, &mut beta);
                let gap = objective_unchecked(y, &beta, w, lambda1, lambda2) - dual_value(&beta);
                if gap <= target {
                    break;
                }
            }
        }
        primal_from(&u, &mut beta);
    }
    let dual_bound = dual_value(&beta);

    let mut obj = objective_unchecked(y, &beta, w, lambda1, lambda2);
    loop {
        let before = obj;
        for i in 0..p {
            let h = 1e-3 * (1.0 + beta[i].abs());
            let (lo, hi) = (beta[i] - h, beta[i] + h);
            let mut trial = beta.clone();
            let x = golden_section(lo, hi, 60, |v| {
                trial[i] = v;
                objective_unchecked(y, &trial, w, lambda1, lambda2)
            });
            trial[i] = x;
            let cand = objective_unchecked(y, &trial, w, lambda1, lambda2);
            if cand < obj {
                beta[i] = x;
                obj = cand;
            }
        }
        if before - obj < target {
            break;
        }
    }
    let gap = (obj - dual_bound).max(0.0);

    Ok(OracleSolution {
        beta,
        objective: obj,
        gap,
        iterations,
    })
}

fn golden_section(mut a: f64, mut b: f64, iters: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Largest decrease of the objective found by stepping `delta` along
/// `n_dirs` random unit directions from `beta`. Near zero (or negative) at a minimizer.
#[allow(clippy::too_many_arguments)]
pub fn perturbation_improvement(
    y: &[f64],
    beta: &[f64],
    w: &WeightMatrix,
    lambda1: f64,
    lambda2: f64,
    delta: f64,
    n_dirs: usize,
    seed: u64,
) -> Result<f64> {
    let base = oracle_objective(y, beta, w, lambda1, lambda2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    let mut trial = vec![0.0; beta.len()];
    for _ in 0..n_dirs {
        let v: Vec<f64> = (0..beta.len())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let norm = v.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        for ((t, b), vi) in trial.iter_mut().zip(beta).zip(&v) {
            *t = b + delta * vi / norm;
        }
        let f = objective_unchecked(y, &trial, w, lambda1, lambda2);
        best = best.max(base - f);
    }
    Ok(best)
}
