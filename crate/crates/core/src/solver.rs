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

//! ADMM for the weighted fused LASSO signal approximator
//!
//! ```text
//! minimize_β  ½‖y − β‖₂² + λ₁‖β‖₁ + λ₂ Σ_{i<j} w_ij |β_i − β_j|
//! ```
//!
//! The iteration solves the `λ₁ = 0` problem with `Q = qI`:
//!
//! ```text
//! β(k+1) = [ρq β(k) + y − λ₂ Dᵀ(2α(k) − α(k−1))] / (ρq + 1)
//! α(k+1) = T(α(k) + ρ λ₂ D β(k+1))
//! ```
//!
//! where `T` clamps each component to `[−1, 1]`, and stops once
//! `‖β(k+1) − β(k)‖₁ < ε`. The estimate for any `λ₁ > 0` follows by
//! soft-thresholding the `λ₁ = 0` estimate, so the whole `λ₁` path for a fixed
//! `λ₂` costs one ADMM run.
//!
//! The stopping rule uses the absolute ℓ₁ norm over all `p` coefficients, so
//! `ε` should grow with `p` when comparable per-coefficient accuracy is wanted.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{EdgeList, WeightMatrix};

/// Relative margin added to the Gershgorin bound so that `q > κ_max` strictly.
pub const Q_MARGIN: f64 = 1e-6;
/// Smallest `q` used when the bound is zero (no edges or `λ₂ = 0`).
pub const Q_MIN: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Sparsity penalty λ₁.
    pub lambda1: f64,
    /// Smoothness penalty λ₂.
    pub lambda2: f64,
    /// Dual step length ρ.
    pub rho: f64,
    /// Convergence threshold on `‖β(k+1) − β(k)‖₁`.
    pub eps: f64,
    pub max_iter: usize,
    /// Replaces the Gershgorin-derived `q`. Values below `κ_max` may diverge.
    pub q_override: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lambda1: 0.0,
            lambda2: 0.0,
            rho: 1.0,
            eps: 1e-8,
            max_iter: 100_000,
            q_override: None,
        }
    }
}

impl SolverConfig {
    pub fn new(lambda1: f64, lambda2: f64) -> Self {
        SolverConfig {
            lambda1,
            lambda2,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.lambda1.is_finite() && self.lambda1 >= 0.0) {
            return bad(format!(
                "lambda1 must be a finite value >= 0, got {}",
                self.lambda1
            ));
        }
        if !(self.lambda2.is_finite() && self.lambda2 >= 0.0) {
            return bad(format!(
                "lambda2 must be a finite value >= 0, got {}",
                self.lambda2
            ));
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return bad(format!("rho must be > 0, got {}", self.rho));
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return bad(format!("eps must be > 0, got {}", self.eps));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be >= 1".into());
        }
        if let Some(q) = self.q_override {
            if !(q.is_finite() && q > 0.0) {
                return bad(format!("q must be > 0, got {q}"));
            }
        }
        Ok(())
    }

    /// `q` used for the given graph: the override, or the Gershgorin bound
    /// inflated by [`Q_MARGIN`] and floored at [`Q_MIN`].
    pub fn q_for(&self, edges: &EdgeList) -> f64 {
        match self.q_override {
            Some(q) => q,
            None => (edges.gershgorin_q_bound(self.lambda2) * (1.0 + Q_MARGIN)).max(Q_MIN),
        }
    }
}

/// Step length `1/√q` that makes the primal step `1/(ρq)` equal the dual step `ρ`.
///
/// Because `Dᵀα` is orthogonal to constant vectors, the mean of `β` contracts
/// towards the mean of `y` only by the factor `ρq/(ρq + 1)` per iteration.
/// With `ρ = 1` and a large `λ₂` (so a large `q`) that takes on the order of `q`
/// iterations; the balanced step needs about `√q`.
pub fn balanced_rho(q: f64) -> f64 {
    1.0 / q.sqrt()
}

#[derive(Debug, PartialEq)]
struct Problem {
    y: Vec<f64>,
    edges: EdgeList,
}

/// Result of [`solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Estimate at `(lambda1, lambda2)`.
    pub beta: Vec<f64>,
    /// Estimate at `(0, lambda2)`.
    pub beta_unthresholded: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub final_delta: f64,
    pub q_used: f64,
    /// Objective value at `beta`.
    pub objective: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    problem: Arc<Problem>,
}

impl Solution {
    /// Objective at an arbitrary `beta` for this solution's data and penalties.
    pub fn objective_at(&self, beta: &[f64], lambda1: f64) -> f64 {
        objective(
            &self.problem.y,
            beta,
            &self.problem.edges,
            lambda1,
            self.lambda2,
        )
    }

    pub fn y(&self) -> &[f64] {
        &self.problem.y
    }

    pub fn edges(&self) -> &EdgeList {
        &self.problem.edges
    }
}

/// `ST_λ(x)`.
#[inline]
pub fn soft_threshold(lambda1: f64, x: f64) -> f64 {
    if x > lambda1 {
        x - lambda1
    } else if x < -lambda1 {
        x + lambda1
    } else {
        0.0
    }
}

#[inline]
fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// The threshold map `T`: clamps every component to `[−1, 1]`.
pub fn clamp_t(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| clamp_unit(x)).collect()
}

/// Three-term objective evaluated over the stored edges.
pub fn objective(y: &[f64], beta: &[f64], edges: &EdgeList, lambda1: f64, lambda2: f64) -> f64 {
    let fit: f64 = y.iter().zip(beta).map(|(a, b)| (a - b) * (a - b)).sum();
    let l1: f64 = beta.iter().map(|b| b.abs()).sum();
    0.5 * fit + lambda1 * l1 + lambda2 * edges.fusion_penalty(beta)
}

/// Iterates of the ADMM.
///
/// A fresh state has `β(0) = β(1) = 0` and `α(0) = α(1) = 0`; `k` starts at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    /// β(k−1)
    pub beta_prev: Vec<f64>,
    /// β(k)
    pub beta_curr: Vec<f64>,
    /// α(k−1)
    pub alpha_prev: Vec<f64>,
    /// α(k)
    pub alpha_curr: Vec<f64>,
    pub k: usize,
}

impl AdmmState {
    pub fn new(p: usize, m: usize) -> Self {
        AdmmState {
            beta_prev: vec![0.0; p],
            beta_curr: vec![0.0; p],
            alpha_prev: vec![0.0; m],
            alpha_curr: vec![0.0; m],
            k: 1,
        }
    }

    fn check(&self, edges: &EdgeList) -> Result<()> {
        if self.beta_curr.len() != edges.p() || self.beta_prev.len() != edges.p() {
            return Err(Error::dims("state beta", edges.p(), self.beta_curr.len()));
        }
        if self.alpha_curr.len() != edges.len() || self.alpha_prev.len() != edges.len() {
            return Err(Error::dims(
                "state alpha",
                edges.len(),
                self.alpha_curr.len(),
            ));
        }
        Ok(())
    }
}

/// β-update. Allocates; the solver loop uses an in-place kernel.
pub fn beta_update(
    state: &AdmmState,
    y: &[f64],
    edges: &EdgeList,
    lambda2: f64,
    rho: f64,
    q: f64,
) -> Result<Vec<f64>> {
    state.check(edges)?;
    if y.len() != edges.p() {
        return Err(Error::dims("beta_update y", edges.p(), y.len()));
    }
    let mut dt = vec![0.0; edges.p()];
    let mut out = vec![0.0; edges.p()];
    beta_update_into(
        &state.beta_curr,
        &state.alpha_curr,
        &state.alpha_prev,
        y,
        edges,
        lambda2,
        rho * q,
        &mut dt,
        &mut out,
    );
    Ok(out)
}

/// α-update. Allocates; the solver loop uses an in-place kernel.
pub fn alpha_update(
    state: &AdmmState,
    beta_next: &[f64],
    edges: &EdgeList,
    lambda2: f64,
    rho: f64,
) -> Result<Vec<f64>> {
    state.check(edges)?;
    if beta_next.len() != edges.p() {
        return Err(Error::dims("alpha_update beta", edges.p(), beta_next.len()));
    }
    let mut out = vec![0.0; edges.len()];
    alpha_update_into(&state.alpha_curr, beta_next, edges, rho * lambda2, &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn beta_update_into(
    beta: &[f64],
    alpha: &[f64],
    alpha_prev: &[f64],
    y: &[f64],
    edges: &EdgeList,
    lambda2: f64,
    rho_q: f64,
    dt: &mut [f64],
    out: &mut [f64],
) {
    let scale = 1.0 / (rho_q + 1.0);
    if lambda2 == 0.0 || edges.is_empty() {
        for ((o, &b), &yi) in out.iter_mut().zip(beta).zip(y) {
            *o = scale * (rho_q * b + yi);
        }
        return;
    }
    // dt = Dᵀ(2α(k) − α(k−1)), fused to avoid an m-length temporary
    dt.iter_mut().for_each(|x| *x = 0.0);
    for (e, (&a, &ap)) in edges.iter().zip(alpha.iter().zip(alpha_prev)) {
        let v = e.weight * (2.0 * a - ap);
        dt[e.i] += v;
        dt[e.j] -= v;
    }
    for (((o, &b), &yi), &d) in out.iter_mut().zip(beta).zip(y).zip(dt.iter()) {
        *o = scale * (rho_q * b + yi - lambda2 * d);
    }
}

#[inline]
fn alpha_update_into(
    alpha: &[f64],
    beta_next: &[f64],
    edges: &EdgeList,
    rho_lambda2: f64,
    out: &mut [f64],
) {
    edges.apply_d_into(beta_next, out);
    for (o, &a) in out.iter_mut().zip(alpha) {
        *o = clamp_unit(a + rho_lambda2 * *o);
    }
}

/// Running ADMM over a fixed problem, one [`step`](Admm::step) per iteration.
#[derive(Debug)]
pub struct Admm<'a> {
    y: &'a [f64],
    edges: &'a EdgeList,
    lambda2: f64,
    rho: f64,
    q: f64,
    state: AdmmState,
    beta_next: Vec<f64>,
    alpha_next: Vec<f64>,
    dt: Vec<f64>,
}

impl<'a> Admm<'a> {
    pub fn new(y: &'a [f64], edges: &'a EdgeList, lambda2: f64, rho: f64, q: f64) -> Result<Self> {
        if y.len() != edges.p() {
            return Err(Error::dims("observations", edges.p(), y.len()));
        }
        let (p, m) = (edges.p(), edges.len());
        Ok(Admm {
            y,
            edges,
            lambda2,
            rho,
            q,
            state: AdmmState::new(p, m),
            beta_next: vec![0.0; p],
            alpha_next: vec![0.0; m],
            dt: vec![0.0; p],
        })
    }

    /// Performs one β-update and one α-update; returns `‖β(k+1) − β(k)‖₁`.
    pub fn step(&mut self) -> f64 {
        let st = &mut self.state;
        beta_update_into(
            &st.beta_curr,
            &st.alpha_curr,
            &st.alpha_prev,
            self.y,
            self.edges,
            self.lambda2,
            self.rho * self.q,
            &mut self.dt,
            &mut self.beta_next,
        );
        alpha_update_into(
            &st.alpha_curr,
            &self.beta_next,
            self.edges,
            self.rho * self.lambda2,
            &mut self.alpha_next,
        );
        let delta: f64 = self
            .beta_next
            .iter()
            .zip(&st.beta_curr)
            .map(|(a, b)| (a - b).abs())
            .sum();
        // β(k−1) ← β(k) ← β(k+1), same for α; the old k−1 buffers become scratch
        std::mem::swap(&mut st.beta_prev, &mut st.beta_curr);
        std::mem::swap(&mut st.beta_curr, &mut self.beta_next);
        std::mem::swap(&mut st.alpha_prev, &mut st.alpha_curr);
        std::mem::swap(&mut st.alpha_curr, &mut self.alpha_next);
        st.k += 1;
        delta
    }

    pub fn state(&self) -> &AdmmState {
        &self.state
    }

    pub fn beta(&self) -> &[f64] {
        &self.state.beta_curr
    }

    pub fn into_beta(self) -> Vec<f64> {
        self.state.beta_curr
    }
}

/// Solves the problem for the graph given by `w`.
pub fn solve(y: &[f64], w: &WeightMatrix, cfg: &SolverConfig) -> Result<Solution> {
    if y.len() != w.p() {
        return Err(Error::dims("observations", w.p(), y.len()));
    }
    solve_edges(y, EdgeList::from_weights(w), cfg)
}

/// Solves the problem for a graph already in edge-list form.
pub fn solve_edges(y: &[f64], edges: EdgeList, cfg: &SolverConfig) -> Result<Solution> {
    cfg.validate()?;
    if y.len() != edges.p() {
        return Err(Error::dims("observations", edges.p(), y.len()));
    }
    if let Some(bad) = y.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "non-finite observation {bad}"
        )));
    }
    let q = cfg.q_for(&edges);

    let (beta_unthresholded, iterations, converged, final_delta) = if cfg.lambda2 == 0.0 {
        (y.to_vec(), 0, true, 0.0)
    } else {
        let mut admm = Admm::new(y, &edges, cfg.lambda2, cfg.rho, q)?;
        let mut iterations = 0;
        let mut delta = f64::INFINITY;
        while iterations < cfg.max_iter {
            delta = admm.step();
            iterations += 1;
            if delta < cfg.eps {
                break;
            }
        }
        (admm.into_beta(), iterations, delta < cfg.eps, delta)
    };

    let problem = Arc::new(Problem {
        y: y.to_vec(),
        edges,
    });
    let beta: Vec<f64> = beta_unthresholded
        .iter()
        .map(|&b| soft_threshold(cfg.lambda1, b))
        .collect();
    let objective = objective(&problem.y, &beta, &problem.edges, cfg.lambda1, cfg.lambda2);
    Ok(Solution {
        beta,
        beta_unthresholded,
        iterations,
        converged,
        final_delta,
        q_used: q,
        objective,
        lambda1: cfg.lambda1,
        lambda2: cfg.lambda2,
        problem,
    })
}

/// `|β̂_i(0, λ₂)|`: coefficient `i` is nonzero exactly when `λ₁` is below its knot.
pub fn lambda1_knots(sol: &Solution) -> Vec<f64> {
    sol.beta_unthresholded.iter().map(|b| b.abs()).collect()
}

/// Moves a solution to a new `λ₁` without rerunning the ADMM.
pub fn rethreshold(sol: &Solution, lambda1: f64) -> Solution {
    let beta: Vec<f64> = sol
        .beta_unthresholded
        .iter()
        .map(|&b| soft_threshold(lambda1, b))
        .collect();
    let objective = sol.objective_at(&beta, lambda1);
    Solution {
        beta,
        objective,
        lambda1,
        ..sol.clone()
    }
}
