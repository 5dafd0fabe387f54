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

//! Weighted graphs and the implicit oriented incidence operator.
//!
//! The incidence matrix `D` has one row per vertex pair `i < j`, holding
//! `+w_ij` in column `i` and `-w_ij` in column `j`. It is never formed here:
//! [`EdgeList`] keeps only the rows with a positive weight and applies `D`
//! and `Dᵀ` edge by edge in `O(m)` time, `m ≤ p(p-1)/2`.

use crate::error::{Error, Result};

/// Absolute tolerance used when checking `w_ij == w_ji`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Symmetric, non-negative `p × p` adjacency matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    p: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    /// Validates a square array of weights.
    ///
    /// Pairs that agree within [`SYMMETRY_TOLERANCE`] are replaced by their
    /// mean so the stored matrix is exactly symmetric.
    pub fn validate(raw: &[Vec<f64>]) -> Result<Self> {
        let p = raw.len();
        if p == 0 {
            return Err(Error::dims("weight matrix rows", 1, 0));
        }
        for (row, values) in raw.iter().enumerate() {
            if values.len() != p {
                return Err(Error::NonSquare {
                    row: row + 1,
                    len: values.len(),
                    expected: p,
                });
            }
        }
        let flat: Vec<f64> = raw.iter().flatten().copied().collect();
        Self::from_row_major(p, &flat)
    }

    /// Validates a row-major `p × p` buffer.
    pub fn from_row_major(p: usize, data: &[f64]) -> Result<Self> {
        if p == 0 {
            return Err(Error::dims("weight matrix rows", 1, 0));
        }
        if data.len() != p * p {
            return Err(Error::dims("weight matrix entries", p * p, data.len()));
        }
        for i in 0..p {
            let d = data[i * p + i];
            if d != 0.0 {
                return Err(Error::NonzeroDiagonal { i: i + 1, value: d });
            }
        }
        for i in 0..p {
            for j in 0..p {
                let v = data[i * p + j];
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::NegativeWeight {
                        i: i + 1,
                        j: j + 1,
                        value: v,
                    });
                }
            }
        }
        let mut sym = data.to_vec();
        for i in 0..p {
            for j in (i + 1)..p {
                let (a, b) = (data[i * p + j], data[j * p + i]);
                if (a - b).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::AsymmetricMatrix {
                        i: i + 1,
                        j: j + 1,
                        wij: a,
                        wji: b,
                    });
                }
                let m = 0.5 * (a + b);
                sym[i * p + j] = m;
                sym[j * p + i] = m;
            }
        }
        Ok(WeightMatrix { p, data: sym })
    }

    /// Graph with no edges.
    pub fn zeros(p: usize) -> Self {
        WeightMatrix {
            p,
            data: vec![0.0; p * p],
        }
    }

    /// Builds a matrix from 0-based `(i, j, w)` triples. Later duplicates overwrite earlier ones.
    pub fn from_triples(p: usize, triples: &[(usize, usize, f64)]) -> Result<Self> {
        let mut data = vec![0.0; p * p];
        for &(i, j, w) in triples {
            if i >= p || j >= p {
                return Err(Error::dims("edge endpoint", p, i.max(j) + 1));
            }
            data[i * p + j] = w;
            data[j * p + i] = w;
        }
        Self::from_row_major(p, &data)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Weight of the pair `(i, j)`, 0-based.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.p + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.p).map(<[f64]>::to_vec).collect()
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let p = self.p;
        let mut data = vec![0.0; p * p];
        for i in 0..p {
            for j in 0..p {
                data[perm[i] * p + perm[j]] = self.get(i, j);
            }
        }
        WeightMatrix { p, data }
    }
}

/// One stored row of `D`: the pair `(i, j)` with `i < j` (0-based) and its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Positive-weight pairs `i < j` in lexicographic order; the nonzero rows of `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    p: usize,
    heads: Vec<u32>,
    tails: Vec<u32>,
    weights: Vec<f64>,
}

impl EdgeList {
    /// Collects every pair `i < j` with `w_ij > 0`.
    pub fn from_weights(w: &WeightMatrix) -> Self {
        let p = w.p();
        let mut list = EdgeList {
            p,
            heads: Vec::new(),
            tails: Vec::new(),
            weights: Vec::new(),
        };
        for i in 0..p {
            let row = w.row(i);
            for (j, &wij) in row.iter().enumerate().skip(i + 1) {
                if wij > 0.0 {
                    list.heads.push(i as u32);
                    list.tails.push(j as u32);
                    list.weights.push(wij);
                }
            }
        }
        list
    }

    /// Builds a list from arbitrary-order edges. Zero weights are dropped;
    /// endpoints are swapped so that `i < j`.
    pub fn new(p: usize, edges: &[Edge]) -> Result<Self> {
        let mut sorted = Vec::with_capacity(edges.len());
        for e in edges {
            if e.i >= p || e.j >= p {
                return Err(Error::dims("edge endpoint", p, e.i.max(e.j) + 1));
            }
            if e.i == e.j {
                return Err(Error::NonzeroDiagonal {
                    i: e.i + 1,
                    value: e.weight,
                });
            }
            if !(e.weight.is_finite() && e.weight >= 0.0) {
                return Err(Error::NegativeWeight {
                    i: e.i + 1,
                    j: e.j + 1,
                    value: e.weight,
                });
            }
            if e.weight > 0.0 {
                sorted.push((e.i.min(e.j), e.i.max(e.j), e.weight));
            }
        }
        sorted.sort_by_key(|a| (a.0, a.1));
        for pair in sorted.windows(2) {
            if (pair[0].0, pair[0].1) == (pair[1].0, pair[1].1) {
                let (i, j) = (pair[0].0, pair[0].1);
                let (wij, wji) = (pair[0].2, pair[1].2);
                if (wij - wji).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::AsymmetricMatrix {
                        i: i + 1,
                        j: j + 1,
                        wij,
                        wji,
                    });
                }
            }
        }
        sorted.dedup_by(|b, a| (a.0, a.1) == (b.0, b.1));
        Ok(EdgeList {
            p,
            heads: sorted.iter().map(|e| e.0 as u32).collect(),
            tails: sorted.iter().map(|e| e.1 as u32).collect(),
            weights: sorted.iter().map(|e| e.2).collect(),
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of stored edges `m`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        (0..self.len()).map(move |k| Edge {
            i: self.heads[k] as usize,
            j: self.tails[k] as usize,
            weight: self.weights[k],
        })
    }

    pub fn to_weight_matrix(&self) -> WeightMatrix {
        let mut w = WeightMatrix::zeros(self.p);
        for e in self.iter() {
            w.data[e.i * self.p + e.j] = e.weight;
            w.data[e.j * self.p + e.i] = e.weight;
        }
        w
    }

    /// `Dβ`: entry `k` is `w_ij (β_i − β_j)` for the `k`-th edge.
    pub fn apply_d(&self, beta: &[f64]) -> Result<Vec<f64>> {
        if beta.len() != self.p {
            return Err(Error::dims("apply_d input", self.p, beta.len()));
        }
        let mut out = vec![0.0; self.len()];
        self.apply_d_into(beta, &mut out);
        Ok(out)
    }

    /// `Dᵀα`, accumulated edge by edge.
    pub fn apply_dt(&self, alpha: &[f64]) -> Result<Vec<f64>> {
        if alpha.len() != self.len() {
            return Err(Error::dims("apply_dt input", self.len(), alpha.len()));
        }
        let mut out = vec![0.0; self.p];
        self.apply_dt_into(alpha, &mut out);
        Ok(out)
    }

    /// Unchecked form of [`apply_d`](Self::apply_d); lengths must already agree.
    #[inline]
    pub(crate) fn apply_d_into(&self, beta: &[f64], out: &mut [f64]) {
        debug_assert_eq!(beta.len(), self.p);
        debug_assert_eq!(out.len(), self.len());
        for (((o, &i), &j), &w) in out
            .iter_mut()
            .zip(&self.heads)
            .zip(&self.tails)
            .zip(&self.weights)
        {
            *o = w * (beta[i as usize] - beta[j as usize]);
        }
    }

    /// Overwrites `out` with `Dᵀα`.
    #[inline]
    pub(crate) fn apply_dt_into(&self, alpha: &[f64], out: &mut [f64]) {
        debug_assert_eq!(alpha.len(), self.len());
        debug_assert_eq!(out.len(), self.p);
        out.iter_mut().for_each(|x| *x = 0.0);
        for (((&a, &i), &j), &w) in alpha
            .iter()
            .zip(&self.heads)
            .zip(&self.tails)
            .zip(&self.weights)
        {
            let v = w * a;
            out[i as usize] += v;
            out[j as usize] -= v;
        }
    }

    /// `Σ_{i<j} w_ij |β_i − β_j|`, which equals `‖Dβ‖₁`.
    pub fn fusion_penalty(&self, beta: &[f64]) -> f64 {
        self.iter()
            .map(|e| e.weight * (beta[e.i] - beta[e.j]).abs())
            .sum()
    }

    pub fn gram_summary(&self) -> GramSummary {
        let mut diag = vec![0.0; self.p];
        for e in self.iter() {
            let w2 = e.weight * e.weight;
            diag[e.i] += w2;
            diag[e.j] += w2;
        }
        GramSummary { p: self.p, diag }
    }

    /// Same bound as [`gershgorin_q_bound`], computed from the stored edges.
    pub fn gershgorin_q_bound(&self, lambda2: f64) -> f64 {
        self.gram_summary().gershgorin_bound(lambda2)
    }
}

/// Diagonal of `DᵀD`: `diag[l] = Σ_i w_il²`.
///
/// Together with the weights it determines `DᵀD = diag(w̄) − W∘W`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSummary {
    pub p: usize,
    pub diag: Vec<f64>,
}

impl GramSummary {
    /// Dense `DᵀD` rebuilt from the summary and the weights.
    pub fn to_dense(&self, w: &WeightMatrix) -> Vec<Vec<f64>> {
        let p = self.p;
        (0..p)
            .map(|s| {
                (0..p)
                    .map(|t| {
                        let off = w.get(s, t) * w.get(s, t);
                        if s == t {
                            self.diag[s] - off
                        } else {
                            -off
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Gershgorin bound on the largest eigenvalue of `λ₂² DᵀD`.
    ///
    /// Row `l` of `DᵀD` has absolute sum `2 w̄_l`, hence `κ_max ≤ 2 λ₂² max_l w̄_l`.
    pub fn gershgorin_bound(&self, lambda2: f64) -> f64 {
        let max = self.diag.iter().copied().fold(0.0, f64::max);
        2.0 * lambda2 * lambda2 * max
    }
}

pub fn gram_summary(w: &WeightMatrix) -> GramSummary {
    let p = w.p();
    let diag = (0..p)
        .map(|l| (0..p).map(|i| w.get(i, l) * w.get(i, l)).sum())
        .collect();
    GramSummary { p, diag }
}

/// Upper bound on the largest eigenvalue of `λ₂² DᵀD` in `O(p²)`.
pub fn gershgorin_q_bound(w: &WeightMatrix, lambda2: f64) -> f64 {
    gram_summary(w).gershgorin_bound(lambda2)
}

/// Path graph `1 - 2 - … - p` with unit weights.
pub fn chain(p: usize) -> WeightMatrix {
    let mut data = vec![0.0; p * p];
    for i in 1..p {
        data[(i - 1) * p + i] = 1.0;
        data[i * p + i - 1] = 1.0;
    }
    WeightMatrix { p, data }
}

/// Complete graph with unit weights.
pub fn complete(p: usize) -> WeightMatrix {
    let mut data = vec![1.0; p * p];
    for i in 0..p {
        data[i * p + i] = 0.0;
    }
    WeightMatrix { p, data }
}
