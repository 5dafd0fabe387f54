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

//! Solver for the weighted generalized fused LASSO signal approximator.
//!
//! ```text
//! minimize_β  ½‖y − β‖₂² + λ₁‖β‖₁ + λ₂ Σ_{i<j} w_ij |β_i − β_j|
//! ```
//!
//! The ADMM in [`solver`] never forms the incidence matrix, so one iteration
//! costs `O(p + m)` with `m ≤ p(p−1)/2` graph edges. [`oracle`] holds slow
//! dense reference computations for verification, and [`imaging`] applies the
//! solver patch-wise to images with spatially varying noise.

pub mod bench;
pub mod cli;
pub mod error;
pub mod graph;
pub mod imaging;
pub mod io;
pub mod oracle;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{gershgorin_q_bound, gram_summary, EdgeList, GramSummary, WeightMatrix};
pub use solver::{lambda1_knots, rethreshold, soft_threshold, solve, Solution, SolverConfig};
