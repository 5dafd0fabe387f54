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

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Vertex indices in messages are 1-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("weight matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("weight matrix is asymmetric at ({i}, {j}): {wij} vs {wji}")]
    AsymmetricMatrix {
        i: usize,
        j: usize,
        wij: f64,
        wji: f64,
    },

    #[error("negative or non-finite weight {value} at ({i}, {j})")]
    NegativeWeight { i: usize, j: usize, value: f64 },

    #[error("nonzero diagonal entry {value} at vertex {i}")]
    NonzeroDiagonal { i: usize, value: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("problem too large for {what}: p = {p}, limit {limit}")]
    TooLarge {
        what: &'static str,
        p: usize,
        limit: usize,
    },

    #[error("patch {patch_h}x{patch_w} does not fit in image {height}x{width}")]
    PatchLargerThanImage {
        patch_h: usize,
        patch_w: usize,
        height: usize,
        width: usize,
    },

    #[error("median window {win_h}x{win_w} must have odd dimensions")]
    EvenWindow { win_h: usize, win_w: usize },

    #[error("median window {win_h}x{win_w} is larger than image {height}x{width}")]
    WindowLargerThanImage {
        win_h: usize,
        win_w: usize,
        height: usize,
        width: usize,
    },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn dims(context: &'static str, expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            actual,
        }
    }

    /// True for failures caused by the input data (as opposed to the filesystem).
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}
