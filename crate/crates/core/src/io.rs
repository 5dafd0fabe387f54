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

//! Text formats for observation vectors and weight matrices.
//!
//! * vectors: one real per line;
//! * dense weights: `p` lines of `p` comma-separated reals;
//! * edge lists: `i<TAB>j<TAB>w` lines with 1-based `i < j` and `w > 0`.
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::WeightMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightFormat {
    DenseCsv,
    EdgeTsv,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_real(path: &Path, line: usize, field: &str) -> Result<f64> {
    let field = field.trim();
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_err(path, line, format!("invalid number {field:?}"))),
    }
}

pub fn parse_vector(text: &str, path: &Path) -> Result<Vec<f64>> {
    let values = data_lines(text)
        .map(|(line, l)| {
            if l.contains(',') {
                return Err(parse_err(
                    path,
                    line,
                    format!("expected one value per line, got {l:?}"),
                ));
            }
            parse_real(path, line, l)
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(parse_err(path, 1, "no values found"));
    }
    Ok(values)
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    parse_vector(&read_text(path)?, path)
}

/// Writes one value per line using the shortest representation that parses
/// back to the same `f64`.
pub fn write_vector(path: impl AsRef<Path>, values: &[f64]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(values.len() * 20);
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    fs::File::create(path)
        .and_then(|mut f| f.write_all(out.as_bytes()))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

pub fn parse_dense_weights(text: &str, path: &Path, p: usize) -> Result<WeightMatrix> {
    let mut rows = Vec::with_capacity(p);
    for (line, l) in data_lines(text) {
        let row = l
            .split(',')
            .map(|f| parse_real(path, line, f))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != p {
            return Err(parse_err(
                path,
                line,
                format!("expected {p} comma-separated values, got {}", row.len()),
            ));
        }
        rows.push(row);
        if rows.len() > p {
            return Err(parse_err(path, line, format!("more than {p} rows")));
        }
    }
    if rows.len() != p {
        return Err(parse_err(
            path,
            text.lines().count(),
            format!("expected {p} rows, got {}", rows.len()),
        ));
    }
    WeightMatrix::validate(&rows).map_err(|e| parse_err(path, 0, e.to_string()))
}

pub fn parse_edge_weights(text: &str, path: &Path, p: usize) -> Result<WeightMatrix> {
    let mut data = vec![0.0; p * p];
    for (line, l) in data_lines(text) {
        let fields: Vec<&str> = l.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(
                path,
                line,
                format!("expected i<TAB>j<TAB>w, got {l:?}"),
            ));
        }
        let index = |f: &str| {
            f.trim()
                .parse::<usize>()
                .map_err(|_| parse_err(path, line, format!("invalid vertex index {f:?}")))
        };
        let (i, j) = (index(fields[0])?, index(fields[1])?);
        let w = parse_real(path, line, fields[2])?;
        if i == 0 || j == 0 || i > p || j > p {
            return Err(parse_err(
                path,
                line,
                format!("vertex index out of range 1..={p}: ({i}, {j})"),
            ));
        }
        if i >= j {
            return Err(parse_err(
                path,
                line,
                format!("expected i < j, got ({i}, {j})"),
            ));
        }
        if w <= 0.0 {
            return Err(parse_err(
                path,
                line,
                format!("weight must be > 0, got {w}"),
            ));
        }
        let (a, b) = (i - 1, j - 1);
        if data[a * p + b] != 0.0 {
            return Err(parse_err(path, line, format!("duplicate edge ({i}, {j})")));
        }
        data[a * p + b] = w;
        data[b * p + a] = w;
    }
    WeightMatrix::from_row_major(p, &data).map_err(|e| parse_err(path, 0, e.to_string()))
}

/// `.tsv` files are edge lists and `.csv` files dense; anything else is
/// sniffed for tab characters.
pub fn detect_weight_format(path: &Path, text: &str) -> WeightFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("tsv") => WeightFormat::EdgeTsv,
        Some(e) if e.eq_ignore_ascii_case("csv") => WeightFormat::DenseCsv,
        _ => {
            if data_lines(text)
                .next()
                .is_some_and(|(_, l)| l.contains('\t'))
            {
                WeightFormat::EdgeTsv
            } else {
                WeightFormat::DenseCsv
            }
        }
    }
}

/// Reads a weight matrix for `p` vertices in either format.
pub fn read_weights(path: impl AsRef<Path>, p: usize) -> Result<WeightMatrix> {
    let path = path.as_ref();
    let text = read_text(path)?;
    match detect_weight_format(path, &text) {
        WeightFormat::DenseCsv => parse_dense_weights(&text, path, p),
        WeightFormat::EdgeTsv => parse_edge_weights(&text, path, p),
    }
}
