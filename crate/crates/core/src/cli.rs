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

//! Command-line front end.
//!
//! Exit codes: 0 on success (including runs that hit `--max-iter`, which are
//! recorded as `"converged": false`), 2 for malformed or inconsistent input,
//! 1 for filesystem failures.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{run_bench, Timing, NAIVE_SIZES};
use crate::error::{Error, Result};
use crate::imaging::{self, GrayImage, PatchSpec, PgmEncoding};
use crate::io;
use crate::oracle;
use crate::solver::{lambda1_knots, solve, SolverConfig};

#[derive(Debug, Parser)]
#[command(
    name = "wflsa",
    version,
    about = "Weighted fused LASSO signal approximator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem from a vector of observations and a weight matrix.
    Solve(SolveArgs),
    /// Patch-wise smoothing of a PGM image guided by a noise-intensity map.
    Denoise(DenoiseArgs),
    /// Time ADMM iterations on random complete graphs of increasing size.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolverArgs {
    /// Dual step length.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Threshold on the l1 change of beta between iterations.
    #[arg(long, default_value_t = 1e-8)]
    pub eps: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Fixed q instead of the Gershgorin-derived value.
    #[arg(long = "q")]
    pub q: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    /// Observations, one value per line.
    #[arg(long)]
    pub y: PathBuf,
    /// Dense CSV (p x p) or edge-list TSV (i, j, w with 1-based i < j).
    #[arg(long)]
    pub weights: PathBuf,
    #[arg(long)]
    pub lambda1: f64,
    #[arg(long)]
    pub lambda2: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Cross-check the result against the dense reference solver (p <= 12).
    #[arg(long, hide = true)]
    pub oracle_check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Baseline {
    Median,
}

/// `HxW` dimensions, e.g. `5x4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub h: usize,
    pub w: usize,
}

impl FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (h, w) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected HxW, got {s:?}"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| format!("expected a positive integer, got {v:?}"))
        };
        Ok(Dims {
            h: parse(h)?,
            w: parse(w)?,
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DenoiseArgs {
    /// Input PGM. With --radial-sigma it is the clean image; otherwise the noisy one.
    #[arg(long)]
    pub image: PathBuf,
    /// Noise-intensity map as PGM, rescaled to [0, 1].
    #[arg(
        long,
        conflicts_with = "radial_sigma",
        required_unless_present = "radial_sigma"
    )]
    pub noise_map: Option<PathBuf>,
    /// Add radial noise of this maximal standard deviation and use its intensity map.
    #[arg(long)]
    pub radial_sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.001)]
    pub lambda1: f64,
    #[arg(long, default_value_t = 0.04)]
    pub lambda2: f64,
    #[arg(long, default_value = "5x4")]
    pub patch: Dims,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, value_enum)]
    pub baseline: Option<Baseline>,
    /// Median window for --baseline median.
    #[arg(long, default_value = "5x5")]
    pub window: Dims,
    /// Clean reference image; adds PSNR values to the diagnostics.
    #[arg(long)]
    pub psnr_against: Option<PathBuf>,
    /// Write ASCII (P2) instead of binary (P5) images.
    #[arg(long)]
    pub ascii: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_sizes(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 2)
                .ok_or_else(|| format!("invalid size {v:?}; sizes must be integers >= 2"))
        })
        .collect()
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchArgs {
    /// Comma-separated problem sizes.
    #[arg(long, value_parser = parse_sizes)]
    pub sizes: std::vec::Vec<usize>,
    /// ADMM iterations per timed batch.
    #[arg(long, default_value_t = 50)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip the dense incidence matvec timings.
    #[arg(long)]
    pub no_naive: bool,
    #[arg(long)]
    pub out: PathBuf,
}

/// Everything a run depends on, written to `manifest.json` next to the outputs.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum RunManifest {
    Solve(SolveArgs),
    Denoise(DenoiseArgs),
    Bench(BenchArgs),
}

impl RunManifest {
    pub fn from_command(cmd: Command) -> Self {
        match cmd {
            Command::Solve(a) => RunManifest::Solve(a),
            Command::Denoise(a) => RunManifest::Denoise(a),
            Command::Bench(a) => RunManifest::Bench(a),
        }
    }

    fn out_dir(&self) -> &Path {
        match self {
            RunManifest::Solve(a) => &a.out,
            RunManifest::Denoise(a) => &a.out,
            RunManifest::Bench(a) => &a.out,
        }
    }

    fn inputs(&self) -> Vec<&Path> {
        match self {
            RunManifest::Solve(a) => vec![&a.y, &a.weights],
            RunManifest::Denoise(a) => [
                Some(&a.image),
                a.noise_map.as_ref(),
                a.psnr_against.as_ref(),
            ]
            .into_iter()
            .flatten()
            .map(PathBuf::as_path)
            .collect(),
            RunManifest::Bench(_) => vec![],
        }
    }

    /// Checks that inputs exist and the output directory can be written.
    pub fn prepare(&self) -> Result<()> {
        for p in self.inputs() {
            fs::metadata(p).map_err(|source| Error::Io {
                path: p.to_path_buf(),
                source,
            })?;
        }
        let out = self.out_dir();
        fs::create_dir_all(out).map_err(|source| Error::Io {
            path: out.to_path_buf(),
            source,
        })?;
        write_json(&out.join("manifest.json"), self)
    }

    pub fn run(&self) -> Result<()> {
        self.prepare()?;
        match self {
            RunManifest::Solve(a) => cmd_solve(a),
            RunManifest::Denoise(a) => cmd_denoise(a),
            RunManifest::Bench(a) => cmd_bench(a),
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn solver_config(lambda1: f64, lambda2: f64, s: &SolverArgs) -> SolverConfig {
    SolverConfig {
        lambda1,
        lambda2,
        rho: s.rho,
        eps: s.eps,
        max_iter: s.max_iter,
        q_override: s.q,
    }
}

#[derive(Debug, Serialize)]
struct OracleCheck {
    objective: f64,
    gap: f64,
    /// ADMM objective minus reference objective.
    objective_difference: f64,
}

#[derive(Debug, Serialize)]
struct SolveDiagnostics {
    lambda1: f64,
    lambda2: f64,
    iterations: usize,
    converged: bool,
    final_delta: f64,
    q_used: f64,
    objective: f64,
    lambda1_knots: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleCheck>,
}

/// Writes `beta.csv` and `diagnostics.json` into the output directory.
pub fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let y = io::read_vector(&args.y)?;
    let w = io::read_weights(&args.weights, y.len())?;
    let cfg = solver_config(args.lambda1, args.lambda2, &args.solver);
    let sol = solve(&y, &w, &cfg)?;

    let oracle = if args.oracle_check {
        let reference = oracle::oracle_solve_detailed(&y, &w, cfg.lambda1, cfg.lambda2, 1e-8)?;
        Some(OracleCheck {
            objective: reference.objective,
            gap: reference.gap,
            objective_difference: sol.objective - reference.objective,
        })
    } else {
        None
    };

    io::write_vector(args.out.join("beta.csv"), &sol.beta)?;
    let diag = SolveDiagnostics {
        lambda1: sol.lambda1,
        lambda2: sol.lambda2,
        iterations: sol.iterations,
        converged: sol.converged,
        final_delta: sol.final_delta,
        q_used: sol.q_used,
        objective: sol.objective,
        lambda1_knots: lambda1_knots(&sol),
        oracle,
    };
    write_json(&args.out.join("diagnostics.json"), &diag)?;
    println!(
        "p = {}, iterations = {}, converged = {}, objective = {}",
        y.len(),
        sol.iterations,
        sol.converged,
        sol.objective
    );
    Ok(())
}

/// PSNR in dB; `null` in JSON when the images are identical.
#[derive(Debug, Serialize)]
struct PsnrRows {
    noisy: Option<f64>,
    wflsa: Option<f64>,
    /// Present only with a baseline; the inner `None` is an infinite PSNR.
    #[serde(skip_serializing_if = "Option::is_none")]
    median: Option<Option<f64>>,
}

#[derive(Debug, Serialize)]
struct DenoiseDiagnostics {
    lambda1: f64,
    lambda2: f64,
    patch: Dims,
    stride: usize,
    patches: usize,
    height: usize,
    width: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    psnr: Option<PsnrRows>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Writes `denoised.pgm` (plus `noisy.pgm`, `intensity.pgm`, `median.pgm` when
/// generated) and `diagnostics.json`.
pub fn cmd_denoise(args: &DenoiseArgs) -> Result<()> {
    let enc = if args.ascii {
        PgmEncoding::Ascii
    } else {
        PgmEncoding::Binary
    };
    let input = imaging::read_pgm(&args.image)?;
    let clean = args
        .psnr_against
        .as_ref()
        .map(imaging::read_pgm)
        .transpose()?;
    let (noisy, intensity) = match (&args.noise_map, args.radial_sigma) {
        (Some(path), _) => (input, imaging::read_pgm(path)?),
        (None, Some(sigma)) => {
            let (noisy, intensity) = imaging::radial_noise(&input, sigma, args.seed)?;
            imaging::write_pgm(args.out.join("noisy.pgm"), &noisy, enc)?;
            imaging::write_pgm(args.out.join("intensity.pgm"), &intensity, enc)?;
            (noisy, intensity)
        }
        (None, None) => {
            return Err(Error::InvalidConfig(
                "either --noise-map or --radial-sigma is required".into(),
            ))
        }
    };
    let spec = PatchSpec {
        patch_h: args.patch.h,
        patch_w: args.patch.w,
        stride: args.stride,
    };
    let patches = spec.positions(noisy.height(), noisy.width())?.len();
    let cfg = solver_config(args.lambda1, args.lambda2, &args.solver);
    let denoised = imaging::denoise(&noisy, &intensity, spec, args.lambda1, args.lambda2, &cfg)?;
    imaging::write_pgm(args.out.join("denoised.pgm"), &denoised, enc)?;

    let median = match args.baseline {
        Some(Baseline::Median) => {
            let m = imaging::median_filter(&noisy, args.window.h, args.window.w)?;
            imaging::write_pgm(args.out.join("median.pgm"), &m, enc)?;
            Some(m)
        }
        None => None,
    };

    let psnr = match &clean {
        Some(clean) => {
            let score = |img: &GrayImage| imaging::psnr(img, clean).map(finite);
            Some(PsnrRows {
                noisy: score(&noisy)?,
                wflsa: score(&denoised)?,
                median: median.as_ref().map(score).transpose()?,
            })
        }
        None => None,
    };
    let diag = DenoiseDiagnostics {
        lambda1: args.lambda1,
        lambda2: args.lambda2,
        patch: args.patch,
        stride: args.stride,
        patches,
        height: noisy.height(),
        width: noisy.width(),
        psnr,
    };
    write_json(&args.out.join("diagnostics.json"), &diag)?;
    println!(
        "denoised {}x{} image with {} patches",
        noisy.height(),
        noisy.width(),
        patches
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct BenchSummary {
    iters: usize,
    sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    structured_slope: Option<f64>,
    naive_sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    naive_slope: Option<f64>,
}

fn timing_csv(header: &str, rows: &[Timing]) -> String {
    let mut s = format!("{header}\n");
    for t in rows {
        s.push_str(&format!("{},{:e}\n", t.p, t.seconds));
    }
    s
}

/// Writes `bench.csv` (p, mean_iter_time), `naive.csv` and `bench.json` with
/// the fitted log-log slopes.
pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let naive_sizes: &[usize] = if args.no_naive { &[] } else { &NAIVE_SIZES };
    let report = run_bench(&args.sizes, naive_sizes, args.iters, args.seed)?;
    write_text(
        &args.out.join("bench.csv"),
        &timing_csv("p,mean_iter_time", &report.structured),
    )?;
    if !report.naive.is_empty() {
        write_text(
            &args.out.join("naive.csv"),
            &timing_csv("p,matvec_time", &report.naive),
        )?;
    }
    let summary = BenchSummary {
        iters: report.iters,
        sizes: args.sizes.clone(),
        structured_slope: report.structured_slope,
        naive_sizes: naive_sizes.to_vec(),
        naive_slope: report.naive_slope,
    };
    write_json(&args.out.join("bench.json"), &summary)?;
    for t in &report.structured {
        println!("p = {:>5}: {:.3e} s/iteration", t.p, t.seconds);
    }
    if let Some(s) = report.structured_slope {
        println!("structured log-log slope: {s:.3}");
    }
    if let Some(s) = report.naive_slope {
        println!("dense matvec log-log slope: {s:.3}");
    }
    Ok(())
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match RunManifest::from_command(cli.command).run() {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}
