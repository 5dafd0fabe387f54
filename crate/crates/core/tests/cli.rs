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

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use wflsa::imaging::{read_pgm, write_pgm, GrayImage, PgmEncoding};
use wflsa::io::read_vector;

fn wflsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wflsa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn solve_soft_thresholds_without_fusion() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("y.csv"), "1\n-1\n3\n").unwrap();
    fs::write(d.join("w.csv"), "0,0,0\n0,0,0\n0,0,0\n").unwrap();
    let out = d.join("out");
    let o = wflsa(&[
        "solve",
        "--y",
        s(&d.join("y.csv")),
        "--weights",
        s(&d.join("w.csv")),
        "--lambda1",
        "2",
        "--lambda2",
        "0.5",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        read_vector(out.join("beta.csv")).unwrap(),
        vec![0.0, 0.0, 1.0]
    );
    let diag = json(&out.join("diagnostics.json"));
    for key in [
        "iterations",
        "converged",
        "final_delta",
        "q_used",
        "objective",
        "lambda1_knots",
    ] {
        assert!(diag.get(key).is_some(), "missing {key}");
    }
    assert!(out.join("manifest.json").exists());
}

#[test]
fn solve_fuses_a_chain_to_its_mean() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("y.csv"), "1\n2\n3\n4\n").unwrap();
    fs::write(d.join("chain.tsv"), "# chain\n1\t2\t1\n2\t3\t1\n3\t4\t1\n").unwrap();
    let out = d.join("out");
    let o = wflsa(&[
        "solve",
        "--y",
        s(&d.join("y.csv")),
        "--weights",
        s(&d.join("chain.tsv")),
        "--lambda1",
        "0",
        "--lambda2",
        "10",
        "--oracle-check",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let beta = read_vector(out.join("beta.csv")).unwrap();
    assert!(beta.iter().all(|b| (b - 2.5).abs() < 1e-4), "{beta:?}");
    let diag = json(&out.join("diagnostics.json"));
    assert_eq!(diag["converged"], true);
    let diff = diag["oracle"]["objective_difference"].as_f64().unwrap();
    assert!(diff.abs() < 1e-4, "{diff}");
}

#[test]
fn beta_csv_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("y.csv"), "0.3\n-1.7\n2.2\n0.9\n").unwrap();
    fs::write(
        d.join("w.csv"),
        "0,0.4,0,1\n0.4,0,0.2,0\n0,0.2,0,0.7\n1,0,0.7,0\n",
    )
    .unwrap();
    let out = d.join("out");
    let o = wflsa(&[
        "solve",
        "--y",
        s(&d.join("y.csv")),
        "--weights",
        s(&d.join("w.csv")),
        "--lambda1",
        "0.05",
        "--lambda2",
        "0.3",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success());

    let y = read_vector(d.join("y.csv")).unwrap();
    let w = wflsa::io::read_weights(d.join("w.csv"), 4).unwrap();
    let direct = wflsa::solve(&y, &w, &wflsa::SolverConfig::new(0.05, 0.3)).unwrap();
    let written = read_vector(out.join("beta.csv")).unwrap();
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&written), bits(&direct.beta));
}

#[test]
fn malformed_input_exits_two_and_cites_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("y.csv"), "1\n1,x\n3\n").unwrap();
    fs::write(d.join("w.csv"), "0,0,0\n0,0,0\n0,0,0\n").unwrap();
    let o = wflsa(&[
        "solve",
        "--y",
        s(&d.join("y.csv")),
        "--weights",
        s(&d.join("w.csv")),
        "--lambda1",
        "0",
        "--lambda2",
        "1",
        "--out",
        s(&d.join("out")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("y.csv:2"), "{err}");
}

#[test]
fn exit_codes_on_malformed_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("y.csv"), "1\n2\n3\n").unwrap();
    let cases = [
        ("asym.csv", "0,1,0\n2,0,0\n0,0,0\n"),
        ("short.csv", "0,1,0\n1,0,0\n"),
        ("diag.csv", "1,0,0\n0,0,0\n0,0,0\n"),
        ("neg.tsv", "1\t2\t-1\n"),
        ("order.tsv", "2\t1\t1\n"),
        ("range.tsv", "1\t4\t1\n"),
    ];
    for (name, text) in cases {
        fs::write(d.join(name), text).unwrap();
        let o = wflsa(&[
            "solve",
            "--y",
            s(&d.join("y.csv")),
            "--weights",
            s(&d.join(name)),
            "--lambda1",
            "0",
            "--lambda2",
            "1",
            "--out",
            s(&d.join("out")),
        ]);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    fs::write(d.join("bad.pgm"), "P2\n2 2\n65535\n1 2 3 4\n").unwrap();
    let o = wflsa(&[
        "denoise",
        "--image",
        s(&d.join("bad.pgm")),
        "--radial-sigma",
        "0.1",
        "--out",
        s(&d.join("dn")),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("y.csv"), "1\n2\n").unwrap();
    fs::write(d.join("w.csv"), "0,1\n1,0\n").unwrap();
    fs::write(d.join("blocker"), "not a directory").unwrap();
    let o = wflsa(&[
        "solve",
        "--y",
        s(&d.join("y.csv")),
        "--weights",
        s(&d.join("w.csv")),
        "--lambda1",
        "0",
        "--lambda2",
        "1",
        "--out",
        s(&d.join("blocker").join("out")),
    ]);
    assert_eq!(
        o.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let o = wflsa(&[
        "bench",
        "--sizes",
        "8",
        "--iters",
        "2",
        "--out",
        s(&d.join("blocker").join("b")),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn denoise_keeps_a_constant_image_and_echoes_lambdas() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let img = GrayImage::from_u8(16, 16, &[128u8; 256]).unwrap();
    write_pgm(d.join("flat.pgm"), &img, PgmEncoding::Ascii).unwrap();
    for lambda2 in ["0.04", "0.1"] {
        let out = d.join(format!("out{lambda2}"));
        let o = wflsa(&[
            "denoise",
            "--image",
            s(&d.join("flat.pgm")),
            "--noise-map",
            s(&d.join("flat.pgm")),
            "--lambda1",
            "0.001",
            "--lambda2",
            lambda2,
            "--psnr-against",
            s(&d.join("flat.pgm")),
            "--baseline",
            "median",
            "--out",
            s(&out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(
            read_pgm(out.join("denoised.pgm")).unwrap().to_u8(),
            img.to_u8()
        );
        assert!(out.join("median.pgm").exists());
        let diag = json(&out.join("diagnostics.json"));
        assert_eq!(diag["lambda1"].as_f64(), Some(0.001));
        assert_eq!(diag["lambda2"].as_f64(), lambda2.parse::<f64>().ok());
        assert_eq!(diag["stride"], 1);
        assert_eq!(diag["patch"]["h"], 5);
        assert_eq!(diag["patch"]["w"], 4);
        assert!(diag["psnr"].get("wflsa").is_some());
        assert!(diag["psnr"].get("median").is_some());
    }
}

#[test]
fn bench_with_one_size_writes_one_row_and_no_slope() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b");
    let o = wflsa(&[
        "bench",
        "--sizes",
        "16",
        "--iters",
        "3",
        "--no-naive",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("bench.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2, "{csv}");
    assert_eq!(lines[0], "p,mean_iter_time");
    assert!(lines[1].starts_with("16,"));
    let report = json(&out.join("bench.json"));
    assert!(report.get("structured_slope").is_none());
}

#[test]
fn bench_with_several_sizes_reports_a_slope() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b");
    let o = wflsa(&[
        "bench",
        "--sizes",
        "16,32",
        "--iters",
        "3",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success());
    let report = json(&out.join("bench.json"));
    assert!(report["structured_slope"].is_f64());
    assert!(report["naive_slope"].is_f64());
    assert_eq!(
        fs::read_to_string(out.join("naive.csv"))
            .unwrap()
            .lines()
            .count(),
        4
    );
}
