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

use std::ffi::CStr;
use std::ptr;

use wflsa_ffi::*;

fn message() -> String {
    let p = wflsa_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn weights(p: usize, data: &[f64]) -> *mut WflsaWeights {
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { wflsa_weights_new(p, data.as_ptr(), &mut w) },
        WflsaStatus::Ok
    );
    w
}

#[test]
fn solve_through_handles_matches_the_library() {
    let data = [0.0, 1.0, 0.0, 1.0, 0.0, 0.5, 0.0, 0.5, 0.0];
    let y = [1.0, -0.5, 2.0];
    let w = weights(3, &data);
    let cfg = wflsa_config_default(0.1, 0.3);
    let mut sol = ptr::null_mut();
    unsafe {
        assert_eq!(
            wflsa_solve(w, y.as_ptr(), 3, &cfg, &mut sol),
            WflsaStatus::Ok
        );
        let mut info = std::mem::zeroed::<WflsaSolutionInfo>();
        assert_eq!(wflsa_solution_info(sol, &mut info), WflsaStatus::Ok);
        assert!(info.converged);
        assert_eq!(info.p, 3);
        let mut beta = [0.0; 3];
        assert_eq!(
            wflsa_solution_beta(sol, beta.as_mut_ptr(), 3),
            WflsaStatus::Ok
        );

        let wm = wflsa::WeightMatrix::from_row_major(3, &data).unwrap();
        let direct = wflsa::solve(&y, &wm, &wflsa::SolverConfig::new(0.1, 0.3)).unwrap();
        assert_eq!(beta.to_vec(), direct.beta);
        assert_eq!(info.objective, direct.objective);

        let mut small = [0.0; 2];
        assert_eq!(
            wflsa_solution_beta(sol, small.as_mut_ptr(), 2),
            WflsaStatus::BufferTooSmall
        );

        let mut zero = ptr::null_mut();
        assert_eq!(
            wflsa_solution_rethreshold(sol, 1e6, &mut zero),
            WflsaStatus::Ok
        );
        assert_eq!(
            wflsa_solution_beta(zero, beta.as_mut_ptr(), 3),
            WflsaStatus::Ok
        );
        assert_eq!(beta, [0.0; 3]);
        let mut raw = [0.0; 3];
        assert_eq!(
            wflsa_solution_beta_unthresholded(zero, raw.as_mut_ptr(), 3),
            WflsaStatus::Ok
        );
        assert_eq!(raw.to_vec(), direct.beta_unthresholded);

        let mut q = 0.0;
        assert_eq!(wflsa_gershgorin_q_bound(w, 0.3, &mut q), WflsaStatus::Ok);
        assert!(q > 0.0);
        assert_eq!(wflsa_weights_p(w), 3);

        wflsa_solution_free(zero);
        wflsa_solution_free(sol);
        wflsa_weights_free(w);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut w = ptr::null_mut();
    let asym = [0.0, 1.0, 2.0, 0.0];
    assert_eq!(
        unsafe { wflsa_weights_new(2, asym.as_ptr(), &mut w) },
        WflsaStatus::InvalidWeights
    );
    assert!(w.is_null());
    assert!(message().contains("asymmetric"));

    assert_eq!(
        unsafe { wflsa_weights_new(2, ptr::null(), &mut w) },
        WflsaStatus::NullPointer
    );

    let w = weights(2, &[0.0, 1.0, 1.0, 0.0]);
    let y = [1.0, 2.0, 3.0];
    let cfg = wflsa_config_default(0.0, 1.0);
    let mut sol = ptr::null_mut();
    unsafe {
        assert_eq!(
            wflsa_solve(w, y.as_ptr(), 3, &cfg, &mut sol),
            WflsaStatus::DimensionMismatch
        );
        let bad = WflsaConfig { rho: -1.0, ..cfg };
        assert_eq!(
            wflsa_solve(w, y.as_ptr(), 2, &bad, &mut sol),
            WflsaStatus::InvalidConfig
        );
        assert!(sol.is_null());
        assert_eq!(
            wflsa_solve(w, y.as_ptr(), 2, &cfg, &mut sol),
            WflsaStatus::Ok
        );
        assert!(wflsa_last_error_message().is_null());
        wflsa_solution_free(sol);
        wflsa_weights_free(w);
        wflsa_weights_free(ptr::null_mut());
        wflsa_solution_free(ptr::null_mut());
    }
    let s = unsafe { CStr::from_ptr(wflsa_status_string(WflsaStatus::BufferTooSmall)) };
    assert_eq!(s.to_str().unwrap(), "buffer too small");
}

#[test]
fn imaging_entry_points() {
    let (h, w) = (8, 10);
    let flat = vec![0.5; h * w];
    let mut noisy = vec![0.0; h * w];
    let mut intensity = vec![0.0; h * w];
    let mut out = vec![0.0; h * w];
    let cfg = wflsa_config_default(0.0, 0.0);
    unsafe {
        assert_eq!(
            wflsa_radial_noise(
                flat.as_ptr(),
                h,
                w,
                0.2,
                3,
                noisy.as_mut_ptr(),
                intensity.as_mut_ptr()
            ),
            WflsaStatus::Ok
        );
        assert_ne!(noisy, flat);
        assert_eq!(
            wflsa_denoise(
                noisy.as_ptr(),
                intensity.as_ptr(),
                h,
                w,
                5,
                4,
                1,
                0.001,
                0.04,
                &cfg,
                out.as_mut_ptr()
            ),
            WflsaStatus::Ok
        );
        let mut gain = 0.0;
        assert_eq!(
            wflsa_psnr(out.as_ptr(), flat.as_ptr(), h, w, &mut gain),
            WflsaStatus::Ok
        );
        let mut before = 0.0;
        assert_eq!(
            wflsa_psnr(noisy.as_ptr(), flat.as_ptr(), h, w, &mut before),
            WflsaStatus::Ok
        );
        assert!(gain > before);

        assert_eq!(
            wflsa_denoise(
                noisy.as_ptr(),
                intensity.as_ptr(),
                h,
                w,
                9,
                11,
                1,
                0.0,
                0.1,
                &cfg,
                out.as_mut_ptr()
            ),
            WflsaStatus::InvalidImage
        );
        assert_eq!(
            wflsa_median_filter(flat.as_ptr(), h, w, 4, 3, out.as_mut_ptr()),
            WflsaStatus::InvalidImage
        );
        assert_eq!(
            wflsa_median_filter(flat.as_ptr(), h, w, 3, 3, out.as_mut_ptr()),
            WflsaStatus::Ok
        );
        assert_eq!(out, flat);
        let mut same = 0.0;
        assert_eq!(
            wflsa_psnr(flat.as_ptr(), flat.as_ptr(), h, w, &mut same),
            WflsaStatus::Ok
        );
        assert_eq!(same, f64::INFINITY);
    }
    assert_eq!(wflsa_soft_threshold(1.0, -2.5), -1.5);
}

#[test]
fn header_declares_every_entry_point() {
    let header = include_str!("../include/wflsa.h");
    for name in [
        "wflsa_config_default",
        "wflsa_status_string",
        "wflsa_last_error_message",
        "wflsa_weights_new",
        "wflsa_weights_free",
        "wflsa_weights_p",
        "wflsa_gershgorin_q_bound",
        "wflsa_soft_threshold",
        "wflsa_solve",
        "wflsa_solution_free",
        "wflsa_solution_info",
        "wflsa_solution_beta",
        "wflsa_solution_beta_unthresholded",
        "wflsa_solution_rethreshold",
        "wflsa_radial_noise",
        "wflsa_denoise",
        "wflsa_median_filter",
        "wflsa_psnr",
        "typedef struct WflsaWeights WflsaWeights",
        "WFLSA_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
