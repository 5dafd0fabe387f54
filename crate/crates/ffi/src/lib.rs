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

//! C ABI for the `wflsa` solver.
//!
//! Every fallible function returns a [`WflsaStatus`]; on failure the detailed
//! message is available from [`wflsa_last_error_message`] on the same thread.
//! Weights and solutions are opaque handles created and destroyed through
//! this interface. Images are row-major `double` buffers with values in `[0, 1]`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wflsa::imaging::{self, GrayImage, PatchSpec};
use wflsa::{Error, Solution, SolverConfig, WeightMatrix};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WflsaStatus {
    Ok = 0,
    NullPointer = 1,
    DimensionMismatch = 2,
    InvalidWeights = 3,
    InvalidConfig = 4,
    InvalidImage = 5,
    BufferTooSmall = 6,
    Panic = 7,
    Other = 8,
}

/// Solver settings. A `q_override` that is not a positive finite number
/// selects the automatic step bound.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WflsaConfig {
    pub lambda1: f64,
    pub lambda2: f64,
    pub rho: f64,
    pub eps: f64,
    pub max_iter: usize,
    pub q_override: f64,
}

/// Scalar diagnostics of a solution.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WflsaSolutionInfo {
    pub p: usize,
    pub iterations: usize,
    pub converged: bool,
    pub final_delta: f64,
    pub q_used: f64,
    pub objective: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

/// Opaque symmetric weight matrix.
pub struct WflsaWeights(WeightMatrix);

/// Opaque solver result.
pub struct WflsaSolution(Solution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> WflsaStatus {
    match err {
        Error::DimensionMismatch { .. } | Error::NonSquare { .. } => WflsaStatus::DimensionMismatch,
        Error::AsymmetricMatrix { .. }
        | Error::NegativeWeight { .. }
        | Error::NonzeroDiagonal { .. } => WflsaStatus::InvalidWeights,
        Error::InvalidConfig(_) | Error::TooLarge { .. } => WflsaStatus::InvalidConfig,
        Error::PatchLargerThanImage { .. }
        | Error::EvenWindow { .. }
        | Error::WindowLargerThanImage { .. }
        | Error::InvalidImage(_) => WflsaStatus::InvalidImage,
        _ => WflsaStatus::Other,
    }
}

struct Fail(WflsaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(WflsaStatus::NullPointer, format!("null pointer: {what}"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WflsaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            WflsaStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            WflsaStatus::Panic
        }
    }
}

unsafe fn slice<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn slice_mut<'a>(ptr: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Fail> {
    if len == 0 {
        return Ok(&mut []);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, len))
}

unsafe fn out_ref<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    ptr.as_mut().ok_or_else(|| null(what))
}

fn image_len(height: usize, width: usize) -> Result<usize, Fail> {
    height.checked_mul(width).ok_or_else(|| {
        Fail(
            WflsaStatus::InvalidImage,
            format!("image {height}x{width} is too large"),
        )
    })
}

unsafe fn read_image(
    ptr: *const f64,
    height: usize,
    width: usize,
    what: &str,
) -> Result<GrayImage, Fail> {
    let px = slice(ptr, image_len(height, width)?, what)?;
    Ok(GrayImage::new(height, width, px.to_vec())?)
}

fn to_config(cfg: &WflsaConfig) -> SolverConfig {
    SolverConfig {
        lambda1: cfg.lambda1,
        lambda2: cfg.lambda2,
        rho: cfg.rho,
        eps: cfg.eps,
        max_iter: cfg.max_iter,
        q_override: (cfg.q_override.is_finite() && cfg.q_override > 0.0).then_some(cfg.q_override),
    }
}

/// Default settings for the given penalties.
#[no_mangle]
pub extern "C" fn wflsa_config_default(lambda1: f64, lambda2: f64) -> WflsaConfig {
    let d = SolverConfig::new(lambda1, lambda2);
    WflsaConfig {
        lambda1: d.lambda1,
        lambda2: d.lambda2,
        rho: d.rho,
        eps: d.eps,
        max_iter: d.max_iter,
        q_override: 0.0,
    }
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn wflsa_status_string(status: WflsaStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        WflsaStatus::Ok => b"ok\0",
        WflsaStatus::NullPointer => b"null pointer\0",
        WflsaStatus::DimensionMismatch => b"dimension mismatch\0",
        WflsaStatus::InvalidWeights => b"invalid weights\0",
        WflsaStatus::InvalidConfig => b"invalid configuration\0",
        WflsaStatus::InvalidImage => b"invalid image or window\0",
        WflsaStatus::BufferTooSmall => b"buffer too small\0",
        WflsaStatus::Panic => b"internal panic\0",
        WflsaStatus::Other => b"error\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn wflsa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds weights from a row-major `p × p` symmetric matrix.
///
/// # Safety
/// `data` must point to `p * p` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wflsa_weights_new(
    p: usize,
    data: *const f64,
    out: *mut *mut WflsaWeights,
) -> WflsaStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let len = p
            .checked_mul(p)
            .ok_or_else(|| Fail(WflsaStatus::InvalidConfig, format!("p = {p} is too large")))?;
        let w = WeightMatrix::from_row_major(p, slice(data, len, "data")?)?;
        *out = Box::into_raw(Box::new(WflsaWeights(w)));
        Ok(())
    })
}

/// # Safety
/// `weights` must be null or a handle from [`wflsa_weights_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wflsa_weights_free(weights: *mut WflsaWeights) {
    if !weights.is_null() {
        drop(Box::from_raw(weights));
    }
}

/// Number of vertices.
///
/// # Safety
/// `weights` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wflsa_weights_p(weights: *const WflsaWeights) -> usize {
    weights.as_ref().map_or(0, |w| w.0.p())
}

/// Gershgorin upper bound on the largest eigenvalue of `λ₂² DᵀD`.
///
/// # Safety
/// `weights` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wflsa_gershgorin_q_bound(
    weights: *const WflsaWeights,
    lambda2: f64,
    out: *mut f64,
) -> WflsaStatus {
    guard(|| {
        let w = weights.as_ref().ok_or_else(|| null("weights"))?;
        *out_ref(out, "out")? = wflsa::gershgorin_q_bound(&w.0, lambda2);
        Ok(())
    })
}

/// `sign(x) · max(|x| − λ₁, 0)`.
#[no_mangle]
pub extern "C" fn wflsa_soft_threshold(lambda1: f64, x: f64) -> f64 {
    wflsa::soft_threshold(lambda1, x)
}

/// Solves the problem for observations `y` of length `p`.
///
/// # Safety
/// `weights` must be a live handle, `y` must hold `p` doubles, `config` must be
/// readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wflsa_solve(
    weights: *const WflsaWeights,
    y: *const f64,
    p: usize,
    config: *const WflsaConfig,
    out: *mut *mut WflsaSolution,
) -> WflsaStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let w = weights.as_ref().ok_or_else(|| null("weights"))?;
        let cfg = config.as_ref().ok_or_else(|| null("config"))?;
        let y = slice(y, p, "y")?;
        let sol = wflsa::solve(y, &w.0, &to_config(cfg))?;
        *out = Box::into_raw(Box::new(WflsaSolution(sol)));
        Ok(())
    })
}

/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wflsa_solution_free(solution: *mut WflsaSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// # Safety
/// `solution` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wflsa_solution_info(
    solution: *const WflsaSolution,
    out: *mut WflsaSolutionInfo,
) -> WflsaStatus {
    guard(|| {
        let s = &solution.as_ref().ok_or_else(|| null("solution"))?.0;
        *out_ref(out, "out")? = WflsaSolutionInfo {
            p: s.beta.len(),
            iterations: s.iterations,
            converged: s.converged,
            final_delta: s.final_delta,
            q_used: s.q_used,
            objective: s.objective,
            lambda1: s.lambda1,
            lambda2: s.lambda2,
        };
        Ok(())
    })
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), Fail> {
    if len < src.len() {
        return Err(Fail(
            WflsaStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", src.len()),
        ));
    }
    slice_mut(buf, src.len(), "buffer")?.copy_from_slice(src);
    Ok(())
}

/// Copies the estimate into `buf`, which must hold at least `p` values.
///
/// # Safety
/// `solution` must be a live handle and `buf` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn wflsa_solution_beta(
    solution: *const WflsaSolution,
    buf: *mut f64,
    len: usize,
) -> WflsaStatus {
    guard(|| {
        let s = &solution.as_ref().ok_or_else(|| null("solution"))?.0;
        copy_out(&s.beta, buf, len)
    })
}

/// Copies the estimate at `λ₁ = 0` into `buf`.
///
/// # Safety
/// As for [`wflsa_solution_beta`].
#[no_mangle]
pub unsafe extern "C" fn wflsa_solution_beta_unthresholded(
    solution: *const WflsaSolution,
    buf: *mut f64,
    len: usize,
) -> WflsaStatus {
    guard(|| {
        let s = &solution.as_ref().ok_or_else(|| null("solution"))?.0;
        copy_out(&s.beta_unthresholded, buf, len)
    })
}

/// Moves a solution to a new `λ₁` by soft-thresholding, without re-solving.
///
/// # Safety
/// `solution` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wflsa_solution_rethreshold(
    solution: *const WflsaSolution,
    lambda1: f64,
    out: *mut *mut WflsaSolution,
) -> WflsaStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let s = &solution.as_ref().ok_or_else(|| null("solution"))?.0;
        if !(lambda1.is_finite() && lambda1 >= 0.0) {
            return Err(Fail(
                WflsaStatus::InvalidConfig,
                format!("lambda1 must be finite and >= 0, got {lambda1}"),
            ));
        }
        *out = Box::into_raw(Box::new(WflsaSolution(wflsa::rethreshold(s, lambda1))));
        Ok(())
    })
}

/// Adds Gaussian noise whose deviation grows linearly from the image center to
/// `max_sigma` at the corners. Writes the noisy image and the normalized
/// distance map used as noise intensity.
///
/// # Safety
/// `image`, `noisy_out` and `intensity_out` must each hold `height * width` doubles.
#[no_mangle]
pub unsafe extern "C" fn wflsa_radial_noise(
    image: *const f64,
    height: usize,
    width: usize,
    max_sigma: f64,
    seed: u64,
    noisy_out: *mut f64,
    intensity_out: *mut f64,
) -> WflsaStatus {
    guard(|| {
        let img = read_image(image, height, width, "image")?;
        let (noisy, intensity) = imaging::radial_noise(&img, max_sigma, seed)?;
        let n = image_len(height, width)?;
        copy_out(noisy.pixels(), noisy_out, n)?;
        copy_out(intensity.pixels(), intensity_out, n)
    })
}

/// Patch-wise smoothing of `noisy` guided by `intensity`. `config` supplies the
/// solver settings; its penalties are replaced by `lambda1` and `lambda2`.
///
/// # Safety
/// `noisy`, `intensity` and `out` must each hold `height * width` doubles and
/// `config` must be readable.
#[no_mangle]
pub unsafe extern "C" fn wflsa_denoise(
    noisy: *const f64,
    intensity: *const f64,
    height: usize,
    width: usize,
    patch_h: usize,
    patch_w: usize,
    stride: usize,
    lambda1: f64,
    lambda2: f64,
    config: *const WflsaConfig,
    out: *mut f64,
) -> WflsaStatus {
    guard(|| {
        let cfg = config.as_ref().ok_or_else(|| null("config"))?;
        let noisy = read_image(noisy, height, width, "noisy")?;
        let intensity = read_image(intensity, height, width, "intensity")?;
        let spec = PatchSpec {
            patch_h,
            patch_w,
            stride,
        };
        let result = imaging::denoise(&noisy, &intensity, spec, lambda1, lambda2, &to_config(cfg))?;
        copy_out(result.pixels(), out, image_len(height, width)?)
    })
}

/// Median filter with odd window sides and replicated borders.
///
/// # Safety
/// `image` and `out` must each hold `height * width` doubles.
#[no_mangle]
pub unsafe extern "C" fn wflsa_median_filter(
    image: *const f64,
    height: usize,
    width: usize,
    win_h: usize,
    win_w: usize,
    out: *mut f64,
) -> WflsaStatus {
    guard(|| {
        let img = read_image(image, height, width, "image")?;
        let result = imaging::median_filter(&img, win_h, win_w)?;
        copy_out(result.pixels(), out, image_len(height, width)?)
    })
}

/// Peak signal-to-noise ratio in dB with peak 1; infinite for identical images.
///
/// # Safety
/// `a` and `b` must each hold `height * width` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wflsa_psnr(
    a: *const f64,
    b: *const f64,
    height: usize,
    width: usize,
    out: *mut f64,
) -> WflsaStatus {
    guard(|| {
        let a = read_image(a, height, width, "a")?;
        let b = read_image(b, height, width, "b")?;
        *out_ref(out, "out")? = imaging::psnr(&a, &b)?;
        Ok(())
    })
}
