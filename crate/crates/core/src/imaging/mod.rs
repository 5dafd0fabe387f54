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

//! Patch-wise heterogeneous image smoothing.
//!
//! An image is cut into overlapping `patch_h × patch_w` windows. Each window
//! becomes a grid graph whose edge weights come from a noise-intensity map,
//! is solved independently, and the per-pixel estimates are averaged over
//! every window that covers the pixel. Noisier regions get heavier edges and
//! therefore stronger smoothing.

mod pgm;

pub use pgm::{read_pgm, write_pgm, PgmEncoding};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeList, WeightMatrix};
use crate::solver::{solve_edges, SolverConfig};

/// Grayscale image with intensities in `[0, 1]`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    height: usize,
    width: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(height: usize, width: usize, pixels: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidImage(format!(
                "image must be non-empty, got {height}x{width}"
            )));
        }
        if pixels.len() != height * width {
            return Err(Error::dims("image pixels", height * width, pixels.len()));
        }
        if let Some(v) = pixels.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidImage(format!(
                "pixel value {v} outside [0, 1]"
            )));
        }
        Ok(GrayImage {
            height,
            width,
            pixels,
        })
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Result<Self> {
        Self::new(height, width, vec![value; height * width])
    }

    /// Builds an image from 8-bit samples, dividing by 255.
    pub fn from_u8(height: usize, width: usize, samples: &[u8]) -> Result<Self> {
        Self::new(
            height,
            width,
            samples.iter().map(|&s| f64::from(s) / 255.0).collect(),
        )
    }

    /// Rounds to the nearest 8-bit level.
    pub fn to_u8(&self) -> Vec<u8> {
        self.pixels
            .iter()
            .map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect()
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.pixels[r * self.width + c]
    }

    pub fn crop(&self, r0: usize, c0: usize, h: usize, w: usize) -> Result<GrayImage> {
        if h == 0 || w == 0 || r0 + h > self.height || c0 + w > self.width {
            return Err(Error::PatchLargerThanImage {
                patch_h: h,
                patch_w: w,
                height: self.height,
                width: self.width,
            });
        }
        let mut pixels = Vec::with_capacity(h * w);
        for r in r0..r0 + h {
            pixels.extend_from_slice(&self.pixels[r * self.width + c0..r * self.width + c0 + w]);
        }
        Ok(GrayImage {
            height: h,
            width: w,
            pixels,
        })
    }

    fn same_shape(&self, other: &GrayImage, context: &'static str) -> Result<()> {
        if self.height != other.height {
            return Err(Error::dims(context, self.height, other.height));
        }
        if self.width != other.width {
            return Err(Error::dims(context, self.width, other.width));
        }
        Ok(())
    }
}

/// Window geometry for [`denoise`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchSpec {
    pub patch_h: usize,
    pub patch_w: usize,
    pub stride: usize,
}

impl Default for PatchSpec {
    fn default() -> Self {
        PatchSpec {
            patch_h: 5,
            patch_w: 4,
            stride: 1,
        }
    }
}

impl PatchSpec {
    /// Top-left corners of every patch. Positions step by `stride` and the
    /// last row and column are always flush with the image edge.
    pub fn positions(&self, height: usize, width: usize) -> Result<Vec<(usize, usize)>> {
        if self.patch_h == 0 || self.patch_w == 0 || self.patch_h > height || self.patch_w > width {
            return Err(Error::PatchLargerThanImage {
                patch_h: self.patch_h,
                patch_w: self.patch_w,
                height,
                width,
            });
        }
        if self.stride == 0 || self.stride > self.patch_h.min(self.patch_w) {
            return Err(Error::InvalidConfig(format!(
                "stride must be between 1 and the smaller patch side, got {}",
                self.stride
            )));
        }
        let axis = |len: usize, patch: usize| {
            let last = len - patch;
            let mut v: Vec<usize> = (0..=last).step_by(self.stride).collect();
            if v.last() != Some(&last) {
                v.push(last);
            }
            v
        };
        let rows = axis(height, self.patch_h);
        let cols = axis(width, self.patch_w);
        Ok(rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
            .collect())
    }
}

/// Adds Gaussian noise whose standard deviation grows linearly with the
/// distance from the image center.
///
/// Returns `(noisy, intensity)` where `intensity` is the distance to the
/// center divided by the center-to-corner distance. Noise draws come from
/// ChaCha8 seeded with `seed` (one standard normal per pixel, row-major), so a
/// given seed reproduces the same image bit for bit.
pub fn radial_noise(img: &GrayImage, max_sigma: f64, seed: u64) -> Result<(GrayImage, GrayImage)> {
    if !(max_sigma.is_finite() && max_sigma >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "max_sigma must be a finite value >= 0, got {max_sigma}"
        )));
    }
    let (h, w) = (img.height, img.width);
    let cr = (h as f64 - 1.0) / 2.0;
    let cc = (w as f64 - 1.0) / 2.0;
    let max_dist = (cr * cr + cc * cc).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut intensity = Vec::with_capacity(h * w);
    let mut noisy = Vec::with_capacity(h * w);
    for r in 0..h {
        for c in 0..w {
            let (dr, dc) = (r as f64 - cr, c as f64 - cc);
            let level = if max_dist > 0.0 {
                ((dr * dr + dc * dc).sqrt() / max_dist).min(1.0)
            } else {
                0.0
            };
            let z: f64 = StandardNormal.sample(&mut rng);
            intensity.push(level);
            noisy.push((img.get(r, c) + max_sigma * level * z).clamp(0.0, 1.0));
        }
    }
    Ok((
        GrayImage::new(h, w, noisy)?,
        GrayImage::new(h, w, intensity)?,
    ))
}

/// 4-neighbour grid edges of the window at `(r0, c0)`; vertices are row-major
/// within the window and each edge weighs the mean of its endpoint intensities.
fn grid_edges(intensity: &GrayImage, r0: usize, c0: usize, h: usize, w: usize) -> EdgeList {
    let mut edges = Vec::with_capacity(2 * h * w);
    for r in 0..h {
        for c in 0..w {
            let a = r * w + c;
            let ia = intensity.get(r0 + r, c0 + c);
            if c + 1 < w {
                let ib = intensity.get(r0 + r, c0 + c + 1);
                edges.push(Edge {
                    i: a,
                    j: a + 1,
                    weight: 0.5 * (ia + ib),
                });
            }
            if r + 1 < h {
                let ib = intensity.get(r0 + r + 1, c0 + c);
                edges.push(Edge {
                    i: a,
                    j: a + w,
                    weight: 0.5 * (ia + ib),
                });
            }
        }
    }
    EdgeList::new(h * w, &edges).expect("grid edges are valid by construction")
}

/// Weight matrix of the 4-neighbour grid graph over a patch.
pub fn grid_weights(intensity_patch: &GrayImage) -> WeightMatrix {
    grid_edges(
        intensity_patch,
        0,
        0,
        intensity_patch.height,
        intensity_patch.width,
    )
    .to_weight_matrix()
}

/// Patch-wise smoothing of `noisy` guided by `intensity`.
///
/// Patches are solved in parallel; their estimates are accumulated in a fixed
/// order afterwards, so the output does not depend on scheduling.
pub fn denoise(
    noisy: &GrayImage,
    intensity: &GrayImage,
    spec: PatchSpec,
    lambda1: f64,
    lambda2: f64,
    cfg: &SolverConfig,
) -> Result<GrayImage> {
    noisy.same_shape(intensity, "noise map shape")?;
    let positions = spec.positions(noisy.height, noisy.width)?;
    let cfg = SolverConfig {
        lambda1,
        lambda2,
        ..cfg.clone()
    };
    cfg.validate()?;
    let (ph, pw) = (spec.patch_h, spec.patch_w);

    let estimates: Vec<Vec<f64>> = positions
        .par_iter()
        .map(|&(r0, c0)| {
            let y = noisy.crop(r0, c0, ph, pw)?.pixels;
            let edges = grid_edges(intensity, r0, c0, ph, pw);
            solve_edges(&y, edges, &cfg).map(|s| s.beta)
        })
        .collect::<Result<_>>()?;

    accumulate(noisy.height, noisy.width, spec, &positions, &estimates)
}

fn accumulate(
    height: usize,
    width: usize,
    spec: PatchSpec,
    positions: &[(usize, usize)],
    estimates: &[Vec<f64>],
) -> Result<GrayImage> {
    let mut sum = vec![0.0; height * width];
    let mut count = vec![0u32; height * width];
    for (&(r0, c0), beta) in positions.iter().zip(estimates) {
        for r in 0..spec.patch_h {
            for c in 0..spec.patch_w {
                let idx = (r0 + r) * width + c0 + c;
                sum[idx] += beta[r * spec.patch_w + c];
                count[idx] += 1;
            }
        }
    }
    debug_assert!(count.iter().all(|&n| n > 0));
    let pixels = sum
        .iter()
        .zip(&count)
        .map(|(s, &n)| (s / f64::from(n)).clamp(0.0, 1.0))
        .collect();
    GrayImage::new(height, width, pixels)
}

/// Median over a `win_h × win_w` window centered on each pixel, with
/// replicate-border clamping so every window holds `win_h · win_w` samples.
pub fn median_filter(img: &GrayImage, win_h: usize, win_w: usize) -> Result<GrayImage> {
    if win_h.is_multiple_of(2) || win_w.is_multiple_of(2) {
        return Err(Error::EvenWindow { win_h, win_w });
    }
    if win_h > img.height || win_w > img.width {
        return Err(Error::WindowLargerThanImage {
            win_h,
            win_w,
            height: img.height,
            width: img.width,
        });
    }
    let (rh, rw) = ((win_h / 2) as isize, (win_w / 2) as isize);
    let clamp = |v: isize, len: usize| v.clamp(0, len as isize - 1) as usize;
    let mut window = Vec::with_capacity(win_h * win_w);
    let mut out = Vec::with_capacity(img.pixels.len());
    for r in 0..img.height as isize {
        for c in 0..img.width as isize {
            window.clear();
            for dr in -rh..=rh {
                for dc in -rw..=rw {
                    window.push(img.get(clamp(r + dr, img.height), clamp(c + dc, img.width)));
                }
            }
            let mid = window.len() / 2;
            let (_, m, _) = window.select_nth_unstable_by(mid, f64::total_cmp);
            out.push(*m);
        }
    }
    GrayImage::new(img.height, img.width, out)
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.same_shape(b, "image shape")?;
    let n = a.pixels.len() as f64;
    Ok(a.pixels
        .iter()
        .zip(&b.pixels)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / n)
}

/// Peak signal-to-noise ratio in dB for unit peak; `+∞` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (1.0 / mse).log10()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_objective;
    use crate::solver::soft_threshold;

    fn ramp(h: usize, w: usize) -> GrayImage {
        let px = (0..h * w).map(|k| (k % 17) as f64 / 16.0).collect();
        GrayImage::new(h, w, px).unwrap()
    }

    #[test]
    fn image_validation() {
        assert!(GrayImage::new(0, 3, vec![]).is_err());
        assert!(GrayImage::new(1, 2, vec![0.5]).is_err());
        assert!(GrayImage::new(1, 2, vec![0.5, 1.5]).is_err());
        let img = GrayImage::from_u8(1, 3, &[0, 128, 255]).unwrap();
        assert_eq!(img.to_u8(), vec![0, 128, 255]);
    }

    #[test]
    fn radial_noise_basics() {
        let img = ramp(5, 7);
        let (noisy, intensity) = radial_noise(&img, 0.0, 3).unwrap();
        assert_eq!(noisy, img);
        assert_eq!(intensity.get(2, 3), 0.0);
        for (r, c) in [(0, 0), (0, 6), (4, 0), (4, 6)] {
            assert_eq!(intensity.get(r, c), 1.0);
        }
        let a = radial_noise(&img, 0.3, 11).unwrap();
        let b = radial_noise(&img, 0.3, 11).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.0, radial_noise(&img, 0.3, 12).unwrap().0);
        assert!(radial_noise(&img, -1.0, 0).is_err());
    }

    #[test]
    fn grid_weight_examples() {
        let patch = GrayImage::new(1, 2, vec![0.2, 0.6]).unwrap();
        let w = grid_weights(&patch);
        assert!((w.get(0, 1) - 0.4).abs() < 1e-15);

        let patch = GrayImage::filled(3, 4, 0.7).unwrap();
        let w = grid_weights(&patch);
        let e = EdgeList::from_weights(&w);
        assert_eq!(e.len(), 3 * 3 + 2 * 4);
        assert!(e.iter().all(|e| e.weight == 0.7));

        let patch = GrayImage::filled(2, 2, 0.5).unwrap();
        let e = EdgeList::from_weights(&grid_weights(&patch));
        let pairs: Vec<_> = e.iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn positions_cover_every_pixel() {
        for (h, w, spec) in [
            (7, 9, PatchSpec::default()),
            (
                7,
                9,
                PatchSpec {
                    patch_h: 3,
                    patch_w: 2,
                    stride: 2,
                },
            ),
            (5, 4, PatchSpec::default()),
            (
                10,
                10,
                PatchSpec {
                    patch_h: 4,
                    patch_w: 10,
                    stride: 3,
                },
            ),
        ] {
            let pos = spec.positions(h, w).unwrap();
            let mut covered = vec![false; h * w];
            for (r0, c0) in pos {
                for r in r0..r0 + spec.patch_h {
                    for c in c0..c0 + spec.patch_w {
                        covered[r * w + c] = true;
                    }
                }
            }
            assert!(covered.iter().all(|&x| x), "{h}x{w} {spec:?}");
        }
        assert!(matches!(
            PatchSpec::default().positions(4, 4),
            Err(Error::PatchLargerThanImage { .. })
        ));
        let gappy = PatchSpec {
            patch_h: 3,
            patch_w: 2,
            stride: 3,
        };
        assert!(matches!(
            gappy.positions(9, 9),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn denoise_identity_cases() {
        let img = ramp(5, 4);
        let intensity = GrayImage::filled(5, 4, 0.8).unwrap();
        let out = denoise(
            &img,
            &intensity,
            PatchSpec::default(),
            0.0,
            0.0,
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(out, img);

        let img = ramp(8, 9);
        let zero = GrayImage::filled(8, 9, 0.0).unwrap();
        let spec = PatchSpec {
            patch_h: 3,
            patch_w: 3,
            stride: 1,
        };
        let out = denoise(&img, &zero, spec, 0.05, 0.5, &SolverConfig::default()).unwrap();
        for (o, x) in out.pixels().iter().zip(img.pixels()) {
            assert!((o - soft_threshold(0.05, *x).clamp(0.0, 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn denoise_keeps_constant_images() {
        let img = GrayImage::filled(9, 8, 0.42).unwrap();
        let (_, intensity) = radial_noise(&img, 0.0, 0).unwrap();
        let out = denoise(
            &img,
            &intensity,
            PatchSpec::default(),
            0.0,
            0.3,
            &SolverConfig::default(),
        )
        .unwrap();
        for v in out.pixels() {
            assert!((v - 0.42).abs() < 1e-6);
        }
        // the constant patch is optimal: perturbing any pixel raises the objective
        let w = grid_weights(&intensity.crop(0, 0, 5, 4).unwrap());
        let y = vec![0.42; 20];
        let base = oracle_objective(&y, &y, &w, 0.0, 0.3).unwrap();
        for k in 0..20 {
            for d in [-1e-3, 1e-3] {
                let mut b = y.clone();
                b[k] += d;
                assert!(oracle_objective(&y, &b, &w, 0.0, 0.3).unwrap() > base);
            }
        }
    }

    #[test]
    fn denoise_errors() {
        let a = GrayImage::filled(4, 4, 0.1).unwrap();
        let b = GrayImage::filled(4, 5, 0.1).unwrap();
        let cfg = SolverConfig::default();
        assert!(matches!(
            denoise(&a, &b, PatchSpec::default(), 0.0, 0.1, &cfg),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            denoise(&a, &a, PatchSpec::default(), 0.0, 0.1, &cfg),
            Err(Error::PatchLargerThanImage { .. })
        ));
    }

    #[test]
    fn median_examples() {
        let c = GrayImage::filled(6, 5, 0.3).unwrap();
        assert_eq!(median_filter(&c, 3, 3).unwrap(), c);
        let mut px = vec![0.0; 25];
        px[12] = 1.0;
        let salt = GrayImage::new(5, 5, px).unwrap();
        assert_eq!(median_filter(&salt, 3, 3).unwrap().get(2, 2), 0.0);
        let img = ramp(4, 6);
        assert_eq!(median_filter(&img, 1, 1).unwrap(), img);
        assert!(matches!(
            median_filter(&img, 2, 3),
            Err(Error::EvenWindow { .. })
        ));
        assert!(matches!(
            median_filter(&img, 5, 3),
            Err(Error::WindowLargerThanImage { .. })
        ));
    }

    #[test]
    fn median_commutes_with_flip() {
        let img = ramp(7, 7);
        let flipped = GrayImage::new(7, 7, img.pixels().iter().map(|v| 1.0 - v).collect()).unwrap();
        let a = median_filter(&flipped, 3, 5).unwrap();
        let b = median_filter(&img, 3, 5).unwrap();
        for (x, y) in a.pixels().iter().zip(b.pixels()) {
            assert!((x - (1.0 - y)).abs() < 1e-15);
        }
    }

    #[test]
    fn psnr_examples() {
        let a = GrayImage::filled(3, 3, 0.0).unwrap();
        let b = GrayImage::filled(3, 3, 1.0).unwrap();
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        assert_eq!(psnr(&a, &b).unwrap(), 0.0);
        let c = GrayImage::filled(3, 3, 0.1).unwrap();
        assert!((psnr(&a, &c).unwrap() - 20.0).abs() < 1e-9);
        assert!(psnr(&a, &GrayImage::filled(2, 3, 0.0).unwrap()).is_err());
    }
}
