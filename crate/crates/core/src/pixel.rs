//! Pixel-level reference metrics between aligned, same-size image pairs.
//!
//! Variances and covariances use the population (1/n) convention.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::data_model::{load_image, GrayImage};
use crate::error::{HtgError, Result};

/// SSIM stabilizing constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SsimConstants {
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: f64,
}

impl Default for SsimConstants {
    fn default() -> Self {
        SsimConstants {
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 255.0,
        }
    }
}

impl SsimConstants {
    pub fn new(k1: f64, k2: f64, dynamic_range: f64) -> Result<Self> {
        let c = SsimConstants {
            k1,
            k2,
            dynamic_range,
        };
        if !(c.c1() > 0.0 && c.c2() > 0.0) || !c.c1().is_finite() || !c.c2().is_finite() {
            return Err(HtgError::InvalidArgument(format!(
                "SSIM constants must be positive, got k1={k1} k2={k2} L={dynamic_range}"
            )));
        }
        Ok(c)
    }

    pub fn for_range(dynamic_range: f64) -> Result<Self> {
        SsimConstants::new(0.01, 0.03, dynamic_range)
    }

    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }
}

fn check_same_shape(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(HtgError::ShapeError(format!(
            "image sizes differ: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_same_shape(a, b)?;
    let sum: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.len() as f64)
}

pub fn rmse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    mse(a, b).map(f64::sqrt)
}

/// Peak signal-to-noise ratio in decibels, using the maximum intensity of `a`.
/// Identical images have no finite PSNR and yield [`HtgError::IdenticalImages`].
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Err(HtgError::IdenticalImages);
    }
    Ok(psnr_from_mse(m, a.max_intensity()))
}

pub fn psnr_from_mse(mse: f64, max_intensity: f64) -> f64 {
    10.0 * (max_intensity * max_intensity / mse).log10()
}

#[derive(Debug, Clone, Copy, Default)]
struct PairMoments {
    mean_a: f64,
    mean_b: f64,
    var_a: f64,
    var_b: f64,
    cov: f64,
}

fn moments(
    a: impl Iterator<Item = f64> + Clone,
    b: impl Iterator<Item = f64> + Clone,
    n: usize,
) -> PairMoments {
    let n = n as f64;
    let mean_a = a.clone().sum::<f64>() / n;
    let mean_b = b.clone().sum::<f64>() / n;
    let (mut var_a, mut var_b, mut cov) = (0.0, 0.0, 0.0);
    for (x, y) in a.zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        var_a += dx * dx;
        var_b += dy * dy;
        cov += dx * dy;
    }
    PairMoments {
        mean_a,
        mean_b,
        var_a: var_a / n,
        var_b: var_b / n,
        cov: cov / n,
    }
}

fn ssim_from_moments(m: &PairMoments, c: &SsimConstants) -> f64 {
    let (c1, c2) = (c.c1(), c.c2());
    ((2.0 * m.mean_a * m.mean_b + c1) * (2.0 * m.cov + c2))
        / ((m.mean_a * m.mean_a + m.mean_b * m.mean_b + c1) * (m.var_a + m.var_b + c2))
}

/// Single-window SSIM over the whole image.
pub fn ssim_global(a: &GrayImage, b: &GrayImage, c: &SsimConstants) -> Result<f64> {
    check_same_shape(a, b)?;
    if a.len() < 2 {
        return Err(HtgError::ShapeError("SSIM needs at least 2 pixels".into()));
    }
    let m = moments(
        a.pixels().iter().copied(),
        b.pixels().iter().copied(),
        a.len(),
    );
    Ok(ssim_from_moments(&m, c))
}

/// Mean SSIM over every `window`×`window` patch at stride 1, uniformly weighted.
pub fn ssim_windowed(
    a: &GrayImage,
    b: &GrayImage,
    c: &SsimConstants,
    window: usize,
) -> Result<f64> {
    check_same_shape(a, b)?;
    if window == 0 || window > a.width().min(a.height()) {
        return Err(HtgError::ShapeError(format!(
            "window {window} does not fit a {}x{} image",
            a.width(),
            a.height()
        )));
    }
    if window * window < 2 {
        return Err(HtgError::ShapeError(
            "SSIM window needs at least 2 pixels".into(),
        ));
    }
    let w = a.width();
    let (nx, ny) = (a.width() - window + 1, a.height() - window + 1);
    let mut total = 0.0;
    for y0 in 0..ny {
        for x0 in 0..nx {
            let m = moments(
                patch(a.pixels(), w, x0, y0, window),
                patch(b.pixels(), w, x0, y0, window),
                window * window,
            );
            total += ssim_from_moments(&m, c);
        }
    }
    Ok(total / (nx * ny) as f64)
}

fn patch(
    px: &[f64],
    width: usize,
    x0: usize,
    y0: usize,
    window: usize,
) -> impl Iterator<Item = f64> + Clone + '_ {
    (y0..y0 + window).flat_map(move |y| px[y * width + x0..y * width + x0 + window].iter().copied())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SsimMode {
    Global,
    Windowed(usize),
}

/// PSNR of a pair; identical images are reported as `"inf"`, never a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsnrValue {
    Finite(f64),
    Infinite,
}

impl Serialize for PsnrValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PsnrValue::Finite(v) => s.serialize_f64(*v),
            PsnrValue::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairMetrics {
    pub a: String,
    pub b: String,
    pub mse: f64,
    pub rmse: f64,
    pub psnr: PsnrValue,
    pub ssim: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// Population statistics, summed in input order.
    pub fn of(values: &[f64]) -> Option<MeanStd> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some(MeanStd {
            mean,
            std: var.sqrt(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PixelMetricReport {
    pub pairs: Vec<PairMetrics>,
    pub mse: Option<MeanStd>,
    pub rmse: Option<MeanStd>,
    /// Mean PSNR over pairs with a finite value.
    pub psnr: Option<MeanStd>,
    /// Identical pairs left out of the PSNR summary.
    pub psnr_identical_pairs: usize,
    pub ssim: Option<MeanStd>,
    pub ssim_mode: SsimMode,
    pub ssim_constants: SsimConstants,
}

/// Scores every pair. Pairs are processed in parallel and summarized in input
/// order, so the report does not depend on the thread count.
pub fn evaluate_pairs(
    pairs: &[(String, GrayImage, String, GrayImage)],
    mode: SsimMode,
    constants: &SsimConstants,
) -> Result<PixelMetricReport> {
    let rows = pairs
        .par_iter()
        .map(|(na, a, nb, b)| {
            let m = mse(a, b)?;
            let psnr = if m == 0.0 {
                PsnrValue::Infinite
            } else {
                PsnrValue::Finite(psnr_from_mse(m, a.max_intensity()))
            };
            let ssim = match mode {
                SsimMode::Global => ssim_global(a, b, constants)?,
                SsimMode::Windowed(w) => ssim_windowed(a, b, constants, w)?,
            };
            Ok(PairMetrics {
                a: na.clone(),
                b: nb.clone(),
                mse: m,
                rmse: m.sqrt(),
                psnr,
                ssim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |f: &dyn Fn(&PairMetrics) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let finite_psnr: Vec<f64> = rows
        .iter()
        .filter_map(|r| match r.psnr {
            PsnrValue::Finite(v) => Some(v),
            PsnrValue::Infinite => None,
        })
        .collect();
    Ok(PixelMetricReport {
        mse: MeanStd::of(&col(&|r| r.mse)),
        rmse: MeanStd::of(&col(&|r| r.rmse)),
        psnr: MeanStd::of(&finite_psnr),
        psnr_identical_pairs: rows.len() - finite_psnr.len(),
        ssim: MeanStd::of(&col(&|r| r.ssim)),
        ssim_mode: mode,
        ssim_constants: *constants,
        pairs: rows,
    })
}

#[derive(Debug, Deserialize)]
struct PairLine {
    a: String,
    b: String,
}

/// Reads a JSON Lines file of `{"a": path, "b": path}` objects and loads both
/// images of every line. Relative paths resolve against the file's directory.
pub fn load_pairs(path: impl AsRef<Path>) -> Result<Vec<(String, GrayImage, String, GrayImage)>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HtgError::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let resolve = |p: &str| -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let line: PairLine = serde_json::from_str(l)
                .map_err(|e| HtgError::SchemaError(format!("pairs line {}: {e}", i + 1)))?;
            let a = load_image(resolve(&line.a))?;
            let b = load_image(resolve(&line.b))?;
            Ok((line.a, a, line.b, b))
        })
        .collect()
}
