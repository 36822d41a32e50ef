//! Geometry Score: witness-complex H1 barcodes, Relative Living Times and
//! their mean over random landmark draws.

pub mod persistence;
pub mod witness;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::data_model::FeatureMatrix;
use crate::error::{HtgError, Result};

pub use persistence::{h1_pairs, persistence_h1, FilteredComplex, H1Pairs, PersistenceBarcode};
pub use witness::{witness_complex, witness_persistence_h1};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GsParams {
    pub i_max: usize,
    pub n_landmarks: usize,
    pub gamma: f64,
    pub n_repeats: usize,
    pub seed: u64,
}

impl Default for GsParams {
    /// Desk configuration (100 repeats).
    fn default() -> Self {
        GsParams {
            i_max: 100,
            n_landmarks: 64,
            gamma: 1.0 / 128.0,
            n_repeats: 100,
            seed: 0,
        }
    }
}

impl GsParams {
    /// Full configuration (1000 repeats).
    pub fn full() -> Self {
        GsParams {
            n_repeats: 1000,
            ..Self::default()
        }
    }

    fn validate(&self, n_points: usize) -> Result<()> {
        if self.i_max < 1 {
            return Err(HtgError::InvalidArgument("i_max must be >= 1".into()));
        }
        if self.n_repeats < 1 {
            return Err(HtgError::InvalidArgument("n_repeats must be >= 1".into()));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(HtgError::InvalidArgument(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if self.n_landmarks < 2 {
            return Err(HtgError::InvalidArgument(
                "need at least 2 landmarks".into(),
            ));
        }
        if n_points < self.n_landmarks {
            return Err(HtgError::InsufficientSamples {
                needed: self.n_landmarks,
                got: n_points,
            });
        }
        Ok(())
    }
}

/// Entry i is the fraction of `[0, alpha_max]` during which exactly i
/// one-dimensional holes are alive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RltDistribution(pub Vec<f64>);

impl RltDistribution {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Relative living times of a barcode, truncated at `i_max` entries.
/// A zero-width range counts as zero holes throughout.
pub fn rlt_from_barcode(barcode: &PersistenceBarcode, i_max: usize) -> RltDistribution {
    let mut out = vec![0.0; i_max];
    let alpha_max = barcode.alpha_max;
    if alpha_max <= 0.0 || barcode.intervals.is_empty() {
        if i_max > 0 {
            out[0] = 1.0;
        }
        return RltDistribution(out);
    }
    let mut events: Vec<(f64, i64)> = Vec::with_capacity(2 * barcode.intervals.len());
    for &(b, d) in &barcode.intervals {
        events.push((b.clamp(0.0, alpha_max), 1));
        events.push((d.clamp(0.0, alpha_max), -1));
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut alive: i64 = 0;
    let mut pos = 0.0;
    let mut k = 0;
    while pos < alpha_max {
        while k < events.len() && events[k].0 <= pos {
            alive += events[k].1;
            k += 1;
        }
        let next = if k < events.len() {
            events[k].0
        } else {
            alpha_max
        };
        let count = alive as usize;
        if count < i_max {
            out[count] += (next - pos) / alpha_max;
        }
        pos = next;
    }
    RltDistribution(out)
}

fn max_distance(dist: &[Vec<f64>]) -> f64 {
    dist.iter().flatten().copied().fold(0.0, f64::max)
}

/// Relative living times for one landmark set; `alpha_max` is
/// `gamma` times the largest landmark-to-witness distance.
pub fn rlt(
    points: &FeatureMatrix,
    landmarks: &[usize],
    params: &GsParams,
) -> Result<RltDistribution> {
    if params.i_max < 1 || !(params.gamma > 0.0 && params.gamma.is_finite()) {
        return Err(HtgError::InvalidArgument(
            "i_max must be >= 1 and gamma positive".into(),
        ));
    }
    if landmarks.len() < 3 {
        // no cycle can form on fewer than three vertices
        if landmarks.len() < 2 || landmarks.iter().any(|&l| l >= points.n()) {
            return Err(HtgError::InsufficientSamples {
                needed: 2,
                got: landmarks.len(),
            });
        }
        return Ok(rlt_from_barcode(
            &PersistenceBarcode::empty(0.0),
            params.i_max,
        ));
    }
    witness::validate_landmarks(points, landmarks)?;
    let dist = witness::landmark_distances(points, landmarks);
    let alpha_max = params.gamma * max_distance(&dist);
    if alpha_max <= 0.0 {
        return Ok(rlt_from_barcode(
            &PersistenceBarcode::empty(0.0),
            params.i_max,
        ));
    }
    let complex = witness::complex_from_distances(&dist, landmarks.len(), alpha_max);
    let barcode = persistence_h1(&complex, alpha_max);
    Ok(rlt_from_barcode(&barcode, params.i_max))
}

/// Landmark indices for repeat `r`: uniform without replacement, seeded
/// with `seed + r`.
pub fn landmarks_for_repeat(
    n_points: usize,
    n_landmarks: usize,
    seed: u64,
    repeat: usize,
) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(repeat as u64));
    rand::seq::index::sample(&mut rng, n_points, n_landmarks).into_vec()
}

/// Mean relative living times over `n_repeats` landmark draws. Repeats run
/// in parallel; the mean is accumulated in repeat order.
pub fn mrlt(points: &FeatureMatrix, params: &GsParams) -> Result<Vec<f64>> {
    params.validate(points.n())?;
    let per_repeat = (0..params.n_repeats)
        .into_par_iter()
        .map(|r| {
            let landmarks = landmarks_for_repeat(points.n(), params.n_landmarks, params.seed, r);
            rlt(points, &landmarks, params)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sum = vec![0.0; params.i_max];
    for d in &per_repeat {
        for (s, v) in sum.iter_mut().zip(d.values()) {
            *s += v;
        }
    }
    let n = params.n_repeats as f64;
    Ok(sum.into_iter().map(|s| s / n).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryScore {
    pub gs: f64,
    pub mrlt_a: Vec<f64>,
    pub mrlt_b: Vec<f64>,
    pub params: GsParams,
}

/// Sum over i of the squared MRLT differences, both sets using the same
/// seed.
pub fn geometry_score(
    x1: &FeatureMatrix,
    x2: &FeatureMatrix,
    params: &GsParams,
) -> Result<GeometryScore> {
    let mrlt_a = mrlt(x1, params)?;
    let mrlt_b = mrlt(x2, params)?;
    let gs = mrlt_a
        .iter()
        .zip(&mrlt_b)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(GeometryScore {
        gs,
        mrlt_a,
        mrlt_b,
        params: *params,
    })
}

pub fn gs_conventions() -> serde_json::Value {
    serde_json::json!({
        "complex": "relaxed witness complex, witnesses = all points, simplices up to dimension 2",
        "distance": "euclidean (unsquared)",
        "edge_relaxation": "max(d(w,a), d(w,b)) - d_2nd_nearest_landmark(w)",
        "triangles": "enter at max of their edges",
        "alpha_max": "gamma * max landmark-to-witness distance",
        "zero_length_intervals": "dropped",
        "essential_intervals": "die at alpha_max",
        "landmark_seed": "seed + repeat_index",
    })
}
