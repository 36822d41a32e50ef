//! Relaxed witness filtration on a set of landmarks, with every input point
//! acting as a witness.
//!
//! Edge {a, b} enters at the smallest α for which some witness w has both
//! d(w, a) and d(w, b) within α of its second-nearest landmark distance.
//! Vertices enter at 0 and triangles at the largest value of their edges.
//! Distances are Euclidean (not squared).

use rayon::prelude::*;

use super::persistence::{persistence_h1, FilteredComplex, PersistenceBarcode};
use crate::data_model::FeatureMatrix;
use crate::error::{HtgError, Result};

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Witness-to-landmark distances, one row per witness.
pub(crate) fn landmark_distances(points: &FeatureMatrix, landmarks: &[usize]) -> Vec<Vec<f64>> {
    (0..points.n())
        .into_par_iter()
        .map(|w| {
            let x = points.row(w);
            landmarks
                .iter()
                .map(|&l| euclidean(x, points.row(l)))
                .collect()
        })
        .collect()
}

pub(crate) fn validate_landmarks(points: &FeatureMatrix, landmarks: &[usize]) -> Result<()> {
    if landmarks.len() < 3 {
        return Err(HtgError::InsufficientSamples {
            needed: 3,
            got: landmarks.len(),
        });
    }
    let mut seen = std::collections::HashSet::new();
    for &l in landmarks {
        if l >= points.n() || !seen.insert(l) {
            return Err(HtgError::InvalidArgument(format!(
                "invalid or repeated landmark index {l}"
            )));
        }
    }
    Ok(())
}

/// Builds the witness filtration truncated at `alpha_max`. Landmark `k` of
/// the complex is `landmarks[k]`.
pub fn witness_complex(
    points: &FeatureMatrix,
    landmarks: &[usize],
    alpha_max: f64,
) -> Result<FilteredComplex> {
    validate_landmarks(points, landmarks)?;
    if !(alpha_max >= 0.0 && alpha_max.is_finite()) {
        return Err(HtgError::InvalidArgument(format!(
            "alpha_max must be finite and >= 0, got {alpha_max}"
        )));
    }
    Ok(complex_from_distances(
        &landmark_distances(points, landmarks),
        landmarks.len(),
        alpha_max,
    ))
}

pub(crate) fn complex_from_distances(
    dist: &[Vec<f64>],
    n_landmarks: usize,
    alpha_max: f64,
) -> FilteredComplex {
    let l = n_landmarks;
    let mut edge = vec![f64::INFINITY; l * l];
    for row in dist {
        let (mut d0, mut d1) = (f64::INFINITY, f64::INFINITY);
        for &d in row {
            if d < d0 {
                d1 = d0;
                d0 = d;
            } else if d < d1 {
                d1 = d;
            }
        }
        let limit = d1 + alpha_max;
        let near: Vec<(usize, f64)> = row
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, d)| d <= limit)
            .collect();
        for (i, &(a, da)) in near.iter().enumerate() {
            for &(b, db) in &near[i + 1..] {
                let v = (da.max(db) - d1).max(0.0);
                let slot = &mut edge[a * l + b];
                if v < *slot {
                    *slot = v;
                }
            }
        }
    }
    let mut edges = Vec::new();
    for a in 0..l {
        for b in a + 1..l {
            let v = edge[a * l + b];
            if v <= alpha_max {
                edges.push(([a, b], v));
            }
        }
    }
    let mut triangles = Vec::new();
    for a in 0..l {
        for b in a + 1..l {
            let ab = edge[a * l + b];
            if ab > alpha_max {
                continue;
            }
            for c in b + 1..l {
                let (ac, bc) = (edge[a * l + c], edge[b * l + c]);
                if ac <= alpha_max && bc <= alpha_max {
                    triangles.push(([a, b, c], ab.max(ac).max(bc)));
                }
            }
        }
    }
    FilteredComplex::new(vec![0.0; l], edges, triangles)
        .expect("witness filtration is a valid complex")
}

/// H1 barcode of the witness filtration on `landmarks`, over `[0, alpha_max]`.
pub fn witness_persistence_h1(
    points: &FeatureMatrix,
    landmarks: &[usize],
    alpha_max: f64,
) -> Result<PersistenceBarcode> {
    if !(alpha_max > 0.0) {
        return Err(HtgError::InvalidArgument(format!(
            "alpha_max must be > 0, got {alpha_max}"
        )));
    }
    let complex = witness_complex(points, landmarks, alpha_max)?;
    Ok(persistence_h1(&complex, alpha_max))
}
