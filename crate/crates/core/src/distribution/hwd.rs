use std::collections::BTreeMap;

use crate::data_model::{DatasetManifest, FeatureMatrix};
use crate::error::{HtgError, Result};

/// Feature vectors grouped by writer label.
#[derive(Debug, Clone, PartialEq)]
pub struct WriterFeatureTable {
    writers: BTreeMap<u32, Vec<Vec<f64>>>,
    dim: usize,
}

impl WriterFeatureTable {
    pub fn new(writers: BTreeMap<u32, Vec<Vec<f64>>>) -> Result<Self> {
        let dim = writers
            .values()
            .flat_map(|v| v.first())
            .map(Vec::len)
            .next()
            .ok_or_else(|| HtgError::ShapeError("writer table is empty".into()))?;
        for (w, vecs) in &writers {
            if vecs.is_empty() {
                return Err(HtgError::ShapeError(format!(
                    "writer {w} has no feature vectors"
                )));
            }
            if vecs.iter().any(|v| v.len() != dim) {
                return Err(HtgError::ShapeError(format!(
                    "writer {w} has vectors of the wrong dimension"
                )));
            }
        }
        Ok(WriterFeatureTable { writers, dim })
    }

    /// Groups the rows of `features` by the writer label that `manifest`
    /// assigns to each row id.
    pub fn from_features(features: &FeatureMatrix, manifest: &DatasetManifest) -> Result<Self> {
        let mut writers: BTreeMap<u32, Vec<Vec<f64>>> = BTreeMap::new();
        for (id, row) in features.ids().iter().zip(features.rows()) {
            let entry = manifest.get(id).ok_or_else(|| {
                HtgError::AlignmentError(format!(
                    "feature id `{id}` is not in manifest `{}`",
                    manifest.split_name()
                ))
            })?;
            writers
                .entry(entry.writer_id)
                .or_default()
                .push(row.to_vec());
        }
        WriterFeatureTable::new(writers)
    }

    pub fn writers(&self) -> impl Iterator<Item = u32> + '_ {
        self.writers.keys().copied()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Per-writer arithmetic mean of the feature vectors.
    pub fn writer_means(&self) -> BTreeMap<u32, Vec<f64>> {
        self.writers
            .iter()
            .map(|(&w, vecs)| {
                let mut mean = vec![0.0; self.dim];
                for v in vecs {
                    for (m, x) in mean.iter_mut().zip(v) {
                        *m += x;
                    }
                }
                mean.iter_mut().for_each(|m| *m /= vecs.len() as f64);
                (w, mean)
            })
            .collect()
    }
}

/// Mean over writers of the Euclidean distance between the writer's mean
/// real feature vector and mean generated feature vector.
pub fn hwd(real: &WriterFeatureTable, generated: &WriterFeatureTable) -> Result<f64> {
    let (rk, gk): (Vec<u32>, Vec<u32>) = (real.writers().collect(), generated.writers().collect());
    if rk != gk {
        let only_real: Vec<_> = rk.iter().filter(|w| !gk.contains(w)).collect();
        let only_gen: Vec<_> = gk.iter().filter(|w| !rk.contains(w)).collect();
        return Err(HtgError::WriterMismatch(format!(
            "only in real: {only_real:?}, only in generated: {only_gen:?}"
        )));
    }
    if real.dim() != generated.dim() {
        return Err(HtgError::ShapeError(format!(
            "feature dimensions differ: {} vs {}",
            real.dim(),
            generated.dim()
        )));
    }
    let (rm, gm) = (real.writer_means(), generated.writer_means());
    let total: f64 = rm
        .values()
        .zip(gm.values())
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        })
        .sum();
    Ok(total / rm.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(entries: Vec<(u32, Vec<Vec<f64>>)>) -> WriterFeatureTable {
        WriterFeatureTable::new(entries.into_iter().collect()).unwrap()
    }

    #[test]
    fn identity() {
        let t = table(vec![
            (0, vec![vec![1.0, 2.0], vec![3.0, 5.0]]),
            (4, vec![vec![0.0, 0.0]]),
        ]);
        assert_eq!(hwd(&t, &t).unwrap(), 0.0);
    }

    #[test]
    fn single_writer_offset() {
        let a = table(vec![(1, vec![vec![0.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]])]);
        let b = table(vec![(1, vec![vec![4.0, 0.0, 0.0]])]);
        assert!((hwd(&a, &b).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn mean_over_writers() {
        let a = table(vec![(0, vec![vec![0.0, 0.0]]), (1, vec![vec![0.0, 0.0]])]);
        let b = table(vec![(0, vec![vec![1.0, 0.0]]), (1, vec![vec![0.0, 3.0]])]);
        assert!((hwd(&a, &b).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn writer_mismatch() {
        let a = table(vec![(0, vec![vec![0.0]])]);
        let b = table(vec![(1, vec![vec![0.0]])]);
        assert_eq!(hwd(&a, &b).unwrap_err().kind(), "WriterMismatch");
    }

    #[test]
    fn invalid_tables() {
        assert!(WriterFeatureTable::new(BTreeMap::new()).is_err());
        assert!(WriterFeatureTable::new([(0, vec![vec![1.0], vec![1.0, 2.0]])].into()).is_err());
        assert!(WriterFeatureTable::new([(0, vec![vec![1.0]]), (1, vec![])].into()).is_err());
    }
}
