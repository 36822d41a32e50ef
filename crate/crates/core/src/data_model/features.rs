use std::collections::HashSet;

use crate::error::{HtgError, Result};

fn check_ids(ids: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if id.is_empty() || id.contains('\n') {
            return Err(HtgError::SchemaError(format!(
                "{what}: invalid sample id {id:?}"
            )));
        }
        if !seen.insert(id.as_str()) {
            return Err(HtgError::DuplicateId(id.clone()));
        }
    }
    Ok(())
}

fn check_finite(data: &[f64], what: &str) -> Result<()> {
    if data.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(HtgError::NonFiniteData(what.to_string()))
    }
}

/// N×D embedding matrix, row-major, one row per sample id.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    ids: Vec<String>,
    data: Vec<f64>,
    dim: usize,
}

impl FeatureMatrix {
    pub fn new(ids: Vec<String>, data: Vec<f64>, dim: usize) -> Result<Self> {
        if ids.is_empty() || dim == 0 {
            return Err(HtgError::ShapeError(format!(
                "feature matrix needs N >= 1 and D >= 1, got N={} D={dim}",
                ids.len()
            )));
        }
        if data.len() != ids.len() * dim {
            return Err(HtgError::AlignmentError(format!(
                "{} ids but payload holds {} values of dimension {dim}",
                ids.len(),
                data.len()
            )));
        }
        check_ids(&ids, "feature matrix")?;
        check_finite(&data, "feature matrix")?;
        Ok(FeatureMatrix { ids, data, dim })
    }

    /// Builds a matrix from rows, naming samples `0..N`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(HtgError::ShapeError("rows have different lengths".into()));
        }
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        FeatureMatrix::new(ids, rows.concat(), dim)
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    /// Rows at `indices`, keeping their ids.
    pub fn select(&self, indices: &[usize]) -> Result<FeatureMatrix> {
        let ids = indices.iter().map(|&i| self.ids[i].clone()).collect();
        let data = indices
            .iter()
            .flat_map(|&i| self.row(i).iter().copied())
            .collect();
        FeatureMatrix::new(ids, data, self.dim)
    }
}

/// N×K classifier outputs, either raw logits or probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct LogitMatrix {
    ids: Vec<String>,
    data: Vec<f64>,
    classes: usize,
    is_probability: bool,
}

impl LogitMatrix {
    pub fn new(
        ids: Vec<String>,
        data: Vec<f64>,
        classes: usize,
        is_probability: bool,
    ) -> Result<Self> {
        if ids.is_empty() || classes == 0 {
            return Err(HtgError::ShapeError(
                "logit matrix needs N >= 1 and K >= 1".into(),
            ));
        }
        if data.len() != ids.len() * classes {
            return Err(HtgError::AlignmentError(format!(
                "{} ids but payload holds {} values of width {classes}",
                ids.len(),
                data.len()
            )));
        }
        check_ids(&ids, "logit matrix")?;
        check_finite(&data, "logit matrix")?;
        if is_probability {
            for (i, row) in data.chunks_exact(classes).enumerate() {
                let sum: f64 = row.iter().sum();
                if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) || (sum - 1.0).abs() > 1e-6 {
                    return Err(HtgError::SchemaError(format!(
                        "row {i} is not a probability distribution (sum {sum})"
                    )));
                }
            }
        }
        Ok(LogitMatrix {
            ids,
            data,
            classes,
            is_probability,
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn is_probability(&self) -> bool {
        self.is_probability
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.classes..(i + 1) * self.classes]
    }
}

/// Feature maps of one network layer, shape N×C×H×W.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerFeatureMaps {
    pub name: String,
    pub weight: f64,
    ids: Vec<String>,
    shape: [usize; 4],
    data: Vec<f64>,
}

impl LayerFeatureMaps {
    pub fn new(
        name: impl Into<String>,
        weight: f64,
        ids: Vec<String>,
        shape: [usize; 4],
        data: Vec<f64>,
    ) -> Result<Self> {
        let name = name.into();
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(HtgError::SchemaError(format!(
                "layer `{name}` weight must be finite and non-negative, got {weight}"
            )));
        }
        if shape.contains(&0) {
            return Err(HtgError::ShapeError(format!(
                "layer `{name}` has an empty dimension {shape:?}"
            )));
        }
        if ids.len() != shape[0] {
            return Err(HtgError::AlignmentError(format!(
                "layer `{name}`: {} ids for {} maps",
                ids.len(),
                shape[0]
            )));
        }
        if data.len() != shape.iter().product::<usize>() {
            return Err(HtgError::AlignmentError(format!(
                "layer `{name}`: payload length {} does not match shape {shape:?}",
                data.len()
            )));
        }
        check_ids(&ids, &name)?;
        check_finite(&data, &name)?;
        Ok(LayerFeatureMaps {
            name,
            weight,
            ids,
            shape,
            data,
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// `[N, C, H, W]`
    pub fn shape(&self) -> [usize; 4] {
        self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// The C×H×W block of sample `i`.
    pub fn sample(&self, i: usize) -> &[f64] {
        let len = self.shape[1] * self.shape[2] * self.shape[3];
        &self.data[i * len..(i + 1) * len]
    }
}

/// All layers used by a perceptual distance; every layer covers the same ids.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerFeatureMapSet {
    layers: Vec<LayerFeatureMaps>,
}

impl LayerFeatureMapSet {
    pub fn new(layers: Vec<LayerFeatureMaps>) -> Result<Self> {
        let Some(first) = layers.first() else {
            return Err(HtgError::ShapeError("no layers".into()));
        };
        for l in &layers[1..] {
            if l.ids != first.ids {
                return Err(HtgError::AlignmentError(format!(
                    "layer `{}` ids differ from layer `{}`",
                    l.name, first.name
                )));
            }
        }
        Ok(LayerFeatureMapSet { layers })
    }

    pub fn layers(&self) -> &[LayerFeatureMaps] {
        &self.layers
    }

    pub fn n(&self) -> usize {
        self.layers[0].shape[0]
    }

    pub fn ids(&self) -> &[String] {
        &self.layers[0].ids
    }
}
