//! Nested training-set plans for measuring how recognition error changes
//! as more generated samples are added, and the resulting curves.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::data_model::DatasetManifest;
use crate::digest::file_sha256;
use crate::error::{HtgError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPlan {
    pub step: usize,
    pub seed: u64,
    /// Shuffled sample ids; subset k is the first `sizes[k]` of them.
    pub order: Vec<String>,
    pub sizes: Vec<usize>,
}

impl ScalingPlan {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn subset(&self, k: usize) -> &[String] {
        &self.order[..self.sizes[k]]
    }

    pub fn subsets(&self) -> impl Iterator<Item = &[String]> {
        (0..self.len()).map(|k| self.subset(k))
    }

    /// Writes `{prefix}_{size:06}.jsonl` per step into `dir` and returns
    /// (file name, sha256) pairs in step order.
    pub fn write(
        &self,
        manifest: &DatasetManifest,
        dir: impl AsRef<Path>,
        prefix: &str,
    ) -> Result<Vec<(String, String)>> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| HtgError::io(dir, e))?;
        let mut written = Vec::with_capacity(self.len());
        for (k, &size) in self.sizes.iter().enumerate() {
            let name = format!("{prefix}_{size:06}");
            let sub = manifest.subset(&name, self.subset(k).iter().map(String::as_str))?;
            let file = format!("{name}.jsonl");
            let path = dir.join(&file);
            sub.save(&path)?;
            written.push((file, file_sha256(&path)?));
        }
        Ok(written)
    }
}

/// Subset sizes step, 2·step, … with the last one clipped to `total`.
pub fn scaling_sizes(total: usize, step: usize) -> Result<Vec<usize>> {
    if step == 0 {
        return Err(HtgError::InvalidArgument("step must be >= 1".into()));
    }
    if total == 0 {
        return Err(HtgError::NoRecords);
    }
    let mut sizes: Vec<usize> = (1..).map(|k| k * step).take_while(|&s| s < total).collect();
    sizes.push(total);
    Ok(sizes)
}

/// Shuffles the manifest once with `seed` and takes nested prefixes.
pub fn scaling_subsets(manifest: &DatasetManifest, step: usize, seed: u64) -> Result<ScalingPlan> {
    let sizes = scaling_sizes(manifest.len(), step)?;
    let mut order: Vec<String> = manifest.ids().map(str::to_owned).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(ScalingPlan {
        step,
        seed,
        order,
        sizes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub size: usize,
    pub cer_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingCurve {
    pub points: Vec<CurvePoint>,
    /// Steps at which the error went up.
    pub increases: usize,
}

impl ScalingCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,cer_percent\n");
        for p in &self.points {
            out.push_str(&format!("{},{}\n", p.size, p.cer_percent));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serializes") + "\n"
    }
}

pub fn scaling_curve(steps: &[(usize, f64)]) -> Result<ScalingCurve> {
    if steps.is_empty() {
        return Err(HtgError::NoRecords);
    }
    for w in steps.windows(2) {
        if w[1].0 == w[0].0 {
            return Err(HtgError::SchemaError(format!("duplicate size {}", w[0].0)));
        }
        if w[1].0 < w[0].0 {
            return Err(HtgError::SchemaError(format!(
                "sizes not increasing: {} then {}",
                w[0].0, w[1].0
            )));
        }
    }
    if let Some(&(s, _)) = steps.iter().find(|(_, c)| !c.is_finite()) {
        return Err(HtgError::NonFiniteData(format!("CER at size {s}")));
    }
    Ok(ScalingCurve {
        points: steps
            .iter()
            .map(|&(size, cer_percent)| CurvePoint { size, cer_percent })
            .collect(),
        increases: steps.windows(2).filter(|w| w[1].1 > w[0].1).count(),
    })
}
