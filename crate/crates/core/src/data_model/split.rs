use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::manifest::DatasetManifest;
use crate::error::{HtgError, Result};

/// Train/eval partition of a manifest for the writer-style classifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StyleSplit {
    pub train_ids: Vec<String>,
    pub eval_ids: Vec<String>,
    /// Writers with a single sample; they are placed in train only.
    pub singleton_writers: Vec<u32>,
}

impl StyleSplit {
    pub fn eval_set(&self) -> BTreeSet<&str> {
        self.eval_ids.iter().map(String::as_str).collect()
    }
}

/// Per-writer stratified split: for each writer (ascending label) the writer's
/// samples are shuffled and the first `floor(train_fraction * n_w)` go to train.
pub fn make_style_split(
    manifest: &DatasetManifest,
    train_fraction: f64,
    seed: u64,
) -> Result<StyleSplit> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(HtgError::InvalidArgument(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut by_writer: BTreeMap<u32, Vec<&str>> = BTreeMap::new();
    for s in manifest.samples() {
        by_writer.entry(s.writer_id).or_default().push(&s.sample_id);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = StyleSplit {
        train_ids: Vec::new(),
        eval_ids: Vec::new(),
        singleton_writers: Vec::new(),
    };
    for (writer, mut ids) in by_writer {
        if ids.len() == 1 {
            split.singleton_writers.push(writer);
            split.train_ids.push(ids[0].to_string());
            continue;
        }
        ids.shuffle(&mut rng);
        // the epsilon absorbs products like 0.29 * 100 = 28.999999999999996
        let n_train = ((train_fraction * ids.len() as f64) + 1e-9).floor() as usize;
        let (train, eval) = ids.split_at(n_train);
        split.train_ids.extend(train.iter().map(|s| s.to_string()));
        split.eval_ids.extend(eval.iter().map(|s| s.to_string()));
    }
    Ok(split)
}

/// Reads a newline-separated id list (blank lines ignored).
pub fn load_id_list(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HtgError::io(path, e))?;
    Ok(parse_id_list(&text))
}

pub fn parse_id_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn write_id_list(path: impl AsRef<Path>, ids: &[String]) -> Result<()> {
    let path = path.as_ref();
    let mut text = ids.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| HtgError::io(path, e))
}

/// Rebuilds a split from a published eval-id file: every manifest id not in
/// the file goes to train.
pub fn split_from_eval_ids(manifest: &DatasetManifest, eval_ids: &[String]) -> Result<StyleSplit> {
    let eval: BTreeSet<&str> = eval_ids.iter().map(String::as_str).collect();
    for id in &eval {
        if !manifest.contains(id) {
            return Err(HtgError::SplitViolation(format!(
                "eval id `{id}` is not in manifest `{}`",
                manifest.split_name()
            )));
        }
    }
    let mut split = StyleSplit {
        train_ids: Vec::new(),
        eval_ids: Vec::new(),
        singleton_writers: Vec::new(),
    };
    for s in manifest.samples() {
        if eval.contains(s.sample_id.as_str()) {
            split.eval_ids.push(s.sample_id.clone());
        } else {
            split.train_ids.push(s.sample_id.clone());
        }
    }
    Ok(split)
}
