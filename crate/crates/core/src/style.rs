//! Writer-style accuracy and the HTG_style metric.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::data_model::StylePredictionRecord;
use crate::error::{HtgError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfusionCell {
    pub true_label: u32,
    pub predicted_label: u32,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WriterAccuracy {
    pub n_records: usize,
    pub n_correct: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StyleReport {
    pub accuracy: f64,
    pub n_records: usize,
    pub n_correct: usize,
    pub per_writer: BTreeMap<u32, WriterAccuracy>,
    /// Non-zero cells, ordered by (true, predicted).
    pub confusion: Vec<ConfusionCell>,
    /// Predictions naming a writer outside the known set; always errors.
    pub unknown_predictions: usize,
}

/// Exact-match accuracy. Known writers are the true labels present in
/// `records`.
pub fn style_accuracy(records: &[StylePredictionRecord]) -> Result<StyleReport> {
    let known: BTreeSet<u32> = records.iter().map(|r| r.true_label).collect();
    style_accuracy_with_writers(records, &known)
}

/// As [`style_accuracy`], with an explicit set of writers the classifier
/// was trained on.
pub fn style_accuracy_with_writers(
    records: &[StylePredictionRecord],
    known_writers: &BTreeSet<u32>,
) -> Result<StyleReport> {
    if records.is_empty() {
        return Err(HtgError::NoRecords);
    }
    let mut cells: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    let mut unknown_predictions = 0;
    for r in records {
        *cells.entry((r.true_label, r.predicted_label)).or_default() += 1;
        if !known_writers.contains(&r.predicted_label) {
            unknown_predictions += 1;
        }
    }
    let mut per_writer: BTreeMap<u32, WriterAccuracy> = BTreeMap::new();
    for (&(t, p), &count) in &cells {
        let w = per_writer.entry(t).or_insert(WriterAccuracy {
            n_records: 0,
            n_correct: 0,
            accuracy: 0.0,
        });
        w.n_records += count;
        if t == p {
            w.n_correct += count;
        }
    }
    for w in per_writer.values_mut() {
        w.accuracy = w.n_correct as f64 / w.n_records as f64;
    }
    let n_correct = per_writer.values().map(|w| w.n_correct).sum::<usize>();
    Ok(StyleReport {
        accuracy: n_correct as f64 / records.len() as f64,
        n_records: records.len(),
        n_correct,
        per_writer,
        confusion: cells
            .into_iter()
            .map(|((true_label, predicted_label), count)| ConfusionCell {
                true_label,
                predicted_label,
                count,
            })
            .collect(),
        unknown_predictions,
    })
}

/// Percent writer-classification accuracy on generated samples. Every
/// record must belong to the evaluation split.
pub fn htg_style<'a>(
    records: &[StylePredictionRecord],
    eval_ids: impl IntoIterator<Item = &'a str>,
) -> Result<f64> {
    Ok(100.0 * htg_style_report(records, eval_ids)?.accuracy)
}

pub fn htg_style_report<'a>(
    records: &[StylePredictionRecord],
    eval_ids: impl IntoIterator<Item = &'a str>,
) -> Result<StyleReport> {
    let eval: std::collections::HashSet<&str> = eval_ids.into_iter().collect();
    if let Some(r) = records
        .iter()
        .find(|r| !eval.contains(r.sample_id.as_str()))
    {
        return Err(HtgError::SplitViolation(format!(
            "record {} is not in the evaluation split",
            r.sample_id
        )));
    }
    style_accuracy(records)
}
