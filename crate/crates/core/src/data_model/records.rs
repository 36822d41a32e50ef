use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{HtgError, Result};

/// Reference transcription and recognizer output for one sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptionRecord {
    pub sample_id: String,
    pub reference: String,
    pub hypothesis: String,
}

impl TranscriptionRecord {
    pub fn new(
        sample_id: impl Into<String>,
        reference: impl Into<String>,
        hypothesis: impl Into<String>,
    ) -> Self {
        TranscriptionRecord {
            sample_id: sample_id.into(),
            reference: reference.into(),
            hypothesis: hypothesis.into(),
        }
    }
}

/// Writer-identification output for one sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StylePredictionRecord {
    pub sample_id: String,
    pub true_label: u32,
    pub predicted_label: u32,
}

impl StylePredictionRecord {
    pub fn new(sample_id: impl Into<String>, true_label: u32, predicted_label: u32) -> Self {
        StylePredictionRecord {
            sample_id: sample_id.into(),
            true_label,
            predicted_label,
        }
    }

    pub fn is_correct(&self) -> bool {
        self.true_label == self.predicted_label
    }
}

fn parse_jsonl<T: DeserializeOwned>(text: &str, what: &str) -> Result<Vec<T>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map_err(|e| HtgError::SchemaError(format!("{what} line {}: {e}", i + 1)))
        })
        .collect()
}

fn to_jsonl<T: Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("records serialize"));
        out.push('\n');
    }
    out
}

fn check_unique<'a>(ids: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(HtgError::DuplicateId(id.to_string()));
        }
    }
    Ok(())
}

pub fn parse_transcriptions(text: &str) -> Result<Vec<TranscriptionRecord>> {
    let records: Vec<TranscriptionRecord> = parse_jsonl(text, "transcription log")?;
    for r in &records {
        if r.reference.is_empty() {
            return Err(HtgError::EmptyReference(r.sample_id.clone()));
        }
    }
    check_unique(records.iter().map(|r| r.sample_id.as_str()))?;
    Ok(records)
}

pub fn transcriptions_to_jsonl(records: &[TranscriptionRecord]) -> String {
    to_jsonl(records)
}

pub fn load_transcriptions(path: impl AsRef<Path>) -> Result<Vec<TranscriptionRecord>> {
    let path = path.as_ref();
    parse_transcriptions(&fs::read_to_string(path).map_err(|e| HtgError::io(path, e))?)
}

pub fn save_transcriptions(path: impl AsRef<Path>, records: &[TranscriptionRecord]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, transcriptions_to_jsonl(records)).map_err(|e| HtgError::io(path, e))
}

pub fn parse_style_predictions(text: &str) -> Result<Vec<StylePredictionRecord>> {
    let records: Vec<StylePredictionRecord> = parse_jsonl(text, "style log")?;
    check_unique(records.iter().map(|r| r.sample_id.as_str()))?;
    Ok(records)
}

pub fn style_predictions_to_jsonl(records: &[StylePredictionRecord]) -> String {
    to_jsonl(records)
}

pub fn load_style_predictions(path: impl AsRef<Path>) -> Result<Vec<StylePredictionRecord>> {
    let path = path.as_ref();
    parse_style_predictions(&fs::read_to_string(path).map_err(|e| HtgError::io(path, e))?)
}

pub fn save_style_predictions(
    path: impl AsRef<Path>,
    records: &[StylePredictionRecord],
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, style_predictions_to_jsonl(records)).map_err(|e| HtgError::io(path, e))
}
