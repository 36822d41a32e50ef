//! Edit distances and the recognition-side metrics: CER, WER, HTG_HTR,
//! HTG_OOV and CER-based corpus filtering.
//!
//! Strings are compared as Unicode codepoints after NFC normalization,
//! case- and punctuation-sensitive.

use rayon::prelude::*;
use serde::Serialize;

use crate::data_model::{nfc, DatasetManifest, TranscriptionRecord, VocabTag};
use crate::digest::id_set_digest;
use crate::error::{HtgError, Result};

/// Decomposition of an alignment against the reference.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EditStats {
    pub substitutions: usize,
    pub insertions: usize,
    pub deletions: usize,
    pub reference_length: usize,
}

impl EditStats {
    pub fn distance(&self) -> usize {
        self.substitutions + self.insertions + self.deletions
    }

    /// Distance over reference length; `None` for an empty reference.
    pub fn rate(&self) -> Option<f64> {
        (self.reference_length > 0).then(|| self.distance() as f64 / self.reference_length as f64)
    }
}

/// Edit distance between token sequences, with `reference` as the
/// reference side. Among minimal alignments the decomposition prefers a
/// match, then a substitution, then an insertion, then a deletion, walking
/// back from the end of both sequences.
pub fn edit_stats<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> EditStats {
    let (n, m) = (reference.len(), hypothesis.len());
    let w = m + 1;
    let mut d = vec![0usize; (n + 1) * w];
    for j in 0..=m {
        d[j] = j;
    }
    for i in 1..=n {
        d[i * w] = i;
        for j in 1..=m {
            let cost = usize::from(reference[i - 1] != hypothesis[j - 1]);
            d[i * w + j] = (d[(i - 1) * w + j - 1] + cost)
                .min(d[i * w + j - 1] + 1)
                .min(d[(i - 1) * w + j] + 1);
        }
    }
    let mut stats = EditStats {
        reference_length: n,
        ..EditStats::default()
    };
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * w + j];
        if i > 0 && j > 0 {
            let diag = d[(i - 1) * w + j - 1];
            if reference[i - 1] == hypothesis[j - 1] && here == diag {
                i -= 1;
                j -= 1;
                continue;
            }
            if here == diag + 1 {
                stats.substitutions += 1;
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if j > 0 && here == d[i * w + j - 1] + 1 {
            stats.insertions += 1;
            j -= 1;
        } else {
            stats.deletions += 1;
            i -= 1;
        }
    }
    stats
}

fn codepoints(s: &str) -> Vec<char> {
    nfc(s).chars().collect()
}

fn words(s: &str) -> Vec<String> {
    nfc(s).split_whitespace().map(str::to_owned).collect()
}

/// Character-level edit distance and its decomposition against `a`.
pub fn levenshtein(a: &str, b: &str) -> (usize, EditStats) {
    let stats = edit_stats(&codepoints(a), &codepoints(b));
    (stats.distance(), stats)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    /// Edits summed over records before dividing by the summed reference length.
    #[default]
    Micro,
    /// Mean of per-record rates.
    Macro,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordEdit {
    pub sample_id: String,
    #[serde(flatten)]
    pub stats: EditStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CerReport {
    /// "char" or "word"
    pub unit: &'static str,
    pub micro_cer: f64,
    pub macro_cer: f64,
    pub n_records: usize,
    pub total_edits: usize,
    pub total_reference_length: usize,
    /// Digest of the evaluated sample-id set.
    pub split_digest: String,
    pub per_record: Vec<RecordEdit>,
}

impl CerReport {
    pub fn rate(&self, averaging: Averaging) -> f64 {
        match averaging {
            Averaging::Micro => self.micro_cer,
            Averaging::Macro => self.macro_cer,
        }
    }
}

fn error_report<T, F>(
    records: &[TranscriptionRecord],
    unit: &'static str,
    tokenize: F,
) -> Result<CerReport>
where
    T: PartialEq + Send,
    F: Fn(&str) -> Vec<T> + Sync,
{
    if records.is_empty() {
        return Err(HtgError::NoRecords);
    }
    let per_record = records
        .par_iter()
        .map(|r| {
            let reference = tokenize(&r.reference);
            if reference.is_empty() {
                return Err(HtgError::EmptyReference(r.sample_id.clone()));
            }
            Ok(RecordEdit {
                sample_id: r.sample_id.clone(),
                stats: edit_stats(&reference, &tokenize(&r.hypothesis)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total_edits: usize = per_record.iter().map(|r| r.stats.distance()).sum();
    let total_reference_length: usize = per_record.iter().map(|r| r.stats.reference_length).sum();
    let rate_sum: f64 = per_record
        .iter()
        .map(|r| r.stats.rate().expect("non-empty reference"))
        .sum();
    Ok(CerReport {
        unit,
        micro_cer: total_edits as f64 / total_reference_length as f64,
        macro_cer: rate_sum / per_record.len() as f64,
        n_records: per_record.len(),
        total_edits,
        total_reference_length,
        split_digest: id_set_digest(records.iter().map(|r| r.sample_id.as_str())),
        per_record,
    })
}

pub fn cer(records: &[TranscriptionRecord]) -> Result<CerReport> {
    error_report(records, "char", codepoints)
}

/// Word error rate; tokens are maximal runs of non-whitespace. For
/// single-word records this is the exact-match error.
pub fn wer(records: &[TranscriptionRecord]) -> Result<CerReport> {
    error_report(records, "word", words)
}

/// Percent CER of an HTR model trained on generated data, tested on the
/// real test split described by `test_split`.
pub fn htg_htr(records: &[TranscriptionRecord], test_split: &DatasetManifest) -> Result<f64> {
    if let Some(r) = records.iter().find(|r| !test_split.contains(&r.sample_id)) {
        return Err(HtgError::SplitViolation(format!(
            "record {} is not in split {}",
            r.sample_id,
            test_split.split_name()
        )));
    }
    Ok(100.0 * cer(records)?.micro_cer)
}

/// Percent CER restricted to out-of-vocabulary words. Every record must be
/// present in `manifest` and tagged OOV there.
pub fn htg_oov(records: &[TranscriptionRecord], manifest: &DatasetManifest) -> Result<f64> {
    for r in records {
        let entry = manifest.get(&r.sample_id).ok_or_else(|| {
            HtgError::SplitViolation(format!(
                "record {} is not in split {}",
                r.sample_id,
                manifest.split_name()
            ))
        })?;
        match entry.vocab_tag {
            VocabTag::Oov => {}
            VocabTag::Iv => {
                return Err(HtgError::VocabViolation(format!(
                    "record {} ({:?}) is in-vocabulary",
                    r.sample_id, entry.transcript
                )))
            }
            VocabTag::Unset => {
                return Err(HtgError::VocabViolation(format!(
                    "record {} has no vocabulary tag",
                    r.sample_id
                )))
            }
        }
    }
    Ok(100.0 * cer(records)?.micro_cer)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterSummary {
    pub threshold: f64,
    pub n_total: usize,
    pub n_kept: usize,
    pub n_dropped: usize,
    pub kept_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterResult {
    pub kept_ids: Vec<String>,
    pub dropped_ids: Vec<String>,
    pub summary: FilterSummary,
}

/// Keeps records whose own CER is at most `threshold`, in input order. At
/// threshold 0 a record is kept iff its hypothesis equals its reference.
pub fn filter_by_cer(records: &[TranscriptionRecord], threshold: f64) -> Result<FilterResult> {
    if threshold.is_nan() {
        return Err(HtgError::InvalidArgument("threshold is NaN".into()));
    }
    let rates = records
        .par_iter()
        .map(|r| {
            let (_, stats) = levenshtein(&r.reference, &r.hypothesis);
            stats
                .rate()
                .ok_or_else(|| HtgError::EmptyReference(r.sample_id.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut kept_ids, mut dropped_ids) = (Vec::new(), Vec::new());
    for (r, rate) in records.iter().zip(rates) {
        if rate <= threshold {
            kept_ids.push(r.sample_id.clone());
        } else {
            dropped_ids.push(r.sample_id.clone());
        }
    }
    let n_total = records.len();
    Ok(FilterResult {
        summary: FilterSummary {
            threshold,
            n_total,
            n_kept: kept_ids.len(),
            n_dropped: dropped_ids.len(),
            kept_fraction: if n_total == 0 {
                0.0
            } else {
                kept_ids.len() as f64 / n_total as f64
            },
        },
        kept_ids,
        dropped_ids,
    })
}

pub fn cer_conventions(averaging: Averaging) -> serde_json::Value {
    serde_json::json!({
        "averaging": averaging,
        "normalization": "NFC",
        "units": "unicode codepoints",
        "case_sensitive": true,
        "word_tokenization": "runs of whitespace",
    })
}
