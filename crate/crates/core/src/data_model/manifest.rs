use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::lexicon::nfc;
use crate::error::{HtgError, Result};

/// In-vocabulary tag of a manifest entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum VocabTag {
    Iv,
    Oov,
    #[default]
    Unset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleEntry {
    pub sample_id: String,
    pub image_path: Option<String>,
    pub transcript: String,
    pub writer_id: u32,
    pub vocab_tag: VocabTag,
}

impl SampleEntry {
    pub fn new(
        sample_id: impl Into<String>,
        transcript: impl Into<String>,
        writer_id: u32,
    ) -> Self {
        SampleEntry {
            sample_id: sample_id.into(),
            image_path: None,
            transcript: transcript.into(),
            writer_id,
            vocab_tag: VocabTag::Unset,
        }
    }
}

/// One line of the JSON Lines manifest. Every field is optional here so that
/// a missing field can be reported as a schema error with its line number.
#[derive(Debug, Deserialize, Serialize)]
struct ManifestLine {
    sample_id: Option<String>,
    image_path: Option<String>,
    transcript: Option<String>,
    writer_id: Option<i64>,
    vocab_tag: Option<String>,
}

/// A validated split description: unique sample ids, non-empty transcripts,
/// plus the cached set of distinct (NFC-normalized) transcripts.
#[derive(Debug, Clone)]
pub struct DatasetManifest {
    split_name: String,
    samples: Vec<SampleEntry>,
    index: HashMap<String, usize>,
    lexicon: BTreeSet<String>,
}

impl DatasetManifest {
    pub fn new(split_name: impl Into<String>, samples: Vec<SampleEntry>) -> Result<Self> {
        let mut index = HashMap::with_capacity(samples.len());
        let mut lexicon = BTreeSet::new();
        for (i, s) in samples.iter().enumerate() {
            if s.sample_id.is_empty() {
                return Err(HtgError::SchemaError(format!(
                    "entry {i} has an empty sample_id"
                )));
            }
            if s.transcript.is_empty() {
                return Err(HtgError::SchemaError(format!(
                    "sample `{}` has an empty transcript",
                    s.sample_id
                )));
            }
            if index.insert(s.sample_id.clone(), i).is_some() {
                return Err(HtgError::DuplicateId(s.sample_id.clone()));
            }
            lexicon.insert(nfc(&s.transcript));
        }
        Ok(DatasetManifest {
            split_name: split_name.into(),
            samples,
            index,
            lexicon,
        })
    }

    pub fn split_name(&self) -> &str {
        &self.split_name
    }

    pub fn samples(&self) -> &[SampleEntry] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn get(&self, sample_id: &str) -> Option<&SampleEntry> {
        self.index.get(sample_id).map(|&i| &self.samples[i])
    }

    pub fn contains(&self, sample_id: &str) -> bool {
        self.index.contains_key(sample_id)
    }

    /// Distinct NFC-normalized transcripts.
    pub fn lexicon(&self) -> &BTreeSet<String> {
        &self.lexicon
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.samples.iter().map(|s| s.sample_id.as_str())
    }

    /// Distinct writer labels in ascending order.
    pub fn writers(&self) -> BTreeSet<u32> {
        self.samples.iter().map(|s| s.writer_id).collect()
    }

    /// Tags every entry IV or OOV against `train_lexicon`.
    pub fn tag_vocabulary(&mut self, train_lexicon: &BTreeSet<String>) {
        let normalized: BTreeSet<String> = train_lexicon.iter().map(|w| nfc(w)).collect();
        for s in &mut self.samples {
            s.vocab_tag = if normalized.contains(&nfc(&s.transcript)) {
                VocabTag::Iv
            } else {
                VocabTag::Oov
            };
        }
    }

    /// New manifest restricted to `ids`, in the order given.
    pub fn subset<'a>(
        &self,
        split_name: impl Into<String>,
        ids: impl IntoIterator<Item = &'a str>,
    ) -> Result<DatasetManifest> {
        let samples = ids
            .into_iter()
            .map(|id| {
                self.get(id).cloned().ok_or_else(|| {
                    HtgError::SplitViolation(format!(
                        "`{id}` is not in split `{}`",
                        self.split_name
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        DatasetManifest::new(split_name, samples)
    }

    pub fn parse_jsonl(split_name: impl Into<String>, text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let raw: ManifestLine = serde_json::from_str(line)
                .map_err(|e| HtgError::SchemaError(format!("line {}: {e}", lineno + 1)))?;
            samples.push(raw.into_entry(lineno + 1)?);
        }
        DatasetManifest::new(split_name, samples)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for s in &self.samples {
            let line = ManifestLine {
                sample_id: Some(s.sample_id.clone()),
                image_path: s.image_path.clone(),
                transcript: Some(s.transcript.clone()),
                writer_id: Some(i64::from(s.writer_id)),
                vocab_tag: match s.vocab_tag {
                    VocabTag::Iv => Some("IV".into()),
                    VocabTag::Oov => Some("OOV".into()),
                    VocabTag::Unset => None,
                },
            };
            out.push_str(&serde_json::to_string(&line).expect("manifest lines serialize"));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = fs::File::create(path).map_err(|e| HtgError::io(path, e))?;
        f.write_all(self.to_jsonl().as_bytes())
            .map_err(|e| HtgError::io(path, e))
    }
}

impl ManifestLine {
    fn into_entry(self, lineno: usize) -> Result<SampleEntry> {
        let missing =
            |field: &str| HtgError::SchemaError(format!("line {lineno}: missing `{field}`"));
        let sample_id = self.sample_id.ok_or_else(|| missing("sample_id"))?;
        let transcript = self.transcript.ok_or_else(|| missing("transcript"))?;
        let writer_id = self.writer_id.ok_or_else(|| missing("writer_id"))?;
        let writer_id = u32::try_from(writer_id).map_err(|_| {
            HtgError::SchemaError(format!(
                "line {lineno}: writer_id {writer_id} is not a non-negative label"
            ))
        })?;
        let vocab_tag = match self.vocab_tag.as_deref() {
            None => VocabTag::Unset,
            Some("IV") => VocabTag::Iv,
            Some("OOV") => VocabTag::Oov,
            Some(other) => {
                return Err(HtgError::SchemaError(format!(
                    "line {lineno}: vocab_tag must be \"IV\", \"OOV\" or null, got {other:?}"
                )))
            }
        };
        Ok(SampleEntry {
            sample_id,
            image_path: self.image_path,
            transcript,
            writer_id,
            vocab_tag,
        })
    }
}

/// Reads a JSON Lines manifest; the split name is the file stem.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HtgError::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    DatasetManifest::parse_jsonl(name, &text)
}
