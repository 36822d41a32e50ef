use std::collections::BTreeSet;

use unicode_normalization::UnicodeNormalization;

use crate::error::{HtgError, Result};

/// Unicode NFC normal form. All word and transcript comparisons go through it.
pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Splits `candidates` into in-vocabulary and out-of-vocabulary words with
/// respect to `train_lexicon`, preserving input order. Comparison is exact
/// (case-sensitive) codepoint equality after NFC.
pub fn partition_lexicon(
    train_lexicon: &BTreeSet<String>,
    candidates: &[String],
) -> Result<(Vec<String>, Vec<String>)> {
    if train_lexicon.is_empty() {
        return Err(HtgError::InvalidArgument(
            "training lexicon is empty".into(),
        ));
    }
    let normalized: BTreeSet<String> = train_lexicon.iter().map(|w| nfc(w)).collect();
    let (iv, oov) = candidates
        .iter()
        .cloned()
        .partition(|w| normalized.contains(&nfc(w)));
    Ok((iv, oov))
}
