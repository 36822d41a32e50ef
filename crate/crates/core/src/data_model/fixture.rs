//! Deterministic synthetic datasets for desk-scale runs.
//!
//! Word images are drawn from integer stroke templates with per-writer
//! slant, stroke width, glyph width and ink level, so a fixed seed yields the
//! same bytes on every platform. Features are 4×4 grid ink densities.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::features::FeatureMatrix;
use super::htgf::save_feature_matrix;
use super::image::{save_image, GrayImage};
use super::manifest::{DatasetManifest, SampleEntry};
use super::records::{
    save_style_predictions, save_transcriptions, StylePredictionRecord, TranscriptionRecord,
};
use crate::digest::file_sha256;
use crate::error::{HtgError, Result};

pub const FIXTURE_WIDTH: usize = 64;
pub const FIXTURE_HEIGHT: usize = 32;
pub const FEATURE_GRID: usize = 4;

const WORDS: &[&str] = &[
    "the", "of", "and", "to", "a", "in", "that", "is", "was", "he", "for", "it", "with", "as",
    "his", "on", "be", "at", "by", "had", "not", "are", "but", "from", "or", "have", "an", "they",
    "which", "one", "you", "were", "her", "all", "she", "there", "would", "their", "we", "him",
    "been", "has", "when", "who", "will", "more", "no", "if", "out", "so", "said", "what", "up",
    "its", "about", "into", "than", "them", "can", "only", "other", "new", "some", "could", "time",
    "these", "two", "may", "then", "do", "first", "any", "my", "now", "such", "like", "our",
    "over", "man", "me", "even", "most", "made", "after", "also", "did", "many", "before", "must",
    "through", "back", "years", "where", "much", "your", "way", "well", "down", "should",
    "because", "each", "just", "those", "people", "Mr", "how", "too", "little", "state", "good",
    "very", "make", "world", "still", "own", "see", "men", "work", "long", "get", "here",
    "between", "both", "life", "being", "under", "never", "day", "same", "another", "know",
    "while", "last", "might", "us", "great", "old", "year", "off", "come",
];

const ALPHABET: &[char] = &[
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r', 's',
    't', 'u', 'v', 'w', 'x', 'y', 'z',
];

#[derive(Debug, Clone)]
pub struct FixtureConfig {
    pub n_writers: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Per-character substitution probability of the simulated recognizer.
    pub char_error_rate: f64,
    /// Probability that the simulated writer classifier is right.
    pub style_accuracy: f64,
}

impl FixtureConfig {
    pub fn new(n_writers: usize, n_samples: usize, seed: u64) -> Self {
        FixtureConfig {
            n_writers,
            n_samples,
            seed,
            char_error_rate: 0.05,
            style_accuracy: 0.8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub manifest: DatasetManifest,
    pub images: Vec<GrayImage>,
    pub features: FeatureMatrix,
    pub transcriptions: Vec<TranscriptionRecord>,
    pub style_predictions: Vec<StylePredictionRecord>,
}

#[derive(Debug, Clone, Copy)]
struct WriterStyle {
    slant: i32,
    thickness: i32,
    glyph_width: i32,
    ink: u8,
}

impl WriterStyle {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        WriterStyle {
            slant: rng.random_range(-4i32..=4),
            thickness: rng.random_range(1i32..=2),
            glyph_width: rng.random_range(5i32..=8),
            ink: rng.random_range(0u8..=90),
        }
    }
}

pub fn generate_fixture_dataset(n_writers: usize, n_samples: usize, seed: u64) -> Result<Fixture> {
    generate_fixture(&FixtureConfig::new(n_writers, n_samples, seed))
}

pub fn generate_fixture(cfg: &FixtureConfig) -> Result<Fixture> {
    if cfg.n_writers < 2 || cfg.n_samples < cfg.n_writers {
        return Err(HtgError::InvalidArgument(format!(
            "fixture needs n_writers >= 2 and n_samples >= n_writers, got {} and {}",
            cfg.n_writers, cfg.n_samples
        )));
    }
    for (name, p) in [
        ("char_error_rate", cfg.char_error_rate),
        ("style_accuracy", cfg.style_accuracy),
    ] {
        if !(0.0..=1.0).contains(&p) {
            return Err(HtgError::InvalidArgument(format!(
                "{name} must lie in [0, 1], got {p}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let styles: Vec<WriterStyle> = (0..cfg.n_writers)
        .map(|_| WriterStyle::draw(&mut rng))
        .collect();

    let mut samples = Vec::with_capacity(cfg.n_samples);
    let mut images = Vec::with_capacity(cfg.n_samples);
    let mut feature_data = Vec::with_capacity(cfg.n_samples * FEATURE_GRID * FEATURE_GRID);
    let mut transcriptions = Vec::with_capacity(cfg.n_samples);
    let mut style_predictions = Vec::with_capacity(cfg.n_samples);
    for i in 0..cfg.n_samples {
        let writer = i % cfg.n_writers;
        let word = WORDS[rng.random_range(0..WORDS.len() as u32) as usize];
        let id = format!("w{writer:03}-{i:05}");
        let jitter = (rng.random_range(0i32..4), rng.random_range(0i32..4));
        let image = render_word(word, &styles[writer], jitter);
        feature_data.extend(grid_descriptor(&image));
        images.push(image);

        let mut entry = SampleEntry::new(id.clone(), word, writer as u32);
        entry.image_path = Some(format!("images/{id}.png"));
        samples.push(entry);

        let hypothesis = perturb(word, cfg.char_error_rate, &mut rng);
        transcriptions.push(TranscriptionRecord::new(id.clone(), word, hypothesis));

        let predicted = if rng.random::<f64>() < cfg.style_accuracy {
            writer
        } else {
            let other = rng.random_range(0..(cfg.n_writers - 1) as u32) as usize;
            if other >= writer {
                other + 1
            } else {
                other
            }
        };
        style_predictions.push(StylePredictionRecord::new(
            id,
            writer as u32,
            predicted as u32,
        ));
    }
    let ids = samples.iter().map(|s| s.sample_id.clone()).collect();
    Ok(Fixture {
        manifest: DatasetManifest::new("fixture", samples)?,
        images,
        features: FeatureMatrix::new(ids, feature_data, FEATURE_GRID * FEATURE_GRID)?,
        transcriptions,
        style_predictions,
    })
}

/// Substitutes each character independently with probability `rate`; the
/// replacement always differs from the original.
pub fn perturb(word: &str, rate: f64, rng: &mut impl Rng) -> String {
    word.chars()
        .map(|c| {
            if rate > 0.0 && rng.random::<f64>() < rate {
                substitute(c, rng)
            } else {
                c
            }
        })
        .collect()
}

fn substitute(c: char, rng: &mut impl Rng) -> char {
    loop {
        let r = ALPHABET[rng.random_range(0..ALPHABET.len() as u32) as usize];
        if r != c {
            return r;
        }
    }
}

/// `n` transcription records of which exactly `round(n * clean_fraction)`
/// have a hypothesis equal to the reference; the rest carry at least one
/// substitution. Clean records are placed at seeded random positions.
pub fn transcription_fixture(n: usize, clean_fraction: f64, seed: u64) -> Vec<TranscriptionRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_clean = (n as f64 * clean_fraction).round() as usize;
    let mut clean = vec![false; n];
    clean[..n_clean.min(n)].iter_mut().for_each(|c| *c = true);
    clean.shuffle(&mut rng);
    clean
        .into_iter()
        .enumerate()
        .map(|(i, is_clean)| {
            let word = WORDS[rng.random_range(0..WORDS.len() as u32) as usize];
            let hypothesis = if is_clean {
                word.to_string()
            } else {
                let mut chars: Vec<char> = word.chars().collect();
                let k = rng.random_range(0..chars.len() as u32) as usize;
                chars[k] = substitute(chars[k], &mut rng);
                chars.into_iter().collect()
            };
            TranscriptionRecord::new(format!("r{i:06}"), word, hypothesis)
        })
        .collect()
}

fn glyph_strokes(c: char, width: i32, height: i32) -> [(i32, i32, i32, i32); 3] {
    let mut h = (c as u32).wrapping_mul(2_654_435_761) ^ 0x9e37_79b9;
    let mut next = |m: i32| {
        h ^= h << 13;
        h ^= h >> 17;
        h ^= h << 5;
        (h % m as u32) as i32
    };
    let mut strokes = [(0, 0, 0, 0); 3];
    for s in &mut strokes {
        *s = (next(width), next(height), next(width), next(height));
    }
    strokes
}

fn render_word(word: &str, style: &WriterStyle, jitter: (i32, i32)) -> GrayImage {
    let (w, h) = (FIXTURE_WIDTH as i32, FIXTURE_HEIGHT as i32);
    let mut canvas = vec![255u8; FIXTURE_WIDTH * FIXTURE_HEIGHT];
    let glyph_h = 16;
    let top = 8 + jitter.1;
    let mut plot = |x: i32, y: i32| {
        for t in 0..style.thickness {
            let px = x + t;
            if (0..w).contains(&px) && (0..h).contains(&y) {
                canvas[(y * w + px) as usize] = style.ink;
            }
        }
    };
    for (k, c) in word.chars().enumerate() {
        let left = 2 + jitter.0 + k as i32 * (style.glyph_width + 1);
        for (x0, y0, x1, y1) in glyph_strokes(c, style.glyph_width, glyph_h) {
            // slant shifts rows near the top of the glyph box sideways
            let shear = |x: i32, y: i32| left + x + style.slant * (glyph_h - y) / glyph_h;
            line(shear(x0, y0), top + y0, shear(x1, y1), top + y1, &mut plot);
        }
    }
    GrayImage::from_u8(FIXTURE_WIDTH, FIXTURE_HEIGHT, &canvas).expect("fixture canvas is valid")
}

fn line(mut x0: i32, mut y0: i32, x1: i32, y1: i32, plot: &mut impl FnMut(i32, i32)) {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        plot(x0, y0);
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// Mean ink density (0 = white, 1 = black) over a 4×4 grid of cells.
pub fn grid_descriptor(image: &GrayImage) -> Vec<f64> {
    let cw = image.width() / FEATURE_GRID;
    let ch = image.height() / FEATURE_GRID;
    let max = image.max_intensity();
    let mut out = Vec::with_capacity(FEATURE_GRID * FEATURE_GRID);
    for gy in 0..FEATURE_GRID {
        for gx in 0..FEATURE_GRID {
            let mut ink = 0.0;
            for y in gy * ch..(gy + 1) * ch {
                for x in gx * cw..(gx + 1) * cw {
                    ink += (max - image.get(x, y)) / max;
                }
            }
            out.push(ink / (cw * ch) as f64);
        }
    }
    out
}

impl Fixture {
    /// Writes `manifest.jsonl`, `images/*.png`, `features.htgf`,
    /// `transcriptions.jsonl` and `style.jsonl` under `dir` and returns each
    /// file's SHA-256 digest, paths relative to `dir`, in a fixed order.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
        let dir = dir.as_ref();
        let images_dir = dir.join("images");
        fs::create_dir_all(&images_dir).map_err(|e| HtgError::io(&images_dir, e))?;
        let mut written: Vec<PathBuf> = Vec::new();
        let mut put = |rel: String| {
            written.push(PathBuf::from(&rel));
            dir.join(rel)
        };
        self.manifest.save(put("manifest.jsonl".into()))?;
        for (entry, image) in self.manifest.samples().iter().zip(&self.images) {
            let rel = entry
                .image_path
                .clone()
                .expect("fixture entries carry image paths");
            save_image(put(rel), image)?;
        }
        save_feature_matrix(put("features.htgf".into()), &self.features)?;
        save_transcriptions(put("transcriptions.jsonl".into()), &self.transcriptions)?;
        save_style_predictions(put("style.jsonl".into()), &self.style_predictions)?;
        written
            .into_iter()
            .map(|rel| {
                Ok((
                    rel.to_string_lossy().into_owned(),
                    file_sha256(dir.join(&rel))?,
                ))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_contract() {
        let f = generate_fixture_dataset(5, 50, 0).unwrap();
        assert_eq!(f.manifest.len(), 50);
        assert_eq!(f.manifest.writers().len(), 5);
        assert_eq!(f.images.len(), 50);
        assert_eq!(f.features.n(), 50);
        assert_eq!(f.features.dim(), 16);
        assert_eq!(
            f.features.ids(),
            f.manifest.ids().collect::<Vec<_>>().as_slice()
        );
    }

    #[test]
    fn deterministic() {
        let a = generate_fixture_dataset(3, 30, 7).unwrap();
        let b = generate_fixture_dataset(3, 30, 7).unwrap();
        assert_eq!(a.images, b.images);
        assert_eq!(a.features, b.features);
        assert_eq!(a.transcriptions, b.transcriptions);
        assert_eq!(a.style_predictions, b.style_predictions);
        let c = generate_fixture_dataset(3, 30, 8).unwrap();
        assert_ne!(a.features, c.features);
    }

    #[test]
    fn zero_error_rate_is_clean() {
        let mut cfg = FixtureConfig::new(2, 40, 1);
        cfg.char_error_rate = 0.0;
        cfg.style_accuracy = 1.0;
        let f = generate_fixture(&cfg).unwrap();
        assert!(f.transcriptions.iter().all(|r| r.reference == r.hypothesis));
        assert!(f.style_predictions.iter().all(|r| r.is_correct()));
    }

    #[test]
    fn preconditions() {
        assert!(generate_fixture_dataset(1, 10, 0).is_err());
        assert!(generate_fixture_dataset(5, 4, 0).is_err());
    }

    #[test]
    fn images_have_ink() {
        let f = generate_fixture_dataset(2, 4, 0).unwrap();
        for img in &f.images {
            assert!(img.pixels().iter().any(|&p| p < 255.0));
        }
    }

    #[test]
    fn exact_clean_split() {
        let recs = transcription_fixture(1000, 0.73, 4);
        let clean = recs.iter().filter(|r| r.reference == r.hypothesis).count();
        assert_eq!(clean, 730);
    }
}
