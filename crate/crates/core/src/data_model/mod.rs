//! Domain types and file formats: manifests, feature/logit tensors, prediction
//! logs, images, and deterministic fixtures.

pub mod features;
pub mod fixture;
pub mod htgf;
pub mod image;
pub mod lexicon;
pub mod manifest;
pub mod records;
pub mod split;

pub use features::{FeatureMatrix, LayerFeatureMapSet, LayerFeatureMaps, LogitMatrix};
pub use fixture::{generate_fixture, generate_fixture_dataset, Fixture, FixtureConfig};
pub use htgf::{load_feature_matrix, load_layer_maps, load_logits, LayerSource};
pub use image::{load_image, GrayImage};
pub use lexicon::{nfc, partition_lexicon};
pub use manifest::{load_manifest, DatasetManifest, SampleEntry, VocabTag};
pub use records::{
    load_style_predictions, load_transcriptions, StylePredictionRecord, TranscriptionRecord,
};
pub use split::{make_style_split, StyleSplit};
