use std::path::PathBuf;

use thiserror::Error;

/// Every failure the toolkit reports. Variants map 1:1 onto the error names
/// printed by the command line tool.
#[derive(Debug, Error)]
pub enum HtgError {
    #[error("duplicate sample id `{0}`")]
    DuplicateId(String),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("format error: {0}")]
    FormatError(String),
    #[error("non-finite value in {0}")]
    NonFiniteData(String),
    #[error("alignment error: {0}")]
    AlignmentError(String),
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("images are identical; PSNR is infinite")]
    IdenticalImages,
    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("numerical error: {0}")]
    NumericalError(String),
    #[error("writer sets differ: {0}")]
    WriterMismatch(String),
    #[error("empty reference transcription for sample `{0}`")]
    EmptyReference(String),
    #[error("no records")]
    NoRecords,
    #[error("split violation: {0}")]
    SplitViolation(String),
    #[error("vocabulary violation: {0}")]
    VocabViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HtgError {
    /// Stable name of the variant, used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            HtgError::DuplicateId(_) => "DuplicateId",
            HtgError::SchemaError(_) => "SchemaError",
            HtgError::FormatError(_) => "FormatError",
            HtgError::NonFiniteData(_) => "NonFiniteData",
            HtgError::AlignmentError(_) => "AlignmentError",
            HtgError::ShapeError(_) => "ShapeError",
            HtgError::IdenticalImages => "IdenticalImages",
            HtgError::InsufficientSamples { .. } => "InsufficientSamples",
            HtgError::NumericalError(_) => "NumericalError",
            HtgError::WriterMismatch(_) => "WriterMismatch",
            HtgError::EmptyReference(_) => "EmptyReference",
            HtgError::NoRecords => "NoRecords",
            HtgError::SplitViolation(_) => "SplitViolation",
            HtgError::VocabViolation(_) => "VocabViolation",
            HtgError::InvalidArgument(_) => "InvalidArgument",
            HtgError::Io { .. } => "IoError",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HtgError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, HtgError>;
