//! Evaluation toolkit for handwritten text generation.
//!
//! Pixel metrics (MSE, PSNR, SSIM), feature-distribution metrics (FID, KID,
//! Inception Score, LPIPS, HWD), the topological Geometry Score, and the
//! recognition- and style-driven metrics HTG_HTR, HTG_style and HTG_OOV,
//! together with the protocol tooling that produces comparable reports.
//!
//! Neural networks never run inside this crate: feature matrices, logits and
//! prediction logs are read from files (see [`data_model::htgf`]).

pub mod cli;
pub mod data_model;
pub mod digest;
pub mod distribution;
pub mod error;
pub mod geometry;
pub mod pixel;
pub mod protocol;
pub mod style;
pub mod text;

pub use error::{HtgError, Result};
