//! Feature-space metrics between real and generated sets.
//!
//! Everything here consumes precomputed features; no network runs in-process.

pub mod gaussian;
pub mod hwd;
pub mod inception;
pub mod kid;
pub mod lpips;

use serde_json::{json, Value};

pub use gaussian::{
    fid, fid_features, gaussian_summary, matrix_sqrt_psd, GaussianSummary, SQRT_CLAMP_EPS,
};
pub use hwd::{hwd, WriterFeatureTable};
pub use inception::inception_score;
pub use kid::{kid, kid_subsets, KernelSpec};
pub use lpips::lpips;

/// Conventions recorded alongside FID values.
pub fn fid_conventions() -> Value {
    json!({
        "covariance": "unbiased (1/(N-1)), symmetrized",
        "matrix_sqrt": "symmetric product sqrt(S_R^1/2 S_G S_R^1/2) via eigendecomposition",
        "eigenvalue_clamp_relative": SQRT_CLAMP_EPS,
    })
}

pub fn kid_conventions(k: &KernelSpec, dim: usize) -> Value {
    json!({
        "estimator": "unbiased MMD^2",
        "kernel": "polynomial",
        "degree": k.degree,
        "gamma": k.gamma_for(dim),
        "coef0": k.coef0,
    })
}

pub fn hwd_conventions() -> Value {
    json!({
        "writer_aggregation": "arithmetic mean feature vector",
        "distance": "euclidean, averaged over writers",
    })
}
