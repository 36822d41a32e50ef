use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::data_model::FeatureMatrix;
use crate::error::{HtgError, Result};

/// Default relative eigenvalue clamp used by [`matrix_sqrt_psd`].
pub const SQRT_CLAMP_EPS: f64 = 1e-10;

/// Negative FID values down to this magnitude are rounding noise and clamp to 0.
pub const FID_NEGATIVE_TOLERANCE: f64 = 1e-6;

/// Mean and covariance of a feature set.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSummary {
    mu: DVector<f64>,
    sigma: DMatrix<f64>,
    n: usize,
}

impl GaussianSummary {
    /// Validates that `sigma` is square, matches `mu`, is symmetric (1e-9,
    /// relative to its largest entry when that exceeds 1) and has no
    /// eigenvalue below -1e-8 (same scaling).
    pub fn new(mu: DVector<f64>, sigma: DMatrix<f64>, n: usize) -> Result<Self> {
        let d = mu.len();
        if d == 0 || sigma.nrows() != d || sigma.ncols() != d {
            return Err(HtgError::ShapeError(format!(
                "mean has length {d}, covariance is {}x{}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if mu.iter().chain(sigma.iter()).any(|v| !v.is_finite()) {
            return Err(HtgError::NonFiniteData("gaussian summary".into()));
        }
        let scale = sigma.amax().max(1.0);
        if asymmetry(&sigma) > 1e-9 * scale {
            return Err(HtgError::ShapeError("covariance is not symmetric".into()));
        }
        let eig = SymmetricEigen::new(symmetrize(&sigma));
        if eig.eigenvalues.iter().any(|&l| l < -1e-8 * scale) {
            return Err(HtgError::NumericalError(
                "covariance is not positive semi-definite".into(),
            ));
        }
        Ok(GaussianSummary { mu, sigma, n })
    }

    /// One-dimensional summary with mean `mu` and variance `var`.
    pub fn scalar(mu: f64, var: f64, n: usize) -> Result<Self> {
        GaussianSummary::new(
            DVector::from_element(1, mu),
            DMatrix::from_element(1, 1, var),
            n,
        )
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Column mean and unbiased (1/(N-1)) covariance, symmetrized as (S + Sᵀ)/2.
pub fn gaussian_summary(f: &FeatureMatrix) -> Result<GaussianSummary> {
    let (n, d) = (f.n(), f.dim());
    if n < 2 {
        return Err(HtgError::InsufficientSamples { needed: 2, got: n });
    }
    let x = DMatrix::from_row_slice(n, d, f.data());
    let mut mu = DVector::zeros(d);
    for row in f.rows() {
        for (m, v) in mu.iter_mut().zip(row) {
            *m += v;
        }
    }
    mu /= n as f64;
    let mut centered = x;
    for mut row in centered.row_iter_mut() {
        for (v, m) in row.iter_mut().zip(mu.iter()) {
            *v -= m;
        }
    }
    let sigma = symmetrize(&((centered.transpose() * &centered) / (n as f64 - 1.0)));
    Ok(GaussianSummary { mu, sigma, n })
}

/// Principal square root of a symmetric positive semi-definite matrix via
/// symmetric eigendecomposition. Eigenvalues below `clamp_eps` times the
/// largest eigenvalue (including every negative one) are set to zero.
pub fn matrix_sqrt_psd(m: &DMatrix<f64>, clamp_eps: f64) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(HtgError::ShapeError(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(HtgError::NonFiniteData("matrix square root input".into()));
    }
    if asymmetry(m) > 1e-6 * m.amax().max(1.0) {
        return Err(HtgError::ShapeError("matrix is not symmetric".into()));
    }
    let eig = SymmetricEigen::try_new(symmetrize(m), f64::EPSILON, 0)
        .ok_or_else(|| HtgError::NumericalError("eigendecomposition did not converge".into()))?;
    let largest = eig.eigenvalues.iter().copied().fold(0.0f64, f64::max);
    let floor = clamp_eps * largest;
    let roots = eig
        .eigenvalues
        .map(|l| if l > 0.0 && l >= floor { l.sqrt() } else { 0.0 });
    let v = &eig.eigenvectors;
    let s = v * DMatrix::from_diagonal(&roots) * v.transpose();
    Ok(symmetrize(&s))
}

/// Fréchet distance between two Gaussians:
/// ‖μR − μG‖² + Tr(ΣR + ΣG − 2 (ΣR^½ ΣG ΣR^½)^½).
pub fn fid(r: &GaussianSummary, g: &GaussianSummary) -> Result<f64> {
    if r.dim() != g.dim() {
        return Err(HtgError::ShapeError(format!(
            "feature dimensions differ: {} vs {}",
            r.dim(),
            g.dim()
        )));
    }
    let diff = &r.mu - &g.mu;
    let mean_term = diff.dot(&diff);
    let r_half = matrix_sqrt_psd(&r.sigma, SQRT_CLAMP_EPS)?;
    let product = symmetrize(&(&r_half * &g.sigma * &r_half));
    let cross = matrix_sqrt_psd(&product, SQRT_CLAMP_EPS)?.trace();
    let value = mean_term + r.sigma.trace() + g.sigma.trace() - 2.0 * cross;
    if value < -FID_NEGATIVE_TOLERANCE {
        return Err(HtgError::NumericalError(format!(
            "FID evaluated to {value}"
        )));
    }
    Ok(value.max(0.0))
}

/// FID between two feature sets.
pub fn fid_features(real: &FeatureMatrix, generated: &FeatureMatrix) -> Result<f64> {
    fid(&gaussian_summary(real)?, &gaussian_summary(generated)?)
}
