use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::data_model::FeatureMatrix;
use crate::error::{HtgError, Result};
use crate::pixel::MeanStd;

/// Polynomial kernel k(x, y) = (gamma · x·y + coef0)^degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSpec {
    pub degree: u32,
    /// `None` means 1/D.
    pub gamma: Option<f64>,
    pub coef0: f64,
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec {
            degree: 3,
            gamma: None,
            coef0: 1.0,
        }
    }
}

impl KernelSpec {
    fn validate(&self) -> Result<()> {
        if self.degree < 1 {
            return Err(HtgError::InvalidArgument(
                "kernel degree must be >= 1".into(),
            ));
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return Err(HtgError::InvalidArgument(format!(
                    "kernel gamma must be positive, got {g}"
                )));
            }
        }
        Ok(())
    }

    pub fn gamma_for(&self, dim: usize) -> f64 {
        self.gamma.unwrap_or(1.0 / dim as f64)
    }

    #[inline]
    fn eval(&self, gamma: f64, x: &[f64], y: &[f64]) -> f64 {
        let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        (gamma * dot + self.coef0).powi(self.degree as i32)
    }
}

/// Sum over ordered pairs i ≠ j of k(x_i, x_j) − offset. Per-row partial
/// sums are computed in parallel and added in row order.
fn within_sum(f: &FeatureMatrix, k: &KernelSpec, gamma: f64, offset: f64) -> f64 {
    let n = f.n();
    let partial: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = f.row(i);
            ((i + 1)..n)
                .map(|j| k.eval(gamma, xi, f.row(j)) - offset)
                .sum::<f64>()
        })
        .collect();
    2.0 * partial.iter().sum::<f64>()
}

fn cross_sum(a: &FeatureMatrix, b: &FeatureMatrix, k: &KernelSpec, gamma: f64, offset: f64) -> f64 {
    let partial: Vec<f64> = (0..a.n())
        .into_par_iter()
        .map(|i| {
            let xi = a.row(i);
            b.rows().map(|y| k.eval(gamma, xi, y) - offset).sum::<f64>()
        })
        .collect();
    partial.iter().sum()
}

/// Unbiased squared maximum mean discrepancy between two feature sets.
/// The estimate may be slightly negative and is returned as is.
///
/// Kernel values are summed relative to k(x_0, y_0); the offset cancels
/// between the three terms and makes identical constant sets score exactly 0.
pub fn kid(real: &FeatureMatrix, generated: &FeatureMatrix, k: &KernelSpec) -> Result<f64> {
    k.validate()?;
    if real.dim() != generated.dim() {
        return Err(HtgError::ShapeError(format!(
            "feature dimensions differ: {} vs {}",
            real.dim(),
            generated.dim()
        )));
    }
    let (m, n) = (real.n(), generated.n());
    if m < 2 || n < 2 {
        return Err(HtgError::InsufficientSamples {
            needed: 2,
            got: m.min(n),
        });
    }
    let gamma = k.gamma_for(real.dim());
    let (mf, nf) = (m as f64, n as f64);
    let offset = k.eval(gamma, real.row(0), generated.row(0));
    let xx = within_sum(real, k, gamma, offset) / (mf * (mf - 1.0));
    let yy = within_sum(generated, k, gamma, offset) / (nf * (nf - 1.0));
    let xy = cross_sum(real, generated, k, gamma, offset) / (mf * nf);
    Ok(xx + yy - 2.0 * xy)
}

/// Mean and standard deviation of [`kid`] over `n_subsets` random blocks of
/// `subset_size` rows drawn without replacement from each set. Block `s`
/// uses the generator seeded with `seed + s`.
pub fn kid_subsets(
    real: &FeatureMatrix,
    generated: &FeatureMatrix,
    k: &KernelSpec,
    n_subsets: usize,
    subset_size: usize,
    seed: u64,
) -> Result<MeanStd> {
    if n_subsets == 0 {
        return Err(HtgError::InvalidArgument("need at least one subset".into()));
    }
    let available = real.n().min(generated.n());
    if subset_size < 2 || subset_size > available {
        return Err(HtgError::InsufficientSamples {
            needed: subset_size.max(2),
            got: available,
        });
    }
    let values = (0..n_subsets)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s as u64));
            let ri = rand::seq::index::sample(&mut rng, real.n(), subset_size).into_vec();
            let gi = rand::seq::index::sample(&mut rng, generated.n(), subset_size).into_vec();
            kid(&real.select(&ri)?, &generated.select(&gi)?, k)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeanStd::of(&values).expect("at least one subset"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, d: usize) -> FeatureMatrix {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        FeatureMatrix::from_rows(&rows).unwrap()
    }

    fn oracle(x: &FeatureMatrix, y: &FeatureMatrix) -> f64 {
        let d = x.dim() as f64;
        let k = |a: &[f64], b: &[f64]| {
            let mut dot = 0.0;
            for t in 0..a.len() {
                dot += a[t] * b[t];
            }
            (dot / d + 1.0).powi(3)
        };
        let (m, n) = (x.n() as f64, y.n() as f64);
        let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
        for i in 0..x.n() {
            for j in 0..x.n() {
                if i != j {
                    sxx += k(x.row(i), x.row(j));
                }
            }
        }
        for i in 0..y.n() {
            for j in 0..y.n() {
                if i != j {
                    syy += k(y.row(i), y.row(j));
                }
            }
        }
        for i in 0..x.n() {
            for j in 0..y.n() {
                sxy += k(x.row(i), y.row(j));
            }
        }
        sxx / (m * (m - 1.0)) + syy / (n * (n - 1.0)) - 2.0 * sxy / (m * n)
    }

    #[test]
    fn constant_sets_give_zero() {
        let v = vec![0.3, -1.0, 2.0];
        let a = FeatureMatrix::from_rows(&vec![v.clone(); 4]).unwrap();
        let b = FeatureMatrix::from_rows(&vec![v; 7]).unwrap();
        assert_eq!(kid(&a, &b, &KernelSpec::default()).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_and_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_matrix(&mut rng, 20, 4);
        let b = random_matrix(&mut rng, 30, 4);
        let k = KernelSpec::default();
        let ab = kid(&a, &b, &k).unwrap();
        assert!((ab - kid(&b, &a, &k).unwrap()).abs() < 1e-12);
        assert!((ab - oracle(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 1, 3);
        let b = random_matrix(&mut rng, 5, 3);
        let c = random_matrix(&mut rng, 5, 2);
        assert_eq!(
            kid(&a, &b, &KernelSpec::default()).unwrap_err().kind(),
            "InsufficientSamples"
        );
        assert_eq!(
            kid(&b, &c, &KernelSpec::default()).unwrap_err().kind(),
            "ShapeError"
        );
        let bad = KernelSpec {
            degree: 0,
            ..KernelSpec::default()
        };
        assert!(kid(&b, &b, &bad).is_err());
    }

    #[test]
    fn subsets_are_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&mut rng, 40, 3);
        let b = random_matrix(&mut rng, 50, 3);
        let k = KernelSpec::default();
        let s1 = kid_subsets(&a, &b, &k, 5, 20, 0).unwrap();
        let s2 = kid_subsets(&a, &b, &k, 5, 20, 0).unwrap();
        assert_eq!(s1, s2);
        let full = kid_subsets(&a, &b, &k, 1, 40, 0).unwrap();
        assert!(full.std == 0.0);
        assert!(kid_subsets(&a, &b, &k, 2, 41, 0).is_err());
    }
}
