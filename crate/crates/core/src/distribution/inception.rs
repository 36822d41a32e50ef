use crate::data_model::LogitMatrix;
use crate::error::{HtgError, Result};
use crate::pixel::MeanStd;

fn softmax(row: &[f64]) -> Vec<f64> {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = row.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// exp of the mean KL divergence between each row and the rows' marginal,
/// with 0·log 0 = 0.
fn split_score(rows: &[Vec<f64>]) -> f64 {
    let k = rows[0].len();
    let n = rows.len() as f64;
    let mut marginal = vec![0.0; k];
    for r in rows {
        for (m, p) in marginal.iter_mut().zip(r) {
            *m += p;
        }
    }
    marginal.iter_mut().for_each(|m| *m /= n);
    let mean_kl = rows
        .iter()
        .map(|r| {
            r.iter()
                .zip(&marginal)
                .filter(|(&p, _)| p > 0.0)
                .map(|(&p, &q)| p * (p.ln() - q.ln()))
                .sum::<f64>()
        })
        .sum::<f64>()
        / n;
    mean_kl.exp()
}

/// Inception Score over `n_splits` contiguous row blocks. Raw logits are
/// softmaxed first. Returns the mean and population standard deviation over
/// splits.
pub fn inception_score(l: &LogitMatrix, n_splits: usize) -> Result<MeanStd> {
    if n_splits == 0 {
        return Err(HtgError::InvalidArgument("n_splits must be >= 1".into()));
    }
    if l.n() < n_splits {
        return Err(HtgError::InsufficientSamples {
            needed: n_splits,
            got: l.n(),
        });
    }
    let probs: Vec<Vec<f64>> = (0..l.n())
        .map(|i| {
            if l.is_probability() {
                l.row(i).to_vec()
            } else {
                softmax(l.row(i))
            }
        })
        .collect();
    let n = probs.len();
    let scores: Vec<f64> = (0..n_splits)
        .map(|s| split_score(&probs[s * n / n_splits..(s + 1) * n / n_splits]))
        .collect();
    Ok(MeanStd::of(&scores).expect("n_splits >= 1"))
}
