//! Inception Score from classifier outputs.

use htg_eval::data_model::LogitMatrix;
use htg_eval::distribution::inception_score;

fn main() -> htg_eval::Result<()> {
    let k = 10;
    let n = 1000;
    let ids: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();

    // confident and diverse: one-hot rows cycling through the classes
    let mut onehot = vec![0.0; n * k];
    for i in 0..n {
        onehot[i * k + i % k] = 1.0;
    }
    let confident = LogitMatrix::new(ids.clone(), onehot, k, true)?;
    let s = inception_score(&confident, 10)?;
    println!(
        "one-hot cycling: {:.4} ± {:.4} (upper bound {k})",
        s.mean, s.std
    );

    // raw logits: the score applies softmax first
    let logits: Vec<f64> = (0..n * k).map(|j| ((j * 37) % 11) as f64 * 0.3).collect();
    let raw = LogitMatrix::new(ids, logits, k, false)?;
    let s = inception_score(&raw, 10)?;
    println!("raw logits:      {:.4} ± {:.4}", s.mean, s.std);
    Ok(())
}
