//! Writer split, HTG_style and the split check.

use htg_eval::data_model::generate_fixture_dataset;
use htg_eval::data_model::split::make_style_split;
use htg_eval::style::{htg_style, htg_style_report};

fn main() -> htg_eval::Result<()> {
    let fx = generate_fixture_dataset(5, 200, 0)?;
    let split = make_style_split(&fx.manifest, 0.7, 0)?;
    println!(
        "train {} / eval {}",
        split.train_ids.len(),
        split.eval_ids.len()
    );

    let eval = split.eval_set();
    let preds: Vec<_> = fx
        .style_predictions
        .iter()
        .filter(|p| eval.contains(p.sample_id.as_str()))
        .cloned()
        .collect();
    let report = htg_style_report(&preds, split.eval_ids.iter().map(String::as_str))?;
    println!("HTG_style = {:.2}%", 100.0 * report.accuracy);
    for (w, acc) in &report.per_writer {
        println!("  writer {w}: {}/{}", acc.n_correct, acc.n_records);
    }

    // predictions on training samples are rejected
    let err = htg_style(
        &fx.style_predictions,
        split.eval_ids.iter().map(String::as_str),
    )
    .unwrap_err();
    println!("all predictions: {}", err.kind());
    Ok(())
}
