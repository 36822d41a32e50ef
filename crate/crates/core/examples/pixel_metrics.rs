//! Pixel-level comparison of fixture word images.

use htg_eval::data_model::generate_fixture_dataset;
use htg_eval::pixel::{
    evaluate_pairs, mse, psnr, ssim_global, ssim_windowed, SsimConstants, SsimMode,
};

fn main() -> htg_eval::Result<()> {
    let fx = generate_fixture_dataset(2, 4, 0)?;
    let (a, b) = (&fx.images[0], &fx.images[2]);
    let c = SsimConstants::default();
    println!("mse        {:.3}", mse(a, b)?);
    println!("psnr       {:.3} dB", psnr(a, b)?);
    println!("ssim       {:.4}", ssim_global(a, b, &c)?);
    println!("ssim 7x7   {:.4}", ssim_windowed(a, b, &c, 7)?);

    // identical pair: PSNR is reported as "inf"
    let pairs = vec![
        ("w0".to_string(), a.clone(), "w0".to_string(), a.clone()),
        ("w0".to_string(), a.clone(), "w1".to_string(), b.clone()),
    ];
    let report = evaluate_pairs(&pairs, SsimMode::Windowed(7), &c)?;
    println!("{}", serde_json::to_string_pretty(&report.pairs).unwrap());
    Ok(())
}
