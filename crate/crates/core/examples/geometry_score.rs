//! Geometry Score separates a circle from a filled disk.

use htg_eval::data_model::FeatureMatrix;
use htg_eval::geometry::{geometry_score, GsParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn circle(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let t = rng.random_range(0.0..std::f64::consts::TAU);
            vec![t.cos(), t.sin()]
        })
        .collect()
}

fn disk(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let r = rng.random_range(0.0f64..1.0).sqrt();
            let t = rng.random_range(0.0..std::f64::consts::TAU);
            vec![r * t.cos(), r * t.sin()]
        })
        .collect()
}

fn main() -> htg_eval::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let c1 = FeatureMatrix::from_rows(&circle(&mut rng, 500))?;
    let c2 = FeatureMatrix::from_rows(&circle(&mut rng, 500))?;
    let d = FeatureMatrix::from_rows(&disk(&mut rng, 500))?;

    let params = GsParams::default();
    let same = geometry_score(&c1, &c2, &params)?;
    let diff = geometry_score(&c1, &d, &params)?;
    println!("GS(circle, circle') = {:.6}", same.gs);
    println!("GS(circle, disk)    = {:.6}", diff.gs);
    println!("MRLT circle[0..4] = {:.3?}", &diff.mrlt_a[..4]);
    println!("MRLT disk[0..4]   = {:.3?}", &diff.mrlt_b[..4]);
    Ok(())
}
