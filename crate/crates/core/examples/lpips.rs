//! LPIPS-style distance between per-layer feature maps.

use htg_eval::data_model::{LayerFeatureMapSet, LayerFeatureMaps};
use htg_eval::distribution::lpips;

fn layer(name: &str, weight: f64, shift: f64) -> htg_eval::Result<LayerFeatureMaps> {
    let (n, c, h, w) = (3, 4, 5, 5);
    let ids = (0..n).map(|i| format!("s{i}")).collect();
    let data = (0..n * c * h * w)
        .map(|j| ((j as f64) * 0.37 + shift).sin())
        .collect();
    LayerFeatureMaps::new(name, weight, ids, [n, c, h, w], data)
}

fn main() -> htg_eval::Result<()> {
    let a = LayerFeatureMapSet::new(vec![layer("conv1", 1.0, 0.0)?, layer("conv2", 0.5, 0.0)?])?;
    let b = LayerFeatureMapSet::new(vec![layer("conv1", 1.0, 0.4)?, layer("conv2", 0.5, 0.4)?])?;
    println!("same sets:      {:?}", lpips(&a, &a)?);
    println!("shifted maps:   {:?}", lpips(&a, &b)?);
    Ok(())
}
