use crate::data_model::LayerFeatureMapSet;
use crate::error::{HtgError, Result};

/// Guard added to channel norms before unit-normalizing.
pub const NORM_EPS: f64 = 1e-10;

/// Per-sample perceptual distance: for every layer, each spatial position's
/// channel vector is unit-normalized in both inputs, squared differences are
/// averaged over positions and weighted by the layer weight; layers are summed.
pub fn lpips(a: &LayerFeatureMapSet, b: &LayerFeatureMapSet) -> Result<Vec<f64>> {
    if a.layers().len() != b.layers().len() {
        return Err(HtgError::ShapeError(format!(
            "{} layers vs {} layers",
            a.layers().len(),
            b.layers().len()
        )));
    }
    for (la, lb) in a.layers().iter().zip(b.layers()) {
        if la.name != lb.name || la.shape() != lb.shape() {
            return Err(HtgError::ShapeError(format!(
                "layer `{}` {:?} does not match layer `{}` {:?}",
                la.name,
                la.shape(),
                lb.name,
                lb.shape()
            )));
        }
    }
    let mut out = vec![0.0; a.n()];
    for (la, lb) in a.layers().iter().zip(b.layers()) {
        if la.weight == 0.0 {
            continue;
        }
        let [_, c, h, w] = la.shape();
        let positions = h * w;
        for (i, total) in out.iter_mut().enumerate() {
            let (xa, xb) = (la.sample(i), lb.sample(i));
            let mut acc = 0.0;
            for p in 0..positions {
                let norm = |x: &[f64]| {
                    (0..c)
                        .map(|ch| x[ch * positions + p].powi(2))
                        .sum::<f64>()
                        .sqrt()
                        + NORM_EPS
                };
                let (na, nb) = (norm(xa), norm(xb));
                acc += (0..c)
                    .map(|ch| {
                        let d = xa[ch * positions + p] / na - xb[ch * positions + p] / nb;
                        d * d
                    })
                    .sum::<f64>();
            }
            *total += la.weight * acc / positions as f64;
        }
    }
    Ok(out)
}
