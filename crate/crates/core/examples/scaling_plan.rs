//! Nested training subsets and the CER curve built from them.

use htg_eval::data_model::{DatasetManifest, SampleEntry};
use htg_eval::protocol::{scaling_curve, scaling_sizes, scaling_subsets};

fn main() -> htg_eval::Result<()> {
    println!("47000 / 5000 -> {:?}", scaling_sizes(47_000, 5_000)?);

    let manifest = DatasetManifest::new(
        "synthetic",
        (0..23)
            .map(|i| SampleEntry::new(format!("g{i:03}"), "word", i % 4))
            .collect(),
    )?;
    let plan = scaling_subsets(&manifest, 5, 0)?;
    for subset in plan.subsets() {
        println!("{:>2} samples, first {:?}", subset.len(), &subset[..3]);
    }
    let dir = std::env::temp_dir().join("htg_eval_scaling_example");
    for (file, digest) in plan.write(&manifest, &dir, "subset")? {
        println!("{file} {}", &digest[..16]);
    }

    // CERs measured externally after training on each subset
    let cers = [41.2, 33.0, 35.5, 28.1, 27.9];
    let steps: Vec<(usize, f64)> = plan.sizes.iter().copied().zip(cers).collect();
    let curve = scaling_curve(&steps)?;
    print!("{}", curve.to_csv());
    println!("increases: {}", curve.increases);
    Ok(())
}
