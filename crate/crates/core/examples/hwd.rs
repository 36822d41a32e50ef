//! Handwriting Distance: per-writer mean features compared writer by writer.

use htg_eval::data_model::generate_fixture_dataset;
use htg_eval::distribution::{hwd, WriterFeatureTable};

fn main() -> htg_eval::Result<()> {
    let real = generate_fixture_dataset(4, 200, 0)?;
    let gen = generate_fixture_dataset(4, 200, 7)?;
    let rt = WriterFeatureTable::from_features(&real.features, &real.manifest)?;
    let gt = WriterFeatureTable::from_features(&gen.features, &gen.manifest)?;
    println!("HWD(real, real) = {:.6}", hwd(&rt, &rt)?);
    println!("HWD(real, gen)  = {:.6}", hwd(&rt, &gt)?);
    for (w, mean) in rt.writer_means() {
        println!("writer {w}: middle grid row {:.3?}", &mean[4..8]);
    }
    Ok(())
}
