//! FID and KID between the feature sets of two fixture "generators".

use htg_eval::data_model::generate_fixture_dataset;
use htg_eval::distribution::{fid_features, kid, kid_subsets, KernelSpec};

fn main() -> htg_eval::Result<()> {
    let real = generate_fixture_dataset(5, 400, 0)?.features;
    let same_style = generate_fixture_dataset(5, 400, 0)?.features;
    let other = generate_fixture_dataset(5, 400, 1)?.features;

    let k = KernelSpec::default();
    println!(
        "FID(real, real)  = {:.6}",
        fid_features(&real, &same_style)?
    );
    println!("FID(real, other) = {:.6}", fid_features(&real, &other)?);
    println!("KID(real, other) = {:.6}", kid(&real, &other, &k)?);
    let blocks = kid_subsets(&real, &other, &k, 10, 100, 0)?;
    println!(
        "KID over 10 blocks of 100: {:.6} ± {:.6}",
        blocks.mean, blocks.std
    );
    Ok(())
}
