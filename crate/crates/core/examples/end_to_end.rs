//! Fixture dataset through every metric family into one report.

use htg_eval::data_model::generate_fixture_dataset;
use htg_eval::data_model::split::make_style_split;
use htg_eval::distribution::{fid_features, hwd, kid, KernelSpec, WriterFeatureTable};
use htg_eval::geometry::{geometry_score, GsParams};
use htg_eval::protocol::{build_report, MetricInput, ReportFormat};
use htg_eval::style::htg_style;
use htg_eval::text::htg_htr;

fn main() -> htg_eval::Result<()> {
    let real = generate_fixture_dataset(5, 200, 0)?;
    let gen = generate_fixture_dataset(5, 200, 1)?;

    let fid = fid_features(&real.features, &gen.features)?;
    let kid = kid(&real.features, &gen.features, &KernelSpec::default())?;
    let gs = geometry_score(&real.features, &gen.features, &GsParams::default())?.gs;
    let hwd = hwd(
        &WriterFeatureTable::from_features(&real.features, &real.manifest)?,
        &WriterFeatureTable::from_features(&gen.features, &gen.manifest)?,
    )?;
    let htr = htg_htr(&real.transcriptions, &real.manifest)?;
    let split = make_style_split(&real.manifest, 0.7, 0)?;
    let eval = split.eval_set();
    let preds: Vec<_> = gen
        .style_predictions
        .iter()
        .filter(|p| eval.contains(p.sample_id.as_str()))
        .cloned()
        .collect();
    let style = htg_style(&preds, eval.iter().copied())?;

    let report = build_report(vec![
        MetricInput::new("fixture-gen", "FID", fid),
        MetricInput::new("fixture-gen", "KID", kid),
        MetricInput::new("fixture-gen", "HWD", hwd),
        MetricInput::new("fixture-gen", "HTG_HTR", htr),
        MetricInput::new("fixture-gen", "HTG_style", style),
        MetricInput::new("fixture-gen", "GS", gs),
    ])?;
    print!("{}", report.render(ReportFormat::Markdown));
    Ok(())
}
