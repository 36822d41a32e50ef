//! Method-comparison table and a utility comparison.

use htg_eval::protocol::{build_report, utility_comparison, CerSummary, MetricInput, ReportFormat};

fn main() -> htg_eval::Result<()> {
    let cols = ["FID", "KID", "HWD", "HTG_HTR", "HTG_style", "HTG_OOV"];
    let rows: [(&str, [Option<f64>; 6]); 5] = [
        (
            "real images",
            [None, None, None, Some(5.14), Some(82.05), None],
        ),
        (
            "GANwriting",
            [
                Some(37.41),
                Some(0.0196),
                Some(0.610),
                Some(39.56),
                Some(4.59),
                Some(7.45),
            ],
        ),
        (
            "SmartPatch",
            [
                Some(48.24),
                Some(0.0331),
                Some(0.641),
                Some(39.22),
                Some(3.00),
                Some(9.20),
            ],
        ),
        (
            "VATr",
            [
                Some(27.79),
                Some(0.0105),
                Some(0.591),
                Some(21.37),
                Some(1.39),
                Some(5.42),
            ],
        ),
        (
            "WordStylist",
            [
                Some(36.69),
                Some(0.0194),
                Some(0.303),
                Some(8.23),
                Some(67.12),
                Some(29.85),
            ],
        ),
    ];
    let inputs = rows.iter().flat_map(|(m, vals)| {
        cols.iter()
            .zip(vals)
            .filter_map(move |(c, v)| v.map(|v| MetricInput::new(*m, *c, v)))
    });
    let report = build_report(inputs)?;
    print!("{}", report.render(ReportFormat::Markdown));
    println!();

    let base = CerSummary::new("real", 5.14, "iam-test");
    let variants = [
        CerSummary::new("real + filtered", 4.49, "iam-test"),
        CerSummary::new("real + unfiltered", 5.60, "iam-test"),
    ];
    print!("{}", utility_comparison(&base, &variants)?.to_markdown());
    Ok(())
}
