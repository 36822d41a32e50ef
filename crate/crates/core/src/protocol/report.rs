//! Method-comparison reports and practical-utility comparisons.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{HtgError, Result};
use crate::text::CerReport;

/// Column order of the comparison table, with the decimals each column is
/// printed with and whether lower is better.
pub const TABLE_COLUMNS: [(&str, usize, bool); 6] = [
    ("FID", 2, true),
    ("KID", 4, true),
    ("HWD", 3, true),
    ("HTG_HTR", 2, true),
    ("HTG_style", 2, false),
    ("HTG_OOV", 2, true),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricValue {
    pub value: f64,
    /// Conventions, seeds and any other parameters the value depends on.
    pub metadata: Value,
    /// SHA-256 digests of the files the value was computed from.
    pub source_digests: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricInput {
    pub method: String,
    pub metric: String,
    pub value: MetricValue,
}

impl MetricInput {
    pub fn new(method: impl Into<String>, metric: impl Into<String>, value: f64) -> Self {
        MetricInput {
            method: method.into(),
            metric: metric.into(),
            value: MetricValue {
                value,
                metadata: Value::Null,
                source_digests: Vec::new(),
            },
        }
    }

    pub fn with_metadata(mut self, metadata: Value) -> Self {
        self.value.metadata = metadata;
        self
    }

    pub fn with_digests(mut self, digests: Vec<String>) -> Self {
        self.value.source_digests = digests;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    /// Methods in first-seen order.
    pub method_order: Vec<String>,
    pub methods: BTreeMap<String, BTreeMap<String, MetricValue>>,
}

/// Groups inputs by method. Repeating an identical entry is harmless; the
/// same (method, metric) with a different value is a SchemaError.
pub fn build_report(inputs: impl IntoIterator<Item = MetricInput>) -> Result<MetricReport> {
    let mut report = MetricReport {
        method_order: Vec::new(),
        methods: BTreeMap::new(),
    };
    for input in inputs {
        if !input.value.value.is_finite() {
            return Err(HtgError::NonFiniteData(format!(
                "{} / {}",
                input.method, input.metric
            )));
        }
        if !report.methods.contains_key(&input.method) {
            report.method_order.push(input.method.clone());
        }
        let metrics = report.methods.entry(input.method.clone()).or_default();
        match metrics.get(&input.metric) {
            Some(existing) if *existing != input.value => {
                return Err(HtgError::SchemaError(format!(
                    "conflicting values for {} / {}",
                    input.method, input.metric
                )))
            }
            Some(_) => {}
            None => {
                metrics.insert(input.metric, input.value);
            }
        }
    }
    if report.methods.is_empty() {
        return Err(HtgError::SchemaError("report has no metrics".into()));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl MetricReport {
    /// Metric names outside the standard columns, sorted.
    fn extra_columns(&self) -> Vec<&str> {
        let mut extra: Vec<&str> = self
            .methods
            .values()
            .flat_map(|m| m.keys().map(String::as_str))
            .filter(|k| !TABLE_COLUMNS.iter().any(|(c, _, _)| c == k))
            .collect();
        extra.sort_unstable();
        extra.dedup();
        extra
    }

    fn columns(&self) -> Vec<(String, Option<usize>)> {
        TABLE_COLUMNS
            .iter()
            .map(|&(c, d, _)| (c.to_string(), Some(d)))
            .chain(
                self.extra_columns()
                    .into_iter()
                    .map(|c| (c.to_string(), None)),
            )
            .collect()
    }

    fn cell(&self, method: &str, metric: &str, decimals: Option<usize>) -> String {
        match self.methods.get(method).and_then(|m| m.get(metric)) {
            None => "-".into(),
            Some(v) => match decimals {
                Some(d) => format!("{:.*}", d, v.value),
                None => format!("{:.4}", v.value),
            },
        }
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "method_order": self.method_order,
            "methods": self.methods,
        })
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes")
                    + "\n"
            }
            ReportFormat::Csv => {
                let cols = self.columns();
                let mut out = String::from("method");
                for (c, _) in &cols {
                    out.push(',');
                    out.push_str(c);
                }
                out.push('\n');
                for m in &self.method_order {
                    out.push_str(&csv_field(m));
                    for (c, _) in &cols {
                        out.push(',');
                        if let Some(v) = self.methods[m].get(c) {
                            out.push_str(&v.value.to_string());
                        }
                    }
                    out.push('\n');
                }
                out
            }
            ReportFormat::Markdown => {
                let cols = self.columns();
                let arrow = |c: &str| match TABLE_COLUMNS.iter().find(|(n, _, _)| *n == c) {
                    Some((_, _, true)) => "↓",
                    Some((_, _, false)) => "↑",
                    None => "",
                };
                let mut out = String::from("| Method |");
                for (c, _) in &cols {
                    out.push_str(&format!(" {c}{} |", arrow(c)));
                }
                out.push_str("\n|:---|");
                for _ in &cols {
                    out.push_str("---:|");
                }
                out.push('\n');
                for m in &self.method_order {
                    out.push_str(&format!("| {m} |"));
                    for (c, d) in &cols {
                        out.push_str(&format!(" {} |", self.cell(m, c, *d)));
                    }
                    out.push('\n');
                }
                out
            }
        }
    }
}

pub fn render_report(report: &MetricReport, format: ReportFormat) -> String {
    report.render(format)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One CER result entering a utility comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CerSummary {
    pub name: String,
    pub cer_percent: f64,
    /// Digest of the test-split id set the CER was measured on.
    pub split_digest: String,
}

impl CerSummary {
    pub fn new(name: impl Into<String>, cer_percent: f64, split_digest: impl Into<String>) -> Self {
        CerSummary {
            name: name.into(),
            cer_percent,
            split_digest: split_digest.into(),
        }
    }

    pub fn from_report(name: impl Into<String>, report: &CerReport) -> Self {
        CerSummary::new(name, 100.0 * report.micro_cer, report.split_digest.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityRow {
    pub name: String,
    pub cer_percent: f64,
    /// Variant minus baseline; negative is an improvement.
    pub delta: f64,
    pub improved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityComparison {
    pub baseline: CerSummary,
    pub variants: Vec<UtilityRow>,
}

impl UtilityComparison {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("comparison serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,cer_percent,delta,improved\n");
        out.push_str(&format!(
            "{},{},0,false\n",
            csv_field(&self.baseline.name),
            self.baseline.cer_percent
        ));
        for v in &self.variants {
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(&v.name),
                v.cer_percent,
                v.delta,
                v.improved
            ));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out =
            String::from("| Training data | CER (%) | Δ vs baseline |\n|:---|---:|---:|\n");
        out.push_str(&format!(
            "| {} | {:.2} | - |\n",
            self.baseline.name, self.baseline.cer_percent
        ));
        for v in &self.variants {
            out.push_str(&format!(
                "| {} | {:.2} | {:+.2} |\n",
                v.name, v.cer_percent, v.delta
            ));
        }
        out
    }
}

/// Differences of each variant's CER from the baseline. All inputs must
/// come from the same test split.
pub fn utility_comparison(
    baseline: &CerSummary,
    variants: &[CerSummary],
) -> Result<UtilityComparison> {
    let rows = variants
        .iter()
        .map(|v| {
            if v.split_digest != baseline.split_digest {
                return Err(HtgError::SplitViolation(format!(
                    "{} was evaluated on a different test split than {}",
                    v.name, baseline.name
                )));
            }
            let delta = v.cer_percent - baseline.cer_percent;
            Ok(UtilityRow {
                name: v.name.clone(),
                cer_percent: v.cer_percent,
                delta,
                improved: delta < 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UtilityComparison {
        baseline: baseline.clone(),
        variants: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<MetricInput> {
        vec![
            MetricInput::new("real", "HTG_HTR", 5.14),
            MetricInput::new("real", "HTG_style", 82.05),
            MetricInput::new("m1", "FID", 37.41),
            MetricInput::new("m1", "KID", 0.0196),
            MetricInput::new("m1", "HWD", 0.61),
            MetricInput::new("m1", "HTG_HTR", 39.56),
            MetricInput::new("m1", "HTG_style", 4.59),
            MetricInput::new("m1", "HTG_OOV", 7.45),
        ]
    }

    #[test]
    fn markdown_layout() {
        let r = build_report(rows()).unwrap();
        let md = r.render(ReportFormat::Markdown);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(
            lines[0],
            "| Method | FID↓ | KID↓ | HWD↓ | HTG_HTR↓ | HTG_style↑ | HTG_OOV↓ |"
        );
        assert_eq!(lines[2], "| real | - | - | - | 5.14 | 82.05 | - |");
        assert_eq!(
            lines[3],
            "| m1 | 37.41 | 0.0196 | 0.610 | 39.56 | 4.59 | 7.45 |"
        );
        assert_eq!(
            md,
            build_report(rows()).unwrap().render(ReportFormat::Markdown)
        );
    }

    #[test]
    fn json_has_order_and_round_trips() {
        let r = build_report(rows()).unwrap();
        let v: Value = serde_json::from_str(&r.render(ReportFormat::Json)).unwrap();
        assert_eq!(v["method_order"], json!(["real", "m1"]));
        assert_eq!(v["methods"]["m1"]["KID"]["value"].as_f64(), Some(0.0196));
    }

    #[test]
    fn extra_metrics_get_columns() {
        let mut input = rows();
        input.push(MetricInput::new("m1", "GS", 0.00123456));
        let md = build_report(input).unwrap().render(ReportFormat::Markdown);
        assert!(md.lines().next().unwrap().ends_with("| GS |"));
        assert!(md.contains("| 0.0012 |"));
        let csv = build_report(rows()).unwrap().render(ReportFormat::Csv);
        assert_eq!(csv.lines().nth(1).unwrap(), "real,,,,5.14,82.05,");
    }

    #[test]
    fn conflicts_and_empty() {
        assert_eq!(build_report(Vec::new()).unwrap_err().kind(), "SchemaError");
        let dup = vec![
            MetricInput::new("a", "FID", 1.0),
            MetricInput::new("a", "FID", 1.0),
        ];
        assert!(build_report(dup).is_ok());
        let clash = vec![
            MetricInput::new("a", "FID", 1.0),
            MetricInput::new("a", "FID", 2.0),
        ];
        assert_eq!(build_report(clash).unwrap_err().kind(), "SchemaError");
    }

    #[test]
    fn utility_deltas() {
        let base = CerSummary::new("real", 5.14, "d");
        let c = utility_comparison(
            &base,
            &[
                CerSummary::new("real+filtered", 4.49, "d"),
                CerSummary::new("same", 5.14, "d"),
            ],
        )
        .unwrap();
        assert!((c.variants[0].delta + 0.65).abs() < 1e-9);
        assert!(c.variants[0].improved);
        assert_eq!(c.variants[1].delta, 0.0);
        assert!(!c.variants[1].improved);
        assert!(c.to_markdown().contains("| real+filtered | 4.49 | -0.65 |"));
        let err = utility_comparison(&base, &[CerSummary::new("x", 4.0, "other")]).unwrap_err();
        assert_eq!(err.kind(), "SplitViolation");
    }
}
