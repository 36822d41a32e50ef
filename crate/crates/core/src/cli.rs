//! The `htg-eval` command line tool.
//!
//! Exit codes: 0 on success, 1 on a domain error (printed to stderr as
//! `{"error": kind, "message": text}`), 2 on a usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::data_model::htgf::{load_feature_matrix, load_layer_maps, load_logits, LayerSource};
use crate::data_model::split::{load_id_list, make_style_split, write_id_list};
use crate::data_model::{
    generate_fixture, load_manifest, load_style_predictions, load_transcriptions, FixtureConfig,
};
use crate::digest::{file_sha256, id_set_digest};
use crate::distribution::{self, KernelSpec, WriterFeatureTable};
use crate::error::{HtgError, Result};
use crate::geometry::{self, GsParams};
use crate::pixel::{self, SsimConstants, SsimMode};
use crate::protocol::{self, CerSummary, MetricInput, ReportFormat};
use crate::style;
use crate::text::{self, Averaging};

#[derive(Debug, Parser)]
#[command(
    name = "htg-eval",
    version,
    about = "Evaluation metrics for handwritten text generation"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CliConfig {
    /// Seed for every stochastic step (landmarks, splits, plans, subsets).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "HTG_EVAL_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// MSE, RMSE, PSNR and SSIM over image pairs.
    Pixel {
        /// JSON Lines of {"a": path, "b": path}.
        #[arg(long)]
        pairs: PathBuf,
        /// Sliding-window SSIM with this side length; global SSIM if absent.
        #[arg(long)]
        ssim_window: Option<usize>,
        #[arg(long)]
        dynamic_range: Option<f64>,
    },
    /// Fréchet distance between Gaussian fits of two feature sets.
    Fid(PairArgs),
    /// Unbiased squared MMD with a polynomial kernel.
    Kid {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// Defaults to 1/D.
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        coef0: f64,
        /// Average over this many random blocks instead of using all rows.
        #[arg(long)]
        subsets: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        subset_size: usize,
    },
    /// Inception Score from logits or probabilities.
    Is {
        #[arg(long)]
        logits: PathBuf,
        #[arg(long, default_value_t = 10)]
        splits: usize,
    },
    /// Perceptual distance between per-layer feature maps.
    Lpips {
        /// Layer file for set A as NAME[:WEIGHT]=PATH; repeat per layer.
        #[arg(long = "a", required = true)]
        a: Vec<String>,
        /// Layer file for set B, same layer names and order as --a.
        #[arg(long = "b", required = true)]
        b: Vec<String>,
    },
    /// Mean per-writer distance between averaged feature vectors.
    Hwd {
        #[command(flatten)]
        pair: PairArgs,
        /// Manifest assigning writers to the real feature rows.
        #[arg(long)]
        real_manifest: PathBuf,
        /// Manifest for the generated rows; defaults to --real-manifest.
        #[arg(long)]
        gen_manifest: Option<PathBuf>,
    },
    /// Geometry Score between two feature sets.
    Gs {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 64)]
        landmarks: usize,
        #[arg(long, default_value_t = 1.0 / 128.0)]
        gamma: f64,
        #[arg(long, default_value_t = 100)]
        imax: usize,
        #[arg(long, default_value_t = 100)]
        repeats: usize,
    },
    /// Character error rate of transcription records.
    Cer(RecordArgs),
    /// Word error rate of transcription records.
    Wer(RecordArgs),
    /// Percent CER on the real test split.
    HtgHtr {
        #[arg(long)]
        records: PathBuf,
        /// Manifest of the test split.
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Percent CER on out-of-vocabulary words.
    HtgOov {
        #[arg(long)]
        records: PathBuf,
        /// Manifest with vocabulary tags for every record.
        #[arg(long)]
        manifest: PathBuf,
        /// Tag --manifest against this training manifest's lexicon first.
        #[arg(long)]
        train_manifest: Option<PathBuf>,
    },
    /// Keep records whose CER is at most the threshold.
    Filter {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        /// Newline-separated list of kept sample ids.
        #[arg(long)]
        kept_out: Option<PathBuf>,
    },
    /// Writer-classification accuracy on the evaluation split.
    HtgStyle {
        #[arg(long)]
        pred: PathBuf,
        /// Newline-separated evaluation ids.
        #[arg(long)]
        split: PathBuf,
    },
    /// Nested training subsets growing by a fixed step.
    ScalingPlan {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 5000)]
        step: usize,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value = "subset")]
        prefix: String,
    },
    /// Curve of CER against training-set size.
    ScalingCurve {
        /// CSV with header size,cer_percent.
        #[arg(long)]
        steps: PathBuf,
    },
    /// Method-comparison table from metric values.
    Report {
        /// JSON Lines of {"method", "metric", "value", "metadata"?, "source_digests"?}.
        #[arg(long)]
        inputs: PathBuf,
    },
    /// CER deltas of training variants against a baseline.
    Compare {
        /// NAME=PATH of baseline transcription records.
        #[arg(long)]
        baseline: String,
        /// NAME=PATH of variant transcription records; repeatable.
        #[arg(long = "variant", required = true)]
        variants: Vec<String>,
    },
    /// Writes a synthetic dataset with features and prediction logs.
    Fixture {
        #[arg(long, default_value_t = 5)]
        writers: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        char_error_rate: f64,
        #[arg(long, default_value_t = 0.8)]
        style_accuracy: f64,
    },
    /// Per-writer train/evaluation split for the writer classifier.
    Split {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 0.7)]
        train_fraction: f64,
        #[arg(long)]
        train_out: PathBuf,
        #[arg(long)]
        eval_out: PathBuf,
    },
    /// Tags a manifest's words as in- or out-of-vocabulary.
    Lexicon {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        train_manifest: PathBuf,
        /// Where to write the tagged manifest.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub real: PathBuf,
    #[arg(long)]
    pub gen: PathBuf,
}

#[derive(Debug, Args)]
pub struct RecordArgs {
    #[arg(long)]
    pub records: PathBuf,
    /// Average per-record rates instead of pooling edits.
    #[arg(long)]
    pub r#macro: bool,
}

/// Result of a command in every format it supports.
struct Output {
    json: Value,
    csv: Option<String>,
    markdown: Option<String>,
}

impl Output {
    fn json(json: Value) -> Self {
        Output {
            json,
            csv: None,
            markdown: None,
        }
    }

    /// Single-value metric output with generic CSV and markdown forms.
    fn metric(name: &str, key: &str, value: f64, extra: Value) -> Self {
        let mut json = json!({ "metric": name, "value": value, key: value });
        if let (Value::Object(map), Value::Object(more)) = (&mut json, extra) {
            map.extend(more);
        }
        Output {
            json,
            csv: Some(format!("metric,value\n{name},{value}\n")),
            markdown: Some(format!(
                "| Metric | Value |\n|:---|---:|\n| {name} | {value} |\n"
            )),
        }
    }

    fn render(self, format: Format) -> Result<String> {
        let unsupported =
            |f: &str| HtgError::InvalidArgument(format!("this command has no {f} output"));
        match format {
            Format::Json => {
                Ok(serde_json::to_string_pretty(&self.json).expect("json values serialize") + "\n")
            }
            Format::Csv => self.csv.ok_or_else(|| unsupported("csv")),
            Format::Markdown => self.markdown.ok_or_else(|| unsupported("markdown")),
        }
    }
}

fn digests(paths: &[(&str, &Path)]) -> Result<Value> {
    let mut map = serde_json::Map::new();
    for (k, p) in paths {
        map.insert((*k).to_string(), Value::String(file_sha256(p)?));
    }
    Ok(Value::Object(map))
}

fn parse_layer(spec: &str) -> Result<LayerSource> {
    let (head, path) = spec.split_once('=').ok_or_else(|| {
        HtgError::InvalidArgument(format!("layer `{spec}` must look like NAME[:WEIGHT]=PATH"))
    })?;
    let (name, weight) = match head.split_once(':') {
        Some((n, w)) => (
            n,
            w.parse::<f64>()
                .map_err(|_| HtgError::InvalidArgument(format!("bad layer weight `{w}`")))?,
        ),
        None => (head, 1.0),
    };
    Ok(LayerSource {
        name: name.to_string(),
        path: PathBuf::from(path),
        weight,
    })
}

fn parse_named(spec: &str) -> Result<(String, PathBuf)> {
    spec.split_once('=')
        .map(|(n, p)| (n.to_string(), PathBuf::from(p)))
        .ok_or_else(|| HtgError::InvalidArgument(format!("`{spec}` must look like NAME=PATH")))
}

#[derive(Deserialize)]
struct ReportLine {
    method: String,
    metric: String,
    value: f64,
    #[serde(default)]
    metadata: Value,
    #[serde(default)]
    source_digests: Vec<String>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| HtgError::io(path, e))
}

fn parse_steps(text: &str) -> Result<Vec<(usize, f64)>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some("size,cer_percent") => {}
        other => {
            return Err(HtgError::SchemaError(format!(
                "expected header size,cer_percent, got {other:?}"
            )))
        }
    }
    lines
        .enumerate()
        .map(|(i, l)| {
            let bad = || HtgError::SchemaError(format!("row {}: `{l}`", i + 1));
            let (s, c) = l.trim().split_once(',').ok_or_else(bad)?;
            Ok((
                s.trim().parse().map_err(|_| bad())?,
                c.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn run(cmd: &Command, cfg: &CliConfig) -> Result<Output> {
    match cmd {
        Command::Pixel {
            pairs,
            ssim_window,
            dynamic_range,
        } => {
            let loaded = pixel::load_pairs(pairs)?;
            let constants = match dynamic_range {
                Some(r) => SsimConstants::for_range(*r)?,
                None => SsimConstants::default(),
            };
            let mode = ssim_window.map_or(SsimMode::Global, SsimMode::Windowed);
            let report = pixel::evaluate_pairs(&loaded, mode, &constants)?;
            let mut csv = String::from("a,b,mse,rmse,psnr,ssim\n");
            for p in &report.pairs {
                let psnr = match p.psnr {
                    pixel::PsnrValue::Finite(v) => v.to_string(),
                    pixel::PsnrValue::Infinite => "inf".into(),
                };
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    p.a, p.b, p.mse, p.rmse, psnr, p.ssim
                ));
            }
            let mut json = serde_json::to_value(&report).expect("report serializes");
            json["sources"] = digests(&[("pairs", pairs)])?;
            Ok(Output {
                json,
                csv: Some(csv),
                markdown: None,
            })
        }
        Command::Fid(PairArgs { real, gen }) => {
            let value = distribution::fid_features(
                &load_feature_matrix(real)?,
                &load_feature_matrix(gen)?,
            )?;
            Ok(Output::metric(
                "FID",
                "fid",
                value,
                json!({ "metadata": {
                    "conventions": distribution::fid_conventions(),
                    "sources": digests(&[("real", real), ("gen", gen)])?,
                }}),
            ))
        }
        Command::Kid {
            pair: PairArgs { real, gen },
            degree,
            gamma,
            coef0,
            subsets,
            subset_size,
        } => {
            let (r, g) = (load_feature_matrix(real)?, load_feature_matrix(gen)?);
            let k = KernelSpec {
                degree: *degree,
                gamma: *gamma,
                coef0: *coef0,
            };
            let (value, std, sub) = match subsets {
                Some(n) => {
                    let ms = distribution::kid_subsets(&r, &g, &k, *n, *subset_size, cfg.seed)?;
                    (
                        ms.mean,
                        Some(ms.std),
                        json!({ "n_subsets": n, "subset_size": subset_size, "seed": cfg.seed }),
                    )
                }
                None => (distribution::kid(&r, &g, &k)?, None, Value::Null),
            };
            Ok(Output::metric(
                "KID",
                "kid",
                value,
                json!({ "std": std, "metadata": {
                    "conventions": distribution::kid_conventions(&k, r.dim()),
                    "subsets": sub,
                    "sources": digests(&[("real", real), ("gen", gen)])?,
                }}),
            ))
        }
        Command::Is { logits, splits } => {
            let l = load_logits(logits)?;
            let ms = distribution::inception_score(&l, *splits)?;
            Ok(Output::metric(
                "IS",
                "is",
                ms.mean,
                json!({ "std": ms.std, "metadata": {
                    "n_splits": splits,
                    "input": if l.is_probability() { "probabilities" } else { "logits" },
                    "std_convention": "population",
                    "sources": digests(&[("logits", logits)])?,
                }}),
            ))
        }
        Command::Lpips { a, b } => {
            let la: Vec<LayerSource> = a.iter().map(|s| parse_layer(s)).collect::<Result<_>>()?;
            let lb: Vec<LayerSource> = b.iter().map(|s| parse_layer(s)).collect::<Result<_>>()?;
            let per_sample = distribution::lpips(&load_layer_maps(&la)?, &load_layer_maps(&lb)?)?;
            let ms = crate::pixel::MeanStd::of(&per_sample).ok_or(HtgError::NoRecords)?;
            let mut sources = serde_json::Map::new();
            for s in la
                .iter()
                .map(|s| ("a", s))
                .chain(lb.iter().map(|s| ("b", s)))
            {
                sources.insert(
                    format!("{}:{}", s.0, s.1.name),
                    Value::String(file_sha256(&s.1.path)?),
                );
            }
            Ok(Output::metric(
                "LPIPS",
                "lpips",
                ms.mean,
                json!({ "std": ms.std, "per_sample": per_sample, "metadata": {
                    "layers": la.iter().map(|l| json!({"name": l.name, "weight": l.weight})).collect::<Vec<_>>(),
                    "sources": sources,
                }}),
            ))
        }
        Command::Hwd {
            pair: PairArgs { real, gen },
            real_manifest,
            gen_manifest,
        } => {
            let rm = load_manifest(real_manifest)?;
            let gm = match gen_manifest {
                Some(p) => load_manifest(p)?,
                None => rm.clone(),
            };
            let rt = WriterFeatureTable::from_features(&load_feature_matrix(real)?, &rm)?;
            let gt = WriterFeatureTable::from_features(&load_feature_matrix(gen)?, &gm)?;
            let value = distribution::hwd(&rt, &gt)?;
            Ok(Output::metric(
                "HWD",
                "hwd",
                value,
                json!({ "metadata": {
                    "conventions": distribution::hwd_conventions(),
                    "n_writers": rt.writers().count(),
                    "sources": digests(&[("real", real), ("gen", gen)])?,
                }}),
            ))
        }
        Command::Gs {
            a,
            b,
            landmarks,
            gamma,
            imax,
            repeats,
        } => {
            let params = GsParams {
                i_max: *imax,
                n_landmarks: *landmarks,
                gamma: *gamma,
                n_repeats: *repeats,
                seed: cfg.seed,
            };
            let g = geometry::geometry_score(
                &load_feature_matrix(a)?,
                &load_feature_matrix(b)?,
                &params,
            )?;
            Ok(Output::metric(
                "GS",
                "gs",
                g.gs,
                json!({
                    "mrlt_a": g.mrlt_a,
                    "mrlt_b": g.mrlt_b,
                    "params": g.params,
                    "metadata": {
                        "conventions": geometry::gs_conventions(),
                        "sources": digests(&[("a", a), ("b", b)])?,
                    },
                }),
            ))
        }
        Command::Cer(args) | Command::Wer(args) => {
            let records = load_transcriptions(&args.records)?;
            let word = matches!(cmd, Command::Wer(_));
            let report = if word {
                text::wer(&records)?
            } else {
                text::cer(&records)?
            };
            let averaging = if args.r#macro {
                Averaging::Macro
            } else {
                Averaging::Micro
            };
            let (name, key) = if word { ("WER", "wer") } else { ("CER", "cer") };
            let mut out = Output::metric(
                name,
                key,
                report.rate(averaging),
                json!({
                    "n_records": report.n_records,
                    "total_edits": report.total_edits,
                    "total_reference_length": report.total_reference_length,
                    "micro": report.micro_cer,
                    "macro": report.macro_cer,
                    "split_digest": report.split_digest,
                    "metadata": {
                        "conventions": text::cer_conventions(averaging),
                        "sources": digests(&[("records", &args.records)])?,
                    },
                }),
            );
            let mut csv =
                String::from("sample_id,substitutions,insertions,deletions,reference_length\n");
            for r in &report.per_record {
                let s = r.stats;
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.sample_id, s.substitutions, s.insertions, s.deletions, s.reference_length
                ));
            }
            out.csv = Some(csv);
            Ok(out)
        }
        Command::HtgHtr { records, manifest } => {
            let recs = load_transcriptions(records)?;
            let value = text::htg_htr(&recs, &load_manifest(manifest)?)?;
            Ok(Output::metric(
                "HTG_HTR",
                "htg_htr",
                value,
                json!({ "n_records": recs.len(), "split_digest": id_set_digest(recs.iter().map(|r| r.sample_id.as_str())), "metadata": {
                    "conventions": text::cer_conventions(Averaging::Micro),
                    "sources": digests(&[("records", records), ("manifest", manifest)])?,
                }}),
            ))
        }
        Command::HtgOov {
            records,
            manifest,
            train_manifest,
        } => {
            let recs = load_transcriptions(records)?;
            let mut m = load_manifest(manifest)?;
            let mut paths: Vec<(&str, &Path)> = vec![("records", records), ("manifest", manifest)];
            if let Some(t) = train_manifest {
                m.tag_vocabulary(load_manifest(t)?.lexicon());
                paths.push(("train_manifest", t));
            }
            let value = text::htg_oov(&recs, &m)?;
            Ok(Output::metric(
                "HTG_OOV",
                "htg_oov",
                value,
                json!({ "n_records": recs.len(), "metadata": {
                    "conventions": text::cer_conventions(Averaging::Micro),
                    "sources": digests(&paths)?,
                }}),
            ))
        }
        Command::Filter {
            records,
            threshold,
            kept_out,
        } => {
            let recs = load_transcriptions(records)?;
            let f = text::filter_by_cer(&recs, *threshold)?;
            if let Some(p) = kept_out {
                write_id_list(p, &f.kept_ids)?;
            }
            let s = &f.summary;
            Ok(Output {
                csv: Some(format!(
                    "threshold,n_total,n_kept,n_dropped,kept_fraction\n{},{},{},{},{}\n",
                    s.threshold, s.n_total, s.n_kept, s.n_dropped, s.kept_fraction
                )),
                markdown: None,
                json: serde_json::to_value(&f).expect("filter result serializes"),
            })
        }
        Command::HtgStyle { pred, split } => {
            let recs = load_style_predictions(pred)?;
            let eval = load_id_list(split)?;
            let report = style::htg_style_report(&recs, eval.iter().map(String::as_str))?;
            let mut json = serde_json::to_value(&report).expect("style report serializes");
            json["metric"] = json!("HTG_style");
            json["value"] = json!(100.0 * report.accuracy);
            json["htg_style"] = json!(100.0 * report.accuracy);
            json["sources"] = digests(&[("pred", pred), ("split", split)])?;
            let mut csv = String::from("true_label,predicted_label,count\n");
            for c in &report.confusion {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    c.true_label, c.predicted_label, c.count
                ));
            }
            Ok(Output {
                json,
                csv: Some(csv),
                markdown: None,
            })
        }
        Command::ScalingPlan {
            manifest,
            step,
            out_dir,
            prefix,
        } => {
            let m = load_manifest(manifest)?;
            let plan = protocol::scaling_subsets(&m, *step, cfg.seed)?;
            let files = plan.write(&m, out_dir, prefix)?;
            let mut csv = String::from("size,file,sha256\n");
            for ((f, d), s) in files.iter().zip(&plan.sizes) {
                csv.push_str(&format!("{s},{f},{d}\n"));
            }
            Ok(Output {
                json: json!({
                    "step": plan.step,
                    "seed": plan.seed,
                    "sizes": plan.sizes,
                    "files": files.iter().map(|(f, d)| json!({"file": f, "sha256": d})).collect::<Vec<_>>(),
                    "sources": digests(&[("manifest", manifest)])?,
                }),
                csv: Some(csv),
                markdown: None,
            })
        }
        Command::ScalingCurve { steps } => {
            let curve = protocol::scaling_curve(&parse_steps(&read_text(steps)?)?)?;
            Ok(Output {
                json: serde_json::to_value(&curve).expect("curve serializes"),
                csv: Some(curve.to_csv()),
                markdown: None,
            })
        }
        Command::Report { inputs } => {
            let lines = read_text(inputs)?
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| {
                    let r: ReportLine = serde_json::from_str(l)
                        .map_err(|e| HtgError::SchemaError(format!("line {}: {e}", i + 1)))?;
                    Ok(MetricInput::new(r.method, r.metric, r.value)
                        .with_metadata(r.metadata)
                        .with_digests(r.source_digests))
                })
                .collect::<Result<Vec<_>>>()?;
            let report = protocol::build_report(lines)?;
            Ok(Output {
                json: report.to_json_value(),
                csv: Some(report.render(ReportFormat::Csv)),
                markdown: Some(report.render(ReportFormat::Markdown)),
            })
        }
        Command::Compare { baseline, variants } => {
            let summary = |spec: &str| -> Result<CerSummary> {
                let (name, path) = parse_named(spec)?;
                Ok(CerSummary::from_report(
                    name,
                    &text::cer(&load_transcriptions(path)?)?,
                ))
            };
            let base = summary(baseline)?;
            let vars = variants
                .iter()
                .map(|v| summary(v))
                .collect::<Result<Vec<_>>>()?;
            let c = protocol::utility_comparison(&base, &vars)?;
            Ok(Output {
                json: serde_json::to_value(&c).expect("comparison serializes"),
                csv: Some(c.to_csv()),
                markdown: Some(c.to_markdown()),
            })
        }
        Command::Fixture {
            writers,
            samples,
            out_dir,
            char_error_rate,
            style_accuracy,
        } => {
            let fixture = generate_fixture(&FixtureConfig {
                n_writers: *writers,
                n_samples: *samples,
                seed: cfg.seed,
                char_error_rate: *char_error_rate,
                style_accuracy: *style_accuracy,
            })?;
            let files = fixture.write(out_dir)?;
            let mut csv = String::from("file,sha256\n");
            for (f, d) in &files {
                csv.push_str(&format!("{f},{d}\n"));
            }
            Ok(Output {
                json: json!({
                    "n_writers": writers,
                    "n_samples": samples,
                    "seed": cfg.seed,
                    "files": files.iter().map(|(f, d)| json!({"file": f, "sha256": d})).collect::<Vec<_>>(),
                }),
                csv: Some(csv),
                markdown: None,
            })
        }
        Command::Split {
            manifest,
            train_fraction,
            train_out,
            eval_out,
        } => {
            let m = load_manifest(manifest)?;
            let s = make_style_split(&m, *train_fraction, cfg.seed)?;
            write_id_list(train_out, &s.train_ids)?;
            write_id_list(eval_out, &s.eval_ids)?;
            Ok(Output::json(json!({
                "train_fraction": train_fraction,
                "seed": cfg.seed,
                "n_train": s.train_ids.len(),
                "n_eval": s.eval_ids.len(),
                "singleton_writers": s.singleton_writers,
                "train_sha256": file_sha256(train_out)?,
                "eval_sha256": file_sha256(eval_out)?,
            })))
        }
        Command::Lexicon {
            manifest,
            train_manifest,
            out,
        } => {
            let mut m = load_manifest(manifest)?;
            m.tag_vocabulary(load_manifest(train_manifest)?.lexicon());
            m.save(out)?;
            let oov = m
                .samples()
                .iter()
                .filter(|s| s.vocab_tag == crate::data_model::VocabTag::Oov)
                .count();
            Ok(Output::json(json!({
                "n_samples": m.len(),
                "n_iv": m.len() - oov,
                "n_oov": oov,
                "sha256": file_sha256(out)?,
            })))
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| HtgError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| HtgError::io("<stdout>", e))
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let threads = match cli.config.threads {
        Some(t) => t as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HtgError::InvalidArgument(format!("cannot start {threads} threads: {e}")))?;
    let text = pool
        .install(|| run(&cli.command, &cli.config))?
        .render(cli.config.format)?;
    emit(&text, cli.config.output.as_deref())
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(err) => {
            let payload = json!({ "error": err.kind(), "message": err.to_string() });
            eprintln!("{payload}");
            1
        }
    }
}
