use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use htg_eval::data_model::records::save_transcriptions;
use htg_eval::data_model::{
    generate_fixture_dataset, DatasetManifest, SampleEntry, TranscriptionRecord,
};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_htg-eval"))
        .args(args)
        .env_remove("HTG_EVAL_THREADS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn fid_of_identical_files_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let fx = generate_fixture_dataset(3, 20, 0).unwrap();
    fx.write(dir.path()).unwrap();
    let f = dir.path().join("features.htgf");
    let out = run(&["fid", "--real", p(&f), "--gen", p(&f)]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["metric"], "FID");
    assert!(v["fid"].as_f64().unwrap().abs() < 1e-8);
    assert!(v["metadata"]["sources"]["real"].as_str().unwrap().len() == 64);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["fid", "--real", "x"]).status.code(), Some(2));
    assert_eq!(
        run(&["--threads", "0", "cer", "--records", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn domain_errors_exit_one_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let mut m = DatasetManifest::new(
        "test",
        vec![
            SampleEntry::new("a", "seen", 0),
            SampleEntry::new("b", "novel", 1),
        ],
    )
    .unwrap();
    m.tag_vocabulary(&BTreeSet::from(["seen".to_string()]));
    let mp = dir.path().join("test.jsonl");
    m.save(&mp).unwrap();
    let rp = dir.path().join("records.jsonl");
    save_transcriptions(&rp, &[TranscriptionRecord::new("a", "seen", "sen")]).unwrap();

    let out = run(&["htg-oov", "--records", p(&rp), "--manifest", p(&mp)]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "VocabViolation");
    assert!(out.stdout.is_empty());

    let missing = run(&["cer", "--records", p(&dir.path().join("nope.jsonl"))]);
    assert_eq!(missing.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(err["error"], "IoError");

    save_transcriptions(&rp, &[TranscriptionRecord::new("b", "novel", "novel")]).unwrap();
    let ok = run(&["htg-oov", "--records", p(&rp), "--manifest", p(&mp)]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["value"].as_f64(), Some(0.0));
}

#[test]
fn report_renders_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("inputs.jsonl");
    std::fs::write(
        &inputs,
        concat!(
            "{\"method\": \"VATr\", \"metric\": \"FID\", \"value\": 27.79}\n",
            "{\"method\": \"VATr\", \"metric\": \"HTG_style\", \"value\": 1.39}\n",
            "{\"method\": \"real images\", \"metric\": \"HTG_HTR\", \"value\": 5.14}\n",
        ),
    )
    .unwrap();
    let out = run(&["report", "--inputs", p(&inputs), "--format", "markdown"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "| Method | FID↓ | KID↓ | HWD↓ | HTG_HTR↓ | HTG_style↑ | HTG_OOV↓ |"
    );
    assert_eq!(lines[2], "| VATr | 27.79 | - | - | - | 1.39 | - |");
    assert_eq!(lines[3], "| real images | - | - | - | 5.14 | - | - |");
}

#[test]
fn filter_writes_kept_ids_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let rp = dir.path().join("records.jsonl");
    save_transcriptions(
        &rp,
        &[
            TranscriptionRecord::new("a", "word", "word"),
            TranscriptionRecord::new("b", "word", "ward"),
            TranscriptionRecord::new("c", "hello", "hello"),
        ],
    )
    .unwrap();
    let kept = dir.path().join("kept.txt");
    let report = dir.path().join("summary.csv");
    let out = run(&[
        "filter",
        "--records",
        p(&rp),
        "--kept-out",
        p(&kept),
        "--format",
        "csv",
        "--output",
        p(&report),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&kept).unwrap(), "a\nc\n");
    let csv = std::fs::read_to_string(&report).unwrap();
    assert!(
        csv.starts_with("threshold,n_total,n_kept,n_dropped,kept_fraction\n0,3,2,1,"),
        "{csv}"
    );
}

#[test]
fn formats_follow_the_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "fixture",
        "--writers",
        "2",
        "--samples",
        "10",
        "--out-dir",
        p(dir.path()),
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("file,sha256\nmanifest.jsonl,"));

    let rp = dir.path().join("transcriptions.jsonl");
    let csv = run(&["cer", "--records", p(&rp), "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    assert!(String::from_utf8(csv.stdout)
        .unwrap()
        .starts_with("sample_id,substitutions,insertions,deletions,reference_length\n"));

    let mp = dir.path().join("manifest.jsonl");
    let (train, eval) = (dir.path().join("train.txt"), dir.path().join("eval.txt"));
    let split = run(&[
        "split",
        "--manifest",
        p(&mp),
        "--train-out",
        p(&train),
        "--eval-out",
        p(&eval),
        "--format",
        "markdown",
    ]);
    assert_eq!(split.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&split.stderr).unwrap();
    assert_eq!(err["error"], "InvalidArgument");
}
