//! Edit distance, CER/WER, HTG_HTR, HTG_OOV and CER filtering.

use htg_eval::data_model::{DatasetManifest, SampleEntry, TranscriptionRecord};
use htg_eval::text::{cer, filter_by_cer, htg_htr, htg_oov, levenshtein, wer};

fn main() -> htg_eval::Result<()> {
    let (d, stats) = levenshtein("kitten", "sitting");
    println!("kitten -> sitting: {d} edits {stats:?}");

    let records = vec![
        TranscriptionRecord::new("t1", "sabotage", "sabotage"),
        TranscriptionRecord::new("t2", "hello", "helo"),
        TranscriptionRecord::new("t3", "quickly", "quickty"),
    ];
    let report = cer(&records)?;
    println!(
        "micro CER {:.4}, macro CER {:.4}",
        report.micro_cer, report.macro_cer
    );
    println!("WER {:.4}", wer(&records)?.micro_cer);

    let mut test = DatasetManifest::new(
        "test",
        vec![
            SampleEntry::new("t1", "sabotage", 0),
            SampleEntry::new("t2", "hello", 1),
            SampleEntry::new("t3", "quickly", 2),
        ],
    )?;
    println!("HTG_HTR = {:.2}%", htg_htr(&records, &test)?);

    let train_lexicon = ["hello".to_string()].into_iter().collect();
    test.tag_vocabulary(&train_lexicon);
    let oov: Vec<_> = records
        .iter()
        .filter(|r| r.reference != "hello")
        .cloned()
        .collect();
    println!("HTG_OOV = {:.2}%", htg_oov(&oov, &test)?);
    match htg_oov(&records, &test) {
        Err(e) => println!("including an in-vocabulary word: {} ({})", e.kind(), e),
        Ok(v) => println!("unexpected value {v}"),
    }

    let kept = filter_by_cer(&records, 0.0)?;
    println!("kept {:?}, dropped {:?}", kept.kept_ids, kept.dropped_ids);
    Ok(())
}
