use std::collections::BTreeMap;

use tinyvox::metrics::{score_corpus, wer, wer_table, WerSummary};
use tinyvox::text::NormConfig;

fn main() -> tinyvox::Result<()> {
    let r = wer(&["the", "cat", "sat"], &["the", "bat", "sat", "down"]);
    println!(
        "S={} D={} I={} N={} WER={:?}",
        r.substitutions, r.deletions, r.insertions, r.ref_len, r.wer
    );

    let refs: BTreeMap<String, String> = [
        ("u1", "The sun is a star."),
        ("u2", "Plants need 2 things: light and water."),
        ("u3", "Dr. Lee measured the magnet."),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_owned(), v.to_owned()))
    .collect();
    let natural: BTreeMap<String, String> = [
        ("u1", "the sun is a star"),
        ("u2", "plants need two things light and water"),
        ("u3", "doctor lee measured the magnet"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_owned(), v.to_owned()))
    .collect();
    let synthetic: BTreeMap<String, String> = [
        ("u1", "the son is star"),
        ("u2", "plans need two thing light and water"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_owned(), v.to_owned()))
    .collect();

    let norm = NormConfig::default();
    let rows: Vec<WerSummary> = [("Natural", &natural), ("Synthetic", &synthetic)]
        .into_iter()
        .map(|(label, hyps)| -> tinyvox::Result<WerSummary> {
            let scored = score_corpus(&refs, hyps, &norm)?;
            Ok(WerSummary {
                label: label.into(),
                utterances: scored.per_utterance.len(),
                wer_percent: scored.wer.unwrap_or(0.0) * 100.0,
            })
        })
        .collect::<tinyvox::Result<_>>()?;
    print!("{}", wer_table(&rows).to_csv());
    Ok(())
}
