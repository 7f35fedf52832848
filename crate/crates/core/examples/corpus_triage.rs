//! Triage the bundled fixture corpus and print the duration and speaker
//! tables for the full corpus next to its usable subset.
//!
//!     cargo run --example corpus_triage

use tinyvox::corpus::{
    build_subset, classify_manifest, duration_table, summary_table, CorpusSummary, SubsetRules, DEFAULT_BUCKET_EDGES,
};
use tinyvox::fixtures::fixture_manifest;

fn main() -> tinyvox::Result<()> {
    let corpus = fixture_manifest();
    let rules = SubsetRules::default();
    let classified = classify_manifest(&corpus, &rules);

    for u in &classified.utterances {
        let verdict = u.verdict.as_ref().expect("classified");
        if !verdict.is_usable() {
            let reasons: Vec<String> = verdict.reasons().iter().map(ToString::to_string).collect();
            println!("reject {} ({:.2} s): {}", u.id, u.duration_s, reasons.join(", "));
        }
    }

    let subset = build_subset(&corpus, &rules, "subset");
    println!("\nkept {} of {}\n", subset.len(), corpus.len());
    println!(
        "{}",
        duration_table(&[&corpus, &subset], &DEFAULT_BUCKET_EDGES)?.to_aligned_text()
    );
    let summaries = [CorpusSummary::of(&corpus), CorpusSummary::of(&subset)];
    println!("{}", summary_table(&summaries).to_aligned_text());
    Ok(())
}
