//! Writes the fixture corpus to a scratch directory and runs the whole
//! preparation pipeline over it. Pass a directory to keep the outputs.

use std::path::PathBuf;

use tinyvox::fixtures::write_fixture_corpus;
use tinyvox::pipeline::{run_pipeline, PipelineConfig};

fn main() -> tinyvox::Result<()> {
    let scratch = tempfile::tempdir().expect("temp dir");
    let base = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| scratch.path().to_owned());
    let corpus = base.join("corpus");
    write_fixture_corpus(&corpus, 16_000)?;

    let cfg = PipelineConfig {
        corpus_root: corpus,
        output_dir: base.join("prepared"),
        seed: 42,
        ..PipelineConfig::default()
    };
    let report = run_pipeline(&cfg)?;
    println!(
        "{} utterances, {} usable, {} embedded",
        report.corpus.utterances, report.subset.utterances, report.embedded
    );
    for (reason, n) in &report.rejections {
        println!("  {reason}: {n}");
    }
    for p in &report.outputs {
        println!("wrote {}", p.display());
    }
    Ok(())
}
