//! Transcribed speech corpora: transcript parsing, usability triage, subset
//! construction and the duration/speaker summaries used to compare a full
//! corpus with its cleaned subset.

mod manifest;
mod rules;
mod scan;
mod stats;
mod transcript;

pub use manifest::{CorpusManifest, ManifestRecord, Utterance};
pub use rules::{
    build_subset, classify_manifest, classify_utterance, read_exclusion_list, RejectReason, SubsetRules,
    UsabilityVerdict,
};
pub use scan::{scan_corpus, ScanOptions, SpeakerFrom};
pub use stats::{
    bucket_durations, speaker_stats, CorpusSummary, DurationBucket, DurationHistogram, SpeakerExtremes, SpeakerStats,
    DEFAULT_BUCKET_EDGES,
};
pub use transcript::{parse_transcript, TagKind, TagRule, TagTaxonomy, Transcript};

use thiserror::Error;

use crate::report::{fmt2, Table};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid bucket edges: {0}")]
    InvalidEdges(String),
    #[error("duplicate utterance id `{0}`")]
    DuplicateId(String),
    #[error("utterance `{id}` has invalid duration {duration_s}")]
    BadDuration { id: String, duration_s: f64 },
    #[error("manifest line {line}: {message}")]
    BadRecord { line: usize, message: String },
    #[error("cannot derive a speaker id for {path}")]
    NoSpeaker { path: String },
    #[error("unreadable audio {path}: {message}")]
    UnreadableAudio { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Duration-range comparison across several manifests: one row per bucket
/// plus a total row, and a count/hours column pair per manifest.
pub fn duration_table(manifests: &[&CorpusManifest], edges: &[f64]) -> Result<Table, CorpusError> {
    let hists = manifests
        .iter()
        .map(|m| bucket_durations(m, edges))
        .collect::<Result<Vec<_>, _>>()?;

    let mut header = vec!["Seconds (range)".to_owned()];
    for m in manifests {
        header.push(format!("{} # of utterances", m.name));
        header.push(format!("{} Duration (in hours)", m.name));
    }
    let mut table = Table::new(header);
    for i in 0..edges.len() {
        let mut row = vec![hists[0].buckets[i].label()];
        for h in &hists {
            row.push(h.buckets[i].utterance_count.to_string());
            row.push(fmt2(h.buckets[i].total_hours));
        }
        table.push(row);
    }
    let mut total = vec!["Total".to_owned()];
    for h in &hists {
        total.push(h.total_count().to_string());
        total.push(fmt2(h.total_hours()));
    }
    table.push(total);
    Ok(table)
}

fn fmt_minutes(minutes: f64) -> String {
    if minutes < 1.0 {
        format!("{:.2} secs", minutes * 60.0)
    } else {
        format!("{minutes:.2} mins")
    }
}

/// Speaker/duration summary across several manifests, one column each.
pub fn summary_table(summaries: &[CorpusSummary]) -> Table {
    let mut header = vec![String::new()];
    header.extend(summaries.iter().map(|s| s.name.clone()));
    let mut table = Table::new(header);

    let row = |label: &str, f: &dyn Fn(&CorpusSummary) -> String| {
        std::iter::once(label.to_owned())
            .chain(summaries.iter().map(f))
            .collect::<Vec<_>>()
    };
    let extreme = |pick: fn(&SpeakerExtremes) -> &(String, f64)| {
        move |s: &CorpusSummary| match &s.extremes {
            Some(e) => {
                let (id, min) = pick(e);
                format!("{id} ({})", fmt_minutes(*min))
            }
            None => "-".to_owned(),
        }
    };

    table.push(row("Speakers", &|s| s.speakers.to_string()));
    table.push(row("Duration (in hrs)", &|s| fmt2(s.total_hours)));
    table.push(row("# of utterances", &|s| s.utterances.to_string()));
    table.push(row("Mean duration per speaker", &|s| {
        fmt_minutes(s.mean_minutes_per_speaker)
    }));
    table.push(row("Speaker with most data", &extreme(|e| &e.most)));
    table.push(row("Speaker with least data", &extreme(|e| &e.least)));
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_formats_seconds_for_small_totals() {
        let m = CorpusManifest::new(
            "tiny",
            vec![
                Utterance::new("a", "013020", "a.wav", 300.0),
                Utterance::new("b", "018216", "b.wav", 10.2),
            ],
        )
        .unwrap();
        let t = summary_table(&[CorpusSummary::of(&m)]);
        assert_eq!(t.rows[0], vec!["Speakers", "2"]);
        assert_eq!(t.rows[4][1], "013020 (5.00 mins)");
        assert_eq!(t.rows[5][1], "018216 (10.20 secs)");
        let empty = summary_table(&[CorpusSummary::of(&CorpusManifest::default())]);
        assert_eq!(empty.rows[4][1], "-");
        assert_eq!(empty.rows[3][1], "0.00 secs");
    }

    #[test]
    fn duration_table_has_total_row() {
        let m = CorpusManifest::new("m", vec![Utterance::new("a", "s", "a.wav", 7200.0)]).unwrap();
        let t = duration_table(&[&m], &DEFAULT_BUCKET_EDGES).unwrap();
        assert_eq!(t.rows.len(), DEFAULT_BUCKET_EDGES.len() + 1);
        assert_eq!(t.rows.last().unwrap(), &vec!["Total", "1", "2.00"]);
        assert_eq!(t.header[1], "m # of utterances");
    }
}
