use std::collections::BTreeMap;
use std::io::{BufRead, Read};

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::report::{fmt2, Table};
use crate::text::{normalize_text, NormConfig};

/// Edit counts from a minimal word alignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WerReport {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub ref_len: usize,
    /// `None` when the reference is empty but the hypothesis is not.
    pub wer: Option<f64>,
}

impl WerReport {
    pub fn edits(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }
}

/// Word-level Levenshtein alignment with unit costs. Among alignments of
/// minimal cost the one with the fewest substitutions wins, then the one
/// with the fewest deletions.
pub fn wer<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> WerReport {
    let (n, m) = (reference.len(), hypothesis.len());
    // (cost, substitutions, deletions), compared lexicographically
    let mut prev: Vec<(usize, usize, usize)> = (0..=m).map(|j| (j, 0, 0)).collect();
    let mut cur = vec![(0, 0, 0); m + 1];
    for i in 1..=n {
        cur[0] = (i, 0, i);
        for j in 1..=m {
            let (c, s, d) = prev[j - 1];
            let diag = if reference[i - 1] == hypothesis[j - 1] {
                (c, s, d)
            } else {
                (c + 1, s + 1, d)
            };
            let (c, s, d) = prev[j];
            let del = (c + 1, s, d + 1);
            let (c, s, d) = cur[j - 1];
            let ins = (c + 1, s, d);
            cur[j] = diag.min(del).min(ins);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let (cost, s, d) = prev[m];
    WerReport {
        substitutions: s,
        deletions: d,
        insertions: cost - s - d,
        ref_len: n,
        wer: match (n, cost) {
            (0, 0) => Some(0.0),
            (0, _) => None,
            _ => Some(cost as f64 / n as f64),
        },
    }
}

/// Token-weighted corpus WER: total edits over total reference words.
pub fn corpus_wer<'a>(reports: impl IntoIterator<Item = &'a WerReport>) -> Option<f64> {
    let (edits, words) = reports
        .into_iter()
        .fold((0usize, 0usize), |(e, w), r| (e + r.edits(), w + r.ref_len));
    (words > 0).then(|| edits as f64 / words as f64)
}

/// Reads `utterance_id transcript...` lines. Blank and `#` lines are
/// skipped; an id with no text maps to an empty transcript.
pub fn read_transcript_lines<R: BufRead>(reader: R) -> Result<BTreeMap<String, String>, MetricsError> {
    let mut out = BTreeMap::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, text) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        if out.insert(id.to_owned(), text.trim().to_owned()).is_some() {
            return Err(MetricsError::Parse {
                line: n + 1,
                message: format!("duplicate utterance id `{id}`"),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusWer {
    pub per_utterance: Vec<(String, WerReport)>,
    pub wer: Option<f64>,
}

/// Scores every reference utterance after normalizing both sides. A
/// reference without a hypothesis is scored against an empty hypothesis;
/// a hypothesis without a reference is an error.
pub fn score_corpus(
    refs: &BTreeMap<String, String>,
    hyps: &BTreeMap<String, String>,
    norm: &NormConfig,
) -> Result<CorpusWer, MetricsError> {
    if let Some(extra) = hyps.keys().find(|k| !refs.contains_key(*k)) {
        return Err(MetricsError::Parse {
            line: 0,
            message: format!("hypothesis `{extra}` has no reference"),
        });
    }
    let words = |s: &str| -> Vec<String> { normalize_text(s, norm).split_whitespace().map(str::to_owned).collect() };
    let per_utterance: Vec<(String, WerReport)> = refs
        .iter()
        .map(|(id, r)| {
            let h = hyps.get(id).map(String::as_str).unwrap_or("");
            (id.clone(), wer(&words(r), &words(h)))
        })
        .collect();
    let wer = corpus_wer(per_utterance.iter().map(|(_, r)| r));
    Ok(CorpusWer { per_utterance, wer })
}

/// One row of a WER summary table; `wer_percent` is WER x 100.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WerSummary {
    pub label: String,
    pub utterances: usize,
    pub wer_percent: f64,
}

/// CSV with header `label,utterances,wer_percent`.
pub fn read_wer_summaries<R: Read>(r: R) -> Result<Vec<WerSummary>, MetricsError> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

pub fn wer_table(rows: &[WerSummary]) -> Table {
    let mut t = Table::new(["Data type", "# of Utterances", "WER"]);
    for r in rows {
        t.push([r.label.clone(), r.utterances.to_string(), fmt2(r.wer_percent)]);
    }
    t
}
