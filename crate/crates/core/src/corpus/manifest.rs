//! Utterance records and the line-delimited JSON manifest format.
//!
//! One JSON object per line with the keys `id`, `speaker_id`, `audio_path`,
//! `duration_s`, `transcript_raw` (string or null) and `verdict` (object or
//! null). Blank lines are ignored.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::rules::UsabilityVerdict;
use super::transcript::{TagTaxonomy, Transcript};
use super::CorpusError;

#[derive(Debug, Clone, PartialEq)]
pub struct Utterance {
    pub id: String,
    pub speaker_id: String,
    pub audio_path: String,
    pub duration_s: f64,
    pub transcript: Option<Transcript>,
    pub verdict: Option<UsabilityVerdict>,
}

impl Utterance {
    pub fn new(
        id: impl Into<String>,
        speaker_id: impl Into<String>,
        audio_path: impl Into<String>,
        duration_s: f64,
    ) -> Self {
        Self {
            id: id.into(),
            speaker_id: speaker_id.into(),
            audio_path: audio_path.into(),
            duration_s,
            transcript: None,
            verdict: None,
        }
    }

    pub fn with_transcript(mut self, transcript: Transcript) -> Self {
        self.transcript = Some(transcript);
        self
    }
}

/// On-disk form of one manifest line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    pub speaker_id: String,
    pub audio_path: String,
    pub duration_s: f64,
    pub transcript_raw: Option<String>,
    pub verdict: Option<UsabilityVerdict>,
}

impl From<&Utterance> for ManifestRecord {
    fn from(u: &Utterance) -> Self {
        Self {
            id: u.id.clone(),
            speaker_id: u.speaker_id.clone(),
            audio_path: u.audio_path.clone(),
            duration_s: u.duration_s,
            transcript_raw: u.transcript.as_ref().map(|t| t.raw_text.clone()),
            verdict: u.verdict.clone(),
        }
    }
}

impl ManifestRecord {
    pub fn into_utterance(self, taxonomy: &TagTaxonomy) -> Utterance {
        Utterance {
            transcript: self.transcript_raw.as_deref().map(|raw| taxonomy.parse(raw)),
            id: self.id,
            speaker_id: self.speaker_id,
            audio_path: self.audio_path,
            duration_s: self.duration_s,
            verdict: self.verdict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorpusManifest {
    pub name: String,
    pub utterances: Vec<Utterance>,
}

impl CorpusManifest {
    /// Builds a manifest, rejecting duplicate ids and negative durations.
    pub fn new(name: impl Into<String>, utterances: Vec<Utterance>) -> Result<Self, CorpusError> {
        let mut seen = HashSet::with_capacity(utterances.len());
        for u in &utterances {
            if !seen.insert(u.id.as_str()) {
                return Err(CorpusError::DuplicateId(u.id.clone()));
            }
            if !(u.duration_s.is_finite() && u.duration_s >= 0.0) {
                return Err(CorpusError::BadDuration {
                    id: u.id.clone(),
                    duration_s: u.duration_s,
                });
            }
        }
        Ok(Self {
            name: name.into(),
            utterances,
        })
    }

    pub fn len(&self) -> usize {
        self.utterances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utterances.is_empty()
    }

    pub fn speakers(&self) -> BTreeSet<&str> {
        self.utterances.iter().map(|u| u.speaker_id.as_str()).collect()
    }

    pub fn total_seconds(&self) -> f64 {
        self.utterances.iter().map(|u| u.duration_s).sum()
    }

    pub fn total_hours(&self) -> f64 {
        self.total_seconds() / 3600.0
    }

    /// Utterances grouped per speaker, in speaker-id order.
    pub fn by_speaker(&self) -> BTreeMap<&str, Vec<&Utterance>> {
        let mut out: BTreeMap<&str, Vec<&Utterance>> = BTreeMap::new();
        for u in &self.utterances {
            out.entry(u.speaker_id.as_str()).or_default().push(u);
        }
        out
    }

    /// Keeps only utterances that have a transcript.
    pub fn with_transcripts(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            utterances: self
                .utterances
                .iter()
                .filter(|u| u.transcript.is_some())
                .cloned()
                .collect(),
        }
    }

    pub fn get(&self, id: &str) -> Option<&Utterance> {
        self.utterances.iter().find(|u| u.id == id)
    }

    pub fn read_jsonl<R: BufRead>(
        name: impl Into<String>,
        reader: R,
        taxonomy: &TagTaxonomy,
    ) -> Result<Self, CorpusError> {
        let mut utterances = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(CorpusError::Io)?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: ManifestRecord = serde_json::from_str(&line).map_err(|e| CorpusError::BadRecord {
                line: idx + 1,
                message: e.to_string(),
            })?;
            utterances.push(rec.into_utterance(taxonomy));
        }
        Self::new(name, utterances)
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<(), CorpusError> {
        for u in &self.utterances {
            let line = serde_json::to_string(&ManifestRecord::from(u)).expect("manifest records always serialize");
            writeln!(w, "{line}").map_err(CorpusError::Io)?;
        }
        Ok(())
    }

    pub fn load(path: &std::path::Path, taxonomy: &TagTaxonomy) -> Result<Self, CorpusError> {
        let file = std::fs::File::open(path).map_err(CorpusError::Io)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::read_jsonl(name, std::io::BufReader::new(file), taxonomy)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), CorpusError> {
        let file = std::fs::File::create(path).map_err(CorpusError::Io)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_jsonl(&mut w)?;
        w.flush().map_err(CorpusError::Io)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::rules::RejectReason;

    #[test]
    fn duplicate_ids_rejected() {
        let u = Utterance::new("a", "s", "a.wav", 1.0);
        let err = CorpusManifest::new("m", vec![u.clone(), u]).unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateId(id) if id == "a"));
    }

    #[test]
    fn negative_duration_rejected() {
        let u = Utterance::new("a", "s", "a.wav", -1.0);
        assert!(CorpusManifest::new("m", vec![u]).is_err());
    }

    #[test]
    fn jsonl_roundtrip_keeps_transcript_and_verdict() {
        let tax = TagTaxonomy::default();
        let mut u =
            Utterance::new("u1", "013020", "x/u1.wav", 12.5).with_transcript(tax.parse("it's glowing <breath>"));
        u.verdict = Some(UsabilityVerdict::rejected([RejectReason::TooShort]));
        let v = Utterance::new("u2", "013020", "x/u2.wav", 3.0);
        let m = CorpusManifest::new("m", vec![u, v]).unwrap();

        let mut buf = Vec::new();
        m.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text
            .lines()
            .next()
            .unwrap()
            .contains("\"transcript_raw\":\"it's glowing <breath>\""));
        assert!(text.lines().nth(1).unwrap().contains("\"transcript_raw\":null"));

        let back = CorpusManifest::read_jsonl("m", &buf[..], &tax).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn bad_line_reports_line_number() {
        let input = b"\n{\"id\":1}\n";
        let err = CorpusManifest::read_jsonl("m", &input[..], &TagTaxonomy::default()).unwrap_err();
        assert!(matches!(err, CorpusError::BadRecord { line: 2, .. }));
    }
}
