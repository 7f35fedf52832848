//! Builds a manifest from a directory of WAV files with sibling transcripts.

use std::path::{Component, Path};

use walkdir::WalkDir;

use super::manifest::{CorpusManifest, Utterance};
use super::transcript::TagTaxonomy;
use super::CorpusError;

/// How to derive a speaker id from a file path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeakerFrom {
    /// The n-th directory component below the corpus root.
    Component(usize),
    /// The directory that directly contains the file.
    Parent,
}

impl Default for SpeakerFrom {
    fn default() -> Self {
        SpeakerFrom::Component(0)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    pub speaker_from: SpeakerFrom,
    pub taxonomy: TagTaxonomy,
}

/// Walks `root` for `.wav` files. A transcript is the `.trn` (preferred) or
/// `.txt` file with the same stem next to the audio; its lines are joined
/// with spaces. Durations come from the WAV header only. Utterances are
/// sorted by id and ids (file stems) must be unique.
pub fn scan_corpus(root: &Path, opts: &ScanOptions) -> Result<CorpusManifest, CorpusError> {
    let mut utterances = Vec::new();
    let mut entries: Vec<_> = WalkDir::new(root)
        .follow_links(true)
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(|e| CorpusError::Io(e.into()))?;
    entries.sort_by(|a, b| a.path().cmp(b.path()));

    for entry in entries {
        let path = entry.path();
        if !entry.file_type().is_file() || !path.extension().is_some_and(|e| e.eq_ignore_ascii_case("wav")) {
            continue;
        }
        let rel = path.strip_prefix(root).unwrap_or(path);
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let speaker_id = speaker_for(rel, opts.speaker_from).ok_or_else(|| CorpusError::NoSpeaker {
            path: rel.display().to_string(),
        })?;

        let reader = hound::WavReader::open(path).map_err(|e| CorpusError::UnreadableAudio {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let spec = reader.spec();
        let duration_s = f64::from(reader.duration()) / f64::from(spec.sample_rate);

        let mut u = Utterance::new(id, speaker_id, rel.to_string_lossy(), duration_s);
        if let Some(raw) = read_transcript(path)? {
            u.transcript = Some(opts.taxonomy.parse(&raw));
        }
        utterances.push(u);
    }
    utterances.sort_by(|a, b| a.id.cmp(&b.id));
    let name = root
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".into());
    CorpusManifest::new(name, utterances)
}

fn speaker_for(rel: &Path, from: SpeakerFrom) -> Option<String> {
    let dirs: Vec<String> = rel
        .parent()?
        .components()
        .filter_map(|c| match c {
            Component::Normal(s) => Some(s.to_string_lossy().into_owned()),
            _ => None,
        })
        .collect();
    match from {
        SpeakerFrom::Component(n) => dirs.get(n).cloned(),
        SpeakerFrom::Parent => dirs.last().cloned(),
    }
}

fn read_transcript(audio: &Path) -> Result<Option<String>, CorpusError> {
    for ext in ["trn", "txt"] {
        let p = audio.with_extension(ext);
        if p.is_file() {
            let text = std::fs::read_to_string(&p).map_err(CorpusError::Io)?;
            let joined = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            return Ok(Some(joined));
        }
    }
    Ok(None)
}
