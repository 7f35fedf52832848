//! Usability rules and subset construction.

use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::manifest::{CorpusManifest, Utterance};
use super::transcript::TagKind;
use super::CorpusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    NoiseOnly,
    Indiscernible,
    NoPhoneticContent,
    TooShort,
    TooLong,
    MissingTranscript,
    /// Listed in a manual exclusion file.
    ManuallyExcluded,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RejectReason::NoiseOnly => "noise_only",
            RejectReason::Indiscernible => "indiscernible",
            RejectReason::NoPhoneticContent => "no_phonetic_content",
            RejectReason::TooShort => "too_short",
            RejectReason::TooLong => "too_long",
            RejectReason::MissingTranscript => "missing_transcript",
            RejectReason::ManuallyExcluded => "manually_excluded",
        };
        f.write_str(s)
    }
}

/// `usable` holds exactly when `reject_reasons` is empty; the constructors
/// are the only way to build one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawVerdict")]
pub struct UsabilityVerdict {
    usable: bool,
    reject_reasons: BTreeSet<RejectReason>,
}

#[derive(Deserialize)]
struct RawVerdict {
    usable: bool,
    #[serde(default)]
    reject_reasons: BTreeSet<RejectReason>,
}

impl TryFrom<RawVerdict> for UsabilityVerdict {
    type Error = String;

    fn try_from(raw: RawVerdict) -> Result<Self, Self::Error> {
        if raw.usable != raw.reject_reasons.is_empty() {
            return Err("verdict `usable` disagrees with `reject_reasons`".into());
        }
        Ok(Self::rejected(raw.reject_reasons))
    }
}

impl UsabilityVerdict {
    pub fn usable() -> Self {
        Self {
            usable: true,
            reject_reasons: BTreeSet::new(),
        }
    }

    pub fn rejected(reasons: impl IntoIterator<Item = RejectReason>) -> Self {
        let reject_reasons: BTreeSet<_> = reasons.into_iter().collect();
        Self {
            usable: reject_reasons.is_empty(),
            reject_reasons,
        }
    }

    pub fn is_usable(&self) -> bool {
        self.usable
    }

    pub fn reasons(&self) -> &BTreeSet<RejectReason> {
        &self.reject_reasons
    }
}

/// Rules deciding which utterances are kept for TTS training.
///
/// Duration bounds are inclusive on both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SubsetRules {
    pub min_s: f64,
    pub max_s: f64,
    /// Reject transcripts that are empty once tags are removed.
    pub reject_empty_content: bool,
    /// Reject transcripts carrying an `<indiscernible>` tag.
    pub reject_indiscernible: bool,
    #[serde(skip_serializing_if = "BTreeSet::is_empty")]
    pub exclusions: BTreeSet<String>,
}

impl Default for SubsetRules {
    fn default() -> Self {
        Self {
            min_s: 10.0,
            max_s: 15.0,
            reject_empty_content: true,
            reject_indiscernible: true,
            exclusions: BTreeSet::new(),
        }
    }
}

impl SubsetRules {
    /// Keeps every transcribed utterance.
    pub fn permissive() -> Self {
        Self {
            min_s: 0.0,
            max_s: f64::INFINITY,
            reject_empty_content: false,
            reject_indiscernible: false,
            exclusions: BTreeSet::new(),
        }
    }

    pub fn with_exclusions(mut self, ids: impl IntoIterator<Item = String>) -> Self {
        self.exclusions.extend(ids);
        self
    }
}

/// Reads a manual exclusion list: one utterance id per line, `#` starts a
/// comment.
pub fn read_exclusion_list<R: BufRead>(reader: R) -> Result<BTreeSet<String>, CorpusError> {
    let mut out = BTreeSet::new();
    for line in reader.lines() {
        let line = line.map_err(CorpusError::Io)?;
        let id = line.split('#').next().unwrap_or("").trim();
        if !id.is_empty() {
            out.insert(id.to_owned());
        }
    }
    Ok(out)
}

pub fn classify_utterance(u: &Utterance, rules: &SubsetRules) -> UsabilityVerdict {
    let mut reasons = BTreeSet::new();

    match &u.transcript {
        None => {
            reasons.insert(RejectReason::MissingTranscript);
        }
        Some(t) => {
            if rules.reject_empty_content && t.clean_text.is_empty() {
                let unparseable = t.has_tag(|k| *k == TagKind::Unparseable);
                let noisy = t.has_tag(TagKind::is_noise);
                if noisy {
                    reasons.insert(RejectReason::NoiseOnly);
                }
                if unparseable || !noisy {
                    reasons.insert(RejectReason::NoPhoneticContent);
                }
            }
            if rules.reject_indiscernible && t.has_tag(|k| *k == TagKind::Indiscernible) {
                reasons.insert(RejectReason::Indiscernible);
            }
        }
    }
    if u.duration_s < rules.min_s {
        reasons.insert(RejectReason::TooShort);
    }
    if u.duration_s > rules.max_s {
        reasons.insert(RejectReason::TooLong);
    }
    if rules.exclusions.contains(&u.id) {
        reasons.insert(RejectReason::ManuallyExcluded);
    }
    UsabilityVerdict::rejected(reasons)
}

/// Returns a copy of the manifest with every verdict (re)computed.
pub fn classify_manifest(m: &CorpusManifest, rules: &SubsetRules) -> CorpusManifest {
    CorpusManifest {
        name: m.name.clone(),
        utterances: m
            .utterances
            .iter()
            .map(|u| {
                let mut u = u.clone();
                u.verdict = Some(classify_utterance(&u, rules));
                u
            })
            .collect(),
    }
}

/// The usable utterances of `m`, in their original order, with verdicts
/// attached.
pub fn build_subset(m: &CorpusManifest, rules: &SubsetRules, name: impl Into<String>) -> CorpusManifest {
    let classified = classify_manifest(m, rules);
    CorpusManifest {
        name: name.into(),
        utterances: classified
            .utterances
            .into_iter()
            .filter(|u| u.verdict.as_ref().is_some_and(UsabilityVerdict::is_usable))
            .collect(),
    }
}
