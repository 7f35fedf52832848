//! Transcript parsing and annotation-tag extraction.

use std::fmt;

use regex::Regex;
use serde::{Deserialize, Serialize};

/// Kinds of annotation markup found in child-speech transcripts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagKind {
    Noise,
    Breath,
    Indiscernible,
    /// `(())` markers: the transcriber could not make out anything.
    Unparseable,
    /// A truncated word such as `kolome-`.
    PartialWord,
    /// Any other `<...>` tag; stripped, never rejected.
    Other(String),
}

impl TagKind {
    pub fn is_noise(&self) -> bool {
        matches!(self, TagKind::Noise | TagKind::Breath)
    }
}

impl fmt::Display for TagKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagKind::Noise => f.write_str("noise"),
            TagKind::Breath => f.write_str("breath"),
            TagKind::Indiscernible => f.write_str("indiscernible"),
            TagKind::Unparseable => f.write_str("unparseable"),
            TagKind::PartialWord => f.write_str("partial_word"),
            TagKind::Other(name) => write!(f, "other:{name}"),
        }
    }
}

/// A single pattern in the tag taxonomy.
#[derive(Debug, Clone)]
pub struct TagRule {
    pub kind: TagKind,
    pub pattern: Regex,
}

impl TagRule {
    pub fn new(kind: TagKind, pattern: &str) -> Result<Self, regex::Error> {
        Ok(Self {
            kind,
            pattern: Regex::new(pattern)?,
        })
    }
}

/// Ordered set of tag rules. Rules are applied in order, so more specific
/// patterns must come before catch-alls.
#[derive(Debug, Clone)]
pub struct TagTaxonomy {
    rules: Vec<TagRule>,
    catch_all_angle: Option<Regex>,
    strip_partial_words: bool,
}

impl Default for TagTaxonomy {
    fn default() -> Self {
        let rules = vec![
            TagRule::new(TagKind::Noise, r"(?i)<noise>").unwrap(),
            TagRule::new(TagKind::Breath, r"(?i)<breath>").unwrap(),
            TagRule::new(TagKind::Indiscernible, r"(?i)<indiscernible>").unwrap(),
            TagRule::new(TagKind::Unparseable, r"\(\(\s*\)\)").unwrap(),
        ];
        Self {
            rules,
            catch_all_angle: Some(Regex::new(r"<([^<>\s]+)>").unwrap()),
            strip_partial_words: true,
        }
    }
}

impl TagTaxonomy {
    /// A taxonomy with no rules at all; transcripts pass through unchanged
    /// apart from whitespace collapsing.
    pub fn empty() -> Self {
        Self {
            rules: Vec::new(),
            catch_all_angle: None,
            strip_partial_words: false,
        }
    }

    pub fn with_rule(mut self, rule: TagRule) -> Self {
        self.rules.push(rule);
        self
    }

    pub fn rules(&self) -> &[TagRule] {
        &self.rules
    }

    pub fn parse(&self, raw: &str) -> Transcript {
        let mut tags = Vec::new();
        let mut text = raw.to_owned();

        for rule in &self.rules {
            let n = rule.pattern.find_iter(&text).count();
            if n > 0 {
                tags.extend(std::iter::repeat_n(rule.kind.clone(), n));
                text = rule.pattern.replace_all(&text, " ").into_owned();
            }
        }
        if let Some(re) = &self.catch_all_angle {
            for cap in re.captures_iter(&text) {
                tags.push(TagKind::Other(cap[1].to_ascii_lowercase()));
            }
            text = re.replace_all(&text, " ").into_owned();
        }

        let mut words = Vec::new();
        for word in text.split_whitespace() {
            if self.strip_partial_words && is_partial_word(word) {
                tags.push(TagKind::PartialWord);
            } else {
                words.push(word);
            }
        }
        let clean_text = words.join(" ");
        Transcript {
            raw_text: raw.to_owned(),
            token_count: words.len(),
            clean_text,
            tags,
        }
    }
}

fn is_partial_word(word: &str) -> bool {
    word.len() > 1
        && word.ends_with('-')
        && word
            .trim_end_matches('-')
            .chars()
            .next_back()
            .is_some_and(char::is_alphanumeric)
}

/// A parsed transcript: raw text, tag-free text, and the tags that were
/// removed (with multiplicity).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub raw_text: String,
    pub clean_text: String,
    pub tags: Vec<TagKind>,
    pub token_count: usize,
}

impl Transcript {
    pub fn has_tag(&self, pred: impl Fn(&TagKind) -> bool) -> bool {
        self.tags.iter().any(pred)
    }

    pub fn count_tag(&self, kind: &TagKind) -> usize {
        self.tags.iter().filter(|t| *t == kind).count()
    }
}

/// Parse with the default taxonomy.
pub fn parse_transcript(raw: &str) -> Transcript {
    TagTaxonomy::default().parse(raw)
}
