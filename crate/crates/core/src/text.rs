//! Transcript text normalization for TTS training: abbreviation and numeral
//! expansion, punctuation handling, whitespace collapsing and upper-casing.
//!
//! Annotation tags must be removed beforehand (see [`crate::corpus`]).

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/abbreviations.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PunctuationPolicy {
    /// Remove everything except apostrophes inside words.
    #[default]
    Strip,
    /// Like `Strip`, but keep a `.`, `?` or `!` that ends a token.
    KeepSentenceFinal,
}

/// Case-insensitive abbreviation table. Keys are stored lower-cased.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbbreviationTable(BTreeMap<String, String>);

impl AbbreviationTable {
    pub fn english() -> Self {
        Self::parse(DEFAULT_ABBREVIATIONS.as_bytes()).expect("bundled table parses")
    }

    /// Two columns per line: the key, then whitespace, then the expansion.
    /// `#` lines and blank lines are skipped. Later duplicates of a key
    /// (compared case-insensitively) are an error.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self, String> {
        let mut map = BTreeMap::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| e.to_string())?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, expansion) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| format!("line {}: expected two columns", n + 1))?;
            let expansion = expansion.trim();
            if expansion.is_empty() {
                return Err(format!("line {}: empty expansion", n + 1));
            }
            if map.insert(key.to_lowercase(), expansion.to_owned()).is_some() {
                return Err(format!("line {}: duplicate key `{key}`", n + 1));
            }
        }
        Ok(Self(map))
    }

    pub fn insert(&mut self, key: &str, expansion: &str) {
        self.0.insert(key.to_lowercase(), expansion.to_owned());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(&key.to_lowercase()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormConfig {
    pub abbreviations: AbbreviationTable,
    pub punctuation: PunctuationPolicy,
    pub uppercase: bool,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            abbreviations: AbbreviationTable::english(),
            punctuation: PunctuationPolicy::Strip,
            uppercase: true,
        }
    }
}

const ONES: [&str; 20] = [
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
];
const TENS: [&str; 10] = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
];

fn below_thousand(n: u32, out: &mut Vec<&'static str>) {
    debug_assert!(n < 1000);
    let (h, rest) = (n / 100, n % 100);
    if h > 0 {
        out.push(ONES[h as usize]);
        out.push("hundred");
    }
    if rest >= 20 {
        out.push(TENS[(rest / 10) as usize]);
        if rest % 10 > 0 {
            out.push(ONES[(rest % 10) as usize]);
        }
    } else if rest > 0 || h == 0 {
        out.push(ONES[rest as usize]);
    }
}

/// English words for `0..=999_999`; `None` outside that range.
pub fn number_to_words(n: u64) -> Option<Vec<&'static str>> {
    if n > 999_999 {
        return None;
    }
    let n = n as u32;
    let mut out = Vec::new();
    let (thousands, rest) = (n / 1000, n % 1000);
    if thousands > 0 {
        below_thousand(thousands, &mut out);
        out.push("thousand");
        if rest > 0 {
            below_thousand(rest, &mut out);
        }
    } else {
        below_thousand(rest, &mut out);
    }
    Some(out)
}

fn parse_numeral(s: &str) -> Option<u64> {
    let digits_only = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let grouped = {
        let mut groups = s.split(',');
        let first = groups.next().unwrap_or("");
        s.contains(',')
            && (1..=3).contains(&first.len())
            && first.bytes().all(|b| b.is_ascii_digit())
            && groups.all(|g| g.len() == 3 && g.bytes().all(|b| b.is_ascii_digit()))
    };
    if !(digits_only || grouped) {
        return None;
    }
    let plain: String = s.chars().filter(|c| *c != ',').collect();
    if plain.len() > 7 {
        return None;
    }
    plain.parse().ok().filter(|&n| n <= 999_999)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Splits a token into words made of alphanumerics joined by single
/// internal apostrophes; everything else separates words.
fn split_words(token: &str) -> Vec<String> {
    let chars: Vec<char> = token.chars().collect();
    let mut words = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let inner_apostrophe = c == '\''
            && !cur.is_empty()
            && cur.chars().next_back().is_some_and(is_word_char)
            && chars.get(i + 1).copied().is_some_and(is_word_char);
        if is_word_char(c) || inner_apostrophe {
            cur.push(c);
        } else if !cur.is_empty() {
            words.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    words
}

fn case_token(s: &str, uppercase: bool) -> String {
    if uppercase {
        s.chars()
            .flat_map(char::to_uppercase)
            .filter(|c| !c.is_lowercase())
            .collect()
    } else {
        s.to_owned()
    }
}

pub fn normalize_text(raw: &str, cfg: &NormConfig) -> String {
    let table = &cfg.abbreviations;
    let mut out: Vec<String> = Vec::new();
    let emit = |text: &str, out: &mut Vec<String>| {
        for w in text.split_whitespace() {
            for piece in split_words(&case_token(w, cfg.uppercase)) {
                out.push(piece);
            }
        }
    };

    for tok in raw.split_whitespace() {
        let emitted_before = out.len();
        let tok = case_token(&tok.replace(['\u{2019}', '\u{2018}'], "'"), cfg.uppercase);

        // abbreviation keyed with its trailing period, e.g. "dr.,"
        let core = tok
            .trim_start_matches(|c: char| !is_word_char(c))
            .trim_end_matches(|c: char| !is_word_char(c) && c != '.');
        if core.ends_with('.') {
            if let Some(exp) = table.get(core) {
                emit(exp, &mut out);
                continue;
            }
        }

        let bare = tok.trim_matches(|c: char| !is_word_char(c));
        if let Some(n) = parse_numeral(bare) {
            emit(&number_to_words(n).expect("range checked").join(" "), &mut out);
        } else {
            for word in split_words(&tok) {
                if word.bytes().all(|b| b.is_ascii_digit()) {
                    match parse_numeral(&word).and_then(number_to_words) {
                        Some(ws) => emit(&ws.join(" "), &mut out),
                        None => out.push(word),
                    }
                } else if let Some(exp) = table.get(&word) {
                    emit(exp, &mut out);
                } else {
                    out.push(word);
                }
            }
        }

        if cfg.punctuation == PunctuationPolicy::KeepSentenceFinal {
            if let Some(mark) = tok.chars().next_back().filter(|c| matches!(c, '.' | '?' | '!')) {
                let grew = out.len() > emitted_before;
                if let Some(last) = out.last_mut().filter(|_| grew) {
                    let swallowed = mark == '.' && table.get(&format!("{last}.")).is_some();
                    if !swallowed && !last.ends_with(['.', '?', '!']) {
                        last.push(mark);
                    }
                }
            }
        }
    }
    out.join(" ")
}
