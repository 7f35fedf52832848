//! Duration histograms and per-speaker statistics.

use serde::Serialize;

use super::manifest::CorpusManifest;
use super::CorpusError;

/// Bucket edges used for the corpus duration comparison table.
pub const DEFAULT_BUCKET_EDGES: [f64; 13] = [
    0.0, 5.0, 10.0, 15.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DurationBucket {
    pub lower_s: f64,
    /// `None` for the open-ended last bucket.
    pub upper_s: Option<f64>,
    pub utterance_count: usize,
    pub total_hours: f64,
}

impl DurationBucket {
    pub fn contains(&self, d: f64) -> bool {
        d >= self.lower_s && self.upper_s.is_none_or(|u| d < u)
    }

    pub fn label(&self) -> String {
        match self.upper_s {
            Some(u) => format!("{}-{}", fmt_edge(self.lower_s), fmt_edge(u)),
            None => format!("{} Above", fmt_edge(self.lower_s)),
        }
    }
}

fn fmt_edge(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DurationHistogram {
    pub buckets: Vec<DurationBucket>,
}

impl DurationHistogram {
    pub fn total_count(&self) -> usize {
        self.buckets.iter().map(|b| b.utterance_count).sum()
    }

    pub fn total_hours(&self) -> f64 {
        self.buckets.iter().map(|b| b.total_hours).sum()
    }
}

/// Counts utterances into `[lower, upper)` buckets; the last bucket is
/// open-ended. The first edge must not exceed zero so that every
/// non-negative duration lands somewhere.
pub fn bucket_durations(m: &CorpusManifest, edges: &[f64]) -> Result<DurationHistogram, CorpusError> {
    if edges.is_empty() {
        return Err(CorpusError::InvalidEdges("no bucket edges given".into()));
    }
    if edges.iter().any(|e| !e.is_finite()) {
        return Err(CorpusError::InvalidEdges("edges must be finite".into()));
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CorpusError::InvalidEdges("edges must be strictly increasing".into()));
    }
    if edges[0] > 0.0 {
        return Err(CorpusError::InvalidEdges("first edge must be <= 0".into()));
    }

    let mut buckets: Vec<DurationBucket> = edges
        .iter()
        .enumerate()
        .map(|(i, &lower_s)| DurationBucket {
            lower_s,
            upper_s: edges.get(i + 1).copied(),
            utterance_count: 0,
            total_hours: 0.0,
        })
        .collect();
    let mut seconds = vec![0.0f64; buckets.len()];

    for u in &m.utterances {
        // partition_point gives the number of edges <= d; d >= edges[0] always
        let idx = edges.partition_point(|&e| e <= u.duration_s).saturating_sub(1);
        buckets[idx].utterance_count += 1;
        seconds[idx] += u.duration_s;
    }
    for (b, s) in buckets.iter_mut().zip(seconds) {
        b.total_hours = s / 3600.0;
    }
    Ok(DurationHistogram { buckets })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeakerStats {
    pub speaker_id: String,
    pub total_minutes: f64,
    pub utterance_count: usize,
    pub mean_utterance_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeakerExtremes {
    pub most: (String, f64),
    pub least: (String, f64),
}

/// Per-speaker totals in speaker-id order, plus the speakers with the most
/// and least data. Ties go to the lexicographically smallest id.
pub fn speaker_stats(m: &CorpusManifest) -> (Vec<SpeakerStats>, Option<SpeakerExtremes>) {
    let stats: Vec<SpeakerStats> = m
        .by_speaker()
        .into_iter()
        .map(|(speaker, utts)| {
            let total_s: f64 = utts.iter().map(|u| u.duration_s).sum();
            let n = utts.len();
            SpeakerStats {
                speaker_id: speaker.to_owned(),
                total_minutes: total_s / 60.0,
                utterance_count: n,
                mean_utterance_s: if n > 0 { total_s / n as f64 } else { 0.0 },
            }
        })
        .collect();

    let mut most: Option<&SpeakerStats> = None;
    let mut least: Option<&SpeakerStats> = None;
    // stats are id-sorted, so strict comparisons keep the smallest id on ties
    for s in &stats {
        if most.is_none_or(|m| s.total_minutes > m.total_minutes) {
            most = Some(s);
        }
        if least.is_none_or(|l| s.total_minutes < l.total_minutes) {
            least = Some(s);
        }
    }
    let extremes = most.zip(least).map(|(m, l)| SpeakerExtremes {
        most: (m.speaker_id.clone(), m.total_minutes),
        least: (l.speaker_id.clone(), l.total_minutes),
    });
    (stats, extremes)
}

/// One column of the corpus comparison summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub name: String,
    pub speakers: usize,
    pub total_hours: f64,
    pub utterances: usize,
    pub mean_minutes_per_speaker: f64,
    pub extremes: Option<SpeakerExtremes>,
}

impl CorpusSummary {
    pub fn of(m: &CorpusManifest) -> Self {
        let (stats, extremes) = speaker_stats(m);
        let total_minutes: f64 = stats.iter().map(|s| s.total_minutes).sum();
        Self {
            name: m.name.clone(),
            speakers: stats.len(),
            total_hours: m.total_hours(),
            utterances: m.len(),
            mean_minutes_per_speaker: if stats.is_empty() {
                0.0
            } else {
                total_minutes / stats.len() as f64
            },
            extremes,
        }
    }
}
