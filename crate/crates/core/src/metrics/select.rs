use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use super::MetricsError;
use crate::corpus::{speaker_stats, CorpusManifest};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeakerSelection {
    pub seed: u64,
    pub top_k: usize,
    /// The `top_k` speakers with the most audio, as `(id, minutes)`.
    pub candidates: Vec<(String, f64)>,
    /// Sampled speakers, in candidate rank order.
    pub selected: Vec<String>,
}

/// Ranks speakers by total minutes (descending, ties by id), keeps the
/// first `top_k`, then samples `n_select` of them without replacement.
pub fn select_eval_speakers(
    m: &CorpusManifest,
    top_k: usize,
    n_select: usize,
    seed: u64,
) -> Result<SpeakerSelection, MetricsError> {
    let (mut stats, _) = speaker_stats(m);
    if n_select > top_k || n_select > stats.len() {
        return Err(MetricsError::InsufficientSpeakers {
            needed: n_select,
            got: stats.len().min(top_k),
        });
    }
    stats.sort_by(|a, b| {
        b.total_minutes
            .total_cmp(&a.total_minutes)
            .then_with(|| a.speaker_id.cmp(&b.speaker_id))
    });
    stats.truncate(top_k);

    // partial Fisher-Yates over candidate ranks
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut ranks: Vec<usize> = (0..stats.len()).collect();
    for i in 0..n_select {
        let j = rng.random_range(i..ranks.len());
        ranks.swap(i, j);
    }
    let mut picked = ranks[..n_select].to_vec();
    picked.sort_unstable();

    Ok(SpeakerSelection {
        seed,
        top_k,
        selected: picked.iter().map(|&r| stats[r].speaker_id.clone()).collect(),
        candidates: stats.into_iter().map(|s| (s.speaker_id, s.total_minutes)).collect(),
    })
}
