//! Embed synthetic utterances from four "speakers" with the baseline
//! embedder, then compare speaker means across two disjoint sets and
//! project every utterance onto its two principal axes.

use tinyvox::audio::AudioBuffer;
use tinyvox::embed::{cross_similarity, group_by_speaker, project_2d, BaselineEmbedder, Embedder, ProjectionConfig};
use tinyvox::fixtures::synth_voice;

fn main() -> tinyvox::Result<()> {
    let embedder = BaselineEmbedder::default();
    let speakers = [("low", 140.0), ("mid", 210.0), ("high", 290.0), ("squeak", 380.0)];

    let mut set_a = Vec::new();
    let mut set_b = Vec::new();
    for (s, &(name, pitch)) in speakers.iter().enumerate() {
        for k in 0..4u64 {
            let seed = 100 * s as u64 + k;
            let audio = AudioBuffer::from_f32(synth_voice(pitch * (1.0 + 0.02 * k as f64), 2.5, 16_000, seed), 16_000)?;
            let e = embedder.embed(&format!("{name}-{k}"), name, &audio)?;
            if k % 2 == 0 {
                set_a.push(e)
            } else {
                set_b.push(e)
            }
        }
    }

    let matrix = cross_similarity(&group_by_speaker(&set_a), &group_by_speaker(&set_b))?;
    println!("{}", matrix.to_table().to_aligned_text());

    let all: Vec<_> = set_a.iter().chain(&set_b).cloned().collect();
    for (e, (x, y)) in all.iter().zip(project_2d(&all, &ProjectionConfig::default())?) {
        println!("{:<10} {:>9.4} {:>9.4}", e.utterance_id, x, y);
    }
    Ok(())
}
