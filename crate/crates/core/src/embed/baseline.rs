//! Deterministic stand-in speaker embedder built from log-mel statistics,
//! and the windowed embedding pipeline shared by all embedders.

use std::collections::HashMap;

use crate::audio::{
    log_mel, resample, trim_silence, AudioBuffer, MelConfig, MelSpectrogram, ResamplerConfig, VadConfig,
};

use super::vector::{aggregate_embedding, l2_normalize, EmbeddingSource, SpeakerEmbedding, EMBEDDING_DIM};
use super::windows::plan_inference_windows;
use super::EmbedError;

/// Per-channel mean, standard deviation and mean absolute frame-to-frame
/// delta, concatenated, zero-padded to [`EMBEDDING_DIM`] and L2-normalized.
pub fn baseline_embed(mel: &MelSpectrogram) -> Result<Vec<f64>, EmbedError> {
    let (n, m) = (mel.n_frames(), mel.n_mels());
    if n < 2 {
        return Err(EmbedError::TooShort { frames: n });
    }
    if 3 * m > EMBEDDING_DIM {
        return Err(EmbedError::InvalidWindow(format!(
            "{m} mel channels do not fit a {EMBEDDING_DIM}-dim baseline embedding"
        )));
    }
    let mut mean = vec![0.0; m];
    for f in mel.frames() {
        mean.iter_mut().zip(f).for_each(|(a, x)| *a += x);
    }
    mean.iter_mut().for_each(|a| *a /= n as f64);

    let mut var = vec![0.0; m];
    for f in mel.frames() {
        var.iter_mut()
            .zip(f.iter().zip(&mean))
            .for_each(|(v, (x, mu))| *v += (x - mu).powi(2));
    }
    let std: Vec<f64> = var.iter().map(|v| (v / n as f64).sqrt()).collect();

    let mut delta = vec![0.0; m];
    for i in 1..n {
        let (prev, cur) = (mel.frame(i - 1), mel.frame(i));
        delta
            .iter_mut()
            .zip(prev.iter().zip(cur))
            .for_each(|(d, (a, b))| *d += (b - a).abs());
    }
    delta.iter_mut().for_each(|d| *d /= (n - 1) as f64);

    let mut v = Vec::with_capacity(EMBEDDING_DIM);
    v.extend(mean);
    v.extend(std);
    v.extend(delta);
    v.resize(EMBEDDING_DIM, 0.0);
    l2_normalize(v)
}

/// Produces an utterance embedding from audio.
pub trait Embedder {
    fn embed(&self, utterance_id: &str, speaker_id: &str, audio: &AudioBuffer) -> Result<SpeakerEmbedding, EmbedError>;
}

/// Resample to the analysis rate, optionally trim silence, cut overlapping
/// windows, embed each with [`baseline_embed`] and average.
#[derive(Debug, Clone)]
pub struct BaselineEmbedder {
    pub mel: MelConfig,
    pub vad: VadConfig,
    pub resampler: ResamplerConfig,
    pub trim: bool,
    pub window_s: f64,
    pub overlap: f64,
}

impl Default for BaselineEmbedder {
    fn default() -> Self {
        Self {
            mel: MelConfig::default(),
            vad: VadConfig::default(),
            resampler: ResamplerConfig::default(),
            trim: true,
            window_s: 0.8,
            overlap: 0.5,
        }
    }
}

impl BaselineEmbedder {
    pub fn partials(&self, audio: &AudioBuffer) -> Result<Vec<Vec<f64>>, EmbedError> {
        let rate = self.mel.source_rate;
        let samples = resample(audio.samples(), audio.sample_rate_hz(), rate, &self.resampler);
        let analysed = AudioBuffer::from_f32(samples, rate)?;
        let analysed = if self.trim {
            trim_silence(&analysed, &self.vad)
        } else {
            analysed
        };
        let plan = plan_inference_windows(analysed.duration_s(), self.window_s, self.overlap)?;
        let win_len = (self.window_s * f64::from(rate)).round() as usize;

        plan.windows
            .iter()
            .map(|&(start, _)| {
                let s = (start * f64::from(rate)).round() as usize;
                let mut chunk: Vec<f32> = analysed.samples()[s.min(analysed.len())..]
                    .iter()
                    .take(win_len)
                    .copied()
                    .collect();
                chunk.resize(win_len, 0.0);
                let mel = log_mel(&AudioBuffer::from_f32(chunk, rate)?, &self.mel)?;
                baseline_embed(&mel)
            })
            .collect()
    }
}

impl Embedder for BaselineEmbedder {
    fn embed(&self, utterance_id: &str, speaker_id: &str, audio: &AudioBuffer) -> Result<SpeakerEmbedding, EmbedError> {
        let vector = aggregate_embedding(&self.partials(audio)?)?;
        SpeakerEmbedding::new(vector, speaker_id, utterance_id, EmbeddingSource::Baseline)
    }
}

/// Embeddings computed elsewhere, looked up by utterance id.
#[derive(Debug, Clone, Default)]
pub struct ImportedEmbeddings {
    by_utterance: HashMap<String, SpeakerEmbedding>,
}

impl ImportedEmbeddings {
    pub fn new(embeddings: impl IntoIterator<Item = SpeakerEmbedding>) -> Self {
        Self {
            by_utterance: embeddings.into_iter().map(|e| (e.utterance_id.clone(), e)).collect(),
        }
    }
}

impl Embedder for ImportedEmbeddings {
    fn embed(
        &self,
        utterance_id: &str,
        _speaker_id: &str,
        _audio: &AudioBuffer,
    ) -> Result<SpeakerEmbedding, EmbedError> {
        self.by_utterance
            .get(utterance_id)
            .cloned()
            .ok_or_else(|| EmbedError::UnknownUtterance(utterance_id.to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::vector::{cosine_similarity, l2_norm};

    fn mel_from(rows: &[Vec<f64>]) -> MelSpectrogram {
        let cfg = MelConfig {
            n_mels: rows[0].len(),
            ..MelConfig::default()
        };
        MelSpectrogram::from_values(rows.len(), rows.concat(), cfg).unwrap()
    }

    #[test]
    fn constant_spectrogram() {
        let mel = mel_from(&vec![vec![-3.0; 40]; 5]);
        let v = baseline_embed(&mel).unwrap();
        assert_eq!(v.len(), EMBEDDING_DIM);
        assert!((l2_norm(&v) - 1.0).abs() < 1e-12);
        assert!(v[40..].iter().all(|&x| x == 0.0));
        // all means equal and negative
        assert!((v[0] + 1.0 / 40f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reversal_invariant() {
        let rows: Vec<Vec<f64>> = (0..7)
            .map(|i| (0..40).map(|j| ((i * 7 + j * 3) % 11) as f64 - 20.0).collect())
            .collect();
        let mut rev = rows.clone();
        rev.reverse();
        let (a, b) = (
            baseline_embed(&mel_from(&rows)).unwrap(),
            baseline_embed(&mel_from(&rev)).unwrap(),
        );
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn two_constant_levels_closed_form() {
        // Means only: vectors are (c1, .., c1, 0...) and a mixed level pattern.
        let a = mel_from(&vec![vec![-2.0; 40]; 3]);
        let mut row = vec![-2.0; 40];
        row[20..].iter_mut().for_each(|x| *x = -6.0);
        let b = mel_from(&vec![row; 3]);
        let s = cosine_similarity(&baseline_embed(&a).unwrap(), &baseline_embed(&b).unwrap()).unwrap();
        // (20*2*2 + 20*2*6) / (sqrt(40*4) * sqrt(20*4 + 20*36))
        let expected = (80.0 + 240.0) / ((160.0f64).sqrt() * (800.0f64).sqrt());
        assert!((s - expected).abs() < 1e-12);
    }

    #[test]
    fn too_short() {
        let mel = mel_from(&[vec![1.0; 40]]);
        assert!(matches!(baseline_embed(&mel), Err(EmbedError::TooShort { frames: 1 })));
    }

    #[test]
    fn audio_pipeline_is_deterministic_and_speaker_sensitive() {
        let tone = |f: f32, rate: u32, secs: f32| -> AudioBuffer {
            let n = (rate as f32 * secs) as usize;
            let x = (0..n)
                .map(|i| 0.5 * (2.0 * std::f32::consts::PI * f * i as f32 / rate as f32).sin())
                .collect();
            AudioBuffer::from_f32(x, rate).unwrap()
        };
        let emb = BaselineEmbedder::default();
        let a1 = emb.embed("a1", "A", &tone(300.0, 24000, 2.0)).unwrap();
        let a2 = emb.embed("a1", "A", &tone(300.0, 24000, 2.0)).unwrap();
        assert_eq!(a1, a2);
        let short = emb.embed("a3", "A", &tone(300.0, 16000, 0.5)).unwrap();
        let other = emb.embed("b", "B", &tone(2500.0, 16000, 2.0)).unwrap();
        let same = cosine_similarity(a1.vector(), short.vector()).unwrap();
        let diff = cosine_similarity(a1.vector(), other.vector()).unwrap();
        assert!(same > diff, "same {same} diff {diff}");

        let silent = AudioBuffer::from_f32(vec![0.0; 16000], 16000).unwrap();
        assert!(matches!(emb.embed("s", "S", &silent), Err(EmbedError::EmptyAudio)));
    }

    #[test]
    fn imported_lookup() {
        let e = SpeakerEmbedding::new(vec![1.0; EMBEDDING_DIM], "s", "u1", EmbeddingSource::External).unwrap();
        let imp = ImportedEmbeddings::new([e.clone()]);
        let dummy = AudioBuffer::from_f32(vec![], 16000).unwrap();
        assert_eq!(imp.embed("u1", "s", &dummy).unwrap(), e);
        assert!(matches!(
            imp.embed("u2", "s", &dummy),
            Err(EmbedError::UnknownUtterance(_))
        ));
    }
}
