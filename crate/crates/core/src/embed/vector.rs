use serde::{Deserialize, Serialize};

use super::EmbedError;

/// Dimension of every speaker embedding handled by this crate.
pub const EMBEDDING_DIM: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingSource {
    /// Imported from an external encoder.
    External,
    /// Computed by the built-in deterministic baseline.
    Baseline,
}

/// A unit-norm utterance-level speaker embedding (d-vector).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeakerEmbedding {
    vector: Vec<f64>,
    pub speaker_id: String,
    pub utterance_id: String,
    pub source: EmbeddingSource,
}

impl SpeakerEmbedding {
    /// L2-normalizes `vector`, which must have [`EMBEDDING_DIM`] entries.
    pub fn new(
        vector: Vec<f64>,
        speaker_id: impl Into<String>,
        utterance_id: impl Into<String>,
        source: EmbeddingSource,
    ) -> Result<Self, EmbedError> {
        if vector.len() != EMBEDDING_DIM {
            return Err(EmbedError::DimensionMismatch {
                expected: EMBEDDING_DIM,
                got: vector.len(),
            });
        }
        Ok(Self {
            vector: l2_normalize(vector)?,
            speaker_id: speaker_id.into(),
            utterance_id: utterance_id.into(),
            source,
        })
    }

    pub fn vector(&self) -> &[f64] {
        &self.vector
    }
}

pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn l2_normalize(mut v: Vec<f64>) -> Result<Vec<f64>, EmbedError> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(EmbedError::NonFinite);
    }
    let n = l2_norm(&v);
    if n == 0.0 || !n.is_finite() {
        return Err(EmbedError::DegenerateEmbedding);
    }
    v.iter_mut().for_each(|x| *x /= n);
    Ok(v)
}

/// Arithmetic mean of the partial embeddings, L2-normalized.
pub fn aggregate_embedding<V: AsRef<[f64]>>(partials: &[V]) -> Result<Vec<f64>, EmbedError> {
    let first = partials.first().ok_or(EmbedError::NoPartials)?.as_ref();
    let dim = first.len();
    let mut mean = vec![0.0; dim];
    for p in partials {
        let p = p.as_ref();
        if p.len() != dim {
            return Err(EmbedError::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        mean.iter_mut().zip(p).for_each(|(m, x)| *m += x);
    }
    let n = partials.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    l2_normalize(mean)
}

/// `a . b / (|a| |b|)`, clamped to `[-1, 1]`.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64, EmbedError> {
    if a.len() != b.len() {
        return Err(EmbedError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let (na, nb) = (l2_norm(a), l2_norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(EmbedError::ZeroVector);
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}
