//! Speaker embeddings: window planning, partial aggregation, a deterministic
//! baseline embedder, and embedder-agnostic similarity, EER and 2-D
//! projection analyses.

mod baseline;
mod eer;
mod io;
mod project;
mod similarity;
mod vector;
mod windows;

pub use baseline::{baseline_embed, BaselineEmbedder, Embedder, ImportedEmbeddings};
pub use eer::{compute_eer, EerResult};
pub use io::{read_embeddings, write_embeddings};
pub use project::{project_2d, project_points, ProjectionConfig};
pub use similarity::{cross_similarity, group_by_speaker, SimilarityMatrix};
pub use vector::{
    aggregate_embedding, cosine_similarity, l2_norm, l2_normalize, EmbeddingSource, SpeakerEmbedding, EMBEDDING_DIM,
};
pub use windows::{plan_inference_windows, plan_training_partials, WindowPlan};

use thiserror::Error;

use crate::audio::AudioError;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("empty audio")]
    EmptyAudio,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("no partial embeddings to aggregate")]
    NoPartials,
    #[error("degenerate embedding: zero-norm mean")]
    DegenerateEmbedding,
    #[error("non-finite embedding component")]
    NonFinite,
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("spectrogram too short: {frames} frames, need at least 2")]
    TooShort { frames: usize },
    #[error("insufficient scores: {0}")]
    InsufficientScores(&'static str),
    #[error("need at least 2 points, got {0}")]
    InsufficientPoints(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("speaker `{0}` has no embeddings")]
    EmptySpeaker(String),
    #[error("no embedding for utterance `{0}`")]
    UnknownUtterance(String),
    #[error(transparent)]
    Audio(#[from] AudioError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
