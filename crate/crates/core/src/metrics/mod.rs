//! Objective and subjective evaluation metrics: word error rate, MOS with
//! t-based confidence intervals, the listening-test rubric, evaluation
//! speaker selection and paired score-set comparison.

mod compare;
mod mos;
mod ratings;
mod rubric;
mod select;
mod tdist;
mod wer;

pub use compare::{
    compare_score_sets, comparison_from_summaries, comparison_table, read_score_summaries, read_scores,
    summarize_scores, ComparisonReport, ScoreSummary,
};
pub use mos::{aggregate_mos, category_table, mos_grid_table, overall_consistency, MosResult, MosRow};
pub use ratings::{read_ratings_csv, write_ratings_csv, Rating, RATINGS_HEADER};
pub use rubric::{bundled_rubric, phase_categories, Category, RubricCategory};
pub use select::{select_eval_speakers, SpeakerSelection};
pub use tdist::t975;
pub use wer::{
    corpus_wer, read_transcript_lines, read_wer_summaries, score_corpus, wer, wer_table, CorpusWer, WerReport,
    WerSummary,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("no ratings for category {0}")]
    EmptyCategory(Category),
    #[error("empty score set `{0}`")]
    EmptySet(String),
    #[error("score {0} outside 1..=5")]
    BadScore(i64),
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("category {0} is derived and cannot be rated directly")]
    DerivedCategory(Category),
    #[error("need {needed} speakers, manifest has {got}")]
    InsufficientSpeakers { needed: usize, got: usize },
    #[error("invalid rubric: {0}")]
    InvalidRubric(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
