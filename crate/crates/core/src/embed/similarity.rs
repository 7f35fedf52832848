use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::vector::{aggregate_embedding, cosine_similarity, SpeakerEmbedding};
use super::EmbedError;
use crate::report::Table;

/// Cosine similarities between per-speaker mean embeddings of two sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn get(&self, row: &str, col: &str) -> Option<f64> {
        let i = self.row_labels.iter().position(|l| l == row)?;
        let j = self.col_labels.iter().position(|l| l == col)?;
        Some(self.values[i][j])
    }

    /// Labeled table: an empty corner cell, column labels across the top
    /// and one row per row label.
    pub fn to_table(&self) -> Table {
        let mut header = vec![String::new()];
        header.extend(self.col_labels.iter().cloned());
        let mut t = Table::new(header);
        for (label, row) in self.row_labels.iter().zip(&self.values) {
            let mut cells = vec![label.clone()];
            cells.extend(row.iter().map(|v| format!("{v:.6}")));
            t.push(cells);
        }
        t
    }
}

pub fn group_by_speaker(embeddings: &[SpeakerEmbedding]) -> BTreeMap<String, Vec<Vec<f64>>> {
    let mut out: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    for e in embeddings {
        out.entry(e.speaker_id.clone()).or_default().push(e.vector().to_vec());
    }
    out
}

fn speaker_means(set: &BTreeMap<String, Vec<Vec<f64>>>) -> Result<Vec<(String, Vec<f64>)>, EmbedError> {
    set.iter()
        .map(|(spk, vs)| {
            if vs.is_empty() {
                return Err(EmbedError::EmptySpeaker(spk.clone()));
            }
            Ok((spk.clone(), aggregate_embedding(vs)?))
        })
        .collect()
}

/// Labels come out in sorted speaker order. Rows are filled in parallel.
pub fn cross_similarity(
    set_a: &BTreeMap<String, Vec<Vec<f64>>>,
    set_b: &BTreeMap<String, Vec<Vec<f64>>>,
) -> Result<SimilarityMatrix, EmbedError> {
    let a = speaker_means(set_a)?;
    let b = speaker_means(set_b)?;
    let values = a
        .par_iter()
        .map(|(_, va)| b.iter().map(|(_, vb)| cosine_similarity(va, vb)).collect())
        .collect::<Result<Vec<Vec<f64>>, _>>()?;
    Ok(SimilarityMatrix {
        row_labels: a.into_iter().map(|(l, _)| l).collect(),
        col_labels: b.into_iter().map(|(l, _)| l).collect(),
        values,
    })
}
