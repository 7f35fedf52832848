use std::io::{BufRead, Read};

use serde::{Deserialize, Serialize};

use super::mos::summarize;
use super::{MetricsError, MosResult};
use crate::report::{fmt2, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub label_a: String,
    pub label_b: String,
    pub mos_a: MosResult,
    pub mos_b: MosResult,
    /// `mos_a.mean - mos_b.mean`.
    pub difference: f64,
}

pub fn summarize_scores(scores: &[f64], label: &str) -> Result<MosResult, MetricsError> {
    summarize(scores, None).ok_or_else(|| MetricsError::EmptySet(label.to_owned()))
}

pub fn compare_score_sets(
    a: &[f64],
    b: &[f64],
    label_a: &str,
    label_b: &str,
) -> Result<ComparisonReport, MetricsError> {
    let mos_a = summarize_scores(a, label_a)?;
    let mos_b = summarize_scores(b, label_b)?;
    Ok(ComparisonReport {
        label_a: label_a.to_owned(),
        label_b: label_b.to_owned(),
        difference: mos_a.mean - mos_b.mean,
        mos_a,
        mos_b,
    })
}

/// A published or externally computed score summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub label: String,
    pub n: usize,
    pub mean: f64,
    pub ci95_halfwidth: Option<f64>,
}

impl From<&ScoreSummary> for MosResult {
    fn from(s: &ScoreSummary) -> Self {
        MosResult {
            category: None,
            mean: s.mean,
            ci95_halfwidth: s.ci95_halfwidth,
            n: s.n,
            approximate: false,
        }
    }
}

pub fn comparison_from_summaries(a: &ScoreSummary, b: &ScoreSummary) -> ComparisonReport {
    ComparisonReport {
        label_a: a.label.clone(),
        label_b: b.label.clone(),
        mos_a: a.into(),
        mos_b: b.into(),
        difference: a.mean - b.mean,
    }
}

/// `Samples | <a> MOS | <b> MOS | Difference`.
pub fn comparison_table(r: &ComparisonReport) -> Table {
    let mut t = Table::new([
        "Samples".to_owned(),
        format!("{} MOS", r.label_a),
        format!("{} MOS", r.label_b),
        "Difference".to_owned(),
    ]);
    let samples = if r.mos_a.n == r.mos_b.n {
        r.mos_a.n.to_string()
    } else {
        format!("{}/{}", r.mos_a.n, r.mos_b.n)
    };
    t.push([samples, r.mos_a.display(), r.mos_b.display(), fmt2(r.difference)]);
    t
}

/// One score per line; blank and `#` lines are skipped. A CSV line keeps
/// its last field, so `clip_id,score` files work too.
pub fn read_scores<R: BufRead>(reader: R) -> Result<Vec<f64>, MetricsError> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            // tolerate a header row
            Err(_) if out.is_empty() && n == 0 => {}
            _ => {
                return Err(MetricsError::Parse {
                    line: n + 1,
                    message: format!("bad score `{field}`"),
                })
            }
        }
    }
    Ok(out)
}

/// CSV with header `label,n,mean,ci95_halfwidth`; an empty interval cell
/// means none was reported.
pub fn read_score_summaries<R: Read>(r: R) -> Result<Vec<ScoreSummary>, MetricsError> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}
