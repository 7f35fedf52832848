use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Category, MetricsError};

pub const RATINGS_HEADER: [&str; 5] = ["evaluator_id", "clip_id", "category", "score", "timestamp"];

/// One listener score. Construct through [`Rating::new`] to validate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rating {
    pub evaluator_id: String,
    pub clip_id: String,
    pub category: Category,
    pub score: u8,
    pub timestamp: String,
}

impl Rating {
    pub fn new(
        evaluator_id: impl Into<String>,
        clip_id: impl Into<String>,
        category: Category,
        score: i64,
        timestamp: impl Into<String>,
    ) -> Result<Self, MetricsError> {
        let r = Self {
            evaluator_id: evaluator_id.into(),
            clip_id: clip_id.into(),
            category,
            score: u8::try_from(score).map_err(|_| MetricsError::BadScore(score))?,
            timestamp: timestamp.into(),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        if !(1..=5).contains(&self.score) {
            return Err(MetricsError::BadScore(self.score.into()));
        }
        if !self.category.is_rateable() {
            return Err(MetricsError::DerivedCategory(self.category));
        }
        Ok(())
    }
}

pub fn write_ratings_csv<W: Write>(w: W, ratings: &[Rating]) -> Result<(), MetricsError> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(RATINGS_HEADER)?;
    for r in ratings {
        out.write_record([
            r.evaluator_id.as_str(),
            r.clip_id.as_str(),
            r.category.code(),
            &r.score.to_string(),
            r.timestamp.as_str(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_ratings_csv<R: Read>(r: R) -> Result<Vec<Rating>, MetricsError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != RATINGS_HEADER {
        return Err(MetricsError::Parse {
            line: 1,
            message: format!("expected header {}", RATINGS_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let score: i64 = field(3).trim().parse().map_err(|_| MetricsError::Parse {
            line,
            message: format!("bad score `{}`", field(3)),
        })?;
        let category: Category = field(2).parse()?;
        let rating = Rating::new(field(0), field(1), category, score, field(4)).map_err(|e| MetricsError::Parse {
            line,
            message: e.to_string(),
        })?;
        out.push(rating);
    }
    Ok(out)
}
