//! Embedding text files: one record per line, `utterance_id speaker_id`
//! followed by the vector components, whitespace separated. Lines starting
//! with `#` and blank lines are ignored.

use std::io::{BufRead, Write};

use super::vector::{EmbeddingSource, SpeakerEmbedding, EMBEDDING_DIM};
use super::EmbedError;

/// Vectors are L2-normalized on import.
pub fn read_embeddings<R: BufRead>(reader: R, source: EmbeddingSource) -> Result<Vec<SpeakerEmbedding>, EmbedError> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| EmbedError::Parse { line: n + 1, message };
        let mut fields = line.split_whitespace();
        let utt = fields.next().expect("non-empty line");
        let spk = fields.next().ok_or_else(|| parse_err("missing speaker id".into()))?;
        let vector = fields
            .map(|f| f.parse::<f64>().map_err(|e| parse_err(format!("`{f}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if vector.len() != EMBEDDING_DIM {
            return Err(parse_err(format!(
                "expected {EMBEDDING_DIM} components, got {}",
                vector.len()
            )));
        }
        let e = SpeakerEmbedding::new(vector, spk, utt, source).map_err(|e| parse_err(e.to_string()))?;
        out.push(e);
    }
    Ok(out)
}

pub fn write_embeddings<W: Write>(mut w: W, embeddings: &[SpeakerEmbedding]) -> std::io::Result<()> {
    for e in embeddings {
        write!(w, "{} {}", e.utterance_id, e.speaker_id)?;
        for x in e.vector() {
            write!(w, " {x}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}
