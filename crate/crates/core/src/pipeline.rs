//! End-to-end corpus preparation: scan, triage, subset, audio conversion,
//! text normalization and embedding export in one run.
//!
//! Outputs written to `output_dir`:
//!
//! | file | content |
//! |---|---|
//! | `manifest.jsonl` | every scanned utterance with its verdict |
//! | `subset.jsonl` | usable utterances, audio paths pointing at `audio/` |
//! | `durations.csv` | duration buckets, corpus vs subset |
//! | `summary.csv` | speaker/duration summary, corpus vs subset |
//! | `text.tsv` | `id<TAB>normalized transcript` per subset utterance |
//! | `audio/` | converted (and optionally trimmed) WAV files |
//! | `embeddings.txt` | one baseline embedding per subset utterance |
//! | `run.json` | seed, effective config and the run report |

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audio::{convert_pcm, read_wav, trim_silence, MelConfig, ResamplerConfig, VadConfig};
use crate::corpus::{
    build_subset, classify_manifest, duration_table, read_exclusion_list, scan_corpus, summary_table, CorpusError,
    CorpusManifest, CorpusSummary, RejectReason, ScanOptions, SpeakerFrom, SubsetRules, DEFAULT_BUCKET_EDGES,
};
use crate::embed::{write_embeddings, BaselineEmbedder, Embedder, SpeakerEmbedding};
use crate::error::{Error, Result};
use crate::text::{normalize_text, NormConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbeddingSettings {
    pub enabled: bool,
    pub window_s: f64,
    pub overlap: f64,
    pub mel: MelConfig,
}

impl Default for EmbeddingSettings {
    fn default() -> Self {
        Self {
            enabled: true,
            window_s: 0.8,
            overlap: 0.5,
            mel: MelConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub corpus_root: PathBuf,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Directory level below the corpus root that names the speaker.
    pub speaker_component: usize,
    pub rules: SubsetRules,
    pub exclusion_list: Option<PathBuf>,
    pub bucket_edges: Vec<f64>,
    pub target_rate: u32,
    pub trim: bool,
    pub resampler: ResamplerConfig,
    pub vad: VadConfig,
    pub norm: NormConfig,
    pub embedding: EmbeddingSettings,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            corpus_root: PathBuf::from("corpus"),
            output_dir: PathBuf::from("out"),
            seed: 0,
            speaker_component: 0,
            rules: SubsetRules::default(),
            exclusion_list: None,
            bucket_edges: DEFAULT_BUCKET_EDGES.to_vec(),
            target_rate: 24_000,
            trim: true,
            resampler: ResamplerConfig::default(),
            vad: VadConfig::default(),
            norm: NormConfig::default(),
            embedding: EmbeddingSettings::default(),
        }
    }
}

impl PipelineConfig {
    /// Parses a TOML file. Relative paths inside it are resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: Self = toml::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        rebase(&mut cfg.corpus_root);
        rebase(&mut cfg.output_dir);
        if let Some(p) = cfg.exclusion_list.as_mut() {
            rebase(p);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.corpus_root.is_dir() {
            return Err(Error::Input(format!(
                "corpus root {} is not a directory",
                self.corpus_root.display()
            )));
        }
        if let Some(p) = &self.exclusion_list {
            if !p.is_file() {
                return Err(Error::Input(format!("exclusion list {} does not exist", p.display())));
            }
        }
        let root = self
            .corpus_root
            .canonicalize()
            .map_err(|e| Error::io(&self.corpus_root, e))?;
        let out = absolute(&self.output_dir)?;
        if out.starts_with(&root) {
            return Err(Error::Input("output directory must be outside the corpus root".into()));
        }
        if self.target_rate == 0 {
            return Err(Error::Input("target_rate must be positive".into()));
        }
        Ok(())
    }
}

fn absolute(p: &Path) -> Result<PathBuf> {
    // canonicalize the deepest existing ancestor so that symlinks resolve
    let mut existing = p.to_path_buf();
    let mut tail = Vec::new();
    while !existing.exists() {
        match (existing.file_name(), existing.parent()) {
            (Some(name), Some(parent)) => {
                tail.push(name.to_owned());
                existing = if parent.as_os_str().is_empty() {
                    PathBuf::from(".")
                } else {
                    parent.to_path_buf()
                };
            }
            _ => break,
        }
    }
    let mut abs = existing.canonicalize().map_err(|e| Error::io(&existing, e))?;
    abs.extend(tail.iter().rev());
    Ok(abs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub seed: u64,
    pub corpus: CorpusSummary,
    pub subset: CorpusSummary,
    pub rejections: BTreeMap<RejectReason, usize>,
    pub embedded: usize,
    pub outputs: Vec<PathBuf>,
}

#[derive(Serialize)]
struct RunRecord<'a> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    config: &'a PipelineConfig,
    report: &'a PipelineReport,
}

fn stage(name: &'static str, file: impl Into<String>) -> impl FnOnce(Error) -> Error {
    let file = file.into();
    move |e| Error::Stage {
        stage: name,
        file,
        source: Box::new(e),
    }
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

struct Prepared {
    id: String,
    text: String,
    embedding: Option<SpeakerEmbedding>,
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport> {
    cfg.validate()?;
    let root = &cfg.corpus_root;
    let out = &cfg.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let opts = ScanOptions {
        speaker_from: SpeakerFrom::Component(cfg.speaker_component),
        ..ScanOptions::default()
    };
    let scanned = scan_corpus(root, &opts).map_err(|e| {
        let file = match &e {
            CorpusError::UnreadableAudio { path, .. } => path.clone(),
            CorpusError::NoSpeaker { path } => path.clone(),
            _ => root.display().to_string(),
        };
        stage("scan", file)(e.into())
    })?;

    let mut rules = cfg.rules.clone();
    if let Some(p) = &cfg.exclusion_list {
        let f = File::open(p).map_err(|e| Error::io(p, e))?;
        let ids = read_exclusion_list(std::io::BufReader::new(f))
            .map_err(|e| stage("classify", p.display().to_string())(e.into()))?;
        rules = rules.with_exclusions(ids);
    }
    let classified = classify_manifest(&scanned, &rules);
    let mut subset = build_subset(&classified, &rules, format!("{} subset", classified.name));

    let mut rejections = BTreeMap::new();
    for u in &classified.utterances {
        if let Some(v) = &u.verdict {
            for r in v.reasons() {
                *rejections.entry(*r).or_insert(0) += 1;
            }
        }
    }

    let audio_out = out.join("audio");
    let embedder = BaselineEmbedder {
        mel: cfg.embedding.mel.clone(),
        vad: cfg.vad.clone(),
        resampler: cfg.resampler,
        trim: false,
        window_s: cfg.embedding.window_s,
        overlap: cfg.embedding.overlap,
    };
    let prepared: Vec<Prepared> = subset
        .utterances
        .par_iter()
        .map(|u| -> Result<Prepared> {
            let src = root.join(&u.audio_path);
            let file = src.display().to_string();
            let audio = read_wav(&src).map_err(|e| stage("prep-audio", file.clone())(e.into()))?;
            let mut conv = convert_pcm(&audio, cfg.target_rate, 16, &cfg.resampler)
                .map_err(|e| stage("prep-audio", file.clone())(e.into()))?;
            if cfg.trim {
                conv = trim_silence(&conv, &cfg.vad);
            }
            let dst = audio_out.join(&u.audio_path);
            if let Some(dir) = dst.parent() {
                fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            crate::audio::write_wav16(&dst, &conv)
                .map_err(|e| stage("prep-audio", dst.display().to_string())(e.into()))?;

            let clean = u.transcript.as_ref().map_or("", |t| t.clean_text.as_str());
            let text = normalize_text(clean, &cfg.norm);

            let embedding = if cfg.embedding.enabled {
                Some(
                    embedder
                        .embed(&u.id, &u.speaker_id, &conv)
                        .map_err(|e| stage("embed", file)(e.into()))?,
                )
            } else {
                None
            };
            Ok(Prepared {
                id: u.id.clone(),
                text,
                embedding,
            })
        })
        .collect::<Result<_>>()?;

    for u in &mut subset.utterances {
        u.audio_path = Path::new("audio").join(&u.audio_path).to_string_lossy().into_owned();
    }

    let mut outputs = Vec::new();
    let mut emit = |name: &str, f: &dyn Fn(&mut BufWriter<File>) -> std::io::Result<()>| -> Result<()> {
        let p = out.join(name);
        write_file(&p, |w| f(w))?;
        outputs.push(p);
        Ok(())
    };

    let jsonl = |m: &CorpusManifest| -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        m.write_jsonl(&mut buf).map_err(Error::from)?;
        Ok(buf)
    };
    let manifest_bytes = jsonl(&classified)?;
    let subset_bytes = jsonl(&subset)?;
    emit("manifest.jsonl", &|w| w.write_all(&manifest_bytes))?;
    emit("subset.jsonl", &|w| w.write_all(&subset_bytes))?;

    let durations = duration_table(&[&classified, &subset], &cfg.bucket_edges).map_err(Error::from)?;
    emit("durations.csv", &|w| w.write_all(durations.to_csv().as_bytes()))?;
    let (corpus_summary, subset_summary) = (CorpusSummary::of(&classified), CorpusSummary::of(&subset));
    let summary = summary_table(&[corpus_summary.clone(), subset_summary.clone()]);
    emit("summary.csv", &|w| w.write_all(summary.to_csv().as_bytes()))?;

    emit("text.tsv", &|w| {
        for p in &prepared {
            writeln!(w, "{}\t{}", p.id, p.text)?;
        }
        Ok(())
    })?;

    let embeddings: Vec<SpeakerEmbedding> = prepared.iter().filter_map(|p| p.embedding.clone()).collect();
    if cfg.embedding.enabled {
        emit("embeddings.txt", &|w| {
            writeln!(w, "# seed={}", cfg.seed)?;
            write_embeddings(&mut *w, &embeddings)
        })?;
    }

    let mut report = PipelineReport {
        seed: cfg.seed,
        corpus: corpus_summary,
        subset: subset_summary,
        rejections,
        embedded: embeddings.len(),
        outputs,
    };
    report.outputs.push(out.join("run.json"));
    let record = RunRecord {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        config: cfg,
        report: &report,
    };
    let json = serde_json::to_vec_pretty(&record).map_err(|e| Error::Input(e.to_string()))?;
    write_file(&out.join("run.json"), |w| w.write_all(&json))?;
    Ok(report)
}
