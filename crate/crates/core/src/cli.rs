//! Command-line front end. Every subcommand reads its tunables from the
//! pipeline config file given with `--config`; flags override file values.
//!
//! Exit codes: 0 on success, 1 for bad input (missing files, malformed
//! data, invalid arguments), 2 for internal failures.

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use walkdir::WalkDir;

use crate::audio::{convert_pcm, log_mel, read_wav, trim_silence, write_wav16};
use crate::corpus::{
    build_subset, classify_manifest, duration_table, read_exclusion_list, scan_corpus, summary_table, CorpusManifest,
    CorpusSummary, ScanOptions, SpeakerFrom, TagTaxonomy,
};
use crate::embed::{
    compute_eer, cross_similarity, group_by_speaker, project_2d, read_embeddings, write_embeddings, BaselineEmbedder,
    EmbedError, Embedder, EmbeddingSource, ImportedEmbeddings, ProjectionConfig,
};
use crate::error::{Error, Result};
use crate::fixtures::write_fixture_corpus;
use crate::metrics::{
    aggregate_mos, category_table, compare_score_sets, comparison_from_summaries, comparison_table,
    overall_consistency, read_ratings_csv, read_score_summaries, read_scores, read_transcript_lines,
    read_wer_summaries, score_corpus, select_eval_speakers, wer_table, Category, WerSummary,
};
use crate::pipeline::{run_pipeline, PipelineConfig};
use crate::report::Table;
use crate::service::{serve, ServerConfig};
use crate::text::{normalize_text, AbbreviationTable, PunctuationPolicy};

#[derive(Debug, Parser)]
#[command(
    name = "tinyvox",
    version,
    about = "Child-speech corpus preparation and TTS evaluation"
)]
pub struct Cli {
    /// Seed for every random choice; recorded in outputs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file or directory; stdout when omitted and the command allows it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a manifest from a directory of WAV files and transcripts.
    Scan(ScanArgs),
    /// Attach usability verdicts to every utterance of a manifest.
    Classify(RulesArgs),
    /// Keep only the usable utterances of a manifest.
    Subset(RulesArgs),
    /// Duration-bucket and speaker summary tables for one or more manifests.
    Report(ReportArgs),
    /// Convert WAV files to a target rate and bit depth.
    PrepAudio(PrepAudioArgs),
    /// Normalize transcript lines for TTS training.
    NormText(NormTextArgs),
    /// Log-mel feature file for one WAV.
    Melspec(MelspecArgs),
    /// Speaker embeddings for the utterances of a manifest.
    Embed(EmbedArgs),
    /// Speaker-by-speaker cosine similarity between two embedding sets.
    Similarity(SimilarityArgs),
    /// Equal error rate from genuine and impostor score lists.
    Eer(EerArgs),
    /// Two-dimensional projection of an embedding set.
    Project2d(Project2dArgs),
    /// Word error rate of hypothesis transcripts against references.
    Wer(WerArgs),
    /// Mean opinion scores per rubric category from a ratings file.
    Mos(MosArgs),
    /// Compare two score sets, or two summary rows.
    Compare(CompareArgs),
    /// Seeded choice of evaluation speakers among those with the most data.
    SelectSpeakers(SelectArgs),
    /// Run the listening-test HTTP service.
    Serve(ServeArgs),
    /// Run scan, triage, subset, audio prep, text normalization and
    /// embedding export in one go.
    Pipeline(PipelineArgs),
    /// Write the bundled synthetic 20-utterance corpus.
    Fixture(FixtureArgs),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    pub root: PathBuf,
    /// Directory level below the root that names the speaker.
    #[arg(long, conflicts_with = "speaker_parent")]
    pub speaker_component: Option<usize>,
    /// Use the directory directly containing each file as the speaker.
    #[arg(long)]
    pub speaker_parent: bool,
}

#[derive(Debug, Args)]
pub struct RulesArgs {
    pub manifest: PathBuf,
    /// File of utterance ids to exclude, one per line.
    #[arg(long)]
    pub exclude: Option<PathBuf>,
    #[arg(long)]
    pub min_s: Option<f64>,
    #[arg(long)]
    pub max_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(required = true)]
    pub manifests: Vec<PathBuf>,
    /// Comma-separated bucket edges in seconds.
    #[arg(long, value_delimiter = ',')]
    pub buckets: Option<Vec<f64>>,
    /// Stdout format; with `--out DIR` both formats are written.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PrepAudioArgs {
    /// A WAV file or a directory searched recursively.
    pub input: PathBuf,
    #[arg(long)]
    pub rate: Option<u32>,
    #[arg(long, default_value_t = 16)]
    pub bits: u16,
    /// Remove leading and trailing silence.
    #[arg(long)]
    pub trim: bool,
}

#[derive(Debug, Args)]
pub struct NormTextArgs {
    /// Text file, one transcript per line; stdin when omitted.
    pub input: Option<PathBuf>,
    /// Abbreviation table replacing the bundled one.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Lines start with an utterance id that is passed through.
    #[arg(long)]
    pub ids: bool,
    #[arg(long)]
    pub keep_final_punct: bool,
}

#[derive(Debug, Args)]
pub struct MelspecArgs {
    pub wav: PathBuf,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    pub manifest: PathBuf,
    /// Directory that manifest audio paths are relative to.
    #[arg(long, default_value = ".")]
    pub audio_root: PathBuf,
    /// Compute embeddings with the built-in baseline.
    #[arg(long, conflicts_with = "import")]
    pub baseline: bool,
    /// Take embeddings from an embedding file instead.
    #[arg(long)]
    pub import: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimilarityArgs {
    #[arg(long)]
    pub set_a: PathBuf,
    #[arg(long)]
    pub set_b: PathBuf,
}

#[derive(Debug, Args)]
pub struct EerArgs {
    #[arg(long)]
    pub genuine: PathBuf,
    #[arg(long)]
    pub impostor: PathBuf,
    /// Include the FAR and FRR curves.
    #[arg(long)]
    pub curves: bool,
}

#[derive(Debug, Args)]
pub struct Project2dArgs {
    pub embeddings: PathBuf,
}

#[derive(Debug, Args)]
pub struct WerArgs {
    #[arg(long = "ref", required_unless_present = "summaries", requires = "hyp")]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub hyp: Option<PathBuf>,
    #[arg(long, default_value = "Hypothesis")]
    pub label: String,
    /// Print per-utterance counts instead of the summary row.
    #[arg(long)]
    pub per_utterance: bool,
    /// CSV of `label,utterances,wer_percent` rows to tabulate as-is.
    #[arg(long, conflicts_with_all = ["reference", "hyp", "per_utterance"])]
    pub summaries: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MosArgs {
    #[arg(long)]
    pub ratings: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, required_unless_present = "summaries", requires = "set_b")]
    pub set_a: Option<PathBuf>,
    #[arg(long)]
    pub set_b: Option<PathBuf>,
    #[arg(long, default_value = "A")]
    pub label_a: String,
    #[arg(long, default_value = "B")]
    pub label_b: String,
    /// CSV of `label,n,mean,ci95_halfwidth` rows; the first two are compared.
    #[arg(long, conflicts_with_all = ["set_a", "set_b"])]
    pub summaries: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    pub manifest: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    #[arg(long, default_value_t = 4)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub port: Option<u16>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Corpus root, overriding the config file.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    #[arg(long, default_value_t = 16_000)]
    pub rate: u32,
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            Box::new(BufWriter::new(File::create(p).map_err(|e| Error::io(p, e))?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let mut w = sink(out)?;
    let target = out.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(target, e))
}

fn load_manifest(path: &Path) -> Result<CorpusManifest> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(CorpusManifest::read_jsonl(name, open(path)?, &TagTaxonomy::default())?)
}

fn manifest_bytes(m: &CorpusManifest) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    m.write_jsonl(&mut buf)?;
    Ok(buf)
}

fn json_bytes<T: serde::Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| Error::Input(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

pub fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) if !matches!(cli.command, Command::Serve(_)) => PipelineConfig::load(p)?,
        _ => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = cli.out.as_deref();

    match cli.command {
        Command::Scan(a) => {
            let speaker_from = match (a.speaker_parent, a.speaker_component) {
                (true, _) => SpeakerFrom::Parent,
                (false, Some(n)) => SpeakerFrom::Component(n),
                (false, None) => SpeakerFrom::Component(cfg.speaker_component),
            };
            let opts = ScanOptions {
                speaker_from,
                ..ScanOptions::default()
            };
            if !a.root.is_dir() {
                return Err(Error::Input(format!("{} is not a directory", a.root.display())));
            }
            emit(out, &manifest_bytes(&scan_corpus(&a.root, &opts)?)?)
        }
        Command::Classify(a) => {
            let (m, rules) = manifest_and_rules(&a, &cfg)?;
            emit(out, &manifest_bytes(&classify_manifest(&m, &rules))?)
        }
        Command::Subset(a) => {
            let (m, rules) = manifest_and_rules(&a, &cfg)?;
            let name = format!("{} subset", m.name);
            emit(out, &manifest_bytes(&build_subset(&m, &rules, name))?)
        }
        Command::Report(a) => report(&a, &cfg, out),
        Command::PrepAudio(a) => prep_audio(&a, &cfg, out),
        Command::NormText(a) => {
            let mut norm = cfg.norm.clone();
            if let Some(t) = &a.table {
                norm.abbreviations =
                    AbbreviationTable::parse(open(t)?).map_err(|e| Error::Input(format!("{}: {e}", t.display())))?;
            }
            if a.keep_final_punct {
                norm.punctuation = PunctuationPolicy::KeepSentenceFinal;
            }
            let reader: Box<dyn BufRead> = match &a.input {
                Some(p) => Box::new(open(p)?),
                None => Box::new(BufReader::new(io::stdin().lock())),
            };
            let mut buf = String::new();
            for line in reader.lines() {
                let line = line.map_err(|e| Error::io("<input>", e))?;
                if a.ids {
                    let (id, text) = line.trim().split_once(char::is_whitespace).unwrap_or((line.trim(), ""));
                    buf.push_str(&format!("{id}\t{}\n", normalize_text(text, &norm)));
                } else {
                    buf.push_str(&normalize_text(&line, &norm));
                    buf.push('\n');
                }
            }
            emit(out, buf.as_bytes())
        }
        Command::Melspec(a) => {
            let out = out.ok_or_else(|| Error::Input("melspec needs --out".into()))?;
            let audio = read_wav(&a.wav)?;
            let mut mel_cfg = cfg.embedding.mel.clone();
            mel_cfg.source_rate = audio.sample_rate_hz();
            mel_cfg.fft_size = mel_cfg.fft_size.max(mel_cfg.window_len().next_power_of_two());
            let mel = log_mel(&audio, &mel_cfg)?;
            let mut bytes = Vec::new();
            mel.write_features(&mut bytes).map_err(|e| Error::io(out, e))?;
            emit(Some(out), &bytes)
        }
        Command::Embed(a) => embed(&a, &cfg, out),
        Command::Similarity(a) => {
            let load = |p: &Path| -> Result<_> {
                Ok(group_by_speaker(&read_embeddings(open(p)?, EmbeddingSource::External)?))
            };
            let matrix = cross_similarity(&load(&a.set_a)?, &load(&a.set_b)?)?;
            emit(out, matrix.to_table().to_csv().as_bytes())
        }
        Command::Eer(a) => {
            let genuine = read_scores(open(&a.genuine)?)?;
            let impostor = read_scores(open(&a.impostor)?)?;
            let r = compute_eer(&genuine, &impostor)?;
            let v = if a.curves {
                serde_json::to_value(&r)
            } else {
                Ok(serde_json::json!({ "eer": r.eer, "threshold": r.threshold }))
            }
            .map_err(|e| Error::Input(e.to_string()))?;
            emit(out, &json_bytes(&v)?)
        }
        Command::Project2d(a) => {
            let embs = read_embeddings(open(&a.embeddings)?, EmbeddingSource::External)?;
            let pcfg = ProjectionConfig {
                seed: cfg.seed,
                ..ProjectionConfig::default()
            };
            let pts = project_2d(&embs, &pcfg)?;
            let mut t = Table::new(["utterance_id", "speaker_id", "x", "y"]);
            for (e, (x, y)) in embs.iter().zip(pts) {
                t.push([
                    e.utterance_id.clone(),
                    e.speaker_id.clone(),
                    format!("{x:.6}"),
                    format!("{y:.6}"),
                ]);
            }
            emit(out, t.to_csv().as_bytes())
        }
        Command::Wer(a) => {
            if let Some(p) = &a.summaries {
                return emit(out, wer_table(&read_wer_summaries(open(p)?)?).to_csv().as_bytes());
            }
            let (Some(r), Some(h)) = (&a.reference, &a.hyp) else {
                unreachable!("clap requires --ref and --hyp without --summaries")
            };
            let refs = read_transcript_lines(open(r)?)?;
            let hyps = read_transcript_lines(open(h)?)?;
            let scored = score_corpus(&refs, &hyps, &cfg.norm)?;
            let table = if a.per_utterance {
                let mut t = Table::new(["id", "ref_words", "substitutions", "deletions", "insertions", "wer"]);
                for (id, r) in &scored.per_utterance {
                    t.push([
                        id.clone(),
                        r.ref_len.to_string(),
                        r.substitutions.to_string(),
                        r.deletions.to_string(),
                        r.insertions.to_string(),
                        r.wer.map_or("-".into(), |w| format!("{w:.4}")),
                    ]);
                }
                t
            } else {
                let wer = scored
                    .wer
                    .ok_or_else(|| Error::Input("references contain no words".into()))?;
                wer_table(&[WerSummary {
                    label: a.label.clone(),
                    utterances: scored.per_utterance.len(),
                    wer_percent: wer * 100.0,
                }])
            };
            emit(out, table.to_csv().as_bytes())
        }
        Command::Mos(a) => {
            let ratings = read_ratings_csv(open(&a.ratings)?)?;
            let present: BTreeSet<Category> = ratings.iter().map(|r| r.category).collect();
            let mut results = present
                .iter()
                .map(|&c| aggregate_mos(&ratings, c))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let get = |c: Category| results.iter().find(|r| r.category == Some(c)).cloned();
            if let (Some(sp), Some(mp), Some(ep)) = (get(Category::Sp), get(Category::Mp), get(Category::Ep)) {
                results.push(overall_consistency(&sp, &mp, &ep, Some(&ratings)));
            }
            emit(out, category_table(&results).to_csv().as_bytes())
        }
        Command::Compare(a) => {
            let report = match (&a.summaries, &a.set_a, &a.set_b) {
                (Some(p), _, _) => {
                    let rows = read_score_summaries(open(p)?)?;
                    match rows.as_slice() {
                        [x, y, ..] => comparison_from_summaries(x, y),
                        _ => return Err(Error::Input(format!("{} needs two summary rows", p.display()))),
                    }
                }
                (None, Some(sa), Some(sb)) => {
                    let xa = read_scores(open(sa)?)?;
                    let xb = read_scores(open(sb)?)?;
                    compare_score_sets(&xa, &xb, &a.label_a, &a.label_b)?
                }
                _ => return Err(Error::Input("give --set-a and --set-b, or --summaries".into())),
            };
            emit(out, comparison_table(&report).to_csv().as_bytes())
        }
        Command::SelectSpeakers(a) => {
            let m = load_manifest(&a.manifest)?;
            let sel = select_eval_speakers(&m, a.top_k, a.count, cfg.seed)?;
            emit(out, &json_bytes(&sel)?)
        }
        Command::Serve(a) => {
            let mut scfg = match &cli.config {
                Some(p) => ServerConfig::load(p)?,
                None => ServerConfig::default(),
            };
            if let Some(port) = a.port {
                scfg.port = port;
            }
            if let Some(dir) = out {
                scfg.data_dir = dir.to_path_buf();
            }
            let rt = tokio::runtime::Runtime::new().map_err(|e| Error::io("<runtime>", e))?;
            rt.block_on(serve(&scfg))?;
            Ok(())
        }
        Command::Pipeline(a) => {
            if let Some(c) = a.corpus {
                cfg.corpus_root = c;
            }
            if let Some(o) = out {
                cfg.output_dir = o.to_path_buf();
            }
            let report = run_pipeline(&cfg)?;
            eprintln!(
                "{} of {} utterances kept; outputs in {}",
                report.subset.utterances,
                report.corpus.utterances,
                cfg.output_dir.display()
            );
            Ok(())
        }
        Command::Fixture(a) => {
            let dir = out.ok_or_else(|| Error::Input("fixture needs --out".into()))?;
            write_fixture_corpus(dir, a.rate)
        }
    }
}

fn manifest_and_rules(a: &RulesArgs, cfg: &PipelineConfig) -> Result<(CorpusManifest, crate::corpus::SubsetRules)> {
    let m = load_manifest(&a.manifest)?;
    let mut rules = cfg.rules.clone();
    if let Some(v) = a.min_s {
        rules.min_s = v;
    }
    if let Some(v) = a.max_s {
        rules.max_s = v;
    }
    if let Some(p) = a.exclude.as_ref().or(cfg.exclusion_list.as_ref()) {
        rules = rules.with_exclusions(read_exclusion_list(open(p)?)?);
    }
    Ok((m, rules))
}

fn report(a: &ReportArgs, cfg: &PipelineConfig, out: Option<&Path>) -> Result<()> {
    let manifests = a
        .manifests
        .iter()
        .map(|p| load_manifest(p))
        .collect::<Result<Vec<_>>>()?;
    let edges = a.buckets.clone().unwrap_or_else(|| cfg.bucket_edges.clone());
    let refs: Vec<&CorpusManifest> = manifests.iter().collect();
    let durations = duration_table(&refs, &edges)?;
    let summary = summary_table(&manifests.iter().map(CorpusSummary::of).collect::<Vec<_>>());
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            for (name, t) in [("durations", &durations), ("summary", &summary)] {
                emit(Some(&dir.join(format!("{name}.csv"))), t.to_csv().as_bytes())?;
                emit(Some(&dir.join(format!("{name}.txt"))), t.to_aligned_text().as_bytes())?;
            }
            Ok(())
        }
        None => {
            let render = |t: &Table| match a.format {
                Format::Csv => t.to_csv(),
                Format::Text => t.to_aligned_text(),
            };
            emit(None, format!("{}\n{}", render(&durations), render(&summary)).as_bytes())
        }
    }
}

fn prep_audio(a: &PrepAudioArgs, cfg: &PipelineConfig, out: Option<&Path>) -> Result<()> {
    let out = out.ok_or_else(|| Error::Input("prep-audio needs --out".into()))?;
    let rate = a.rate.unwrap_or(cfg.target_rate);
    let convert = |src: &Path, dst: &Path| -> Result<()> {
        let wrap = |e: Error| Error::Stage {
            stage: "prep-audio",
            file: src.display().to_string(),
            source: Box::new(e),
        };
        let audio = read_wav(src).map_err(|e| wrap(e.into()))?;
        let mut conv = convert_pcm(&audio, rate, a.bits, &cfg.resampler).map_err(|e| wrap(e.into()))?;
        if a.trim {
            conv = trim_silence(&conv, &cfg.vad);
        }
        if let Some(dir) = dst.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        write_wav16(dst, &conv).map_err(|e| wrap(e.into()))
    };
    if a.input.is_file() {
        return convert(&a.input, out);
    }
    if !a.input.is_dir() {
        return Err(Error::Input(format!("{} does not exist", a.input.display())));
    }
    let files: Vec<PathBuf> = WalkDir::new(&a.input)
        .sort_by_file_name()
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file() && e.path().extension().is_some_and(|x| x.eq_ignore_ascii_case("wav")))
        .map(|e| e.into_path())
        .collect();
    files.par_iter().try_for_each(|src| {
        let rel = src.strip_prefix(&a.input).unwrap_or(src);
        convert(src, &out.join(rel))
    })
}

fn embed(a: &EmbedArgs, cfg: &PipelineConfig, out: Option<&Path>) -> Result<()> {
    let m = load_manifest(&a.manifest)?;
    let embeddings = match &a.import {
        Some(p) => {
            let imported = ImportedEmbeddings::new(read_embeddings(open(p)?, EmbeddingSource::External)?);
            let silence = crate::audio::AudioBuffer::from_f32(Vec::new(), 16_000)?;
            m.utterances
                .iter()
                .map(|u| imported.embed(&u.id, &u.speaker_id, &silence))
                .collect::<std::result::Result<Vec<_>, EmbedError>>()?
        }
        None => {
            let embedder = BaselineEmbedder {
                mel: cfg.embedding.mel.clone(),
                vad: cfg.vad.clone(),
                resampler: cfg.resampler,
                trim: cfg.trim,
                window_s: cfg.embedding.window_s,
                overlap: cfg.embedding.overlap,
            };
            m.utterances
                .par_iter()
                .map(|u| {
                    let path = a.audio_root.join(&u.audio_path);
                    let stage = |e: Error| Error::Stage {
                        stage: "embed",
                        file: path.display().to_string(),
                        source: Box::new(e),
                    };
                    let audio = read_wav(&path).map_err(|e| stage(e.into()))?;
                    embedder
                        .embed(&u.id, &u.speaker_id, &audio)
                        .map_err(|e| stage(e.into()))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let mut buf = format!("# seed={}\n", cfg.seed).into_bytes();
    write_embeddings(&mut buf, &embeddings).map_err(|e| Error::io("<buffer>", e))?;
    emit(out, &buf)
}
