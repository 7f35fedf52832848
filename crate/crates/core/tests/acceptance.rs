//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::sync::{Arc, Barrier};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use tinyvox::audio::{log_mel, resample, AudioBuffer, MelConfig, ResamplerConfig};
use tinyvox::corpus::{bucket_durations, build_subset, scan_corpus, ScanOptions, SubsetRules, DEFAULT_BUCKET_EDGES};
use tinyvox::embed::{aggregate_embedding, compute_eer, l2_norm, plan_inference_windows, plan_training_partials};
use tinyvox::fixtures::write_fixture_corpus;
use tinyvox::metrics::{
    aggregate_mos, comparison_from_summaries, comparison_table, overall_consistency, read_score_summaries,
    read_wer_summaries, wer, wer_table, Category, MosResult, Rating,
};
use tinyvox::service::{
    campaign_results, export_csv, replay_log_file, results_table, CampaignConfig, ClipRef, GroupConfig,
    RatingSubmission, ServiceError, State, Store, StoreOptions, LOG_FILE,
};
use tinyvox::text::{normalize_text, NormConfig};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

// ---------- corpus triage ----------

const SUBSET_ORACLE: [&str; 13] = [
    "u01", "u04", "u05", "u10", "u11", "u12", "u13", "u14", "u16", "u17", "u18", "u19", "u20",
];

fn corpus_triage() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = dir.path().join("corpus");
    write_fixture_corpus(&root, 16_000).map_err(|e| e.to_string())?;

    let t0 = Instant::now();
    let scanned = scan_corpus(&root, &ScanOptions::default()).map_err(|e| e.to_string())?;
    let rules = SubsetRules::default();
    let subset = build_subset(&scanned, &rules, "subset");
    let hists = [
        bucket_durations(&scanned, &DEFAULT_BUCKET_EDGES).map_err(|e| e.to_string())?,
        bucket_durations(&subset, &DEFAULT_BUCKET_EDGES).map_err(|e| e.to_string())?,
    ];
    let elapsed = t0.elapsed();

    let ids: BTreeSet<&str> = subset.utterances.iter().map(|u| u.id.as_str()).collect();
    ensure!(ids == SUBSET_ORACLE.into_iter().collect(), "subset ids {ids:?}");

    for (m, h) in [&scanned, &subset].into_iter().zip(&hists) {
        let durations: Vec<f64> = m.utterances.iter().map(|u| u.duration_s).collect();
        ensure!(
            h.buckets.len() == DEFAULT_BUCKET_EDGES.len(),
            "bucket count {}",
            h.buckets.len()
        );
        for (k, b) in h.buckets.iter().enumerate() {
            let lo = DEFAULT_BUCKET_EDGES[k];
            let hi = DEFAULT_BUCKET_EDGES.get(k + 1).copied().unwrap_or(f64::INFINITY);
            let inside: Vec<f64> = durations.iter().copied().filter(|&d| lo <= d && d < hi).collect();
            let hours = inside.iter().sum::<f64>() / 3600.0;
            ensure!(
                b.utterance_count == inside.len(),
                "bucket {lo}: {} vs {}",
                b.utterance_count,
                inside.len()
            );
            let rel = if hours == 0.0 {
                b.total_hours.abs()
            } else {
                (b.total_hours - hours).abs() / hours
            };
            ensure!(rel <= 1e-6, "bucket {lo} hours {} vs {hours}", b.total_hours);
        }
    }
    ensure!(elapsed < Duration::from_secs(1), "triage took {elapsed:?}");
    Ok(())
}

// ---------- WER ----------

fn edit_distance(r: &[u8], h: &[u8], memo: &mut HashMap<(usize, usize), usize>) -> usize {
    if r.is_empty() {
        return h.len();
    }
    if h.is_empty() {
        return r.len();
    }
    if let Some(&d) = memo.get(&(r.len(), h.len())) {
        return d;
    }
    let sub = edit_distance(&r[1..], &h[1..], memo) + usize::from(r[0] != h[0]);
    let del = edit_distance(&r[1..], h, memo) + 1;
    let ins = edit_distance(r, &h[1..], memo) + 1;
    let d = sub.min(del).min(ins);
    memo.insert((r.len(), h.len()), d);
    d
}

fn all_sequences(max_len: usize, vocab: u8) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let next: Vec<Vec<u8>> = frontier
            .iter()
            .flat_map(|s: &Vec<u8>| {
                (0..vocab).map(move |w| {
                    let mut t = s.clone();
                    t.push(w);
                    t
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn wer_oracle() -> Outcome {
    let t0 = Instant::now();
    let seqs = all_sequences(5, 3);
    let mut pairs = 0usize;
    for r in &seqs {
        for h in &seqs {
            let expected = edit_distance(r, h, &mut HashMap::new());
            let rep = wer(r, h);
            ensure!(rep.edits() == expected, "{r:?} / {h:?}: {} vs {expected}", rep.edits());
            ensure!(
                h.len() + rep.deletions == r.len() + rep.insertions,
                "{r:?} / {h:?}: inconsistent counts"
            );
            let rate = match (r.len(), expected) {
                (0, 0) => Some(0.0),
                (0, _) => None,
                (n, d) => Some(d as f64 / n as f64),
            };
            ensure!(rep.wer == rate, "{r:?} / {h:?}: rate {:?}", rep.wer);
            pairs += 1;
        }
    }
    let elapsed = t0.elapsed();
    ensure!(pairs == 364 * 364, "{pairs} pairs");
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(())
}

// ---------- EER ----------

fn brute_force_eer(g: &[f64], i: &[f64]) -> (f64, Vec<(f64, f64)>) {
    let mut ts: Vec<f64> = g.iter().chain(i).copied().collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts.push(ts[ts.len() - 1] + 1.0);
    let points: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| {
            let far = i.iter().filter(|&&s| s >= t).count() as f64 / i.len() as f64;
            let frr = g.iter().filter(|&&s| s < t).count() as f64 / g.len() as f64;
            (far, frr)
        })
        .collect();
    let k = points.iter().position(|(a, r)| a - r <= 0.0).unwrap();
    let (far, frr) = points[k];
    let eer = if k == 0 || far == frr {
        far
    } else {
        let (pa, pr) = points[k - 1];
        let (d0, d1) = (pa - pr, far - frr);
        pa + d0 / (d0 - d1) * (far - pa)
    };
    (
        eer,
        ts.into_iter()
            .zip(points.into_iter().map(|(a, r)| (a - r).abs()))
            .collect(),
    )
}

fn eer_oracle() -> Outcome {
    let mut r = rng(11);
    for case in 0..1000 {
        let (ng, ni) = (r.random_range(1..=100), r.random_range(1..=100));
        let coarse = case % 2 == 0;
        let mut draw = |shift: f64| {
            let x: f64 = r.random::<f64>() + shift;
            if coarse {
                (x * 10.0).round() / 10.0
            } else {
                x
            }
        };
        let g: Vec<f64> = (0..ng).map(|_| draw(0.3)).collect();
        let i: Vec<f64> = (0..ni).map(|_| draw(0.0)).collect();
        let got = compute_eer(&g, &i).map_err(|e| e.to_string())?;
        let (eer, gaps) = brute_force_eer(&g, &i);
        ensure!((got.eer - eer).abs() <= 1e-9, "case {case}: eer {} vs {eer}", got.eer);
        let best = gaps.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let at = gaps.iter().find(|p| p.0 == got.threshold).map(|p| p.1);
        ensure!(
            at.is_some_and(|a| (a - best).abs() <= 1e-9),
            "case {case}: threshold {}",
            got.threshold
        );
    }
    Ok(())
}

// ---------- MOS ----------

fn mos_arithmetic() -> Outcome {
    let ratings: Vec<Rating> = [4u8, 4, 5, 3, 4]
        .iter()
        .enumerate()
        .map(|(k, &s)| Rating::new(format!("e{k}"), "c1", Category::Si, i64::from(s), "t").unwrap())
        .collect();
    let m = aggregate_mos(&ratings, Category::Si).map_err(|e| e.to_string())?;
    ensure!(format!("{:.2}", m.mean) == "4.00", "mean {}", m.mean);
    let half = m.ci95_halfwidth.ok_or("no interval")?;
    ensure!((half - 0.878).abs() <= 1e-3, "half-width {half}");

    let sub = |mean| MosResult {
        category: None,
        mean,
        ci95_halfwidth: None,
        n: 1,
        approximate: false,
    };
    let vc = overall_consistency(&sub(4.07), &sub(4.18), &sub(3.62), None);
    ensure!(format!("{:.2}", vc.mean) == "3.96", "overall {}", vc.mean);
    Ok(())
}

// ---------- embeddings ----------

fn inference_count(d: f64, w: f64, overlap: f64) -> usize {
    const EPS: f64 = 1e-9;
    if d <= w + EPS {
        return 1;
    }
    let hop = w * (1.0 - overlap);
    1 + ((d - w) / hop - EPS).ceil() as usize
}

fn training_count(d: f64, p: f64) -> usize {
    const EPS: f64 = 1e-9;
    if d < p - EPS {
        return 1;
    }
    let full = (d / p + EPS).floor();
    let rem = d - full * p;
    full as usize + usize::from(rem > EPS && rem >= p / 2.0 - EPS)
}

fn embedding_pipeline() -> Outcome {
    let mut r = rng(21);
    for case in 0..10_000 {
        let n = r.random_range(1..=12);
        let parts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..256).map(|_| r.random_range(-1.0..1.0)).collect())
            .collect();
        let v = aggregate_embedding(&parts).map_err(|e| format!("case {case}: {e}"))?;
        ensure!((l2_norm(&v) - 1.0).abs() <= 1e-6, "case {case}: norm {}", l2_norm(&v));
    }
    for case in 0..10_000 {
        let d = r.random_range(0.01..60.0);
        let inf = plan_inference_windows(d, 0.8, 0.5).map_err(|e| e.to_string())?;
        ensure!(
            inf.len() == inference_count(d, 0.8, 0.5),
            "case {case}: {d} s gives {} windows",
            inf.len()
        );
        let tr = plan_training_partials(d, 1.6).map_err(|e| e.to_string())?;
        ensure!(
            tr.len() == training_count(d, 1.6),
            "case {case}: {d} s gives {} partials",
            tr.len()
        );
    }
    let two = plan_inference_windows(2.0, 0.8, 0.5).map_err(|e| e.to_string())?;
    ensure!(two.len() == 4, "2.0 s gives {} windows", two.len());
    Ok(())
}

// ---------- DSP ----------

fn dsp() -> Outcome {
    let tone = |rate: u32, n: usize| -> Vec<f64> {
        (0..n)
            .map(|k| 0.5 * (2.0 * std::f64::consts::PI * 1000.0 * k as f64 / f64::from(rate)).sin())
            .collect()
    };
    let input: Vec<f32> = tone(16_000, 16_000).into_iter().map(|x| x as f32).collect();
    let out = resample(&input, 16_000, 24_000, &ResamplerConfig::default());
    ensure!(out.len() == 24_000, "resampled length {}", out.len());
    let target = tone(24_000, out.len());
    let edge = 480;
    let (mut sig, mut err) = (0.0, 0.0);
    for k in edge..out.len() - edge {
        sig += target[k] * target[k];
        err += (f64::from(out[k]) - target[k]).powi(2);
    }
    let snr = 10.0 * (sig / err).log10();
    ensure!(snr >= 60.0, "SNR {snr:.1} dB");

    let cfg = MelConfig::default();
    let (w, h) = (
        (cfg.window_ms * f64::from(cfg.source_rate) / 1000.0).round() as usize,
        (cfg.hop_ms * f64::from(cfg.source_rate) / 1000.0).round() as usize,
    );
    let mut r = rng(31);
    let noise =
        |r: &mut Xoshiro256PlusPlus, n: usize| -> Vec<f32> { (0..n).map(|_| r.random_range(-0.4f32..0.4)).collect() };
    for case in 0..1000 {
        let n = r.random_range(w..48_000);
        let a = AudioBuffer::from_f32(noise(&mut r, n), cfg.source_rate).map_err(|e| e.to_string())?;
        let mel = log_mel(&a, &cfg).map_err(|e| e.to_string())?;
        ensure!(
            mel.n_frames() == 1 + (n - w) / h,
            "case {case}: {n} samples gave {} frames",
            mel.n_frames()
        );
    }

    let x = noise(&mut r, 16_000);
    let doubled: Vec<f32> = x.iter().map(|s| s * 2.0).collect();
    let a = log_mel(&AudioBuffer::from_f32(x, cfg.source_rate).unwrap(), &cfg).map_err(|e| e.to_string())?;
    let b = log_mel(&AudioBuffer::from_f32(doubled, cfg.source_rate).unwrap(), &cfg).map_err(|e| e.to_string())?;
    let floor = cfg.log_floor.ln();
    let mut checked = 0;
    for (p, q) in a.values().iter().zip(b.values()) {
        if *p > floor {
            ensure!((q - p - 4f64.ln()).abs() <= 1e-6, "shift {}", q - p);
            checked += 1;
        }
    }
    ensure!(checked > 0, "no cells above the floor");
    Ok(())
}

// ---------- text ----------

fn fuzz_text(r: &mut Xoshiro256PlusPlus) -> String {
    const PIECES: &[&str] = &[
        "Dr.",
        "mr.",
        "St.",
        "Mrs",
        "etc.",
        "don't",
        "O'Brien",
        "rock-and-roll",
        "--",
        "evapor-",
        "3",
        "1999",
        "3.5",
        "½",
        "É",
        "straße",
        "naïve",
        "ĳ",
        "‘quoted’",
        "“so”",
        "...",
        "!",
        "?",
        ",",
        ";",
        ":",
        "(",
        ")",
        "\t",
        "  ",
        "\n",
        "a",
        "the",
        "Owl",
        "x2",
        "#",
        "&",
        "%",
        "e.g.",
        "U.S.",
        "'",
        "-",
        "ǅ",
        "ﬁ",
    ];
    let n = r.random_range(0..12);
    let mut s = String::new();
    for _ in 0..n {
        if r.random_bool(0.3) {
            let len = r.random_range(1..6);
            for _ in 0..len {
                s.push(char::from_u32(r.random_range(0x20..0x250)).unwrap_or('?'));
            }
        } else {
            s.push_str(PIECES[r.random_range(0..PIECES.len())]);
        }
        if r.random_bool(0.7) {
            s.push(' ');
        }
    }
    s
}

fn text_normalization() -> Outcome {
    let cfg = NormConfig::default();
    let mut r = rng(41);
    for case in 0..10_000 {
        let raw = fuzz_text(&mut r);
        let once = normalize_text(&raw, &cfg);
        let twice = normalize_text(&once, &cfg);
        ensure!(once == twice, "case {case}: {raw:?} -> {once:?} -> {twice:?}");
        ensure!(
            !once.chars().any(char::is_lowercase),
            "case {case}: lowercase in {once:?}"
        );
        ensure!(!once.contains("  "), "case {case}: double space in {once:?}");
    }
    Ok(())
}

// ---------- service ----------

fn campaign(id: &str, groups: usize, evaluators: usize, per_group: usize) -> CampaignConfig {
    CampaignConfig {
        id: id.into(),
        phase: 2,
        seed: 17,
        clips_per_group: per_group,
        natural_per_group: 0,
        allow_revisions: false,
        groups: (0..groups)
            .map(|g| GroupConfig {
                id: format!("g{g}"),
                evaluators,
                speaker: None,
            })
            .collect(),
        clips: (0..groups * per_group)
            .map(|k| ClipRef {
                id: format!("{id}-c{k:03}"),
                audio_path: format!("c{k:03}.wav"),
                transcript: format!("sentence {k}"),
                speaker_label: String::new(),
                arm: Default::default(),
            })
            .collect(),
    }
}

fn aggregates(state: &State, id: &str) -> Result<(Vec<u8>, String, String), String> {
    let results = campaign_results(state, id).map_err(|e| e.to_string())?;
    Ok((
        export_csv(state, id).map_err(|e| e.to_string())?,
        results_table(&results).to_csv(),
        serde_json::to_string(&results).map_err(|e| e.to_string())?,
    ))
}

fn all_tuples(c: &tinyvox::service::Campaign) -> Vec<(String, String, Category)> {
    let mut out = Vec::new();
    for g in &c.groups {
        for e in &g.evaluator_ids {
            for clip in &g.clip_ids {
                for cat in &c.rubric {
                    out.push((e.clone(), clip.clone(), *cat));
                }
            }
        }
    }
    out
}

fn submission(campaign: &str, t: &(String, String, Category), score: i64, ts: &str) -> RatingSubmission {
    RatingSubmission {
        campaign_id: campaign.into(),
        evaluator_id: t.0.clone(),
        clip_id: t.1.clone(),
        category: t.2,
        score,
        timestamp: Some(ts.into()),
    }
}

fn service_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let opts = StoreOptions::default();

    // 2 groups x 5 evaluators x 10 clips x 5 categories
    let live = Store::open(&dir.path().join("live"), opts).map_err(|e| e.to_string())?;
    let c = live
        .create_campaign(&campaign("rec", 2, 5, 10))
        .map_err(|e| e.to_string())?;
    live.open_campaign("rec").map_err(|e| e.to_string())?;
    let tuples = all_tuples(&c);
    ensure!(tuples.len() == 500, "{} tuples", tuples.len());
    let mut r = rng(51);
    for (k, t) in tuples.iter().enumerate() {
        let ts = format!("2024-01-01T00:{:02}:{:02}Z", k / 60, k % 60);
        live.submit_rating(submission("rec", t, r.random_range(1..=5), &ts))
            .map_err(|e| e.to_string())?;
    }
    let expected = aggregates(&live.read(), "rec")?;
    drop(live);

    let log = dir.path().join("live").join(LOG_FILE);
    let replayed = replay_log_file(&log).map_err(|e| e.to_string())?;
    ensure!(aggregates(&replayed, "rec")? == expected, "log replay differs");
    let fresh = dir.path().join("fresh");
    fs::create_dir_all(&fresh).map_err(|e| e.to_string())?;
    fs::copy(&log, fresh.join(LOG_FILE)).map_err(|e| e.to_string())?;
    let reopened = Store::open(&fresh, opts).map_err(|e| e.to_string())?;
    ensure!(
        aggregates(&reopened.read(), "rec")? == expected,
        "reopened store differs"
    );

    // distinct tuples submitted concurrently: 1 group x 4 evaluators x 5 clips x 5 categories
    let store = Arc::new(Store::open(&dir.path().join("conc"), opts).map_err(|e| e.to_string())?);
    let c = store
        .create_campaign(&campaign("conc", 1, 4, 5))
        .map_err(|e| e.to_string())?;
    store.open_campaign("conc").map_err(|e| e.to_string())?;
    let tuples = all_tuples(&c);
    ensure!(tuples.len() == 100, "{} tuples", tuples.len());
    let barrier = Arc::new(Barrier::new(tuples.len()));
    let results: Vec<Result<u64, ServiceError>> = std::thread::scope(|s| {
        let handles: Vec<_> = tuples
            .iter()
            .map(|t| {
                let (store, barrier) = (Arc::clone(&store), Arc::clone(&barrier));
                s.spawn(move || {
                    barrier.wait();
                    store.submit_rating(submission("conc", t, 3, "2024-01-01T00:00:00Z"))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    ensure!(results.iter().all(Result::is_ok), "a distinct submission was rejected");

    // one tuple submitted 100 times concurrently
    let dup = tuples[0].clone();
    let c2 = store
        .create_campaign(&campaign("dup", 1, 4, 5))
        .map_err(|e| e.to_string())?;
    store.open_campaign("dup").map_err(|e| e.to_string())?;
    let dup = (
        c2.groups[0].evaluator_ids[0].clone(),
        c2.groups[0].clip_ids[0].clone(),
        dup.2,
    );
    let barrier = Arc::new(Barrier::new(100));
    let results: Vec<Result<u64, ServiceError>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..100)
            .map(|k| {
                let (store, barrier, dup) = (Arc::clone(&store), Arc::clone(&barrier), dup.clone());
                s.spawn(move || {
                    barrier.wait();
                    store.submit_rating(submission("dup", &dup, 1 + k % 5, "2024-01-01T00:00:00Z"))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let won = results.iter().filter(|r| r.is_ok()).count();
    ensure!(won == 1, "{won} duplicate submissions accepted");
    ensure!(
        results
            .iter()
            .filter(|r| matches!(r, Err(ServiceError::Duplicate)))
            .count()
            == 99,
        "losers were not rejected as duplicates"
    );
    drop(store);

    let persisted = Store::open(&dir.path().join("conc"), opts).map_err(|e| e.to_string())?;
    let state = persisted.read();
    ensure!(
        state.campaign("conc").unwrap().rating_count() == 100,
        "distinct tuples lost"
    );
    ensure!(
        state.campaign("dup").unwrap().rating_count() == 1,
        "duplicate tuple count"
    );
    let log = fs::read_to_string(dir.path().join("conc").join(LOG_FILE)).map_err(|e| e.to_string())?;
    let accepted = log
        .lines()
        .filter(|l| l.contains("\"rating_submitted\"") && l.contains("\"dup\""))
        .count();
    ensure!(accepted == 1, "{accepted} log entries for the duplicate tuple");
    Ok(())
}

// ---------- reports ----------

fn report_fidelity() -> Outcome {
    let summaries = "label,n,mean,ci95_halfwidth\n\
                     Reference Child Audio,50,2.91,0.07\n\
                     Synthetic Child Audio,50,2.60,0.06\n";
    let s = read_score_summaries(summaries.as_bytes()).map_err(|e| e.to_string())?;
    let csv = comparison_table(&comparison_from_summaries(&s[0], &s[1])).to_csv();
    let expected = "Samples,Reference Child Audio MOS,Synthetic Child Audio MOS,Difference\n\
                    50,2.91 ± 0.07,2.60 ± 0.06,0.31\n";
    ensure!(csv == expected, "got {csv:?}");

    let wers = "label,utterances,wer_percent\n\
                Adult Speech,120,3.43\n\
                Real Child Speech,120,15.27\n\
                Synthetic Child Speech,120,25.63\n";
    let rows = read_wer_summaries(wers.as_bytes()).map_err(|e| e.to_string())?;
    let csv = wer_table(&rows).to_csv();
    let expected = "Data type,# of Utterances,WER\n\
                    Adult Speech,120,3.43\n\
                    Real Child Speech,120,15.27\n\
                    Synthetic Child Speech,120,25.63\n";
    ensure!(csv == expected, "got {csv:?}");
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("corpus triage oracle", corpus_triage),
        ("WER oracle equivalence", wer_oracle),
        ("EER oracle equivalence", eer_oracle),
        ("MOS arithmetic", mos_arithmetic),
        ("embedding pipeline", embedding_pipeline),
        ("DSP", dsp),
        ("text normalization", text_normalization),
        ("service determinism", service_determinism),
        ("report fidelity", report_fidelity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t0 = Instant::now();
        match check() {
            Ok(()) => println!("PASS {name} ({:.2?})", t0.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
