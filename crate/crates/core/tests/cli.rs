use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tinyvox::fixtures::write_fixture_corpus;

fn tinyvox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tinyvox")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn snapshot(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    walkdir::WalkDir::new(root)
        .into_iter()
        .map(|e| e.unwrap())
        .filter(|e| e.file_type().is_file())
        .map(|e| (e.path().to_owned(), fs::read(e.path()).unwrap()))
        .collect()
}

#[test]
fn exit_codes() {
    let ok = tinyvox(&["--help"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(tinyvox(&["no-such-command"]).status.code(), Some(1));
    let missing = tinyvox(&["wer", "--ref", "/does/not/exist", "--hyp", "/nor/this"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/does/not/exist"));
}

#[test]
fn pipeline_over_fixture_leaves_inputs_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write_fixture_corpus(&corpus, 16_000).unwrap();
    let before = snapshot(&corpus);

    let out = dir.path().join("out");
    let r = tinyvox(&["pipeline", "--corpus", s(&corpus), "--out", s(&out), "--seed", "9"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(snapshot(&corpus), before);

    let subset = fs::read_to_string(out.join("subset.jsonl")).unwrap();
    assert_eq!(subset.lines().count(), 13);
    let run: serde_json::Value = serde_json::from_slice(&fs::read(out.join("run.json")).unwrap()).unwrap();
    assert_eq!(run["seed"], 9);
    assert_eq!(run["config"]["seed"], 9);
    assert!(fs::read_to_string(out.join("embeddings.txt"))
        .unwrap()
        .starts_with("# seed=9\n"));
}

#[test]
fn pipeline_names_unreadable_wav() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write_fixture_corpus(&corpus, 8_000).unwrap();
    fs::write(corpus.join("spk_cedar/u14.wav"), b"RIFF....garbage").unwrap();
    let r = tinyvox(&["pipeline", "--corpus", s(&corpus), "--out", s(&dir.path().join("out"))]);
    assert_ne!(r.status.code(), Some(0));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("u14.wav") && err.contains("scan"), "{err}");
}

#[test]
fn pipeline_on_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("corpus")).unwrap();
    let out = dir.path().join("out");
    let r = tinyvox(&["pipeline", "--corpus", s(&dir.path().join("corpus")), "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(fs::read_to_string(out.join("manifest.jsonl")).unwrap(), "");
    assert!(fs::read_to_string(out.join("durations.csv"))
        .unwrap()
        .contains("Total,0,0.00,0,0.00"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture_corpus(&dir.path().join("c"), 8_000).unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "corpus_root = \"c\"\noutput_dir = \"o\"\nseed = 1\n[rules]\nmin_s = 0.0\nmax_s = 100.0\n[embedding]\nenabled = false\n").unwrap();
    let r = tinyvox(&["pipeline", "--config", s(&cfg), "--seed", "4"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let run: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("o/run.json")).unwrap()).unwrap();
    assert_eq!(run["seed"], 4);
    // loose duration bounds keep the too-short and too-long clips
    assert_eq!(run["report"]["subset"]["utterances"], 15);
    assert!(!dir.path().join("o/embeddings.txt").exists());
}

#[test]
fn corpus_subcommands_chain() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write_fixture_corpus(&corpus, 8_000).unwrap();
    let m = dir.path().join("m.jsonl");
    let sub = dir.path().join("s.jsonl");
    assert!(tinyvox(&["scan", s(&corpus), "--out", s(&m)]).status.success());
    let excl = dir.path().join("exclude.txt");
    fs::write(&excl, "u01 # bad take\n").unwrap();
    assert!(tinyvox(&["subset", s(&m), "--exclude", s(&excl), "--out", s(&sub)])
        .status
        .success());
    assert_eq!(fs::read_to_string(&sub).unwrap().lines().count(), 12);

    let report_dir = dir.path().join("report");
    assert!(tinyvox(&[
        "report",
        s(&m),
        s(&sub),
        "--buckets",
        "0,10,15",
        "--out",
        s(&report_dir)
    ])
    .status
    .success());
    let durations = fs::read_to_string(report_dir.join("durations.csv")).unwrap();
    assert_eq!(durations.lines().count(), 1 + 3 + 1);
    assert!(durations.contains("15 Above,2,"), "{durations}");
    assert!(report_dir.join("summary.txt").exists());

    let sel = tinyvox(&["select-speakers", s(&m), "--top-k", "4", "--count", "2", "--seed", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&sel.stdout).unwrap();
    assert_eq!(v["selected"].as_array().unwrap().len(), 2);
    let too_many = tinyvox(&["select-speakers", s(&m), "--top-k", "4", "--count", "5"]);
    assert_eq!(too_many.status.code(), Some(1));
}

#[test]
fn audio_and_embedding_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write_fixture_corpus(&corpus, 16_000).unwrap();
    let prepped = dir.path().join("prepped");
    let r = tinyvox(&[
        "prep-audio",
        s(&corpus),
        "--rate",
        "24000",
        "--bits",
        "16",
        "--trim",
        "--out",
        s(&prepped),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let a = tinyvox::audio::read_wav(&prepped.join("spk_amber/u01.wav")).unwrap();
    assert_eq!(a.sample_rate_hz(), 24_000);
    assert!(a.duration_s() < 12.0 && a.duration_s() > 11.0);
    assert_eq!(
        tinyvox(&["prep-audio", s(&corpus), "--bits", "24", "--out", s(&prepped)])
            .status
            .code(),
        Some(1)
    );

    let feat = dir.path().join("u01.mel");
    assert!(
        tinyvox(&["melspec", s(&prepped.join("spk_amber/u01.wav")), "--out", s(&feat)])
            .status
            .success()
    );
    let mel = tinyvox::audio::MelSpectrogram::read_features(fs::File::open(&feat).unwrap()).unwrap();
    assert_eq!(mel.n_mels(), 40);

    let m = dir.path().join("m.jsonl");
    let sub = dir.path().join("s.jsonl");
    tinyvox(&["scan", s(&corpus), "--out", s(&m)]);
    tinyvox(&["subset", s(&m), "--out", s(&sub)]);
    let emb = dir.path().join("e.txt");
    let r = tinyvox(&[
        "embed",
        s(&sub),
        "--audio-root",
        s(&corpus),
        "--baseline",
        "--out",
        s(&emb),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));

    let imported = dir.path().join("i.txt");
    assert!(tinyvox(&["embed", s(&sub), "--import", s(&emb), "--out", s(&imported)])
        .status
        .success());
    let load = |p: &Path| {
        tinyvox::embed::read_embeddings(
            std::io::BufReader::new(fs::File::open(p).unwrap()),
            tinyvox::embed::EmbeddingSource::External,
        )
        .unwrap()
    };
    let (x, y) = (load(&emb), load(&imported));
    assert_eq!(x.len(), 13);
    for (a, b) in x.iter().zip(&y) {
        assert_eq!((&a.utterance_id, &a.speaker_id), (&b.utterance_id, &b.speaker_id));
        assert!(a.vector().iter().zip(b.vector()).all(|(u, v)| (u - v).abs() < 1e-12));
    }

    let sim = tinyvox(&["similarity", "--set-a", s(&emb), "--set-b", s(&emb)]);
    let csv = String::from_utf8(sim.stdout).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().nth(1).unwrap().contains("1.000000"));

    let proj = tinyvox(&["project2d", s(&emb)]);
    assert_eq!(String::from_utf8(proj.stdout).unwrap().lines().count(), 14);
}

#[test]
fn metric_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let w = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    };
    let g = w("g.txt", "0.9\n0.8\n0.7\n");
    let i = w("i.txt", "0.1\n0.2\n0.75\n");
    let r = tinyvox(&["eer", "--genuine", s(&g), "--impostor", s(&i)]);
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert!((v["eer"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12, "{v}");

    let refs = w("ref.txt", "a the cat sat\nb Dr. Who\n");
    let hyps = w("hyp.txt", "a the bat sat\nb doctor who\n");
    let r = tinyvox(&["wer", "--ref", s(&refs), "--hyp", s(&hyps), "--label", "Synthetic"]);
    assert_eq!(
        String::from_utf8(r.stdout).unwrap(),
        "Data type,# of Utterances,WER\nSynthetic,2,20.00\n"
    );
    let rows = w(
        "w.csv",
        "label,utterances,wer_percent\nReal,120,15.27\nSynthetic,120,25.63\n",
    );
    let r = tinyvox(&["wer", "--summaries", s(&rows)]);
    assert_eq!(
        String::from_utf8(r.stdout).unwrap(),
        "Data type,# of Utterances,WER\nReal,120,15.27\nSynthetic,120,25.63\n"
    );
    assert_eq!(
        tinyvox(&["wer", "--summaries", s(&rows), "--ref", s(&refs)])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(tinyvox(&["wer", "--hyp", s(&hyps)]).status.code(), Some(1));

    let ratings = w(
        "r.csv",
        "evaluator_id,clip_id,category,score,timestamp\ne1,c1,SI,4,t\ne2,c1,SI,4,t\ne3,c1,SI,5,t\ne4,c1,SI,3,t\ne5,c1,SI,4,t\n",
    );
    let r = tinyvox(&["mos", "--ratings", s(&ratings)]);
    assert_eq!(
        String::from_utf8(r.stdout).unwrap(),
        "Categories,MOS\nSpeech Intelligibility,4.00 ± 0.88\n"
    );

    let a = w("a.txt", "4\n5\n");
    let b = w("b.txt", "3\n3\n");
    let r = tinyvox(&[
        "compare",
        "--set-a",
        s(&a),
        "--set-b",
        s(&b),
        "--label-a",
        "X",
        "--label-b",
        "Y",
    ]);
    assert!(String::from_utf8(r.stdout)
        .unwrap()
        .ends_with("2,4.50 ± 6.35,3.00 ± 0.00,1.50\n"));

    let norm = Command::new(env!("CARGO_BIN_EXE_tinyvox"))
        .args(["norm-text", "--ids", s(&w("t.txt", "u1 mr. fox ate 3 eggs\n"))])
        .output()
        .unwrap();
    assert_eq!(
        String::from_utf8(norm.stdout).unwrap(),
        "u1\tMISTER FOX ATE THREE EGGS\n"
    );
}
