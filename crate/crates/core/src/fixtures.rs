//! A small synthetic corpus with known triage outcomes, used by the
//! examples, the tests and `tinyvox fixture`.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::audio::{write_wav16, AudioBuffer};
use crate::corpus::{parse_transcript, CorpusManifest, Utterance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureUtterance {
    pub id: &'static str,
    pub speaker: &'static str,
    pub duration_s: f64,
    pub transcript: Option<&'static str>,
}

const fn utt(
    id: &'static str,
    speaker: &'static str,
    duration_s: f64,
    transcript: Option<&'static str>,
) -> FixtureUtterance {
    FixtureUtterance {
        id,
        speaker,
        duration_s,
        transcript,
    }
}

pub const FIXTURE_SPEAKERS: [&str; 4] = ["spk_amber", "spk_birch", "spk_cedar", "spk_delta"];

pub const FIXTURE: [FixtureUtterance; 20] = [
    utt("u01", "spk_amber", 12.0, Some("the birds sang in the morning")),
    utt("u02", "spk_amber", 11.0, Some("we saw a <indiscernible> near the pond")),
    utt("u03", "spk_birch", 3.0, Some("<noise>")),
    utt("u04", "spk_birch", 10.0, Some("i like to read books about space")),
    utt("u05", "spk_birch", 15.0, Some("the water cycle starts when rain falls")),
    utt("u06", "spk_cedar", 15.5, Some("plants need light and water to grow")),
    utt("u07", "spk_cedar", 9.99, Some("the magnet pulls the nail")),
    utt("u08", "spk_cedar", 12.0, None),
    utt("u09", "spk_delta", 12.5, Some("(()) (()) (())")),
    utt(
        "u10",
        "spk_delta",
        13.0,
        Some("um the <breath> battery makes it light up"),
    ),
    utt("u11", "spk_amber", 14.2, Some("it's called evapor- evaporation")),
    utt("u12", "spk_amber", 10.5, Some("the circuit needs a wire")),
    utt("u13", "spk_birch", 11.7, Some("<noise> we put the seeds in soil")),
    utt("u14", "spk_cedar", 12.3, Some("the moon goes around the earth")),
    utt("u15", "spk_delta", 14.0, Some("<indiscernible>")),
    utt("u16", "spk_delta", 10.1, Some("friction slows the car down")),
    utt("u17", "spk_amber", 13.4, Some("sound travels through the air")),
    utt("u18", "spk_birch", 14.9, Some("the bulb lights when the switch is on")),
    utt("u19", "spk_cedar", 11.1, Some("ice melts when it gets warm")),
    utt("u20", "spk_delta", 12.8, Some("the sun is a star <noise>")),
];

/// The fixture as an in-memory manifest; audio paths follow the on-disk
/// layout `speaker/id.wav`.
pub fn fixture_manifest() -> CorpusManifest {
    let utts = FIXTURE
        .iter()
        .map(|f| {
            let u = Utterance::new(f.id, f.speaker, format!("{}/{}.wav", f.speaker, f.id), f.duration_s);
            match f.transcript {
                Some(t) => u.with_transcript(parse_transcript(t)),
                None => u,
            }
        })
        .collect();
    CorpusManifest::new("fixture", utts).expect("fixture ids are unique")
}

/// A deterministic voice-like signal: a few harmonics of a speaker pitch,
/// syllable-rate amplitude modulation, and a quiet noise floor, with
/// 0.3 s of near-silence at each end.
pub fn synth_voice(pitch_hz: f64, duration_s: f64, sample_rate: u32, seed: u64) -> Vec<f32> {
    let n = (duration_s * f64::from(sample_rate)).round() as usize;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let sr = f64::from(sample_rate);
    let pad = (0.3 * sr) as usize;
    (0..n)
        .map(|i| {
            let t = i as f64 / sr;
            let noise = (rng.random::<f64>() - 0.5) * 2e-4;
            if i < pad || i + pad >= n {
                return noise as f32;
            }
            let syllable = 0.55 + 0.45 * (2.0 * std::f64::consts::PI * 3.7 * t).sin();
            let vibrato = 1.0 + 0.01 * (2.0 * std::f64::consts::PI * 5.0 * t).sin();
            let f0 = pitch_hz * vibrato;
            let voice: f64 = (1..=4)
                .map(|h| (2.0 * std::f64::consts::PI * f0 * h as f64 * t).sin() / h as f64)
                .sum();
            (0.25 * syllable * voice + noise) as f32
        })
        .collect()
}

fn speaker_pitch(speaker: &str) -> f64 {
    let idx = FIXTURE_SPEAKERS.iter().position(|s| *s == speaker).unwrap_or(0);
    180.0 + 45.0 * idx as f64
}

/// Writes the fixture corpus as `root/speaker/id.wav` with `.trn`
/// transcripts next to the audio. Durations are exact in samples.
pub fn write_fixture_corpus(root: &Path, sample_rate: u32) -> Result<()> {
    for (k, f) in FIXTURE.iter().enumerate() {
        let dir = root.join(f.speaker);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let samples = synth_voice(speaker_pitch(f.speaker), f.duration_s, sample_rate, k as u64);
        let audio = AudioBuffer::from_f32(samples, sample_rate)?;
        write_wav16(&dir.join(format!("{}.wav", f.id)), &audio)?;
        if let Some(t) = f.transcript {
            let p = dir.join(format!("{}.trn", f.id));
            fs::write(&p, format!("{t}\n")).map_err(|e| Error::io(&p, e))?;
        }
    }
    Ok(())
}
