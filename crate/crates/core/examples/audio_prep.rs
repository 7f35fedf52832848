//! Resample a synthetic 16 kHz recording to 24 kHz, trim the silent edges
//! and compute log-mel features.

use tinyvox::audio::{
    convert_pcm, detect_voiced, log_mel, trim_silence, AudioBuffer, MelConfig, ResamplerConfig, VadConfig,
};
use tinyvox::fixtures::synth_voice;

fn main() -> tinyvox::Result<()> {
    let raw = AudioBuffer::from_f32(synth_voice(220.0, 3.0, 16_000, 1), 16_000)?;
    let converted = convert_pcm(&raw, 24_000, 16, &ResamplerConfig::default())?;
    println!(
        "{} samples @ {} Hz -> {} samples @ {} Hz",
        raw.len(),
        raw.sample_rate_hz(),
        converted.len(),
        converted.sample_rate_hz()
    );

    let vad = VadConfig::default();
    for seg in detect_voiced(&converted, &vad) {
        println!("voiced {:.2}-{:.2} s", seg.start_s, seg.end_s);
    }
    let trimmed = trim_silence(&converted, &vad);
    println!("trimmed to {:.2} s", trimmed.duration_s());

    let cfg = MelConfig {
        source_rate: 24_000,
        n_mels: 80,
        fft_size: 1024,
        ..MelConfig::default()
    };
    let mel = log_mel(&trimmed, &cfg)?;
    let peak = mel.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!(
        "log-mel: {} frames x {} channels, peak {peak:.2}",
        mel.n_frames(),
        mel.n_mels()
    );
    Ok(())
}
