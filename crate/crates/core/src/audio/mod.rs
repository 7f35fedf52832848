//! Audio decoding, rate/depth conversion, silence trimming and log-mel
//! featurization.

mod mel;
mod resample;
mod vad;
mod wav;

pub use mel::{hz_to_mel, log_mel, mel_filterbank, mel_to_hz, MelConfig, MelSpectrogram};
pub use resample::{convert_pcm, output_len, resample, ResamplerConfig};
pub use vad::{detect_voiced, trim_silence, VadConfig, VoicedSegment};
pub use wav::{decode_wav, encode_wav16, quantize_i16, read_wav, write_wav16, AudioBuffer};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("malformed WAV: {0}")]
    BadWav(String),
    #[error("unsupported audio format: {0}")]
    UnsupportedFormat(String),
    #[error("invalid sample rate {0}")]
    InvalidRate(u32),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("audio too short: need {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("sample rate {got} Hz does not match configured {expected} Hz")]
    RateMismatch { expected: u32, got: u32 },
    #[error("malformed feature file: {0}")]
    BadFeatureFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
