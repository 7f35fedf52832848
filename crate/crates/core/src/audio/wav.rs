use std::io::Cursor;
use std::path::Path;

use super::AudioError;

/// Mono PCM audio as normalized floats.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    samples: Vec<f32>,
    sample_rate_hz: u32,
    bit_depth_origin: u16,
}

impl AudioBuffer {
    /// Samples are clamped into `[-1, 1]`; NaN becomes 0.
    pub fn new(samples: Vec<f32>, sample_rate_hz: u32, bit_depth_origin: u16) -> Result<Self, AudioError> {
        if sample_rate_hz == 0 {
            return Err(AudioError::InvalidRate(0));
        }
        let samples = samples
            .into_iter()
            .map(|s| if s.is_nan() { 0.0 } else { s.clamp(-1.0, 1.0) })
            .collect();
        Ok(Self {
            samples,
            sample_rate_hz,
            bit_depth_origin,
        })
    }

    /// Float buffer with no integer origin.
    pub fn from_f32(samples: Vec<f32>, sample_rate_hz: u32) -> Result<Self, AudioError> {
        Self::new(samples, sample_rate_hz, 32)
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f32> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn bit_depth_origin(&self) -> u16 {
        self.bit_depth_origin
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate_hz)
    }

    /// Sub-range by sample index, clamped to the buffer.
    pub fn slice(&self, start: usize, end: usize) -> AudioBuffer {
        let end = end.min(self.samples.len());
        let start = start.min(end);
        AudioBuffer {
            samples: self.samples[start..end].to_vec(),
            ..*self
        }
    }

    pub(crate) fn with_samples(&self, samples: Vec<f32>) -> AudioBuffer {
        AudioBuffer { samples, ..*self }
    }
}

fn map_hound(e: hound::Error) -> AudioError {
    match e {
        hound::Error::Unsupported => AudioError::UnsupportedFormat("unsupported WAV encoding".into()),
        hound::Error::FormatError(msg) if msg.contains("format") || msg.contains("codec") => {
            AudioError::UnsupportedFormat(msg.to_owned())
        }
        other => AudioError::BadWav(other.to_string()),
    }
}

/// Decodes RIFF/WAVE PCM (8/16/24/32-bit integer or 32-bit float), mixing
/// multichannel audio down to mono by averaging.
pub fn decode_wav(bytes: &[u8]) -> Result<AudioBuffer, AudioError> {
    let reader = hound::WavReader::new(Cursor::new(bytes)).map_err(map_hound)?;
    let spec = reader.spec();
    let channels = usize::from(spec.channels);
    if channels == 0 {
        return Err(AudioError::BadWav("zero channels".into()));
    }

    let interleaved: Vec<f32> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .collect::<Result<_, _>>()
            .map_err(map_hound)?,
        (hound::SampleFormat::Int, bits @ (8 | 16 | 24 | 32)) => {
            let scale = 1.0 / (1u64 << (bits - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| (f64::from(v) * scale) as f32))
                .collect::<Result<_, _>>()
                .map_err(map_hound)?
        }
        (fmt, bits) => {
            return Err(AudioError::UnsupportedFormat(format!("{fmt:?} with {bits} bits")));
        }
    };
    if !interleaved.len().is_multiple_of(channels) {
        return Err(AudioError::BadWav("partial frame at end of data".into()));
    }

    let mono = if channels == 1 {
        interleaved
    } else {
        interleaved
            .chunks_exact(channels)
            .map(|frame| frame.iter().map(|&s| f64::from(s)).sum::<f64>() as f32 / channels as f32)
            .collect()
    };
    AudioBuffer::new(mono, spec.sample_rate, spec.bits_per_sample)
}

/// Quantizes a normalized sample to signed 16-bit: clamp, scale by 32768,
/// round half away from zero.
pub fn quantize_i16(s: f32) -> i16 {
    let v = (f64::from(s).clamp(-1.0, 1.0) * 32768.0).round();
    v.clamp(-32768.0, 32767.0) as i16
}

/// Encodes mono 16-bit PCM.
pub fn encode_wav16(a: &AudioBuffer) -> Vec<u8> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: a.sample_rate_hz,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut cursor = Cursor::new(Vec::with_capacity(44 + 2 * a.len()));
    {
        let mut w = hound::WavWriter::new(&mut cursor, spec).expect("writing to memory");
        let mut w16 = w.get_i16_writer(a.len() as u32);
        for &s in &a.samples {
            w16.write_sample(quantize_i16(s));
        }
        w16.flush().expect("writing to memory");
        w.finalize().expect("writing to memory");
    }
    cursor.into_inner()
}

pub fn read_wav(path: &Path) -> Result<AudioBuffer, AudioError> {
    let bytes = std::fs::read(path).map_err(AudioError::Io)?;
    decode_wav(&bytes)
}

pub fn write_wav16(path: &Path, a: &AudioBuffer) -> Result<(), AudioError> {
    std::fs::write(path, encode_wav16(a)).map_err(AudioError::Io)
}
