//! Log-mel spectrograms and the binary feature-file format.

use std::io::{Read, Write};

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use super::wav::AudioBuffer;
use super::AudioError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MelConfig {
    pub n_mels: usize,
    pub window_ms: f64,
    pub hop_ms: f64,
    pub fft_size: usize,
    pub source_rate: u32,
    pub log_floor: f64,
    pub fmin_hz: f64,
    /// Defaults to the Nyquist frequency.
    pub fmax_hz: Option<f64>,
}

impl Default for MelConfig {
    fn default() -> Self {
        Self {
            n_mels: 40,
            window_ms: 25.0,
            hop_ms: 10.0,
            fft_size: 512,
            source_rate: 16000,
            log_floor: 1e-10,
            fmin_hz: 0.0,
            fmax_hz: None,
        }
    }
}

impl MelConfig {
    pub fn window_len(&self) -> usize {
        (self.window_ms * f64::from(self.source_rate) / 1000.0).round() as usize
    }

    pub fn hop_len(&self) -> usize {
        (self.hop_ms * f64::from(self.source_rate) / 1000.0).round() as usize
    }

    pub fn fmax(&self) -> f64 {
        self.fmax_hz.unwrap_or(f64::from(self.source_rate) / 2.0)
    }

    /// `1 + (n - window) / hop` for `n >= window`, else 0.
    pub fn frame_count(&self, n_samples: usize) -> usize {
        let (w, h) = (self.window_len(), self.hop_len());
        if n_samples < w {
            0
        } else {
            1 + (n_samples - w) / h
        }
    }

    fn validate(&self) -> Result<(), AudioError> {
        let bad = |m: &str| Err(AudioError::InvalidConfig(m.to_owned()));
        if self.source_rate == 0 {
            return bad("source_rate must be positive");
        }
        if self.n_mels == 0 {
            return bad("n_mels must be positive");
        }
        if self.window_len() == 0 || self.hop_len() == 0 {
            return bad("window and hop must span at least one sample");
        }
        if self.fft_size < self.window_len() {
            return bad("fft_size must be at least the window length");
        }
        if !(self.log_floor.is_finite() && self.log_floor > 0.0) {
            return bad("log_floor must be positive");
        }
        if !(self.fmin_hz >= 0.0 && self.fmin_hz < self.fmax()) {
            return bad("need 0 <= fmin < fmax");
        }
        Ok(())
    }
}

pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular HTK-spaced filters over the `fft_size / 2 + 1` positive bins,
/// each peaking at 1.
pub fn mel_filterbank(cfg: &MelConfig) -> Vec<Vec<f64>> {
    let n_bins = cfg.fft_size / 2 + 1;
    let (lo, hi) = (hz_to_mel(cfg.fmin_hz), hz_to_mel(cfg.fmax()));
    let points: Vec<f64> = (0..cfg.n_mels + 2)
        .map(|i| mel_to_hz(lo + (hi - lo) * i as f64 / (cfg.n_mels + 1) as f64))
        .collect();
    let bin_hz = f64::from(cfg.source_rate) / cfg.fft_size as f64;

    (0..cfg.n_mels)
        .map(|m| {
            let (left, centre, right) = (points[m], points[m + 1], points[m + 2]);
            (0..n_bins)
                .map(|k| {
                    let f = k as f64 * bin_hz;
                    let up = (f - left) / (centre - left);
                    let down = (right - f) / (right - centre);
                    up.min(down).max(0.0)
                })
                .collect()
        })
        .collect()
}

fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MelSpectrogram {
    n_frames: usize,
    /// Row-major `n_frames x n_mels`.
    values: Vec<f64>,
    config: MelConfig,
}

impl MelSpectrogram {
    pub fn from_values(n_frames: usize, values: Vec<f64>, config: MelConfig) -> Result<Self, AudioError> {
        if values.len() != n_frames * config.n_mels {
            return Err(AudioError::InvalidConfig(format!(
                "{} values do not form {n_frames} x {} frames",
                values.len(),
                config.n_mels
            )));
        }
        Ok(Self {
            n_frames,
            values,
            config,
        })
    }

    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn n_mels(&self) -> usize {
        self.config.n_mels
    }

    pub fn config(&self) -> &MelConfig {
        &self.config
    }

    pub fn frame(&self, i: usize) -> &[f64] {
        let m = self.config.n_mels;
        &self.values[i * m..(i + 1) * m]
    }

    pub fn frames(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.config.n_mels)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Writes the feature file: an 8-byte magic, a little-endian header
    /// (`n_frames`, `n_mels`, `sample_rate`, `window_len`, `hop_len`,
    /// `fft_size` as u32; `log_floor`, `fmin_hz`, `fmax_hz` as f64), then the
    /// frames row-major as little-endian f32.
    pub fn write_features<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let c = &self.config;
        w.write_all(FEATURE_MAGIC)?;
        for v in [
            self.n_frames,
            c.n_mels,
            c.source_rate as usize,
            c.window_len(),
            c.hop_len(),
            c.fft_size,
        ] {
            w.write_all(&(v as u32).to_le_bytes())?;
        }
        for v in [c.log_floor, c.fmin_hz, c.fmax()] {
            w.write_all(&v.to_le_bytes())?;
        }
        for &v in &self.values {
            w.write_all(&(v as f32).to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_features<R: Read>(mut r: R) -> Result<Self, AudioError> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(AudioError::Io)?;
        if &magic != FEATURE_MAGIC {
            return Err(AudioError::BadFeatureFile("bad magic".into()));
        }
        let mut u = [0u32; 6];
        for v in &mut u {
            let mut b = [0u8; 4];
            r.read_exact(&mut b).map_err(AudioError::Io)?;
            *v = u32::from_le_bytes(b);
        }
        let mut f = [0f64; 3];
        for v in &mut f {
            let mut b = [0u8; 8];
            r.read_exact(&mut b).map_err(AudioError::Io)?;
            *v = f64::from_le_bytes(b);
        }
        let [n_frames, n_mels, rate, window, hop, fft] = u.map(|v| v as usize);
        let config = MelConfig {
            n_mels,
            window_ms: window as f64 * 1000.0 / rate.max(1) as f64,
            hop_ms: hop as f64 * 1000.0 / rate.max(1) as f64,
            fft_size: fft,
            source_rate: rate as u32,
            log_floor: f[0],
            fmin_hz: f[1],
            fmax_hz: Some(f[2]),
        };
        let mut values = Vec::with_capacity(n_frames * n_mels);
        let mut b = [0u8; 4];
        for _ in 0..n_frames * n_mels {
            r.read_exact(&mut b)
                .map_err(|_| AudioError::BadFeatureFile("truncated frame data".into()))?;
            values.push(f64::from(f32::from_le_bytes(b)));
        }
        Self::from_values(n_frames, values, config)
    }
}

const FEATURE_MAGIC: &[u8; 8] = b"TVXMEL01";

/// Power STFT (Hann window, no centring) through the mel filterbank, then
/// natural log with a floor.
pub fn log_mel(a: &AudioBuffer, cfg: &MelConfig) -> Result<MelSpectrogram, AudioError> {
    cfg.validate()?;
    if a.sample_rate_hz() != cfg.source_rate {
        return Err(AudioError::RateMismatch {
            expected: cfg.source_rate,
            got: a.sample_rate_hz(),
        });
    }
    let (win_len, hop) = (cfg.window_len(), cfg.hop_len());
    if a.len() < win_len {
        return Err(AudioError::TooShort {
            needed: win_len,
            got: a.len(),
        });
    }
    let n_frames = cfg.frame_count(a.len());
    let window = hann(win_len);
    let bank = mel_filterbank(cfg);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(cfg.fft_size);
    let n_bins = cfg.fft_size / 2 + 1;
    let floor_ln = cfg.log_floor.ln();

    let mut buf = vec![Complex::new(0.0, 0.0); cfg.fft_size];
    let mut power = vec![0.0f64; n_bins];
    let mut values = Vec::with_capacity(n_frames * cfg.n_mels);
    let samples = a.samples();

    for f in 0..n_frames {
        let frame = &samples[f * hop..f * hop + win_len];
        for (slot, (x, w)) in buf.iter_mut().zip(frame.iter().zip(&window)) {
            *slot = Complex::new(f64::from(*x) * w, 0.0);
        }
        buf[win_len..].iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
        fft.process(&mut buf);
        for (p, c) in power.iter_mut().zip(&buf[..n_bins]) {
            *p = c.norm_sqr();
        }
        for filt in &bank {
            let e: f64 = filt.iter().zip(&power).map(|(w, p)| w * p).sum();
            values.push(if e > cfg.log_floor { e.ln() } else { floor_ln });
        }
    }
    MelSpectrogram::from_values(n_frames, values, cfg.clone())
}
