//! Band-limited sample-rate conversion with a Kaiser-windowed sinc kernel.
//!
//! The conversion ratio is reduced to `up/down`; output sample `n` sits at
//! input position `n * down / up`, so only `up` distinct kernel phases exist.
//! Their coefficients are precomputed when `up` is small enough.

use serde::{Deserialize, Serialize};

use super::wav::{quantize_i16, AudioBuffer};
use super::AudioError;

const MAX_PHASE_TABLE: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ResamplerConfig {
    /// Kernel length in input samples at unit scale.
    pub taps: usize,
    pub kaiser_beta: f64,
    /// Cutoff as a fraction of the lower of the two Nyquist frequencies.
    pub rolloff: f64,
}

impl Default for ResamplerConfig {
    fn default() -> Self {
        Self {
            taps: 64,
            kaiser_beta: 8.6,
            rolloff: 0.92,
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Zeroth-order modified Bessel function of the first kind.
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

struct Kernel {
    up: u64,
    down: u64,
    cutoff: f64,
    half_width: f64,
    half_taps: i64,
    beta: f64,
    i0_beta: f64,
    table: Option<Vec<Vec<f64>>>,
}

impl Kernel {
    fn new(src: u32, dst: u32, cfg: &ResamplerConfig) -> Self {
        let g = gcd(u64::from(src), u64::from(dst));
        let (up, down) = (u64::from(dst) / g, u64::from(src) / g);
        let scale = (up as f64 / down as f64).min(1.0);
        let half_width = cfg.taps as f64 / 2.0 / scale;
        let mut k = Kernel {
            up,
            down,
            cutoff: cfg.rolloff * scale,
            half_width,
            half_taps: half_width.ceil() as i64,
            beta: cfg.kaiser_beta,
            i0_beta: bessel_i0(cfg.kaiser_beta),
            table: None,
        };
        if up <= MAX_PHASE_TABLE {
            k.table = Some((0..up).map(|p| k.phase_coeffs(p)).collect());
        }
        k
    }

    fn weight(&self, x: f64) -> f64 {
        let r = x / self.half_width;
        if r.abs() >= 1.0 {
            return 0.0;
        }
        let w = bessel_i0(self.beta * (1.0 - r * r).sqrt()) / self.i0_beta;
        self.cutoff * sinc(self.cutoff * x) * w
    }

    /// Coefficients for input offsets `-half_taps+1 ..= half_taps` relative to
    /// the floor position, normalized to unit DC gain.
    fn phase_coeffs(&self, phase: u64) -> Vec<f64> {
        let frac = phase as f64 / self.up as f64;
        let mut c: Vec<f64> = (-self.half_taps + 1..=self.half_taps)
            .map(|j| self.weight(j as f64 - frac))
            .collect();
        let sum: f64 = c.iter().sum();
        if sum.abs() > 0.0 {
            c.iter_mut().for_each(|v| *v /= sum);
        }
        c
    }
}

/// Number of output samples: `round(n_in * dst / src)`.
pub fn output_len(n_in: usize, src: u32, dst: u32) -> usize {
    let num = n_in as u128 * u128::from(dst);
    let den = u128::from(src);
    ((num + den / 2) / den) as usize
}

/// Resamples `input` from `src` to `dst` Hz. Samples beyond either end are
/// taken as the nearest edge sample, which keeps constant signals constant.
pub fn resample(input: &[f32], src: u32, dst: u32, cfg: &ResamplerConfig) -> Vec<f32> {
    if input.is_empty() {
        return Vec::new();
    }
    if src == dst {
        return input.to_vec();
    }
    let kernel = Kernel::new(src, dst, cfg);
    let n_out = output_len(input.len(), src, dst);
    let last = input.len() as i64 - 1;
    let mut out = Vec::with_capacity(n_out);
    let mut scratch;

    for n in 0..n_out as u64 {
        let pos = n * kernel.down;
        let base = (pos / kernel.up) as i64;
        let phase = pos % kernel.up;
        let coeffs: &[f64] = match &kernel.table {
            Some(t) => &t[phase as usize],
            None => {
                scratch = kernel.phase_coeffs(phase);
                &scratch
            }
        };
        let first = base - kernel.half_taps + 1;
        let acc: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let idx = (first + j as i64).clamp(0, last) as usize;
                c * f64::from(input[idx])
            })
            .sum();
        out.push(acc as f32);
    }
    out
}

/// Converts sample rate and quantizes to `target_bits` (16 only).
pub fn convert_pcm(
    a: &AudioBuffer,
    target_rate_hz: u32,
    target_bits: u16,
    cfg: &ResamplerConfig,
) -> Result<AudioBuffer, AudioError> {
    if target_rate_hz == 0 {
        return Err(AudioError::InvalidRate(0));
    }
    if target_bits != 16 {
        return Err(AudioError::UnsupportedFormat(format!("{target_bits}-bit output")));
    }
    let resampled = resample(a.samples(), a.sample_rate_hz(), target_rate_hz, cfg);
    let quantized = resampled
        .into_iter()
        .map(|s| f32::from(quantize_i16(s)) / 32768.0)
        .collect();
    AudioBuffer::new(quantized, target_rate_hz, target_bits)
}
