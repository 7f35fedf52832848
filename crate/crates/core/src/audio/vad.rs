//! Short-time-energy voice activity detection.

use serde::{Deserialize, Serialize};

use super::wav::AudioBuffer;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VadConfig {
    pub frame_ms: f64,
    pub hop_ms: f64,
    /// Frames whose energy is within this many dB of the loudest frame are
    /// voiced.
    pub threshold_db: f64,
    /// Unvoiced gaps of at most this many frames between voiced frames are
    /// bridged.
    pub hangover_frames: usize,
    /// Absolute mean-square floor; nothing quieter is ever voiced.
    pub min_energy: f64,
}

impl Default for VadConfig {
    fn default() -> Self {
        Self {
            frame_ms: 30.0,
            hop_ms: 10.0,
            threshold_db: -35.0,
            hangover_frames: 5,
            min_energy: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoicedSegment {
    pub start_s: f64,
    pub end_s: f64,
}

impl VoicedSegment {
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

fn frame_geometry(cfg: &VadConfig, rate: u32) -> (usize, usize) {
    let frame = ((cfg.frame_ms * f64::from(rate) / 1000.0).round() as usize).max(1);
    let hop = ((cfg.hop_ms * f64::from(rate) / 1000.0).round() as usize).max(1);
    (frame, hop)
}

/// Per-frame voiced flags after thresholding and hangover bridging.
fn voiced_frames(samples: &[f32], frame: usize, hop: usize, cfg: &VadConfig) -> Vec<bool> {
    if samples.is_empty() {
        return Vec::new();
    }
    let n_frames = if samples.len() <= frame {
        1
    } else {
        1 + (samples.len() - frame) / hop
    };
    let energies: Vec<f64> = (0..n_frames)
        .map(|i| {
            let s = &samples[i * hop..(i * hop + frame).min(samples.len())];
            s.iter().map(|&x| f64::from(x) * f64::from(x)).sum::<f64>() / s.len() as f64
        })
        .collect();
    let peak = energies.iter().copied().fold(0.0, f64::max);
    if peak < cfg.min_energy {
        return vec![false; n_frames];
    }
    let thr = (peak * 10f64.powf(cfg.threshold_db / 10.0)).max(cfg.min_energy);
    let mut voiced: Vec<bool> = energies.iter().map(|&e| e >= thr).collect();

    let mut last_voiced: Option<usize> = None;
    for i in 0..n_frames {
        if voiced[i] {
            if let Some(p) = last_voiced {
                let gap = i - p - 1;
                if gap > 0 && gap <= cfg.hangover_frames {
                    voiced[p + 1..i].iter_mut().for_each(|v| *v = true);
                }
            }
            last_voiced = Some(i);
        }
    }
    voiced
}

/// Voiced regions in time order. Each voiced frame owns the hop-wide slice
/// centred on its centre; runs touching either end of the buffer extend to
/// that end.
pub fn detect_voiced(a: &AudioBuffer, cfg: &VadConfig) -> Vec<VoicedSegment> {
    let rate = f64::from(a.sample_rate_hz());
    let (frame, hop) = frame_geometry(cfg, a.sample_rate_hz());
    let flags = voiced_frames(a.samples(), frame, hop, cfg);
    let duration = a.duration_s();
    let n_frames = flags.len();

    let mut segments = Vec::new();
    let mut i = 0;
    while i < n_frames {
        if !flags[i] {
            i += 1;
            continue;
        }
        let first = i;
        while i < n_frames && flags[i] {
            i += 1;
        }
        let last = i - 1;
        let centre = |k: usize| (k * hop) as f64 + frame.min(a.len()) as f64 / 2.0;
        let start = if first == 0 {
            0.0
        } else {
            (centre(first) - hop as f64 / 2.0) / rate
        };
        let end = if last == n_frames - 1 {
            duration
        } else {
            (centre(last) + hop as f64 / 2.0) / rate
        };
        let (start, end) = (start.clamp(0.0, duration), end.clamp(0.0, duration));
        if end > start {
            segments.push(VoicedSegment {
                start_s: start,
                end_s: end,
            });
        }
    }
    segments
}

/// Concatenates the voiced regions in order.
pub fn trim_silence(a: &AudioBuffer, cfg: &VadConfig) -> AudioBuffer {
    let rate = f64::from(a.sample_rate_hz());
    let mut out = Vec::with_capacity(a.len());
    for seg in detect_voiced(a, cfg) {
        let s = ((seg.start_s * rate).round() as usize).min(a.len());
        let e = ((seg.end_s * rate).round() as usize).min(a.len());
        out.extend_from_slice(&a.samples()[s..e]);
    }
    a.with_samples(out)
}
