use serde::Serialize;

use super::EmbedError;

const EPS: f64 = 1e-9;

/// Equal-length analysis windows over an utterance, in start order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowPlan {
    pub windows: Vec<(f64, f64)>,
    /// The utterance is shorter than one window; the single window extends
    /// past its end and must be zero-padded.
    pub padded: bool,
}

impl WindowPlan {
    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }
}

fn check(duration_s: f64, window_s: f64) -> Result<(), EmbedError> {
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(EmbedError::EmptyAudio);
    }
    if !(window_s.is_finite() && window_s > 0.0) {
        return Err(EmbedError::InvalidWindow(format!("window length {window_s}")));
    }
    Ok(())
}

/// Non-overlapping training partials from time zero. A remainder of at
/// least half a partial gets an extra window aligned to the utterance end;
/// shorter remainders are dropped. Utterances shorter than one partial give
/// a single padded window.
pub fn plan_training_partials(duration_s: f64, partial_s: f64) -> Result<WindowPlan, EmbedError> {
    check(duration_s, partial_s)?;
    if duration_s < partial_s - EPS {
        return Ok(WindowPlan {
            windows: vec![(0.0, partial_s)],
            padded: true,
        });
    }
    let n_full = (duration_s / partial_s + EPS).floor() as usize;
    let mut windows: Vec<(f64, f64)> = (0..n_full)
        .map(|i| (i as f64 * partial_s, (i + 1) as f64 * partial_s))
        .collect();
    let remainder = duration_s - n_full as f64 * partial_s;
    if remainder > EPS && remainder >= partial_s / 2.0 - EPS {
        windows.push((duration_s - partial_s, duration_s));
    }
    Ok(WindowPlan { windows, padded: false })
}

/// Overlapping inference windows with hop `window_s * (1 - overlap)`. Any
/// tail not covered by a full window gets one extra window aligned to the
/// utterance end, so the plan always covers `[0, duration]`.
pub fn plan_inference_windows(duration_s: f64, window_s: f64, overlap: f64) -> Result<WindowPlan, EmbedError> {
    check(duration_s, window_s)?;
    if !(0.0..1.0).contains(&overlap) {
        return Err(EmbedError::InvalidWindow(format!("overlap {overlap}")));
    }
    if duration_s <= window_s + EPS {
        return Ok(WindowPlan {
            windows: vec![(0.0, window_s)],
            padded: duration_s < window_s - EPS,
        });
    }
    let hop = window_s * (1.0 - overlap);
    let mut windows = Vec::new();
    let mut i = 0usize;
    loop {
        let start = i as f64 * hop;
        if start + window_s > duration_s + EPS {
            break;
        }
        windows.push((start, start + window_s));
        i += 1;
    }
    let last_end = windows.last().map_or(0.0, |w| w.1);
    if last_end < duration_s - EPS {
        windows.push((duration_s - window_s, duration_s));
    }
    Ok(WindowPlan { windows, padded: false })
}
