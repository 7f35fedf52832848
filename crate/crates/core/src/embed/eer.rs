use serde::Serialize;

use super::EmbedError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EerResult {
    pub eer: f64,
    /// The swept threshold with the smallest `|FAR - FRR|`.
    pub threshold: f64,
    /// `(threshold, FAR)` per swept threshold, ascending.
    pub far_curve: Vec<(f64, f64)>,
    /// `(threshold, FRR)` per swept threshold, ascending.
    pub frr_curve: Vec<(f64, f64)>,
}

/// Sweeps every distinct score as a threshold, plus one point above the
/// maximum where everything is rejected. `FRR(t)` counts genuine scores
/// below `t`, `FAR(t)` impostor scores at or above `t`. Where the curves
/// cross between two sweep points the rate is interpolated linearly.
pub fn compute_eer(genuine: &[f64], impostor: &[f64]) -> Result<EerResult, EmbedError> {
    if genuine.is_empty() {
        return Err(EmbedError::InsufficientScores("no genuine scores"));
    }
    if impostor.is_empty() {
        return Err(EmbedError::InsufficientScores("no impostor scores"));
    }
    if genuine.iter().chain(impostor).any(|s| !s.is_finite()) {
        return Err(EmbedError::InsufficientScores("non-finite score"));
    }
    let mut g = genuine.to_vec();
    let mut i = impostor.to_vec();
    g.sort_by(f64::total_cmp);
    i.sort_by(f64::total_cmp);

    let mut thresholds: Vec<f64> = g.iter().chain(&i).copied().collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let top = *thresholds.last().expect("non-empty");
    thresholds.push(top + 1.0);

    let (ng, ni) = (g.len() as f64, i.len() as f64);
    let far: Vec<f64> = thresholds
        .iter()
        .map(|&t| (i.len() - i.partition_point(|&s| s < t)) as f64 / ni)
        .collect();
    let frr: Vec<f64> = thresholds
        .iter()
        .map(|&t| g.partition_point(|&s| s < t) as f64 / ng)
        .collect();

    // FAR - FRR is non-increasing and ends at -1, so a first k with d <= 0
    // exists. At the lowest threshold FRR = 0, hence d >= 0 there.
    let d = |k: usize| far[k] - frr[k];
    let k = (0..thresholds.len()).find(|&k| d(k) <= 0.0).expect("sentinel point");
    let (eer, best) = if d(k) == 0.0 || k == 0 {
        (far[k], k)
    } else {
        let (d0, d1) = (d(k - 1), d(k));
        let alpha = d0 / (d0 - d1);
        let eer = far[k - 1] + alpha * (far[k] - far[k - 1]);
        let best = if d0.abs() <= d1.abs() { k - 1 } else { k };
        (eer, best)
    };

    Ok(EerResult {
        eer: eer.clamp(0.0, 1.0),
        threshold: thresholds[best],
        far_curve: thresholds.iter().copied().zip(far.iter().copied()).collect(),
        frr_curve: thresholds.iter().copied().zip(frr.iter().copied()).collect(),
    })
}
