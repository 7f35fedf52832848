use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::vector::SpeakerEmbedding;
use super::EmbedError;

/// Power-iteration settings for the principal-axes projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProjectionConfig {
    pub seed: u64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tolerance: 1e-9,
            max_iterations: 1000,
        }
    }
}

pub fn project_2d(embeddings: &[SpeakerEmbedding], cfg: &ProjectionConfig) -> Result<Vec<(f64, f64)>, EmbedError> {
    let points: Vec<&[f64]> = embeddings.iter().map(SpeakerEmbedding::vector).collect();
    project_points(&points, cfg)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Centers the points and projects them onto the top two principal axes.
/// Axes with no variance yield a zero coordinate. Each axis is signed so
/// its largest-magnitude component is positive.
pub fn project_points<P: AsRef<[f64]>>(points: &[P], cfg: &ProjectionConfig) -> Result<Vec<(f64, f64)>, EmbedError> {
    if points.len() < 2 {
        return Err(EmbedError::InsufficientPoints(points.len()));
    }
    let dim = points[0].as_ref().len();
    if let Some(p) = points.iter().find(|p| p.as_ref().len() != dim) {
        return Err(EmbedError::DimensionMismatch {
            expected: dim,
            got: p.as_ref().len(),
        });
    }
    let n = points.len() as f64;
    let mut mean = vec![0.0; dim];
    for p in points {
        mean.iter_mut().zip(p.as_ref()).for_each(|(m, x)| *m += x);
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let centered: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.as_ref().iter().zip(&mean).map(|(x, m)| x - m).collect())
        .collect();

    let scale = centered.iter().map(|r| norm(r)).fold(0.0, f64::max);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(cfg.seed);
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(2);
    for _ in 0..2 {
        let axis = if scale == 0.0 {
            None
        } else {
            principal_axis(&centered, &axes, scale, &mut rng, cfg)
        };
        axes.push(axis.unwrap_or_else(|| vec![0.0; dim]));
    }

    Ok(centered.iter().map(|r| (dot(r, &axes[0]), dot(r, &axes[1]))).collect())
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    for a in against {
        let c = dot(v, a);
        v.iter_mut().zip(a).for_each(|(x, y)| *x -= c * y);
    }
}

/// Power iteration on `X^T X` restricted to the complement of `found`.
fn principal_axis(
    x: &[Vec<f64>],
    found: &[Vec<f64>],
    scale: f64,
    rng: &mut Xoshiro256PlusPlus,
    cfg: &ProjectionConfig,
) -> Option<Vec<f64>> {
    let dim = x[0].len();
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    orthogonalize(&mut v, found);
    let nv = norm(&v);
    if nv == 0.0 {
        return None;
    }
    v.iter_mut().for_each(|c| *c /= nv);

    // Relative cut-off under which the remaining variance counts as zero.
    let floor = scale * 1e-10;
    for _ in 0..cfg.max_iterations {
        let xv: Vec<f64> = x.iter().map(|r| dot(r, &v)).collect();
        let mut w = vec![0.0; dim];
        for (r, c) in x.iter().zip(&xv) {
            w.iter_mut().zip(r).for_each(|(a, b)| *a += c * b);
        }
        orthogonalize(&mut w, found);
        let nw = norm(&w);
        if nw <= floor * floor * x.len() as f64 || norm(&xv) <= floor {
            return None;
        }
        w.iter_mut().for_each(|c| *c /= nw);
        let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if delta < cfg.tolerance {
            break;
        }
    }
    let lead = v
        .iter()
        .copied()
        .fold(0.0f64, |m, c| if c.abs() > m.abs() { c } else { m });
    if lead < 0.0 {
        v.iter_mut().for_each(|c| *c = -*c);
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    }

    fn embed_in(dim: usize, pts: &[(f64, f64)]) -> Vec<Vec<f64>> {
        // two orthonormal directions in `dim`-space
        let s = 1.0 / 2f64.sqrt();
        pts.iter()
            .map(|&(a, b)| {
                let mut v = vec![0.0; dim];
                v[3] = a * s;
                v[7] = a * s;
                v[5] = b;
                v
            })
            .collect()
    }

    #[test]
    fn planar_points_keep_distances() {
        let pts = [(0.0, 0.0), (3.0, 1.0), (-1.0, 2.0), (0.5, -2.5), (2.0, 2.0)];
        let hi = embed_in(256, &pts);
        let proj = project_points(&hi, &ProjectionConfig::default()).unwrap();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                assert!((dist(proj[i], proj[j]) - dist(pts[i], pts[j])).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn collinear_points_stay_collinear() {
        let base: Vec<f64> = (0..256).map(|i| (i as f64 * 0.37).sin()).collect();
        let dir: Vec<f64> = (0..256).map(|i| (i as f64 * 0.11).cos()).collect();
        let pts: Vec<Vec<f64>> = [0.0, 1.0, 2.5]
            .iter()
            .map(|t| base.iter().zip(&dir).map(|(b, d)| b + t * d).collect())
            .collect();
        let p = project_points(&pts, &ProjectionConfig::default()).unwrap();
        let cross = (p[1].0 - p[0].0) * (p[2].1 - p[0].1) - (p[1].1 - p[0].1) * (p[2].0 - p[0].0);
        assert!(cross.abs() < 1e-9);
        assert!(p.iter().all(|q| q.1.abs() < 1e-9));
    }

    #[test]
    fn identical_points_at_origin() {
        let pts = vec![vec![0.2; 16]; 4];
        let p = project_points(&pts, &ProjectionConfig::default()).unwrap();
        assert!(p.iter().all(|&q| q == (0.0, 0.0)));
    }

    #[test]
    fn deterministic_for_seed() {
        let pts: Vec<Vec<f64>> = (0..6)
            .map(|i| (0..10).map(|j| ((i * 13 + j * 7) % 5) as f64).collect())
            .collect();
        let cfg = ProjectionConfig::default();
        assert_eq!(project_points(&pts, &cfg).unwrap(), project_points(&pts, &cfg).unwrap());
        assert!(project_points(&pts[..1], &cfg).is_err());
    }
}
