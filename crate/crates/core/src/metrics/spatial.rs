//! Between-subject consistency entropy, spatial KL divergence and the
//! similarity index.

use rand::Rng;

use crate::error::{Error, Result};
use crate::filters::gaussian_blur;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyParams {
    pub rows: usize,
    pub cols: usize,
    /// Blur applied to the subject-proportion map, in cells; 0 disables it.
    pub blur_sigma_cells: f64,
    /// Value substituted for empty cells before renormalizing.
    pub floor: f64,
}

impl Default for EntropyParams {
    fn default() -> Self {
        Self {
            rows: 32,
            cols: 40,
            blur_sigma_cells: 1.0,
            floor: 1e-10,
        }
    }
}

/// Grid cell of a point, clamped to the grid.
fn cell(point: (f64, f64), dims_dva: (f64, f64), rows: usize, cols: usize) -> usize {
    let c = ((point.0 / dims_dva.0) * cols as f64)
        .floor()
        .clamp(0.0, (cols - 1) as f64) as usize;
    let r = ((point.1 / dims_dva.1) * rows as f64)
        .floor()
        .clamp(0.0, (rows - 1) as f64) as usize;
    r * cols + c
}

/// Replaces values below `floor` with `floor` and rescales to sum 1.
pub fn floor_and_renormalize(p: &[f64], floor: f64) -> Vec<f64> {
    let floored: Vec<f64> = p.iter().map(|v| v.max(floor)).collect();
    let total: f64 = floored.iter().sum();
    floored.iter().map(|v| v / total).collect()
}

/// Shannon entropy in nats; zero entries contribute nothing.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|v| **v > 0.0)
        .map(|v| v * v.ln())
        .sum::<f64>()
}

/// `sum p ln(p/q)`; terms with `p = 0` vanish, `q = 0` under `p > 0` is infinite.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions must share support");
    p.iter()
        .zip(q)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, b)| a * (a / b).ln())
        .sum()
}

/// Distribution over the entropy grid: per cell the share of subjects with a
/// return there, blurred, floored and renormalized. `None` without returns.
pub fn consistency_distribution(
    subject_returns: &[Vec<(f64, f64)>],
    image_dims_dva: (f64, f64),
    params: &EntropyParams,
) -> Result<Option<Vec<f64>>> {
    let (rows, cols) = (params.rows, params.cols);
    if rows == 0 || cols == 0 || !(image_dims_dva.0 > 0.0 && image_dims_dva.1 > 0.0) {
        return Err(Error::domain(
            "entropy grid and image extent must be non-empty",
        ));
    }
    if subject_returns.iter().all(|s| s.is_empty()) {
        return Ok(None);
    }
    let mut share = vec![0.0; rows * cols];
    let subjects = subject_returns.len() as f64;
    for returns in subject_returns {
        let mut hit = vec![false; rows * cols];
        for p in returns {
            hit[cell(*p, image_dims_dva, rows, cols)] = true;
        }
        for (s, h) in share.iter_mut().zip(&hit) {
            if *h {
                *s += 1.0 / subjects;
            }
        }
    }
    let blurred = gaussian_blur(&share, rows, cols, params.blur_sigma_cells);
    let total: f64 = blurred.iter().sum();
    let normalized: Vec<f64> = blurred.iter().map(|v| v / total).collect();
    Ok(Some(floor_and_renormalize(&normalized, params.floor)))
}

/// Entropy of the return-fixation distribution across subjects for one image.
pub fn consistency_entropy(
    subject_returns: &[Vec<(f64, f64)>],
    image_dims_dva: (f64, f64),
    params: &EntropyParams,
) -> Result<Option<f64>> {
    Ok(
        consistency_distribution(subject_returns, image_dims_dva, params)?
            .map(|p| shannon_entropy(&p)),
    )
}

/// Mean entropy when each subject's returns are replaced by as many uniformly
/// placed points, over `repetitions` draws.
pub fn chance_entropy<R: Rng + ?Sized>(
    returns_per_subject: &[usize],
    image_dims_dva: (f64, f64),
    params: &EntropyParams,
    repetitions: usize,
    rng: &mut R,
) -> Result<Option<f64>> {
    if repetitions == 0 || returns_per_subject.iter().all(|n| *n == 0) {
        return Ok(None);
    }
    let mut total = 0.0;
    for _ in 0..repetitions {
        let placed: Vec<Vec<(f64, f64)>> = returns_per_subject
            .iter()
            .map(|n| {
                (0..*n)
                    .map(|_| {
                        (
                            rng.random::<f64>() * image_dims_dva.0,
                            rng.random::<f64>() * image_dims_dva.1,
                        )
                    })
                    .collect()
            })
            .collect();
        total +=
            consistency_entropy(&placed, image_dims_dva, params)?.expect("non-empty placement");
    }
    Ok(Some(total / repetitions as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KldParams {
    pub resolution_dva: f64,
    pub floor: f64,
}

impl Default for KldParams {
    fn default() -> Self {
        Self {
            resolution_dva: 1.0,
            floor: 1e-10,
        }
    }
}

fn quantize(
    points: &[(f64, f64)],
    dims: (f64, f64),
    rows: usize,
    cols: usize,
    floor: f64,
) -> Vec<f64> {
    let mut counts = vec![0.0; rows * cols];
    for p in points {
        counts[cell(*p, dims, rows, cols)] += 1.0;
    }
    let n = points.len() as f64;
    let p: Vec<f64> = counts.iter().map(|c| c / n).collect();
    floor_and_renormalize(&p, floor)
}

/// `KL(returns || non_returns)` of fixation locations on a square grid.
/// `None` if either set is empty.
pub fn spatial_kld(
    returns: &[(f64, f64)],
    non_returns: &[(f64, f64)],
    image_dims_dva: (f64, f64),
    params: &KldParams,
) -> Result<Option<f64>> {
    if !(params.resolution_dva > 0.0 && image_dims_dva.0 > 0.0 && image_dims_dva.1 > 0.0) {
        return Err(Error::domain(
            "grid resolution and image extent must be positive",
        ));
    }
    if returns.is_empty() || non_returns.is_empty() {
        return Ok(None);
    }
    let cols = (image_dims_dva.0 / params.resolution_dva).ceil().max(1.0) as usize;
    let rows = (image_dims_dva.1 / params.resolution_dva).ceil().max(1.0) as usize;
    // cells are resolution-sized; the last row/column may be partial
    let dims = (
        cols as f64 * params.resolution_dva,
        rows as f64 * params.resolution_dva,
    );
    let p = quantize(returns, dims, rows, cols, params.floor);
    let q = quantize(non_returns, dims, rows, cols, params.floor);
    Ok(Some(kl_divergence(&p, &q).max(0.0)))
}

/// `1 - (s - m)/(s + m)`; 1 is perfect agreement, range [0, 2].
pub fn similarity_index(s: f64, m: f64) -> Result<f64> {
    if !(s >= 0.0 && m >= 0.0) || !(s + m > 0.0) || !(s + m).is_finite() {
        return Err(Error::domain(format!(
            "similarity index needs non-negative values with a positive sum, got s={s} m={m}"
        )));
    }
    Ok(1.0 - (s - m) / (s + m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::trial_rng;

    const DIMS: (f64, f64) = (40.0, 32.0);

    #[test]
    fn single_cell_entropy_is_floor_only() {
        let params = EntropyParams {
            blur_sigma_cells: 0.0,
            ..Default::default()
        };
        let p = consistency_distribution(&[vec![(5.5, 5.5)]], DIMS, &params)
            .unwrap()
            .unwrap();
        let h = shannon_entropy(&p);
        let peak = p.iter().copied().fold(0.0, f64::max);
        let floor_part: f64 = -p
            .iter()
            .filter(|v| **v < peak)
            .map(|v| v * v.ln())
            .sum::<f64>();
        assert!(h - floor_part < 1e-6);
    }

    #[test]
    fn uniform_entropy_is_log_cells() {
        let params = EntropyParams::default();
        let everywhere: Vec<(f64, f64)> = (0..32)
            .flat_map(|r| (0..40).map(move |c| (c as f64 + 0.5, r as f64 + 0.5)))
            .collect();
        let h = consistency_entropy(&[everywhere], DIMS, &params)
            .unwrap()
            .unwrap();
        assert!((h - 1280f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn identical_subjects_match_single_subject() {
        let params = EntropyParams::default();
        let pts = vec![(3.0, 4.0), (20.0, 10.0), (33.0, 30.0)];
        let one = consistency_entropy(std::slice::from_ref(&pts), DIMS, &params).unwrap();
        let two = consistency_entropy(&[pts.clone(), pts], DIMS, &params).unwrap();
        assert!((one.unwrap() - two.unwrap()).abs() < 1e-12);
        assert_eq!(consistency_entropy(&[vec![]], DIMS, &params).unwrap(), None);
    }

    #[test]
    fn chance_beats_concentrated() {
        let params = EntropyParams::default();
        let concentrated = vec![vec![(10.0, 10.0); 5]; 4];
        let h = consistency_entropy(&concentrated, DIMS, &params)
            .unwrap()
            .unwrap();
        let mut rng = trial_rng(4, "chance");
        let chance = chance_entropy(&[5; 4], DIMS, &params, 100, &mut rng)
            .unwrap()
            .unwrap();
        assert!(chance > h);
    }

    #[test]
    fn kld_cases() {
        let p = [0.9, 0.1];
        let q = [0.5, 0.5];
        let expected = 0.9 * 1.8f64.ln() + 0.1 * 0.2f64.ln();
        assert!((kl_divergence(&p, &q) - expected).abs() < 1e-12);
        assert!((kl_divergence(&p, &q) - 0.3681).abs() < 1e-4);
        let pts = vec![(1.5, 2.5), (7.2, 3.3), (7.9, 3.9)];
        let k = spatial_kld(&pts, &pts, (10.0, 8.0), &KldParams::default())
            .unwrap()
            .unwrap();
        assert!(k.abs() < 1e-9);
        assert_eq!(
            spatial_kld(&[], &pts, (10.0, 8.0), &KldParams::default()).unwrap(),
            None
        );
    }

    #[test]
    fn similarity_index_cases() {
        assert_eq!(similarity_index(0.3, 0.3).unwrap(), 1.0);
        assert!((similarity_index(0.2, 0.1).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(similarity_index(0.4, 0.0).unwrap(), 0.0);
        assert!(matches!(similarity_index(0.0, 0.0), Err(Error::Domain(_))));
    }
}
