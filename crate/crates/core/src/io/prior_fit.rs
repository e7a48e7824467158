use log::warn;

use crate::engine::SaccadePrior;
use crate::error::{Error, Result};
use crate::scanpath::Scanpath;

/// Below this many saccades the fitted histogram is noisy.
pub const RECOMMENDED_MIN_SACCADES: usize = 100;

/// Every saccade size in the dataset, pooled over trials and subjects.
pub fn saccade_sizes(dataset: &[Scanpath]) -> Vec<f64> {
    dataset
        .iter()
        .flat_map(|s| s.fixations.windows(2).map(|w| w[0].distance(&w[1])))
        .collect()
}

/// Normalized histogram of the pooled saccade sizes over `n_bins` equal bins
/// from 0 to the largest size.
pub fn fit_saccade_prior(dataset: &[Scanpath], n_bins: usize) -> Result<SaccadePrior> {
    if n_bins == 0 {
        return Err(Error::Fit("need at least one bin".into()));
    }
    let fixations: usize = dataset.iter().map(Scanpath::len).sum();
    if fixations < 2 {
        return Err(Error::Fit(format!(
            "need at least 2 fixations, dataset has {fixations}"
        )));
    }
    let sizes = saccade_sizes(dataset);
    if sizes.is_empty() {
        return Err(Error::Fit(
            "no trial has two fixations, so there are no saccades".into(),
        ));
    }
    if sizes.len() < RECOMMENDED_MIN_SACCADES {
        warn!(
            "fitting the saccade prior from {} saccades; at least {RECOMMENDED_MIN_SACCADES} are recommended",
            sizes.len()
        );
    }
    let max = sizes.iter().copied().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(Error::Fit("all saccades have zero length".into()));
    }
    let width = max / n_bins as f64;
    let mut edges: Vec<f64> = (0..n_bins).map(|i| width * i as f64).collect();
    edges.push(max);
    let mut counts = vec![0.0; n_bins];
    for s in &sizes {
        let k = ((s / width).floor() as usize).min(n_bins - 1);
        counts[k] += 1.0;
    }
    SaccadePrior::from_weights(edges, counts).map_err(|e| Error::Fit(e.to_string()))
}
