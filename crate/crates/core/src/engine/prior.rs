//! Saccade-size prior: a histogram over amplitudes in dva.

use rand::Rng;
use statrs::distribution::{ContinuousCDF, Gamma};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
}

/// Binned amplitude distribution. Within a bin the mass is spread uniformly,
/// so the CDF is the linear interpolation of the cumulative bin masses.
#[derive(Debug, Clone, PartialEq)]
pub struct SaccadePrior {
    bin_edges: Vec<f64>,
    probabilities: Vec<f64>,
    interpolation: Interpolation,
}

impl SaccadePrior {
    pub fn new(bin_edges: Vec<f64>, probabilities: Vec<f64>) -> Result<Self> {
        if bin_edges.len() < 2 || probabilities.len() + 1 != bin_edges.len() {
            return Err(Error::dimension(format!(
                "{} edges cannot bound {} bins",
                bin_edges.len(),
                probabilities.len()
            )));
        }
        if bin_edges[0] != 0.0 {
            return Err(Error::domain("saccade prior edges must start at 0"));
        }
        if bin_edges
            .windows(2)
            .any(|w| !(w[1] > w[0]) || !w[1].is_finite())
        {
            return Err(Error::domain(
                "saccade prior edges must be strictly increasing",
            ));
        }
        if probabilities.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
            return Err(Error::domain(
                "saccade prior probabilities must be non-negative",
            ));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "saccade prior sums to {sum}, expected 1"
            )));
        }
        Ok(Self {
            bin_edges,
            probabilities,
            interpolation: Interpolation::Linear,
        })
    }

    /// Normalizes non-negative bin weights into a prior.
    pub fn from_weights(bin_edges: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::domain("saccade prior needs positive total mass"));
        }
        Self::new(bin_edges, weights.into_iter().map(|w| w / sum).collect())
    }

    /// Gamma(shape, scale) discretized on `n_bins` equal bins up to its
    /// 0.999 quantile; the tail beyond the last edge is dropped.
    pub fn gamma(shape: f64, scale: f64, n_bins: usize) -> Result<Self> {
        if n_bins == 0 {
            return Err(Error::domain("need at least one bin"));
        }
        let dist = Gamma::new(shape, 1.0 / scale)
            .map_err(|e| Error::domain(format!("invalid gamma parameters: {e}")))?;
        let upper = dist.inverse_cdf(0.999);
        let edges: Vec<f64> = (0..=n_bins)
            .map(|i| upper * i as f64 / n_bins as f64)
            .collect();
        let weights = edges
            .windows(2)
            .map(|w| dist.cdf(w[1]) - dist.cdf(w[0]))
            .collect();
        Self::from_weights(edges, weights)
    }

    /// Default stand-in: gamma with shape 2 and scale 2 dva over 30 bins.
    pub fn default_gamma() -> Self {
        Self::gamma(2.0, 2.0, 30).expect("default gamma prior is valid")
    }

    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn max_amplitude(&self) -> f64 {
        *self.bin_edges.last().unwrap()
    }

    /// Smallest edge below which there is no mass.
    pub fn min_amplitude(&self) -> f64 {
        let first = self
            .probabilities
            .iter()
            .position(|p| *p > 0.0)
            .unwrap_or(0);
        self.bin_edges[first]
    }

    fn bin_of(&self, r: f64) -> Option<usize> {
        if r < 0.0 || r > self.max_amplitude() {
            return None;
        }
        let i = self.bin_edges.partition_point(|e| *e <= r);
        Some(i.saturating_sub(1).min(self.probabilities.len() - 1))
    }

    fn bin_density(&self, i: usize) -> f64 {
        self.probabilities[i] / (self.bin_edges[i + 1] - self.bin_edges[i])
    }

    fn bin_center(&self, i: usize) -> f64 {
        (self.bin_edges[i] + self.bin_edges[i + 1]) / 2.0
    }

    /// Radial density at amplitude `r`.
    ///
    /// Bin densities (mass over width) sit at bin centers and are linearly
    /// interpolated toward a neighbour that also carries mass; next to an
    /// empty bin or the outer edges the bin's own density holds. Empty bins
    /// and amplitudes outside the edges have zero density.
    pub fn density(&self, r: f64) -> f64 {
        let Some(i) = self.bin_of(r) else { return 0.0 };
        if self.probabilities[i] == 0.0 {
            return 0.0;
        }
        let di = self.bin_density(i);
        let ci = self.bin_center(i);
        let neighbour = if r < ci {
            i.checked_sub(1)
        } else {
            Some(i + 1)
        };
        match neighbour {
            Some(j) if j < self.probabilities.len() && self.probabilities[j] > 0.0 => {
                let cj = self.bin_center(j);
                let t = (r - ci) / (cj - ci);
                di + t * (self.bin_density(j) - di)
            }
            _ => di,
        }
    }

    pub fn cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.max_amplitude() {
            return 1.0;
        }
        let i = self.bin_of(r).unwrap();
        let below: f64 = self.probabilities[..i].iter().sum();
        let frac = (r - self.bin_edges[i]) / (self.bin_edges[i + 1] - self.bin_edges[i]);
        (below + frac * self.probabilities[i]).min(1.0)
    }

    /// Draws an amplitude: a bin by mass, then uniformly within it.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let last = self
            .probabilities
            .iter()
            .rposition(|p| *p > 0.0)
            .unwrap_or(self.probabilities.len() - 1);
        let mut bin = last;
        for (i, p) in self.probabilities.iter().enumerate() {
            acc += p;
            if u < acc && *p > 0.0 {
                bin = i;
                break;
            }
        }
        let (lo, hi) = (self.bin_edges[bin], self.bin_edges[bin + 1]);
        lo + rng.random::<f64>() * (hi - lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(SaccadePrior::new(vec![0.0, 1.0], vec![1.0]).is_ok());
        assert!(SaccadePrior::new(vec![0.5, 1.0], vec![1.0]).is_err());
        assert!(SaccadePrior::new(vec![0.0, 1.0, 1.0], vec![0.5, 0.5]).is_err());
        assert!(SaccadePrior::new(vec![0.0, 1.0], vec![0.9]).is_err());
        assert!(SaccadePrior::new(vec![0.0, 1.0, 2.0], vec![1.0]).is_err());
    }

    #[test]
    fn default_gamma_sums_to_one() {
        let p = SaccadePrior::default_gamma();
        assert_eq!(p.probabilities().len(), 30);
        assert!((p.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        // mode of gamma(2, 2) is at 2 dva
        let peak = (0..30)
            .max_by(|a, b| p.probabilities()[*a].total_cmp(&p.probabilities()[*b]))
            .unwrap();
        assert!(p.bin_edges()[peak] <= 2.0 && 2.0 <= p.bin_edges()[peak + 1] + 0.5);
    }

    #[test]
    fn single_bin_support() {
        let p = SaccadePrior::new(vec![0.0, 2.0, 4.0, 6.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(p.density(0.0), 0.0);
        assert_eq!(p.density(1.99), 0.0);
        assert_eq!(p.density(3.0), 0.5);
        assert_eq!(p.density(2.0), 0.5);
        assert_eq!(p.density(4.001), 0.0);
        assert_eq!(p.density(7.0), 0.0);
        assert_eq!(p.cdf(3.0), 0.5);
        assert_eq!(p.min_amplitude(), 2.0);
    }

    #[test]
    fn samples_stay_in_support() {
        let p = SaccadePrior::new(vec![0.0, 2.0, 4.0, 6.0], vec![0.0, 1.0, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let s = p.sample(&mut rng);
            assert!((2.0..4.0).contains(&s));
        }
    }
}
