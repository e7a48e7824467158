use crate::error::{Error, Result};

/// Counts over half-open bins `[e_i, e_{i+1})`; the last bin is closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bin_edges: Vec<f64>,
    counts: Vec<f64>,
}

impl Histogram {
    pub fn new(bin_edges: Vec<f64>, counts: Vec<f64>) -> Result<Self> {
        if bin_edges.len() < 2 || counts.len() + 1 != bin_edges.len() {
            return Err(Error::dimension(format!(
                "{} edges cannot bound {} bins",
                bin_edges.len(),
                counts.len()
            )));
        }
        if bin_edges.windows(2).any(|w| !(w[1] > w[0])) || bin_edges.iter().any(|e| !e.is_finite())
        {
            return Err(Error::domain(
                "bin edges must be finite and strictly increasing",
            ));
        }
        if counts.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::domain("counts must be finite and non-negative"));
        }
        Ok(Self { bin_edges, counts })
    }

    /// Empty histogram with `n` equal bins over `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 || !(hi > lo) {
            return Err(Error::domain(format!(
                "cannot split [{lo}, {hi}] into {n} bins"
            )));
        }
        let step = (hi - lo) / n as f64;
        let mut edges: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        edges.push(hi);
        Self::new(edges, vec![0.0; n])
    }

    /// Unit-width bins `[k, k+1)` for k in `0..n`.
    pub fn integer(n: usize) -> Self {
        let n = n.max(1);
        Self {
            bin_edges: (0..=n).map(|k| k as f64).collect(),
            counts: vec![0.0; n],
        }
    }

    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0.0
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn bin_of(&self, value: f64) -> Option<usize> {
        let n = self.counts.len();
        if !(value >= self.bin_edges[0] && value <= self.bin_edges[n]) {
            return None;
        }
        let k = self.bin_edges.partition_point(|e| *e <= value);
        Some(k.saturating_sub(1).min(n - 1))
    }

    /// Adds `weight` to the bin holding `value`; values outside are ignored.
    pub fn add(&mut self, value: f64, weight: f64) -> bool {
        match self.bin_of(value) {
            Some(k) => {
                self.counts[k] += weight;
                true
            }
            None => false,
        }
    }

    /// Counts divided by the total; all zeros when empty.
    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.total();
        if total == 0.0 {
            return vec![0.0; self.counts.len()];
        }
        self.counts.iter().map(|c| c / total).collect()
    }

    pub fn argmax(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let mut best = 0;
        for (i, c) in self.counts.iter().enumerate() {
            if *c > self.counts[best] {
                best = i;
            }
        }
        Some(best)
    }

    /// Bin-wise sum with a histogram over the same edges.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if other.bin_edges != self.bin_edges {
            return Err(Error::dimension("histograms have different bin edges"));
        }
        self.counts
            .iter_mut()
            .zip(&other.counts)
            .for_each(|(a, b)| *a += b);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_bin_is_closed() {
        let mut h = Histogram::uniform(0.0, 180.0, 15).unwrap();
        assert_eq!(h.bin_of(180.0), Some(14));
        assert_eq!(h.bin_of(168.0), Some(14));
        assert_eq!(h.bin_of(167.9), Some(13));
        assert_eq!(h.bin_of(0.0), Some(0));
        assert_eq!(h.bin_of(-0.1), None);
        assert!(h.add(12.0, 1.0));
        assert_eq!(h.counts()[1], 1.0);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut h = Histogram::integer(5);
        for v in [0.0, 1.0, 1.0, 4.5, 3.0, 2.2] {
            h.add(v, 1.0);
        }
        assert!((h.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert_eq!(h.argmax(), Some(1));
        assert!(Histogram::integer(3)
            .probabilities()
            .iter()
            .all(|p| *p == 0.0));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Histogram::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(Histogram::new(vec![0.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(Histogram::new(vec![0.0, 1.0], vec![-1.0]).is_err());
    }
}
