//! Two-dimensional attention maps over image space.

use crate::error::{Error, Result};
use crate::image::bilinear_resample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    Saliency,
    Similarity,
    Saccade,
    Memory,
    Combined,
    Recognition,
}

impl MapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::Saliency => "saliency",
            MapKind::Similarity => "similarity",
            MapKind::Saccade => "saccade",
            MapKind::Memory => "memory",
            MapKind::Combined => "combined",
            MapKind::Recognition => "recognition",
        }
    }
}

/// Row-major real-valued map with a kind tag.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionMap {
    height: usize,
    width: usize,
    values: Vec<f64>,
    kind: MapKind,
    normalized: bool,
}

impl AttentionMap {
    pub fn new(height: usize, width: usize, values: Vec<f64>, kind: MapKind) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::domain("map dimensions must be positive"));
        }
        if values.len() != height * width {
            return Err(Error::dimension(format!(
                "map {height}x{width} needs {} values, got {}",
                height * width,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("map values must be finite"));
        }
        Ok(Self {
            height,
            width,
            values,
            kind,
            normalized: false,
        })
    }

    pub fn zeros(height: usize, width: usize, kind: MapKind) -> Self {
        Self {
            height,
            width,
            values: vec![0.0; height * width],
            kind,
            normalized: true,
        }
    }

    pub(crate) fn from_parts_unchecked(
        height: usize,
        width: usize,
        values: Vec<f64>,
        kind: MapKind,
        normalized: bool,
    ) -> Self {
        debug_assert_eq!(values.len(), height * width);
        Self {
            height,
            width,
            values,
            kind,
            normalized,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn with_kind(mut self, kind: MapKind) -> Self {
        self.kind = kind;
        self
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    /// Index of the maximum; ties go to the lowest row-major index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Bilinear resampling to `height x width`; the normalized flag is kept
    /// because bilinear weights are convex.
    pub fn resample(&self, height: usize, width: usize) -> AttentionMap {
        if (height, width) == (self.height, self.width) {
            return self.clone();
        }
        let values = bilinear_resample(&self.values, self.height, self.width, height, width);
        AttentionMap::from_parts_unchecked(height, width, values, self.kind, self.normalized)
    }
}

/// Min-max rescaling to [0,1]. A flat map carries no preference and maps to zeros.
pub fn normalize_map(map: &AttentionMap) -> AttentionMap {
    let (lo, hi) = map.min_max();
    let range = hi - lo;
    let values = if range > 0.0 {
        map.values
            .iter()
            .map(|v| ((v - lo) / range).clamp(0.0, 1.0))
            .collect()
    } else {
        vec![0.0; map.values.len()]
    };
    AttentionMap::from_parts_unchecked(map.height, map.width, values, map.kind, true)
}
