//! Cosine-distance recognition of the target at a fixated patch.

use crate::error::{Error, Result};
use crate::features::FeatureBackend;
use crate::image::ImageGrid;
use crate::map::{AttentionMap, MapKind};

/// `1 - cos(a, b)` in [0, 2]. A zero vector on either side is maximally
/// dissimilar (2), since a featureless patch cannot match anything.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::dimension(format!(
            "feature vectors differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Ok(2.0);
    }
    let cos = (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0);
    Ok(1.0 - cos)
}

/// The image that the backend sees for a fixation: a square crop of
/// `side_dva` centered at the fixation, clipped at the borders, resized to the
/// backend's native input when it has one.
pub fn recognition_input(
    image: &ImageGrid,
    center_dva: (f64, f64),
    side_dva: f64,
    backend: &FeatureBackend,
) -> Result<ImageGrid> {
    let (x, y) = center_dva;
    if !(side_dva > 0.0 && side_dva.is_finite()) {
        return Err(Error::domain(format!(
            "patch side must be positive, got {side_dva}"
        )));
    }
    if !image.contains_dva(x, y) {
        return Err(Error::domain(format!(
            "fixation ({x:.3}, {y:.3}) dva outside {:.3}x{:.3} dva image",
            image.width_dva(),
            image.height_dva()
        )));
    }
    let scale = image.dva_per_px();
    let patch = image.crop_centered(x / scale, y / scale, side_dva / scale)?;
    native(&patch, backend)
}

fn native(image: &ImageGrid, backend: &FeatureBackend) -> Result<ImageGrid> {
    match backend.native_input_px() {
        Some(side) => image.resize(side, side),
        None => Ok(image.clone()),
    }
}

/// Caches the target's feature vector so a scanpath can query many fixations.
#[derive(Debug, Clone)]
pub struct Recognizer {
    backend: FeatureBackend,
    target_vector: Vec<f64>,
    patch_dva: f64,
}

impl Recognizer {
    pub fn new(target: &ImageGrid, backend: &FeatureBackend, patch_dva: f64) -> Result<Self> {
        if !(patch_dva > 0.0 && patch_dva.is_finite()) {
            return Err(Error::domain(format!(
                "patch_dva must be positive, got {patch_dva}"
            )));
        }
        let target_vector = backend.recognition_vector(&native(target, backend)?)?;
        Ok(Self {
            backend: backend.clone(),
            target_vector,
            patch_dva,
        })
    }

    pub fn distance(&self, image: &ImageGrid, center_dva: (f64, f64)) -> Result<f64> {
        let patch = recognition_input(image, center_dva, self.patch_dva, &self.backend)?;
        let v = self.backend.recognition_vector(&patch)?;
        cosine_distance(&v, &self.target_vector)
    }
}

pub fn recognition_distance(
    image: &ImageGrid,
    fixation_dva: (f64, f64),
    target: &ImageGrid,
    backend: &FeatureBackend,
    patch_dva: f64,
) -> Result<f64> {
    Recognizer::new(target, backend, patch_dva)?.distance(image, fixation_dva)
}

/// Recognition confidence `1 - distance` on a grid with `stride_px` spacing,
/// sampled at cell centers. The patch side equals the target's larger side.
pub fn compute_recognition_map(
    image: &ImageGrid,
    target: &ImageGrid,
    backend: &FeatureBackend,
    stride_px: usize,
) -> Result<AttentionMap> {
    if stride_px == 0 {
        return Err(Error::domain("stride_px must be >= 1"));
    }
    let side_dva = target.width().max(target.height()) as f64 * image.dva_per_px();
    let recognizer = Recognizer::new(target, backend, side_dva)?;
    let h = image.height().div_ceil(stride_px);
    let w = image.width().div_ceil(stride_px);
    let mut values = Vec::with_capacity(h * w);
    for r in 0..h {
        for c in 0..w {
            let cx = ((c as f64 + 0.5) * stride_px as f64).min(image.width() as f64);
            let cy = ((r as f64 + 0.5) * stride_px as f64).min(image.height() as f64);
            let scale = image.dva_per_px();
            let d = recognizer.distance(image, (cx * scale, cy * scale))?;
            values.push(1.0 - d);
        }
    }
    AttentionMap::new(h, w, values, MapKind::Recognition)
}
