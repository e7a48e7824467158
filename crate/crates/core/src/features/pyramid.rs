use std::f64::consts::PI;

use super::{FeatureTensor, SEARCH_STRIDE_PX};
use crate::error::{Error, Result};
use crate::filters::{avg_pool, gaussian_blur, gradients};
use crate::image::ImageGrid;

/// Parameters of the builtin low-level pyramid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PyramidParams {
    pub orientations: usize,
    pub scales: usize,
    /// Surround width of the center-surround contrast, in pixels of each level.
    pub surround_sigma: f64,
    /// Pre-smoothing before oriented derivatives, in pixels of each level.
    pub derivative_sigma: f64,
}

impl Default for PyramidParams {
    fn default() -> Self {
        Self {
            orientations: 4,
            scales: 2,
            surround_sigma: 4.0,
            derivative_sigma: 1.0,
        }
    }
}

impl PyramidParams {
    pub fn channel_count(&self, image_channels: usize) -> usize {
        let per_scale = if image_channels == 3 { 3 } else { 1 } + self.orientations;
        per_scale * self.scales
    }

    fn validate(&self) -> Result<()> {
        if self.orientations == 0 || self.scales == 0 {
            return Err(Error::domain(
                "pyramid needs at least one orientation and one scale",
            ));
        }
        if (1usize << (self.scales - 1)) > SEARCH_STRIDE_PX {
            return Err(Error::domain(format!(
                "at most {} scales fit a stride of {SEARCH_STRIDE_PX}px",
                SEARCH_STRIDE_PX.trailing_zeros() + 1
            )));
        }
        Ok(())
    }
}

/// Raw per-level planes: opponent channels and oriented derivative energy.
pub(crate) struct LevelPlanes {
    pub height: usize,
    pub width: usize,
    /// Intensity, then red-green and blue-yellow for color images.
    pub opponent: Vec<Vec<f64>>,
    pub orientation: Vec<Vec<f64>>,
}

/// Opponent planes at full resolution: intensity, then R-G and B-(R+G)/2 for color.
pub(crate) fn opponent_planes(image: &ImageGrid) -> Vec<Vec<f64>> {
    let mut planes = vec![image.intensity()];
    if image.channels() == 3 {
        let (r, g, b) = (image.channel(0), image.channel(1), image.channel(2));
        planes.push(r.iter().zip(g).map(|(r, g)| r - g).collect());
        planes.push(
            b.iter()
                .zip(r.iter().zip(g))
                .map(|(b, (r, g))| b - (r + g) / 2.0)
                .collect(),
        );
    }
    planes
}

/// Builds the opponent and orientation planes at each of `scales` dyadic levels.
pub(crate) fn level_planes(
    image: &ImageGrid,
    orientations: usize,
    scales: usize,
    derivative_sigma: f64,
) -> Vec<LevelPlanes> {
    let mut current = opponent_planes(image);
    let (mut h, mut w) = (image.height(), image.width());
    let mut levels = Vec::with_capacity(scales);
    for s in 0..scales {
        if s > 0 {
            let mut next = Vec::with_capacity(current.len());
            let (mut nh, mut nw) = (h, w);
            for p in &current {
                let (pooled, ph, pw) = avg_pool(p, h, w, 2);
                nh = ph;
                nw = pw;
                next.push(pooled);
            }
            current = next;
            h = nh;
            w = nw;
        }
        let smooth = gaussian_blur(&current[0], h, w, derivative_sigma);
        let (gx, gy) = gradients(&smooth, h, w);
        let orientation = (0..orientations)
            .map(|k| {
                let theta = k as f64 * PI / orientations as f64;
                let (sin, cos) = theta.sin_cos();
                gx.iter()
                    .zip(&gy)
                    .map(|(x, y)| (cos * x + sin * y).abs())
                    .collect()
            })
            .collect();
        levels.push(LevelPlanes {
            height: h,
            width: w,
            opponent: current.clone(),
            orientation,
        });
    }
    levels
}

pub(crate) fn builtin_features(image: &ImageGrid, params: &PyramidParams) -> Result<FeatureTensor> {
    params.validate()?;
    let levels = level_planes(
        image,
        params.orientations,
        params.scales,
        params.derivative_sigma,
    );
    let out_h = image.height().div_ceil(SEARCH_STRIDE_PX);
    let out_w = image.width().div_ceil(SEARCH_STRIDE_PX);
    let mut values: Vec<f32> =
        Vec::with_capacity(params.channel_count(image.channels()) * out_h * out_w);
    for (s, level) in levels.iter().enumerate() {
        let block = SEARCH_STRIDE_PX >> s;
        let (h, w) = (level.height, level.width);
        let contrast = level.opponent.iter().map(|p| {
            let surround = gaussian_blur(p, h, w, params.surround_sigma);
            p.iter()
                .zip(&surround)
                .map(|(c, s)| (c - s).abs())
                .collect::<Vec<f64>>()
        });
        for plane in contrast.chain(level.orientation.iter().cloned()) {
            let (pooled, ph, pw) = avg_pool(&plane, h, w, block);
            debug_assert_eq!((ph, pw), (out_h, out_w));
            values.extend(pooled.into_iter().map(|v| v as f32));
        }
    }
    FeatureTensor::new(
        params.channel_count(image.channels()),
        out_h,
        out_w,
        values,
        SEARCH_STRIDE_PX as f32,
    )
}
