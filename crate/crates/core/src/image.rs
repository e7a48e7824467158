//! Raster images in linear [0,1] intensities with a pixel-to-dva scale.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A raster image, channel-major row-major, with its angular scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    width: usize,
    height: usize,
    channels: usize,
    pixels: Vec<f64>,
    dva_per_px: f64,
}

impl ImageGrid {
    pub fn new(
        width: usize,
        height: usize,
        channels: usize,
        pixels: Vec<f64>,
        dva_per_px: f64,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::domain(format!(
                "image must be non-empty, got {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::domain(format!(
                "image must have 1 or 3 channels, got {channels}"
            )));
        }
        if pixels.len() != channels * width * height {
            return Err(Error::dimension(format!(
                "expected {} pixel values, got {}",
                channels * width * height,
                pixels.len()
            )));
        }
        if let Some(bad) = pixels
            .iter()
            .position(|v| !v.is_finite() || *v < 0.0 || *v > 1.0)
        {
            return Err(Error::domain(format!(
                "pixel value {} at index {bad} outside [0,1]",
                pixels[bad]
            )));
        }
        if !(dva_per_px.is_finite() && dva_per_px > 0.0) {
            return Err(Error::domain(format!(
                "dva_per_px must be positive, got {dva_per_px}"
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            pixels,
            dva_per_px,
        })
    }

    pub fn constant(
        width: usize,
        height: usize,
        channels: usize,
        value: f64,
        dva_per_px: f64,
    ) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
            dva_per_px,
        )
    }

    /// Builds an image by evaluating `f(channel, y, x)`; values are clamped to [0,1].
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        dva_per_px: f64,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height * channels);
        for c in 0..channels {
            for y in 0..height {
                for x in 0..width {
                    pixels.push(f(c, y, x).clamp(0.0, 1.0));
                }
            }
        }
        Self::new(width, height, channels, pixels, dva_per_px)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn dva_per_px(&self) -> f64 {
        self.dva_per_px
    }

    pub fn width_dva(&self) -> f64 {
        self.width as f64 * self.dva_per_px
    }

    pub fn height_dva(&self) -> f64 {
        self.height as f64 * self.dva_per_px
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f64 {
        self.pixels[(c * self.height + y) * self.width + x]
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        let n = self.width * self.height;
        &self.pixels[c * n..(c + 1) * n]
    }

    /// Mean over channels, row-major.
    pub fn intensity(&self) -> Vec<f64> {
        let n = self.width * self.height;
        if self.channels == 1 {
            return self.pixels.clone();
        }
        (0..n)
            .map(|i| {
                (0..self.channels)
                    .map(|c| self.pixels[c * n + i])
                    .sum::<f64>()
                    / self.channels as f64
            })
            .collect()
    }

    pub fn contains_dva(&self, x_dva: f64, y_dva: f64) -> bool {
        x_dva >= 0.0 && y_dva >= 0.0 && x_dva <= self.width_dva() && y_dva <= self.height_dva()
    }

    /// Square crop of `side_px` centered at `(cx, cy)` in pixel coordinates,
    /// clipped at the image borders.
    pub fn crop_centered(&self, cx: f64, cy: f64, side_px: f64) -> Result<ImageGrid> {
        let half = side_px / 2.0;
        let x0 = ((cx - half).round().max(0.0) as usize).min(self.width - 1);
        let y0 = ((cy - half).round().max(0.0) as usize).min(self.height - 1);
        let x1 = ((cx + half).round() as usize).clamp(x0 + 1, self.width);
        let y1 = ((cy + half).round() as usize).clamp(y0 + 1, self.height);
        self.crop(x0, y0, x1 - x0, y1 - y0)
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<ImageGrid> {
        if w == 0 || h == 0 || x0 + w > self.width || y0 + h > self.height {
            return Err(Error::domain(format!(
                "crop {w}x{h}+{x0}+{y0} outside {}x{} image",
                self.width, self.height
            )));
        }
        let mut pixels = Vec::with_capacity(w * h * self.channels);
        for c in 0..self.channels {
            for y in y0..y0 + h {
                let row = (c * self.height + y) * self.width;
                pixels.extend_from_slice(&self.pixels[row + x0..row + x0 + w]);
            }
        }
        Ok(ImageGrid {
            width: w,
            height: h,
            channels: self.channels,
            pixels,
            dva_per_px: self.dva_per_px,
        })
    }

    /// Bilinear resampling (pixel-center aligned). The angular scale is
    /// adjusted so the image keeps its extent in dva.
    pub fn resize(&self, new_w: usize, new_h: usize) -> Result<ImageGrid> {
        if new_w == 0 || new_h == 0 {
            return Err(Error::domain("resize target must be non-empty"));
        }
        if new_w == self.width && new_h == self.height {
            return Ok(self.clone());
        }
        let n = self.width * self.height;
        let mut pixels = Vec::with_capacity(new_w * new_h * self.channels);
        for c in 0..self.channels {
            pixels.extend(bilinear_resample(
                &self.pixels[c * n..(c + 1) * n],
                self.height,
                self.width,
                new_h,
                new_w,
            ));
        }
        Ok(ImageGrid {
            width: new_w,
            height: new_h,
            channels: self.channels,
            pixels,
            dva_per_px: self.dva_per_px * self.width as f64 / new_w as f64,
        })
    }

    /// Copies `other` into this image with its top-left corner at `(x0, y0)`.
    /// Parts falling outside are dropped. Gray sources are broadcast to color.
    pub fn paste(&mut self, other: &ImageGrid, x0: usize, y0: usize) {
        for c in 0..self.channels {
            let src_c = if other.channels == 1 {
                0
            } else {
                c.min(other.channels - 1)
            };
            for y in 0..other.height {
                let ty = y0 + y;
                if ty >= self.height {
                    break;
                }
                for x in 0..other.width {
                    let tx = x0 + x;
                    if tx >= self.width {
                        break;
                    }
                    self.pixels[(c * self.height + ty) * self.width + tx] = other.get(src_c, y, x);
                }
            }
        }
    }

    /// Content hash over dimensions and pixel bits, as 16 hex digits.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.width as u64).to_le_bytes());
        hasher.update((self.height as u64).to_le_bytes());
        hasher.update((self.channels as u64).to_le_bytes());
        for v in &self.pixels {
            hasher.update(v.to_bits().to_le_bytes());
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Pixel-center aligned bilinear resampling of a single row-major plane.
pub fn bilinear_resample(src: &[f64], h: usize, w: usize, new_h: usize, new_w: usize) -> Vec<f64> {
    let sy = h as f64 / new_h as f64;
    let sx = w as f64 / new_w as f64;
    let mut out = Vec::with_capacity(new_h * new_w);
    for oy in 0..new_h {
        let fy = ((oy as f64 + 0.5) * sy - 0.5).clamp(0.0, (h - 1) as f64);
        let y0 = fy.floor() as usize;
        let y1 = (y0 + 1).min(h - 1);
        let wy = fy - y0 as f64;
        for ox in 0..new_w {
            let fx = ((ox as f64 + 0.5) * sx - 0.5).clamp(0.0, (w - 1) as f64);
            let x0 = fx.floor() as usize;
            let x1 = (x0 + 1).min(w - 1);
            let wx = fx - x0 as f64;
            let lerp = |a: f64, b: f64, t: f64| a + (b - a) * t;
            let top = lerp(src[y0 * w + x0], src[y0 * w + x1], wx);
            let bottom = lerp(src[y1 * w + x0], src[y1 * w + x1], wx);
            out.push(lerp(top, bottom, wy));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_pixels() {
        assert!(ImageGrid::new(1, 1, 1, vec![1.5], 0.1).is_err());
        assert!(ImageGrid::new(1, 1, 1, vec![f64::NAN], 0.1).is_err());
        assert!(ImageGrid::new(2, 1, 1, vec![0.5], 0.1).is_err());
        assert!(ImageGrid::new(0, 1, 1, vec![], 0.1).is_err());
        assert!(ImageGrid::new(1, 1, 1, vec![0.5], 0.0).is_err());
        assert!(ImageGrid::new(1, 1, 2, vec![0.5, 0.5], 0.1).is_err());
    }

    #[test]
    fn crop_clips_at_border() {
        let img =
            ImageGrid::from_fn(10, 10, 1, 0.1, |_, y, x| (y * 10 + x) as f64 / 100.0).unwrap();
        let patch = img.crop_centered(0.0, 0.0, 4.0).unwrap();
        assert_eq!((patch.width(), patch.height()), (2, 2));
        assert_eq!(patch.get(0, 1, 1), img.get(0, 1, 1));
    }

    #[test]
    fn resize_identity_and_constant() {
        let img = ImageGrid::constant(8, 6, 3, 0.25, 0.1).unwrap();
        let r = img.resize(5, 3).unwrap();
        assert!(r.pixels().iter().all(|v| (v - 0.25).abs() < 1e-15));
        assert!((r.width_dva() - img.width_dva()).abs() < 1e-12);
        assert_eq!(img.resize(8, 6).unwrap(), img);
    }

    #[test]
    fn fingerprint_tracks_content() {
        let a = ImageGrid::constant(4, 4, 1, 0.5, 0.1).unwrap();
        let mut b = a.clone();
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.paste(&ImageGrid::constant(1, 1, 1, 1.0, 0.1).unwrap(), 2, 2);
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 16);
    }
}
