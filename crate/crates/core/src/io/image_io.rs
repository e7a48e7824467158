use std::path::Path;

use image::{DynamicImage, ImageFormat, ImageReader};

use crate::error::{Error, Result};
use crate::image::ImageGrid;

/// Reads a PNG or binary PGM/PPM file, scaling samples to [0,1]. Gray images
/// stay single-channel; alpha is dropped.
pub fn load_image(path: impl AsRef<Path>, dva_per_px: f64) -> Result<ImageGrid> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .map_err(|e| Error::file(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::file(path, e))?;
    match reader.format() {
        Some(ImageFormat::Png | ImageFormat::Pnm) => {}
        other => {
            return Err(Error::ImageFormat(format!(
                "{}: {} (expected PNG, PGM or PPM)",
                path.display(),
                other.map_or("unrecognized", |f| f
                    .extensions_str()
                    .first()
                    .copied()
                    .unwrap_or("unknown"))
            )))
        }
    }
    let decoded = reader
        .decode()
        .map_err(|e| Error::ImageFormat(format!("{}: {e}", path.display())))?;
    from_dynamic(&decoded, dva_per_px)
}

fn from_dynamic(img: &DynamicImage, dva_per_px: f64) -> Result<ImageGrid> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let gray = !img.color().has_color();
    let sixteen = img.color().bytes_per_pixel() / img.color().channel_count() == 2;
    let channels = if gray { 1 } else { 3 };
    let samples: Vec<f64> = match (gray, sixteen) {
        (true, false) => img
            .to_luma8()
            .into_raw()
            .iter()
            .map(|v| *v as f64 / 255.0)
            .collect(),
        (true, true) => img
            .to_luma16()
            .into_raw()
            .iter()
            .map(|v| *v as f64 / 65535.0)
            .collect(),
        (false, false) => img
            .to_rgb8()
            .into_raw()
            .iter()
            .map(|v| *v as f64 / 255.0)
            .collect(),
        (false, true) => img
            .to_rgb16()
            .into_raw()
            .iter()
            .map(|v| *v as f64 / 65535.0)
            .collect(),
    };
    // interleaved -> channel-major
    let n = w * h;
    let mut pixels = vec![0.0; n * channels];
    for i in 0..n {
        for c in 0..channels {
            pixels[c * n + i] = samples[i * channels + c];
        }
    }
    ImageGrid::new(w, h, channels, pixels, dva_per_px)
}

/// Writes an 8-bit PNG.
pub fn save_png(image: &ImageGrid, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let (w, h) = (image.width(), image.height());
    let n = w * h;
    let channels = image.channels();
    let mut raw = vec![0u8; n * channels];
    for i in 0..n {
        for c in 0..channels {
            raw[i * channels + c] = (image.pixels()[c * n + i] * 255.0).round() as u8;
        }
    }
    let color = if channels == 1 {
        image::ExtendedColorType::L8
    } else {
        image::ExtendedColorType::Rgb8
    };
    image::save_buffer_with_format(path, &raw, w as u32, h as u32, color, ImageFormat::Png)
        .map_err(|e| Error::ImageFormat(format!("{}: {e}", path.display())))
}
