//! Feature tensors and the backends that produce them.
//!
//! The builtin backend is a deterministic low-level pyramid: center-surround
//! intensity and color-opponency contrast plus oriented derivative energy, at
//! several scales, pooled onto a stride-8 grid. Externally computed features
//! (for instance from a pretrained network) can be dropped in through the
//! FMAP import backend.

mod fmap;
pub(crate) mod pyramid;

use std::path::{Path, PathBuf};

pub use fmap::{
    decode_feature_tensor, encode_feature_tensor, read_feature_tensor, write_feature_tensor,
};
pub use pyramid::PyramidParams;

use crate::error::{Error, Result};
use crate::filters::max_pool;
use crate::image::ImageGrid;

/// Image pixels per search-level feature cell for the builtin backend.
pub const SEARCH_STRIDE_PX: usize = 8;

/// Side length, in pixels, that recognition patches are resized to before
/// the builtin backend describes them.
pub const BUILTIN_RECOGNITION_INPUT_PX: usize = 64;

/// C x H x W activations, channel-major row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTensor {
    channels: usize,
    height: usize,
    width: usize,
    values: Vec<f32>,
    stride_px: f32,
}

impl FeatureTensor {
    pub fn new(
        channels: usize,
        height: usize,
        width: usize,
        values: Vec<f32>,
        stride_px: f32,
    ) -> Result<Self> {
        if channels == 0 || height == 0 || width == 0 {
            return Err(Error::domain(format!(
                "feature tensor dims must be positive, got {channels}x{height}x{width}"
            )));
        }
        if values.len() != channels * height * width {
            return Err(Error::dimension(format!(
                "feature tensor {channels}x{height}x{width} needs {} values, got {}",
                channels * height * width,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("feature values must be finite"));
        }
        if !(stride_px >= 1.0 && stride_px.is_finite()) {
            return Err(Error::domain(format!(
                "stride_px must be >= 1, got {stride_px}"
            )));
        }
        Ok(Self {
            channels,
            height,
            width,
            values,
            stride_px,
        })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn stride_px(&self) -> f32 {
        self.stride_px
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f64 {
        self.values[(c * self.height + y) * self.width + x] as f64
    }

    pub fn channel(&self, c: usize) -> &[f32] {
        let n = self.height * self.width;
        &self.values[c * n..(c + 1) * n]
    }

    /// One additional 2x2 max-pool over every channel.
    pub fn max_pool_2x2(&self) -> FeatureTensor {
        let n = self.height * self.width;
        let mut values = Vec::new();
        let (mut oh, mut ow) = (0, 0);
        for c in 0..self.channels {
            let plane: Vec<f64> = self.values[c * n..(c + 1) * n]
                .iter()
                .map(|v| *v as f64)
                .collect();
            let (pooled, h, w) = max_pool(&plane, self.height, self.width, 2);
            oh = h;
            ow = w;
            values.extend(pooled.into_iter().map(|v| v as f32));
        }
        FeatureTensor {
            channels: self.channels,
            height: oh,
            width: ow,
            values,
            stride_px: self.stride_px * 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Fed with the search image; the finer of the two levels.
    Search,
    /// Fed with the target image; the search level plus one 2x2 max-pool.
    Target,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BackendDescriptor {
    Builtin(PyramidParams),
    /// An FMAP file returned for every image, or a directory holding
    /// `<fingerprint>.fmap` (and optionally `<fingerprint>.target.fmap`)
    /// keyed by [`ImageGrid::fingerprint`].
    Import {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureBackend {
    pub name: String,
    pub descriptor: BackendDescriptor,
}

impl Default for FeatureBackend {
    fn default() -> Self {
        Self::builtin()
    }
}

impl FeatureBackend {
    pub fn builtin() -> Self {
        Self {
            name: "builtin-pyramid".to_string(),
            descriptor: BackendDescriptor::Builtin(PyramidParams::default()),
        }
    }

    pub fn import(path: impl Into<PathBuf>) -> Self {
        Self {
            name: "import".to_string(),
            descriptor: BackendDescriptor::Import { path: path.into() },
        }
    }

    /// Side length recognition patches are resized to, if the backend has one.
    pub fn native_input_px(&self) -> Option<usize> {
        match self.descriptor {
            BackendDescriptor::Builtin(_) => Some(BUILTIN_RECOGNITION_INPUT_PX),
            BackendDescriptor::Import { .. } => None,
        }
    }

    /// Flat descriptor used for recognition. The builtin backend centers
    /// every channel over space so unrelated textures come out near
    /// orthogonal; imported tensors are used verbatim.
    pub fn recognition_vector(&self, image: &ImageGrid) -> Result<Vec<f64>> {
        let tensor = extract_features(image, self, Level::Search)?;
        match self.descriptor {
            BackendDescriptor::Import { .. } => {
                Ok(tensor.values().iter().map(|v| *v as f64).collect())
            }
            BackendDescriptor::Builtin(_) => {
                let n = tensor.height() * tensor.width();
                let mut out = Vec::with_capacity(tensor.values().len());
                for c in 0..tensor.channels() {
                    let plane = tensor.channel(c);
                    let mean = plane.iter().map(|v| *v as f64).sum::<f64>() / n as f64;
                    out.extend(plane.iter().map(|v| *v as f64 - mean));
                }
                Ok(out)
            }
        }
    }
}

pub fn extract_features(
    image: &ImageGrid,
    backend: &FeatureBackend,
    level: Level,
) -> Result<FeatureTensor> {
    match &backend.descriptor {
        BackendDescriptor::Builtin(params) => {
            let search = pyramid::builtin_features(image, params)?;
            Ok(match level {
                Level::Search => search,
                Level::Target => search.max_pool_2x2(),
            })
        }
        BackendDescriptor::Import { path } => import_features(path, image, level),
    }
}

fn import_features(path: &Path, image: &ImageGrid, level: Level) -> Result<FeatureTensor> {
    if !path.is_dir() {
        return read_import(path);
    }
    let fp = image.fingerprint();
    let search_path = path.join(format!("{fp}.fmap"));
    match level {
        Level::Search => read_import(&search_path),
        Level::Target => {
            let target_path = path.join(format!("{fp}.target.fmap"));
            if target_path.exists() {
                read_import(&target_path)
            } else {
                Ok(read_import(&search_path)?.max_pool_2x2())
            }
        }
    }
}

fn read_import(path: &Path) -> Result<FeatureTensor> {
    let bytes = std::fs::read(path).map_err(|e| Error::Format {
        offset: 0,
        message: format!("cannot read feature file {}: {e}", path.display()),
    })?;
    decode_feature_tensor(&bytes)
}
