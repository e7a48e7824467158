use std::path::{Path, PathBuf};

use super::kv::{parse_blocks, Entry};
use crate::engine::{ModelConfig, SaccadePrior};
use crate::error::{Error, Result};

/// Parameters of the default saccade-size prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPrior {
    pub shape: f64,
    pub scale: f64,
    pub bins: usize,
}

impl Default for GammaPrior {
    fn default() -> Self {
        Self {
            shape: 2.0,
            scale: 2.0,
            bins: 30,
        }
    }
}

impl GammaPrior {
    pub fn build(&self) -> Result<SaccadePrior> {
        SaccadePrior::gamma(self.shape, self.scale, self.bins)
    }
}

/// Contents of a config file. Model keys match the `ModelConfig` field names.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigFile {
    pub model: ModelConfig,
    pub prior: GammaPrior,
    /// Fixation log to fit the saccade prior from, replacing the gamma default.
    pub prior_dataset: Option<PathBuf>,
    /// Feature file or directory to import instead of the builtin backend.
    pub feature_import: Option<PathBuf>,
}

pub fn read_config(path: impl AsRef<Path>) -> Result<ConfigFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    let mut config = parse_config(&text)?;
    let base = path.parent().unwrap_or(Path::new(""));
    for p in [&mut config.prior_dataset, &mut config.feature_import]
        .into_iter()
        .flatten()
    {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
    Ok(config)
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let mut out = ConfigFile::default();
    for e in parse_blocks(text)?.iter().flatten() {
        apply(&mut out, e)?;
    }
    out.model.validate()?;
    if !(out.prior.shape > 0.0 && out.prior.scale > 0.0 && out.prior.bins > 0) {
        return Err(Error::Config(
            "prior_shape, prior_scale and prior_bins must be positive".into(),
        ));
    }
    Ok(out)
}

fn apply(out: &mut ConfigFile, e: &Entry) -> Result<()> {
    let m = &mut out.model;
    match e.key.as_str() {
        "alpha" => m.alpha = e.f64()?,
        "beta" => m.beta = e.f64()?,
        "sigma" => m.sigma = e.f64()?,
        "w_mem" => m.w_mem = e.f64()?,
        "w_sac" => m.w_sac = e.f64()?,
        "w_sim" => m.w_sim = e.f64()?,
        "w_sal" => m.w_sal = e.f64()?,
        "recognition_threshold" => m.recognition_threshold = e.f64()?,
        "patch_dva" => m.patch_dva = e.f64()?,
        "n_c" => m.n_c = e.usize()?,
        "return_threshold_dva" => m.return_threshold_dva = e.f64()?,
        "seed" => m.seed = e.u64()?,
        "mode" => m.mode = e.parsed()?,
        "ablation" => m.ablation = e.parsed()?,
        "max_search_fixations" => m.max_search_fixations = e.usize()?,
        "area_correct" => m.area_correct = e.bool()?,
        "prior_shape" => out.prior.shape = e.f64()?,
        "prior_scale" => out.prior.scale = e.f64()?,
        "prior_bins" => out.prior.bins = e.usize()?,
        "prior_dataset" => out.prior_dataset = Some(PathBuf::from(&e.value)),
        "feature_import" => out.feature_import = Some(PathBuf::from(&e.value)),
        other => return Err(e.error(format!("unknown key '{other}'"))),
    }
    Ok(())
}
