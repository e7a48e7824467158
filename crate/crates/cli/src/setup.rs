//! Shared loading of config, prior, backend and trials for every command.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use log::info;
use rayon::prelude::*;

use saccade_lab::engine::{ModelConfig, SaccadePrior};
use saccade_lab::features::FeatureBackend;
use saccade_lab::io::{
    fit_saccade_prior, read_config, read_fixation_log, read_manifest, ConfigFile, DatasetKind,
    TrialManifest,
};
use saccade_lab::ImageGrid;

use crate::args::Global;

pub struct Setup {
    pub config: ConfigFile,
    pub prior: SaccadePrior,
    pub backend: FeatureBackend,
    pub out: PathBuf,
    pub threshold_override: Option<f64>,
    pool: rayon::ThreadPool,
}

impl Setup {
    pub fn load(global: &Global) -> Result<Self> {
        let out = global
            .out
            .clone()
            .ok_or_else(|| anyhow!("--out DIR is required"))?;
        let mut config = match &global.config {
            Some(path) => {
                read_config(path).with_context(|| format!("config {}", path.display()))?
            }
            None => ConfigFile::default(),
        };
        if let Some(seed) = global.seed {
            config.model.seed = seed;
        }
        if let Some(t) = global.threshold_dva {
            if !(t > 0.0 && t.is_finite()) {
                bail!("--threshold-dva must be positive, got {t}");
            }
            config.model.return_threshold_dva = t;
        }
        let prior = match &config.prior_dataset {
            Some(path) => {
                let data = read_fixation_log(path)
                    .with_context(|| format!("prior dataset {}", path.display()))?;
                info!("fitting the saccade prior to {}", path.display());
                fit_saccade_prior(&data, config.prior.bins)?
            }
            None => config.prior.build()?,
        };
        let backend = match &config.feature_import {
            Some(path) => FeatureBackend::import(path),
            None => FeatureBackend::builtin(),
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(global.jobs.unwrap_or(0))
            .build()
            .context("cannot start worker threads")?;
        Ok(Self {
            config,
            prior,
            backend,
            out,
            threshold_override: global.threshold_dva,
            pool,
        })
    }

    /// Model settings for one trial: the trial's task decides the mode.
    pub fn model_for(&self, trial: &TrialManifest) -> ModelConfig {
        ModelConfig {
            mode: trial.task,
            return_threshold_dva: self.threshold_for(Some(trial.dataset)),
            ..self.config.model.clone()
        }
    }

    /// The command line wins, then egocentric data's wider default, then the config.
    pub fn threshold_for(&self, dataset: Option<DatasetKind>) -> f64 {
        match (self.threshold_override, dataset) {
            (Some(t), _) => t,
            (None, Some(DatasetKind::Egocentric)) => {
                DatasetKind::Egocentric.default_return_threshold_dva()
            }
            _ => self.config.model.return_threshold_dva,
        }
    }

    /// Runs `f` over `items` on the worker pool. Results keep input order and
    /// the first failing item, in that order, is the error reported.
    pub fn parallel<T: Sync, U: Send>(
        &self,
        items: &[T],
        f: impl Fn(&T) -> Result<U> + Sync,
    ) -> Result<Vec<U>> {
        let results: Vec<Result<U>> = self.pool.install(|| items.par_iter().map(&f).collect());
        results.into_iter().collect()
    }
}

pub fn load_trials(global: &Global) -> Result<Vec<TrialManifest>> {
    let path = global
        .manifest
        .as_ref()
        .ok_or_else(|| anyhow!("--manifest PATH is required"))?;
    let trials = read_manifest(path).with_context(|| format!("manifest {}", path.display()))?;
    if trials.is_empty() {
        bail!("manifest {} lists no trials", path.display());
    }
    Ok(trials)
}

pub struct TrialImages {
    pub search: ImageGrid,
    pub target: Option<ImageGrid>,
}

pub fn load_images(trial: &TrialManifest) -> Result<TrialImages> {
    Ok(TrialImages {
        search: trial.load_search()?,
        target: trial.load_target()?,
    })
}
