//! The fixation loop: integrate maps, pick a winner, recognize, repeat.

use log::debug;
use rand::Rng;

use super::combine::combine_maps;
use super::config::{Ablation, Mode, ModelConfig, Weights};
use super::grid::MapGrid;
use super::memory::build_memory_map;
use super::prior::SaccadePrior;
use super::saccade::build_saccade_map;
use super::select::{select_cell, trial_rng};
use crate::error::{Error, Result};
use crate::features::{extract_features, FeatureBackend, FeatureTensor, Level};
use crate::image::ImageGrid;
use crate::map::{normalize_map, AttentionMap, MapKind};
use crate::recognition::Recognizer;
use crate::scanpath::{Scanpath, Source, StopReason};
use crate::similarity::{compute_saliency_map, compute_similarity_map};

/// One trial to simulate.
#[derive(Debug, Clone, Copy)]
pub struct TrialInput<'a> {
    pub subject_id: &'a str,
    pub trial_id: &'a str,
    pub search: &'a ImageGrid,
    pub target: Option<&'a ImageGrid>,
}

impl<'a> TrialInput<'a> {
    pub fn new(trial_id: &'a str, search: &'a ImageGrid, target: Option<&'a ImageGrid>) -> Self {
        Self {
            subject_id: "model",
            trial_id,
            search,
            target,
        }
    }
}

/// Image-dependent maps, computed once per trial at the working resolution.
#[derive(Debug, Clone)]
pub struct StaticMaps {
    pub search_features: FeatureTensor,
    pub similarity: AttentionMap,
    pub saliency: AttentionMap,
}

/// Maps built while choosing the fixation that follows `from_index`.
#[derive(Debug, Clone)]
pub struct StepMaps {
    pub from_index: usize,
    pub memory: AttentionMap,
    pub saccade: AttentionMap,
    pub combined: AttentionMap,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub statics: StaticMaps,
    pub steps: Vec<StepMaps>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub scanpath: Scanpath,
    /// Weights used for this trial, including any per-trial draw.
    pub weights: Weights,
    pub trace: Option<Trace>,
}

pub struct Simulator<'a> {
    config: &'a ModelConfig,
    backend: &'a FeatureBackend,
    prior: &'a SaccadePrior,
}

impl<'a> Simulator<'a> {
    pub fn new(
        config: &'a ModelConfig,
        backend: &'a FeatureBackend,
        prior: &'a SaccadePrior,
    ) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            backend,
            prior,
        })
    }

    pub fn static_maps(&self, input: &TrialInput, grid: &MapGrid) -> Result<StaticMaps> {
        let search_features = extract_features(input.search, self.backend, Level::Search)?;
        let saliency =
            normalize_map(&compute_saliency_map(&search_features)).resample(grid.rows, grid.cols);
        let similarity = match input.target {
            Some(target) => {
                let target_features = extract_features(target, self.backend, Level::Target)?;
                normalize_map(&compute_similarity_map(&search_features, &target_features)?)
                    .resample(grid.rows, grid.cols)
            }
            None => AttentionMap::zeros(grid.rows, grid.cols, MapKind::Similarity),
        };
        Ok(StaticMaps {
            search_features,
            similarity,
            saliency,
        })
    }

    pub fn run(&self, input: &TrialInput, keep_trace: bool) -> Result<RunOutcome> {
        let config = self.config;
        let search_mode = config.mode == Mode::VisualSearch;
        if search_mode && input.target.is_none() {
            return Err(Error::Config(format!(
                "trial {}: visual search needs a target image",
                input.trial_id
            )));
        }
        let grid = MapGrid::for_image(input.search);
        let statics = self.static_maps(input, &grid)?;
        let recognizer = match (search_mode, input.target) {
            (true, Some(target)) => Some(Recognizer::new(target, self.backend, config.patch_dva)?),
            _ => None,
        };

        let mut rng = trial_rng(config.seed, input.trial_id);
        let mut weights = config.weights();
        if config.ablation == Ablation::DefectiveMemory {
            weights.mem = -rng.random::<f64>();
        }
        let selection = config.selection();
        let source = if config.ablation == Ablation::None {
            Source::Model
        } else {
            Source::Ablated
        };

        let mut scanpath = Scanpath::new(input.subject_id, input.trial_id, source);
        let (cx, cy) = grid.center();
        scanpath.push(cx, cy);
        let mut steps = Vec::new();
        let cap = config.fixation_cap();

        loop {
            let current = *scanpath.fixations.last().unwrap();
            if let Some(recognizer) = &recognizer {
                let d = recognizer.distance(input.search, current.point())?;
                if d < config.recognition_threshold {
                    scanpath.stop_reason = StopReason::TargetFound;
                    break;
                }
            }
            if scanpath.len() >= cap {
                scanpath.stop_reason = StopReason::MaxFixations;
                break;
            }

            let memory = normalize_map(&build_memory_map(&scanpath.fixations, config, &grid));
            let saccade =
                build_saccade_map(current.point(), self.prior, &grid, config.area_correct);
            let combined = combine_maps(
                &statics.similarity,
                &statics.saliency,
                &memory,
                &saccade,
                &weights,
            )?;

            let allowed = (config.ablation == Ablation::InfiniteIor).then(|| {
                grid.centers()
                    .map(|(x, y)| {
                        scanpath
                            .fixations
                            .iter()
                            .all(|f| (f.x_dva - x).hypot(f.y_dva - y) > config.return_threshold_dva)
                    })
                    .collect::<Vec<bool>>()
            });
            let choice = select_cell(combined.values(), allowed.as_deref(), selection, &mut rng);

            if keep_trace {
                steps.push(StepMaps {
                    from_index: current.index,
                    memory,
                    saccade,
                    combined,
                });
            }
            let Some(cell) = choice else {
                debug!("trial {}: no admissible cell left", input.trial_id);
                scanpath.stop_reason = StopReason::Aborted;
                break;
            };
            let (x, y) = grid.cell_center(cell);
            scanpath.push(x, y);
        }

        Ok(RunOutcome {
            scanpath,
            weights,
            trace: keep_trace.then_some(Trace { statics, steps }),
        })
    }
}

/// Generates one scanpath under `config` (including its ablation setting).
pub fn run_scanpath(
    search: &ImageGrid,
    target: Option<&ImageGrid>,
    config: &ModelConfig,
    backend: &FeatureBackend,
    prior: &SaccadePrior,
) -> Result<Scanpath> {
    let sim = Simulator::new(config, backend, prior)?;
    Ok(sim
        .run(&TrialInput::new("trial", search, target), false)?
        .scanpath)
}

/// Runs one of the four ablated variants.
pub fn run_ablation(
    variant: Ablation,
    search: &ImageGrid,
    target: Option<&ImageGrid>,
    config: &ModelConfig,
    backend: &FeatureBackend,
    prior: &SaccadePrior,
) -> Result<Scanpath> {
    if variant == Ablation::None {
        return Err(Error::Config(
            "run_ablation needs an ablated variant".into(),
        ));
    }
    let config = ModelConfig {
        ablation: variant,
        ..config.clone()
    };
    run_scanpath(search, target, &config, backend, prior)
}
