//! The scanpath generator.

mod combine;
mod config;
mod grid;
mod memory;
mod null;
mod prior;
mod run;
mod saccade;
mod select;

pub use combine::combine_maps;
pub use config::{Ablation, Mode, ModelConfig, Selection, Weights};
pub use grid::MapGrid;
pub use memory::{build_memory_map, memory_decay_value, memory_map_with};
pub use null::{null_step, run_null_model, MAX_REJECTIONS};
pub use prior::{Interpolation, SaccadePrior};
pub use run::{
    run_ablation, run_scanpath, RunOutcome, Simulator, StaticMaps, StepMaps, Trace, TrialInput,
};
pub use saccade::build_saccade_map;
pub use select::{next_fixation, select_cell, trial_rng, trial_seed};
