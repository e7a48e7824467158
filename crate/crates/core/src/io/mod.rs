//! File formats and dataset preprocessing.

mod config_file;
mod egocentric;
mod fixation_log;
mod image_io;
mod kv;
mod manifest;
mod prior_fit;

pub use crate::features::{
    decode_feature_tensor, encode_feature_tensor, read_feature_tensor, write_feature_tensor,
};
pub use config_file::{parse_config, read_config, ConfigFile, GammaPrior};
pub use egocentric::{
    interpolate_missing_fixations, normalized_frame_distance, passes_gate, EgocentricClip, GapFill,
    CLIP_SECONDS, DEFAULT_FPS, FRAME_DISTANCE_GATE, MAX_GAP_FRAMES,
};
pub use fixation_log::{
    format_fixation_log, parse_fixation_log, read_fixation_log, write_fixation_log,
    FIXATION_LOG_HEADER,
};
pub use image_io::{load_image, save_png};
pub use manifest::{
    parse_manifest, read_manifest, DatasetKind, TrialManifest, DEFAULT_RETURN_THRESHOLD_DVA,
    EGOCENTRIC_RETURN_THRESHOLD_DVA,
};
pub use prior_fit::{fit_saccade_prior, saccade_sizes, RECOMMENDED_MIN_SACCADES};
