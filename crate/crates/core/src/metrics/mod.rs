//! Analysis of scanpaths: return fixations and everything measured on them.

mod geometry;
mod histogram;
mod recognition;
mod returns;
mod saliency;
mod spatial;
pub mod stats;

pub use geometry::{
    angle_size_correlation, angle_size_pairs, fixation_duration_stats, fixation_durations_by_class,
    saccade_size, saccade_size_stats, saccade_sizes_by_class, turning_angle, turning_angles,
    DurationStats, SaccadeSizeStats, TurningAngles, DEFAULT_ANGLE_BIN_DEG,
};
pub use histogram::Histogram;
pub use recognition::{recognition_error_rates, RecognitionErrorRates, TargetBox};
pub use returns::{
    detect_return_fixations, proportion_return, return_offsets, trial_return_proportion,
    FixationClass, PerClass, ProportionOptions, ProportionReport, ReturnAnnotation, ReturnOffsets,
};
pub use saliency::{patch_mean, saliency_at_fixations, saliency_at_fixations_map};
pub use spatial::{
    chance_entropy, consistency_distribution, consistency_entropy, floor_and_renormalize,
    kl_divergence, shannon_entropy, similarity_index, spatial_kld, EntropyParams, KldParams,
};
pub use stats::Summary;
