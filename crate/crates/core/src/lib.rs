//! Scanpath simulation with similarity, saliency, memory and saccade-size maps,
//! plus the statistics used to compare simulated and recorded eye movements.

// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod engine;
mod error;
pub mod features;
mod filters;
pub mod gbvs;
pub mod image;
pub mod io;
pub mod map;
pub mod metrics;
pub mod recognition;
pub mod scanpath;
pub mod similarity;
pub mod synth;

pub use error::{Error, Result};
pub use image::ImageGrid;
pub use map::{normalize_map, AttentionMap, MapKind};
pub use scanpath::{Fixation, Scanpath, Source, StopReason};
