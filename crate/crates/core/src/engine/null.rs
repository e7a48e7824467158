//! Memoryless random walk constrained only by the saccade-size prior.

use std::f64::consts::TAU;

use rand::Rng;

use super::prior::SaccadePrior;
use crate::error::{Error, Result};
use crate::scanpath::{Scanpath, Source, StopReason};

/// Rejections allowed per step before giving up.
pub const MAX_REJECTIONS: usize = 1000;

/// One step of the walk. It only sees the current position.
pub fn null_step<R: Rng + ?Sized>(
    from: (f64, f64),
    prior: &SaccadePrior,
    width_dva: f64,
    height_dva: f64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    for _ in 0..MAX_REJECTIONS {
        let amplitude = prior.sample(rng);
        let angle = rng.random::<f64>() * TAU;
        let x = from.0 + amplitude * angle.cos();
        let y = from.1 + amplitude * angle.sin();
        if (0.0..=width_dva).contains(&x) && (0.0..=height_dva).contains(&y) {
            return Ok((x, y));
        }
    }
    Err(Error::Sampling(format!(
        "no in-bounds saccade from ({:.2}, {:.2}) after {MAX_REJECTIONS} draws",
        from.0, from.1
    )))
}

/// `n_fixations` fixations starting at the image center; out-of-bounds
/// landing points are redrawn.
pub fn run_null_model<R: Rng + ?Sized>(
    prior: &SaccadePrior,
    n_fixations: usize,
    image_dims_dva: (f64, f64),
    rng: &mut R,
) -> Result<Scanpath> {
    if n_fixations == 0 {
        return Err(Error::domain("null model needs at least one fixation"));
    }
    let (w, h) = image_dims_dva;
    let mut scanpath = Scanpath::new("null", "null", Source::Null);
    let mut current = (w / 2.0, h / 2.0);
    scanpath.push(current.0, current.1);
    while scanpath.len() < n_fixations {
        current = null_step(current, prior, w, h, rng)?;
        scanpath.push(current.0, current.1);
    }
    scanpath.stop_reason = StopReason::MaxFixations;
    Ok(scanpath)
}
