//! Gating and gap filling for head-mounted recordings.

use crate::error::{Error, Result};
use crate::image::ImageGrid;

pub const DEFAULT_FPS: f64 = 24.0;
pub const CLIP_SECONDS: f64 = 5.0;
/// Largest first-to-last frame distance for a clip to be kept (inclusive).
pub const FRAME_DISTANCE_GATE: f64 = 0.4;
pub const MAX_GAP_FRAMES: usize = 14;

/// Euclidean distance between two frames over all samples, divided by the
/// number of pixels.
pub fn normalized_frame_distance(first: &ImageGrid, last: &ImageGrid) -> Result<f64> {
    if (first.width(), first.height(), first.channels())
        != (last.width(), last.height(), last.channels())
    {
        return Err(Error::dimension(format!(
            "frames are {}x{}x{} and {}x{}x{}",
            first.width(),
            first.height(),
            first.channels(),
            last.width(),
            last.height(),
            last.channels()
        )));
    }
    let sq: f64 = first
        .pixels()
        .iter()
        .zip(last.pixels())
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    Ok(sq.sqrt() / (first.width() * first.height()) as f64)
}

pub fn passes_gate(distance: f64) -> bool {
    distance <= FRAME_DISTANCE_GATE
}

/// (frame, gaze point) pairs.
pub type GazeTrack = Vec<(usize, (f64, f64))>;

/// Gaze samples indexed by frame after gap filling.
#[derive(Debug, Clone, PartialEq)]
pub enum GapFill {
    /// `(frame, point)` for every kept frame. Unflanked gaps at either end are dropped.
    Filled(GazeTrack),
    Rejected {
        gap_start: usize,
        gap_len: usize,
    },
}

/// Fills interior gaps of at most `max_gap_frames` by linear interpolation;
/// any longer gap rejects the clip.
pub fn interpolate_missing_fixations(
    gaze: &[Option<(f64, f64)>],
    max_gap_frames: usize,
) -> GapFill {
    let mut k = 0;
    while k < gaze.len() {
        if gaze[k].is_none() {
            let start = k;
            while k < gaze.len() && gaze[k].is_none() {
                k += 1;
            }
            if k - start > max_gap_frames {
                return GapFill::Rejected {
                    gap_start: start,
                    gap_len: k - start,
                };
            }
        } else {
            k += 1;
        }
    }

    let present: Vec<usize> = (0..gaze.len()).filter(|i| gaze[*i].is_some()).collect();
    let (Some(&first), Some(&last)) = (present.first(), present.last()) else {
        return GapFill::Filled(Vec::new());
    };
    let mut out = Vec::with_capacity(last - first + 1);
    let mut prev = first;
    for &next in &present {
        let a = gaze[prev].unwrap();
        let b = gaze[next].unwrap();
        for f in prev + 1..next {
            let t = (f - prev) as f64 / (next - prev) as f64;
            out.push((f, (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t)));
        }
        out.push((next, b));
        prev = next;
    }
    GapFill::Filled(out)
}

/// A short clip with per-frame gaze already expressed in last-frame
/// coordinates.
#[derive(Debug, Clone)]
pub struct EgocentricClip {
    pub clip_id: String,
    pub fps: f64,
    pub gaze: Vec<Option<(f64, f64)>>,
    pub first_frame: ImageGrid,
    pub last_frame: ImageGrid,
}

impl EgocentricClip {
    pub fn frame_count(&self) -> usize {
        self.gaze.len()
    }

    pub fn expected_frames(&self) -> usize {
        (CLIP_SECONDS * self.fps).round() as usize
    }

    /// Gaze points of a clip that passes the frame gate and gap check.
    pub fn preprocess(&self) -> Result<Option<GazeTrack>> {
        if !passes_gate(normalized_frame_distance(
            &self.first_frame,
            &self.last_frame,
        )?) {
            return Ok(None);
        }
        Ok(
            match interpolate_missing_fixations(&self.gaze, MAX_GAP_FRAMES) {
                GapFill::Filled(points) => Some(points),
                GapFill::Rejected { .. } => None,
            },
        )
    }
}
