//! Target-modulated similarity and the channel-mean saliency map.

use crate::error::{Error, Result};
use crate::features::FeatureTensor;
use crate::map::{AttentionMap, MapKind};

/// Cross-correlates the target tensor (as kernel) over the search tensor.
///
/// The kernel is anchored at `((kh-1)/2, (kw-1)/2)` and the search tensor is
/// zero padded, so the output has the search tensor's spatial dims and peaks
/// where the target's anchor cell sits. Unnormalized.
pub fn compute_similarity_map(
    search: &FeatureTensor,
    target: &FeatureTensor,
) -> Result<AttentionMap> {
    if search.channels() != target.channels() {
        return Err(Error::dimension(format!(
            "search has {} channels, target has {}",
            search.channels(),
            target.channels()
        )));
    }
    if target.height() > search.height() || target.width() > search.width() {
        return Err(Error::dimension(format!(
            "target extent {}x{} exceeds search extent {}x{}",
            target.height(),
            target.width(),
            search.height(),
            search.width()
        )));
    }
    let (h, w) = (search.height(), search.width());
    let (kh, kw) = (target.height(), target.width());
    let (ay, ax) = ((kh - 1) / 2, (kw - 1) / 2);
    let mut out = vec![0.0f64; h * w];
    for c in 0..search.channels() {
        let plane = search.channel(c);
        let kernel = target.channel(c);
        for dy in 0..kh {
            for dx in 0..kw {
                let k = kernel[dy * kw + dx] as f64;
                if k == 0.0 {
                    continue;
                }
                for y in 0..h {
                    let sy = y as isize + dy as isize - ay as isize;
                    if sy < 0 || sy as usize >= h {
                        continue;
                    }
                    let row = &plane[sy as usize * w..(sy as usize + 1) * w];
                    let out_row = &mut out[y * w..(y + 1) * w];
                    for (x, o) in out_row.iter_mut().enumerate() {
                        let sx = x as isize + dx as isize - ax as isize;
                        if sx >= 0 && (sx as usize) < w {
                            *o += k * row[sx as usize] as f64;
                        }
                    }
                }
            }
        }
    }
    AttentionMap::new(h, w, out, MapKind::Similarity)
}

/// Mean over channels at every cell: the search features modulated by an
/// all-ones 1x1 kernel, up to the constant 1/C.
pub fn compute_saliency_map(search: &FeatureTensor) -> AttentionMap {
    let (h, w) = (search.height(), search.width());
    let mut out = vec![0.0f64; h * w];
    for c in 0..search.channels() {
        for (o, v) in out.iter_mut().zip(search.channel(c)) {
            *o += *v as f64;
        }
    }
    let inv = 1.0 / search.channels() as f64;
    out.iter_mut().for_each(|v| *v *= inv);
    AttentionMap::from_parts_unchecked(h, w, out, MapKind::Saliency, false)
}
