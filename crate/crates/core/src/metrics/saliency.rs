use super::returns::{PerClass, ReturnAnnotation};
use super::stats::{summarize, Summary};
use crate::error::{Error, Result};
use crate::gbvs::gbvs_saliency;
use crate::image::ImageGrid;
use crate::map::AttentionMap;
use crate::scanpath::Scanpath;

/// Mean of the map cells whose centers fall inside the square patch of side
/// `patch_dva` around `center`. The patch is clipped at the borders; if it
/// covers no cell center, the cell under `center` is used.
pub fn patch_mean(
    map: &AttentionMap,
    image_dims_dva: (f64, f64),
    center: (f64, f64),
    patch_dva: f64,
) -> f64 {
    let (rows, cols) = map.dims();
    let cw = image_dims_dva.0 / cols as f64;
    let ch = image_dims_dva.1 / rows as f64;
    let half = patch_dva / 2.0;
    let (mut sum, mut n) = (0.0, 0usize);
    for r in 0..rows {
        let y = (r as f64 + 0.5) * ch;
        if (y - center.1).abs() > half {
            continue;
        }
        for c in 0..cols {
            let x = (c as f64 + 0.5) * cw;
            if (x - center.0).abs() <= half {
                sum += map.get(r, c);
                n += 1;
            }
        }
    }
    if n > 0 {
        return sum / n as f64;
    }
    let c = ((center.0 / cw).floor().clamp(0.0, (cols - 1) as f64)) as usize;
    let r = ((center.1 / ch).floor().clamp(0.0, (rows - 1) as f64)) as usize;
    map.get(r, c)
}

/// Per-class mean saliency of fixation patches on a precomputed map.
pub fn saliency_at_fixations_map(
    map: &AttentionMap,
    image_dims_dva: (f64, f64),
    scanpath: &Scanpath,
    annotation: &ReturnAnnotation,
    patch_dva: f64,
) -> Result<PerClass<Summary>> {
    if scanpath.len() != annotation.len() {
        return Err(Error::dimension("annotation does not match scanpath"));
    }
    if !(patch_dva > 0.0) {
        return Err(Error::domain(format!(
            "patch size must be positive, got {patch_dva}"
        )));
    }
    let mut values: PerClass<Vec<f64>> = PerClass::default();
    for (f, class) in scanpath.fixations.iter().zip(&annotation.classes) {
        values
            .get_mut(*class)
            .push(patch_mean(map, image_dims_dva, f.point(), patch_dva));
    }
    Ok(values.map(|v| summarize(v)))
}

/// Graph-based saliency of `image`, averaged over each fixation's patch and
/// grouped by fixation class.
pub fn saliency_at_fixations(
    image: &ImageGrid,
    scanpath: &Scanpath,
    annotation: &ReturnAnnotation,
    patch_dva: f64,
) -> Result<PerClass<Summary>> {
    let map = gbvs_saliency(image).map;
    saliency_at_fixations_map(
        &map,
        (image.width_dva(), image.height_dva()),
        scanpath,
        annotation,
        patch_dva,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::MapKind;
    use crate::metrics::returns::detect_return_fixations;
    use crate::scanpath::Source;

    #[test]
    fn uniform_map_gives_uniform_means() {
        let map = AttentionMap::new(8, 8, vec![1.0 / 64.0; 64], MapKind::Saliency).unwrap();
        let p = Scanpath::from_points(
            "s",
            "t",
            &[(1.0, 1.0), (6.0, 2.0), (1.2, 1.0), (0.0, 8.0)],
            Source::Model,
        );
        let a = detect_return_fixations(&p, 1.0).unwrap();
        let s = saliency_at_fixations_map(&map, (8.0, 8.0), &p, &a, 1.0).unwrap();
        for m in [s.returns.mean, s.to_be_revisited.mean, s.non_return.mean] {
            assert!((m.unwrap() - 1.0 / 64.0).abs() < 1e-15);
        }
    }

    #[test]
    fn patch_clips_at_border() {
        let mut v = vec![0.0; 16];
        v[0] = 4.0;
        let map = AttentionMap::new(4, 4, v, MapKind::Saliency).unwrap();
        assert_eq!(patch_mean(&map, (4.0, 4.0), (0.0, 0.0), 1.0), 4.0);
        assert_eq!(patch_mean(&map, (4.0, 4.0), (0.5, 0.5), 2.0), 1.0);
    }
}
