use super::grid::MapGrid;
use super::prior::SaccadePrior;
use crate::map::{normalize_map, AttentionMap, MapKind};

/// Isotropic saccade-size map around the current fixation, normalized to [0,1].
///
/// With `area_correct` the radial density is divided by `2 pi r` (r floored at
/// half a cell) so the map is a planar density instead of a radial profile.
pub fn build_saccade_map(
    current: (f64, f64),
    prior: &SaccadePrior,
    grid: &MapGrid,
    area_correct: bool,
) -> AttentionMap {
    let min_r = 0.5 * grid.cell_width_dva().min(grid.cell_height_dva());
    let values = grid
        .centers()
        .map(|(x, y)| {
            let r = (x - current.0).hypot(y - current.1);
            let d = prior.density(r);
            if area_correct {
                d / (2.0 * std::f64::consts::PI * r.max(min_r))
            } else {
                d
            }
        })
        .collect();
    normalize_map(&AttentionMap::from_parts_unchecked(
        grid.rows,
        grid.cols,
        values,
        MapKind::Saccade,
        false,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_under_quarter_turn() {
        let g = MapGrid::new(21, 21, 21.0, 21.0);
        let prior = SaccadePrior::default_gamma();
        let m = build_saccade_map(g.center(), &prior, &g, false);
        for r in 0..21 {
            for c in 0..21 {
                // (r, c) -> (c, 20 - r)
                assert!((m.get(r, c) - m.get(c, 20 - r)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn support_of_single_bin_prior() {
        let g = MapGrid::new(41, 41, 20.5, 20.5);
        let prior = SaccadePrior::new(vec![0.0, 2.0, 4.0, 6.0], vec![0.0, 1.0, 0.0]).unwrap();
        let center = g.cell_center(20 * 41 + 20);
        let m = build_saccade_map(center, &prior, &g, false);
        assert_eq!(m.get(20, 20), 0.0);
        assert_eq!(m.get(20, 26), 1.0); // r = 3.0
        assert_eq!(m.get(20, 29), 0.0); // r = 4.5
        assert_eq!(m.get(20, 40), 0.0);
    }

    #[test]
    fn area_correction_favours_near_cells() {
        let g = MapGrid::new(21, 21, 21.0, 21.0);
        let prior = SaccadePrior::new(vec![0.0, 10.0], vec![1.0]).unwrap();
        let m = build_saccade_map(g.center(), &prior, &g, true);
        assert_eq!(m.get(10, 10), 1.0);
        assert!(m.get(10, 12) > m.get(10, 15));
    }
}
