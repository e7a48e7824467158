//! Finite inhibition of return: decaying Gaussian memory of past fixations.

use super::config::ModelConfig;
use super::grid::MapGrid;
use crate::error::{Error, Result};
use crate::map::{AttentionMap, MapKind};
use crate::scanpath::Fixation;

/// Memory value of fixation `past` seen from fixation `current`:
/// `max(alpha^(current - past), beta)`.
pub fn memory_decay_value(current: usize, past: usize, alpha: f64, beta: f64) -> Result<f64> {
    if past > current {
        return Err(Error::domain(format!(
            "past fixation {past} lies after current fixation {current}"
        )));
    }
    let k = i32::try_from(current - past).unwrap_or(i32::MAX);
    Ok(alpha.powi(k).max(beta))
}

/// Memory map with the configured decay and a Gaussian width of
/// `config.sigma` times the image width. The last fixation in `history` is
/// the current one; an empty history gives an all-zero map. Unnormalized.
pub fn build_memory_map(
    history: &[Fixation],
    config: &ModelConfig,
    grid: &MapGrid,
) -> AttentionMap {
    memory_map_with(
        history,
        config.alpha,
        config.beta,
        config.sigma * grid.width_dva,
        grid,
    )
}

/// Elementwise maximum over past fixations of `a_t * exp(-d^2 / (2 sigma_dva^2))`.
pub fn memory_map_with(
    history: &[Fixation],
    alpha: f64,
    beta: f64,
    sigma_dva: f64,
    grid: &MapGrid,
) -> AttentionMap {
    let mut values = vec![0.0; grid.len()];
    let Some(current) = history.len().checked_sub(1) else {
        return AttentionMap::from_parts_unchecked(
            grid.rows,
            grid.cols,
            values,
            MapKind::Memory,
            false,
        );
    };
    let inv = 1.0 / (2.0 * sigma_dva * sigma_dva);
    for (t, fixation) in history.iter().enumerate() {
        let a = memory_decay_value(current, t, alpha, beta).expect("t <= current");
        for (v, (x, y)) in values.iter_mut().zip(grid.centers()) {
            let d2 = (x - fixation.x_dva).powi(2) + (y - fixation.y_dva).powi(2);
            let m = a * (-d2 * inv).exp();
            if m > *v {
                *v = m;
            }
        }
    }
    AttentionMap::from_parts_unchecked(grid.rows, grid.cols, values, MapKind::Memory, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decay_examples() {
        assert_eq!(memory_decay_value(5, 5, 0.92, 0.5).unwrap(), 1.0);
        assert_eq!(memory_decay_value(6, 5, 0.92, 0.5).unwrap(), 0.92);
        assert_eq!(memory_decay_value(9, 0, 0.92, 0.5).unwrap(), 0.5);
        assert!(memory_decay_value(8, 0, 0.92, 0.5).unwrap() > 0.5);
        assert!(memory_decay_value(1, 2, 0.92, 0.5).is_err());
    }

    #[test]
    fn empty_history_is_zero() {
        let g = MapGrid::new(3, 3, 3.0, 3.0);
        let m = build_memory_map(&[], &ModelConfig::default(), &g);
        assert!(m.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn gaussian_profile_at_sigma() {
        // 21x21 cells of 0.1 dva; center cell centered at (1.05, 1.05)
        let g = MapGrid::new(21, 21, 2.1, 2.1);
        let center = g.cell_center(10 * 21 + 10);
        let m = memory_map_with(&[Fixation::at(0, center.0, center.1)], 0.92, 0.5, 0.3, &g);
        assert_eq!(m.get(10, 10), 1.0);
        // three cells right is exactly sigma away
        assert!((m.get(10, 13) - (-0.5f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn revisit_overwrites_decayed_value() {
        let g = MapGrid::new(11, 11, 11.0, 11.0);
        let c = g.cell_center(5 * 11 + 5);
        let other = g.cell_center(0);
        let mut history = vec![Fixation::at(0, c.0, c.1)];
        for i in 1..5 {
            history.push(Fixation::at(i, other.0, other.1));
        }
        history.push(Fixation::at(5, c.0, c.1));
        let m = build_memory_map(&history, &ModelConfig::default(), &g);
        assert_eq!(m.get(5, 5), 1.0);
    }

    proptest! {
        #[test]
        fn decay_is_monotone_and_bounded(alpha in 0.01f64..0.99, beta in 0.01f64..0.99, k in 0usize..200) {
            let a = memory_decay_value(k + 1, 0, alpha, beta).unwrap();
            let b = memory_decay_value(k, 0, alpha, beta).unwrap();
            prop_assert!(a <= b);
            prop_assert!(a >= beta && b <= 1.0);
        }
    }
}
