//! Graph-based bottom-up saliency used for analysis.
//!
//! Every feature channel becomes a fully connected graph over map cells with
//! weights `|v_i - v_j| * exp(-d(i,j)^2 / (2 sigma^2))`. The equilibrium of
//! the random walk on that graph, found by power iteration, is the channel's
//! activation; channels are averaged and renormalized to a distribution.

use log::warn;

use crate::features::pyramid::level_planes;
use crate::image::{bilinear_resample, ImageGrid};
use crate::map::{AttentionMap, MapKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbvsParams {
    /// Longer side of the graph grid, in cells.
    pub max_side: usize,
    /// Graph distance falloff as a fraction of the grid diagonal.
    pub sigma_fraction: f64,
    /// L1 change between iterates below which the walk has converged.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub orientations: usize,
    pub scales: usize,
}

impl Default for GbvsParams {
    fn default() -> Self {
        Self {
            max_side: 32,
            sigma_fraction: 0.15,
            tolerance: 1e-6,
            max_iterations: 1000,
            orientations: 4,
            scales: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GbvsResult {
    /// Sums to 1.
    pub map: AttentionMap,
    /// False if any channel hit the iteration cap.
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct Equilibrium {
    pub distribution: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub fn gbvs_saliency(image: &ImageGrid) -> GbvsResult {
    gbvs_saliency_with(image, &GbvsParams::default())
}

pub fn gbvs_saliency_with(image: &ImageGrid, params: &GbvsParams) -> GbvsResult {
    let (gh, gw) = grid_dims(image.height(), image.width(), params.max_side);
    let falloff = distance_falloff(gh, gw, params.sigma_fraction);

    let mut total = vec![0.0; gh * gw];
    let mut converged = true;
    let mut channels = 0usize;
    for level in level_planes(image, params.orientations, params.scales, 1.0) {
        for plane in level.opponent.iter().chain(&level.orientation) {
            let values = bilinear_resample(plane, level.height, level.width, gh, gw);
            let eq = equilibrium_with_falloff(
                &values,
                &falloff,
                params.tolerance,
                params.max_iterations,
            );
            converged &= eq.converged;
            total
                .iter_mut()
                .zip(&eq.distribution)
                .for_each(|(t, p)| *t += p);
            channels += 1;
        }
    }
    if !converged {
        warn!(
            "gbvs: power iteration hit {} iterations without converging",
            params.max_iterations
        );
    }
    let sum: f64 = total.iter().sum();
    let values = if sum > 0.0 {
        total.iter().map(|v| v / sum).collect()
    } else {
        vec![1.0 / (gh * gw) as f64; gh * gw]
    };
    debug_assert!(channels > 0);
    GbvsResult {
        map: AttentionMap::from_parts_unchecked(gh, gw, values, MapKind::Saliency, false),
        converged,
    }
}

fn grid_dims(h: usize, w: usize, max_side: usize) -> (usize, usize) {
    let longest = h.max(w);
    if longest <= max_side {
        return (h, w);
    }
    let scale = max_side as f64 / longest as f64;
    (
        ((h as f64 * scale).round() as usize).max(1),
        ((w as f64 * scale).round() as usize).max(1),
    )
}

/// `exp(-d^2 / (2 sigma^2))` between all cell pairs, sigma in cells.
fn distance_falloff(h: usize, w: usize, sigma_fraction: f64) -> Falloff {
    let sigma = sigma_fraction * ((h * h + w * w) as f64).sqrt();
    let n = h * w;
    let mut g = vec![0.0; n * n];
    for i in 0..n {
        let (yi, xi) = ((i / w) as f64, (i % w) as f64);
        for j in 0..n {
            let (yj, xj) = ((j / w) as f64, (j % w) as f64);
            let d2 = (yi - yj).powi(2) + (xi - xj).powi(2);
            g[i * n + j] = (-d2 / (2.0 * sigma * sigma)).exp();
        }
    }
    Falloff { n, g }
}

struct Falloff {
    n: usize,
    g: Vec<f64>,
}

/// Equilibrium of the activation graph over a single `h x w` channel.
pub fn graph_equilibrium(
    values: &[f64],
    h: usize,
    w: usize,
    sigma_fraction: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Equilibrium {
    assert_eq!(values.len(), h * w, "channel length must equal h*w");
    let falloff = distance_falloff(h, w, sigma_fraction);
    equilibrium_with_falloff(values, &falloff, tolerance, max_iterations)
}

/// Dense symmetric edge weights for one channel, row-major `n x n`.
pub fn activation_weights(values: &[f64], h: usize, w: usize, sigma_fraction: f64) -> Vec<f64> {
    let falloff = distance_falloff(h, w, sigma_fraction);
    weights(values, &falloff)
}

fn weights(values: &[f64], falloff: &Falloff) -> Vec<f64> {
    let n = falloff.n;
    let mut wts = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            wts[i * n + j] = (values[i] - values[j]).abs() * falloff.g[i * n + j];
        }
    }
    wts
}

/// Channels whose value range is below this (relative) are treated as flat;
/// their only edges would come from rounding noise.
const FLAT_RANGE: f64 = 1e-12;

fn equilibrium_with_falloff(
    values: &[f64],
    falloff: &Falloff,
    tolerance: f64,
    max_iterations: usize,
) -> Equilibrium {
    let n = falloff.n;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(*v), b.max(*v))
        });
    if hi - lo <= FLAT_RANGE * hi.abs().max(lo.abs()).max(1.0) {
        return Equilibrium {
            distribution: vec![1.0 / n as f64; n],
            iterations: 0,
            converged: true,
        };
    }
    let wts = weights(values, falloff);
    // column sums; W is symmetric so row sums serve
    let degree: Vec<f64> = (0..n)
        .map(|j| wts[j * n..(j + 1) * n].iter().sum())
        .collect();

    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut scaled = vec![0.0; n];
    for iteration in 1..=max_iterations {
        // mass leaving cells without edges is spread uniformly
        let mut teleport = 0.0;
        for j in 0..n {
            if degree[j] > 0.0 {
                scaled[j] = pi[j] / degree[j];
            } else {
                scaled[j] = 0.0;
                teleport += pi[j];
            }
        }
        let spread = teleport / n as f64;
        // lazy step: same equilibrium, but two-valued (bipartite) graphs no
        // longer oscillate
        for i in 0..n {
            let row = &wts[i * n..(i + 1) * n];
            let walked = spread + row.iter().zip(&scaled).map(|(a, b)| a * b).sum::<f64>();
            next[i] = 0.5 * (pi[i] + walked);
        }
        let sum: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= sum);
        let delta: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut pi, &mut next);
        if delta < tolerance {
            return Equilibrium {
                distribution: pi,
                iterations: iteration,
                converged: true,
            };
        }
    }
    Equilibrium {
        distribution: pi,
        iterations: max_iterations,
        converged: false,
    }
}
