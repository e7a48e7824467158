//! Seeded synthetic stimuli: textured scenes for free viewing and scenes with
//! a planted target for search.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::features::SEARCH_STRIDE_PX;
use crate::image::ImageGrid;
use crate::metrics::TargetBox;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneParams {
    pub size_px: usize,
    pub dva_per_px: f64,
    /// Objects scattered over the background.
    pub objects: (usize, usize),
    /// Object radius range in pixels.
    pub radius_px: (f64, f64),
}

impl Default for SceneParams {
    fn default() -> Self {
        Self {
            size_px: 256,
            dva_per_px: 1.0 / 16.0,
            objects: (20, 30),
            radius_px: (6.0, 18.0),
        }
    }
}

struct Blob {
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
    color: [f64; 3],
    freq: f64,
    phase: f64,
    theta: f64,
    contrast: f64,
}

impl Blob {
    fn random<R: Rng>(rng: &mut R, size: f64, radius: (f64, f64)) -> Self {
        let r = rng.random_range(radius.0..=radius.1);
        Blob {
            cx: rng.random_range(0.0..size),
            cy: rng.random_range(0.0..size),
            rx: r * rng.random_range(0.6..1.4),
            ry: r * rng.random_range(0.6..1.4),
            color: [rng.random(), rng.random(), rng.random()],
            freq: rng.random_range(0.1..0.5),
            phase: rng.random_range(0.0..TAU),
            theta: rng.random_range(0.0..TAU),
            contrast: rng.random_range(0.1..0.4),
        }
    }

    /// Soft-edged coverage and textured color at a pixel.
    fn sample(&self, c: usize, x: f64, y: f64) -> Option<(f64, f64)> {
        let d = ((x - self.cx) / self.rx).powi(2) + ((y - self.cy) / self.ry).powi(2);
        if d > 1.5 {
            return None;
        }
        let alpha = (1.0 - (d - 0.8).max(0.0) / 0.7).clamp(0.0, 1.0);
        let u = (x - self.cx) * self.theta.cos() + (y - self.cy) * self.theta.sin();
        let v = self.color[c] + self.contrast * (self.freq * u + self.phase).sin();
        Some((alpha, v.clamp(0.0, 1.0)))
    }
}

fn background<R: Rng>(rng: &mut R) -> impl Fn(usize, f64, f64) -> f64 {
    let base: [f64; 3] = [
        rng.random_range(0.3..0.7),
        rng.random_range(0.3..0.7),
        rng.random_range(0.3..0.7),
    ];
    let waves: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            let theta: f64 = rng.random_range(0.0..TAU);
            (
                theta.cos(),
                theta.sin(),
                rng.random_range(0.01..0.06),
                rng.random_range(0.0..TAU),
            )
        })
        .collect();
    move |c, x, y| {
        let s: f64 = waves
            .iter()
            .map(|(kx, ky, f, p)| (f * (kx * x + ky * y) + p + c as f64).sin())
            .sum();
        base[c] + 0.04 * s
    }
}

/// A color scene of textured blobs on a gently varying background.
pub fn textured_scene(seed: u64, params: &SceneParams) -> Result<ImageGrid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = params.size_px as f64;
    let bg = background(&mut rng);
    let n = rng.random_range(params.objects.0..=params.objects.1);
    let blobs: Vec<Blob> = (0..n)
        .map(|_| Blob::random(&mut rng, size, params.radius_px))
        .collect();
    let noise: Vec<f64> = (0..3 * params.size_px * params.size_px)
        .map(|_| rng.random_range(-0.02..0.02))
        .collect();
    let s = params.size_px;
    ImageGrid::from_fn(s, s, 3, params.dva_per_px, |c, y, x| {
        let (fx, fy) = (x as f64 + 0.5, y as f64 + 0.5);
        let mut v = bg(c, fx, fy);
        for b in &blobs {
            if let Some((a, bv)) = b.sample(c, fx, fy) {
                v = v * (1.0 - a) + bv * a;
            }
        }
        v + noise[(c * s + y) * s + x]
    })
}

#[derive(Debug, Clone)]
pub struct PlantedScene {
    pub search: ImageGrid,
    /// Exact copy of the pasted patch.
    pub target: ImageGrid,
    pub target_box_dva: TargetBox,
}

impl PlantedScene {
    pub fn target_center_dva(&self) -> (f64, f64) {
        let b = self.target_box_dva;
        (b.x + b.width / 2.0, b.y + b.height / 2.0)
    }
}

/// A textured scene with one `target_px` square object pasted verbatim at a
/// random location away from the image center. With `cell_aligned` the
/// target is centered on a working-grid cell center, where fixations land.
pub fn planted_target_scene(
    seed: u64,
    params: &SceneParams,
    target_px: usize,
    cell_aligned: bool,
) -> Result<PlantedScene> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut search = textured_scene(seed, params)?;
    let t = target_px as f64;
    let target = ImageGrid::from_fn(target_px, target_px, 3, params.dva_per_px, {
        let color: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        let theta: f64 = rng.random_range(0.0..TAU);
        let freq: f64 = rng.random_range(0.5..1.0);
        move |c, y, x| {
            let (u, v) = (x as f64 + 0.5 - t / 2.0, y as f64 + 0.5 - t / 2.0);
            let stripes = (freq * (u * theta.cos() + v * theta.sin())).sin();
            let ring = if u.abs().max(v.abs()) > 0.4 * t {
                0.35
            } else {
                0.0
            };
            color[c] + 0.35 * stripes - ring
        }
    })?;
    let s = params.size_px;
    let margin = target_px;
    let center = s as f64 / 2.0;
    let stride = SEARCH_STRIDE_PX;
    let snap = |v: usize| {
        if !cell_aligned {
            return v;
        }
        // the nearest placement whose center sits on a cell center
        let center = v as f64 + t / 2.0;
        let cell_center = ((center / stride as f64).floor() + 0.5) * stride as f64;
        ((cell_center - t / 2.0).round().max(0.0) as usize).min(s - margin)
    };
    let (x0, y0) = loop {
        let x0 = snap(rng.random_range(0..=s - margin));
        let y0 = snap(rng.random_range(0..=s - margin));
        let (cx, cy) = (x0 as f64 + t / 2.0, y0 as f64 + t / 2.0);
        if (cx - center).hypot(cy - center) > 3.0 * t {
            break (x0, y0);
        }
    };
    search.paste(&target, x0, y0);
    let d = params.dva_per_px;
    Ok(PlantedScene {
        search,
        target,
        target_box_dva: TargetBox {
            x: x0 as f64 * d,
            y: y0 as f64 * d,
            width: t * d,
            height: t * d,
        },
    })
}
