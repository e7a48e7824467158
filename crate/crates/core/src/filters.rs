//! Small separable filtering and pooling kernels on row-major planes.

pub(crate) fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil().max(1.0) as isize;
    let k: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.into_iter().map(|v| v / sum).collect()
}

/// Gaussian blur where taps falling outside the plane are dropped and the
/// remaining weights renormalized, so constant planes stay exactly constant
/// up to rounding.
pub(crate) fn gaussian_blur(src: &[f64], h: usize, w: usize, sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return src.to_vec();
    }
    let k = gaussian_kernel(sigma);
    let r = (k.len() / 2) as isize;
    let mut tmp = vec![0.0; h * w];
    for y in 0..h {
        for x in 0..w {
            let (mut acc, mut norm) = (0.0, 0.0);
            for (i, kv) in k.iter().enumerate() {
                let sx = x as isize + i as isize - r;
                if sx >= 0 && (sx as usize) < w {
                    acc += kv * src[y * w + sx as usize];
                    norm += kv;
                }
            }
            tmp[y * w + x] = acc / norm;
        }
    }
    let mut out = vec![0.0; h * w];
    for y in 0..h {
        for x in 0..w {
            let (mut acc, mut norm) = (0.0, 0.0);
            for (i, kv) in k.iter().enumerate() {
                let sy = y as isize + i as isize - r;
                if sy >= 0 && (sy as usize) < h {
                    acc += kv * tmp[sy as usize * w + x];
                    norm += kv;
                }
            }
            out[y * w + x] = acc / norm;
        }
    }
    out
}

/// Central-difference gradients with replicated borders.
pub(crate) fn gradients(src: &[f64], h: usize, w: usize) -> (Vec<f64>, Vec<f64>) {
    let mut gx = vec![0.0; h * w];
    let mut gy = vec![0.0; h * w];
    for y in 0..h {
        let up = y.saturating_sub(1);
        let down = (y + 1).min(h - 1);
        for x in 0..w {
            let left = x.saturating_sub(1);
            let right = (x + 1).min(w - 1);
            gx[y * w + x] = (src[y * w + right] - src[y * w + left]) / 2.0;
            gy[y * w + x] = (src[down * w + x] - src[up * w + x]) / 2.0;
        }
    }
    (gx, gy)
}

/// Block average with partial blocks at the right/bottom edges (ceil mode).
pub(crate) fn avg_pool(src: &[f64], h: usize, w: usize, block: usize) -> (Vec<f64>, usize, usize) {
    let oh = h.div_ceil(block);
    let ow = w.div_ceil(block);
    let mut out = vec![0.0; oh * ow];
    for oy in 0..oh {
        for ox in 0..ow {
            let (mut acc, mut n) = (0.0, 0usize);
            for y in oy * block..((oy + 1) * block).min(h) {
                for x in ox * block..((ox + 1) * block).min(w) {
                    acc += src[y * w + x];
                    n += 1;
                }
            }
            out[oy * ow + ox] = acc / n as f64;
        }
    }
    (out, oh, ow)
}

/// Block maximum, ceil mode.
pub(crate) fn max_pool(src: &[f64], h: usize, w: usize, block: usize) -> (Vec<f64>, usize, usize) {
    let oh = h.div_ceil(block);
    let ow = w.div_ceil(block);
    let mut out = vec![f64::NEG_INFINITY; oh * ow];
    for y in 0..h {
        for x in 0..w {
            let o = &mut out[(y / block) * ow + x / block];
            *o = o.max(src[y * w + x]);
        }
    }
    (out, oh, ow)
}
