//! Winner-take-all and stochastic fixation selection.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::Selection;
use crate::map::AttentionMap;

/// Seeded stream for one trial, derived from the run seed and the trial id so
/// results do not depend on the order trials are scheduled in.
pub fn trial_rng(seed: u64, trial_id: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, trial_id))
}

pub fn trial_seed(seed: u64, trial_id: &str) -> u64 {
    // FNV-1a over the id, folded into the seed and mixed with splitmix64
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in trial_id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(seed ^ splitmix64(h))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Picks the next cell of `combined` (row-major index).
pub fn next_fixation<R: Rng + ?Sized>(
    combined: &AttentionMap,
    selection: Selection,
    rng: &mut R,
) -> usize {
    select_cell(combined.values(), None, selection, rng).expect("a non-empty map always has a cell")
}

/// Selection restricted to `allowed` cells. Argmax ties go to the lowest
/// index. Sampling first shifts negative maps up so their minimum is zero,
/// then draws proportionally to value; zero total mass is sampled uniformly.
/// `None` when nothing is allowed.
pub fn select_cell<R: Rng + ?Sized>(
    values: &[f64],
    allowed: Option<&[bool]>,
    selection: Selection,
    rng: &mut R,
) -> Option<usize> {
    let ok = |i: usize| allowed.is_none_or(|a| a[i]);
    let candidates: Vec<usize> = (0..values.len()).filter(|i| ok(*i)).collect();
    if candidates.is_empty() {
        return None;
    }
    match selection {
        Selection::Argmax => {
            let mut best = candidates[0];
            for &i in &candidates[1..] {
                if values[i] > values[best] {
                    best = i;
                }
            }
            Some(best)
        }
        Selection::Sample => {
            let min = candidates.iter().map(|i| values[*i]).fold(0.0, f64::min);
            let total: f64 = candidates.iter().map(|i| values[*i] - min).sum();
            if !(total > 0.0) {
                return Some(candidates[rng.random_range(0..candidates.len())]);
            }
            let u = rng.random::<f64>() * total;
            let mut acc = 0.0;
            for &i in &candidates {
                acc += values[i] - min;
                if u < acc {
                    return Some(i);
                }
            }
            candidates.iter().rev().copied().find(|i| values[*i] > min)
        }
    }
}
