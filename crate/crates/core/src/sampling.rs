//! Seeded random draws shared by the sampling-based checks.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::preferences::SimpleLottery;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Lottery with between one and `max_support` support points chosen
/// uniformly from `alternatives`, with normalized uniform weights.
pub fn random_lottery<R: Rng>(
    rng: &mut R,
    alternatives: &[f64],
    max_support: usize,
) -> SimpleLottery {
    let cap = max_support.min(alternatives.len()).max(1);
    let k = rng.gen_range(1..=cap);
    let idx = sample(rng, alternatives.len(), k);
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(f64::EPSILON..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut support: Vec<(f64, f64)> = idx
        .iter()
        .zip(&weights)
        .map(|(i, w)| (alternatives[i], w / total))
        .collect();
    // Push rounding residue onto the largest weight so the sum is one.
    let residue = 1.0 - support.iter().map(|s| s.1).sum::<f64>();
    if let Some(top) = support.iter_mut().max_by(|a, b| a.1.total_cmp(&b.1)) {
        top.1 += residue;
    }
    SimpleLottery::new(support).expect("normalized weights form a lottery")
}

/// Strictly increasing values on `n` points: cumulative sums of positive
/// uniform increments, rescaled to `[0, 1]`.
pub fn random_increasing<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    for _ in 1..n {
        acc += rng.gen_range(0.05..1.0);
        out.push(acc);
    }
    if acc > 0.0 {
        for v in &mut out {
            *v /= acc;
        }
    }
    out
}
