//! Seeded sampling from exact output distributions and binomial confidence intervals.

use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::random::trial_rng;

/// Draws `trials` outcomes from `dist`; trial `i` uses its own stream of `seed`,
/// so results do not depend on evaluation order.
pub fn sample_outcomes(dist: &[f64], trials: usize, seed: u64) -> Vec<usize> {
    let total: f64 = dist.iter().sum();
    let mut cdf = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for p in dist {
        acc += p.max(0.0) / total;
        cdf.push(acc);
    }
    (0..trials)
        .map(|i| {
            let u: f64 = trial_rng(seed, i as u64).random();
            cdf.partition_point(|&c| c <= u).min(dist.len() - 1)
        })
        .collect()
}

/// Number of successes in `trials` Bernoulli(`p`) draws.
pub fn sample_successes(p: f64, trials: usize, seed: u64) -> usize {
    sample_outcomes(&[p.clamp(0.0, 1.0), (1.0 - p).clamp(0.0, 1.0)], trials, seed)
        .iter()
        .filter(|&&o| o == 0)
        .count()
}

/// Two-sided Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize, confidence: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let nf = n as f64;
    let phat = k as f64 / nf;
    let denom = 1.0 + z * z / nf;
    let centre = (phat + z * z / (2.0 * nf)) / denom;
    let half = z * ((phat * (1.0 - phat) + z * z / (4.0 * nf)) / nf).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Independent seed for sub-experiment `k` of a run (SplitMix64 finalizer).
pub fn derive_seed(master: u64, k: u64) -> u64 {
    let mut z = master ^ k.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Binomial standard error of a frequency.
pub fn standard_error(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n.max(1) as f64).sqrt()
}
