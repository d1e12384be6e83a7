#![allow(dead_code)]

//! Reference implementations written straight from the definitions, kept
//! deliberately naive so they share no code path with the library.

use fairaudit::{AlgorithmRecord, Dataset, GroupRates};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Corrected Gini by the literal double sum over ordered pairs.
pub fn gini_oracle(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let mut pairs = 0.0;
    for a in x {
        for b in x {
            pairs += (a - b).abs();
        }
    }
    if pairs == 0.0 {
        return 0.0;
    }
    (n / (n - 1.0)) * pairs / (2.0 * n * n * mean)
}

/// Largest absolute difference over all unordered pairs.
pub fn max_pair_diff(x: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            best = best.max((x[i] - x[j]).abs());
        }
    }
    best
}

/// Largest ratio over all ordered pairs, `None` on a zero rate.
pub fn max_pair_ratio(x: &[f64]) -> Option<f64> {
    if x.contains(&0.0) {
        return None;
    }
    let mut best = 1.0f64;
    for a in x {
        for b in x {
            best = best.max(a / b);
        }
    }
    Some(best)
}

pub fn fdr_oracle(fmr: &[f64], fnmr: &[f64], alpha: f64) -> f64 {
    1.0 - (alpha * max_pair_diff(fmr) + (1.0 - alpha) * max_pair_diff(fnmr))
}

pub fn ir_oracle(fmr: &[f64], fnmr: &[f64], alpha: f64) -> Option<f64> {
    Some(max_pair_ratio(fmr)?.powf(alpha) * max_pair_ratio(fnmr)?.powf(1.0 - alpha))
}

pub fn garbe_oracle(fmr: &[f64], fnmr: &[f64], alpha: f64) -> f64 {
    alpha * gini_oracle(fmr) + (1.0 - alpha) * gini_oracle(fnmr)
}

/// `(efficient, weakly_efficient)` by exhaustive pairwise comparison.
pub fn domination_oracle(p: &[(f64, f64)]) -> Vec<(bool, bool)> {
    p.iter()
        .enumerate()
        .map(|(i, a)| {
            let dominated = p
                .iter()
                .enumerate()
                .any(|(j, b)| j != i && b.0 <= a.0 && b.1 <= a.1 && (b.0 < a.0 || b.1 < a.1));
            let strictly = p
                .iter()
                .enumerate()
                .any(|(j, b)| j != i && b.0 < a.0 && b.1 < a.1);
            (!dominated, dominated && !strictly)
        })
        .collect()
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("g{i}")).collect()
}

pub fn rates(fmr: &[f64], fnmr: &[f64]) -> GroupRates<f64> {
    let l = labels(fmr.len());
    GroupRates::new(
        l.iter()
            .zip(fmr)
            .zip(fnmr)
            .map(|((g, &a), &b)| (g.as_str(), a, b)),
    )
    .unwrap()
}

/// Log-uniform draw in `[lo, hi]`.
pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

pub const SYNTH_GROUPS: [&str; 8] = [
    "east_african_f",
    "east_african_m",
    "east_asian_f",
    "east_asian_m",
    "polish_f",
    "polish_m",
    "west_african_f",
    "west_african_m",
];

/// Seeded stand-in for a 1:1 verification leaderboard: FMR spanning about a
/// decade between groups around 1e-5..1e-3, FNMR a few percent.
pub fn synthetic_corpus(n: usize, seed: u64) -> Dataset<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records = (0..n)
        .map(|k| {
            let base_fmr = log_uniform(&mut rng, 2e-6, 4e-5);
            let base_fnmr = log_uniform(&mut rng, 0.002, 0.04);
            let rows: Vec<(&str, f64, f64)> = SYNTH_GROUPS
                .iter()
                .map(|g| {
                    let fmr = (base_fmr * log_uniform(&mut rng, 1.0, 40.0)).min(1.0);
                    let fnmr = (base_fnmr * log_uniform(&mut rng, 0.4, 3.0)).min(1.0);
                    (*g, fmr, fnmr)
                })
                .collect();
            AlgorithmRecord::new(format!("vendor{k:03}-001"), GroupRates::new(rows).unwrap())
                .unwrap()
        })
        .collect();
    Dataset::new(records).unwrap()
}
