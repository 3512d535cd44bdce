use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Hypergeometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::binomial::big_ln;
use super::{stream_sizes, Sidedness, TestResult, GENERATOR};
use crate::error::{Error, Result};

pub const DEFAULT_PERMUTATION_REPLICATES: u64 = 100_000;

/// `Auto` enumerates every relabelling when there are at most this many.
pub const EXHAUSTIVE_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermutationMode {
    #[default]
    Auto,
    Exhaustive,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationConfig {
    pub replicates: u64,
    pub seed: u64,
    pub sidedness: Sidedness,
    pub mode: PermutationMode,
}

impl Default for PermutationConfig {
    fn default() -> Self {
        PermutationConfig {
            replicates: DEFAULT_PERMUTATION_REPLICATES,
            seed: 0,
            sidedness: Sidedness::TwoSided,
            mode: PermutationMode::Auto,
        }
    }
}

/// Permutation test for a difference in proportions between two groups of
/// 0/1 flags, statistic `mean(a) - mean(b)`.
pub fn permutation_test(a: &[u8], b: &[u8], replicates: u64, seed: u64, sidedness: Sidedness) -> Result<TestResult> {
    let config = PermutationConfig {
        replicates,
        seed,
        sidedness,
        mode: PermutationMode::Auto,
    };
    permutation_test_with(a, b, &config)
}

pub fn permutation_test_with(a: &[u8], b: &[u8], config: &PermutationConfig) -> Result<TestResult> {
    let ones = |xs: &[u8]| -> Result<u64> {
        xs.iter().try_fold(0u64, |acc, &x| match x {
            0 | 1 => Ok(acc + u64::from(x)),
            other => Err(Error::InvalidArgument(format!("flag {other} is not 0 or 1"))),
        })
    };
    permutation_test_counts(ones(a)?, a.len() as u64, ones(b)?, b.len() as u64, config)
}

/// Same test from sufficient statistics: `ka` ones among `na` flags in the
/// first group, `kb` among `nb` in the second.
///
/// A relabelling only matters through the number of ones it puts in the first
/// group, which is hypergeometric. Exhaustive mode sums the exact
/// hypergeometric weights of the qualifying counts; Monte Carlo mode draws
/// that count directly, which is distributed exactly as under a full shuffle
/// of the pooled labels.
pub fn permutation_test_counts(ka: u64, na: u64, kb: u64, nb: u64, config: &PermutationConfig) -> Result<TestResult> {
    if na == 0 || nb == 0 {
        return Err(Error::InvalidArgument("permutation test needs two nonempty groups".into()));
    }
    if ka > na || kb > nb {
        return Err(Error::InvalidArgument("more ones than flags in a group".into()));
    }
    let total = na + nb;
    let k = ka + kb;
    let exhaustive = match config.mode {
        PermutationMode::Exhaustive => true,
        PermutationMode::MonteCarlo => false,
        PermutationMode::Auto => choose(total, na) <= BigUint::from(EXHAUSTIVE_LIMIT),
    };
    if !exhaustive && config.replicates == 0 {
        return Err(Error::InvalidArgument("replicates must be at least 1".into()));
    }

    // mean(a) - mean(b) = (x * total - k * na) / (na * nb) for x ones in a.
    let numerator = |x: u64| i128::from(x) * i128::from(total) - i128::from(k) * i128::from(na);
    let observed = numerator(ka);
    let extreme = |x: u64| {
        let d = numerator(x);
        match config.sidedness {
            Sidedness::TwoSided => d.abs() >= observed.abs(),
            Sidedness::Greater => d >= observed,
            Sidedness::Less => d <= observed,
        }
    };
    let statistic = ka as f64 / na as f64 - kb as f64 / nb as f64;

    let mut result = TestResult {
        method: String::new(),
        statistic,
        p_value: 0.0,
        n: vec![na, nb],
        seed: None,
        replicates: None,
        sidedness: config.sidedness,
        alpha_adjusted: None,
        generator: None,
    };
    if exhaustive {
        result.method = "permutation (exhaustive)".into();
        result.p_value = exact_p(k, na, total, extreme);
    } else {
        result.method = "permutation (monte carlo)".into();
        let hits = monte_carlo_hits(k, na, nb, config, extreme)?;
        result.p_value = (hits + 1) as f64 / (config.replicates + 1) as f64;
        result.seed = Some(config.seed);
        result.replicates = Some(config.replicates);
        result.generator = Some(GENERATOR.into());
    }
    Ok(result)
}

fn choose(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut c = BigUint::from(1u32);
    for i in 0..k {
        c *= n - i;
        c /= i + 1;
    }
    c
}

/// Fraction of all `C(total, na)` relabellings whose ones-count in the first
/// group satisfies `extreme`.
fn exact_p(k: u64, na: u64, total: u64, extreme: impl Fn(u64) -> bool) -> f64 {
    let lo = na.saturating_sub(total - k);
    let hi = k.min(na);
    let mut hits = BigUint::from(0u32);
    for x in lo..=hi {
        if extreme(x) {
            hits += choose(k, x) * choose(total - k, na - x);
        }
    }
    let all = choose(total, na);
    const EXACT: u64 = 1 << 53;
    if all <= BigUint::from(EXACT) {
        let as_u64 = |v: &BigUint| v.iter_u64_digits().next().unwrap_or(0) as f64;
        as_u64(&hits) / as_u64(&all)
    } else {
        (big_ln(&hits) - big_ln(&all)).exp().min(1.0)
    }
}

fn monte_carlo_hits(k: u64, na: u64, nb: u64, config: &PermutationConfig, extreme: impl Fn(u64) -> bool + Sync) -> Result<u64> {
    // Draw for the smaller group (the first on ties) so that swapping the
    // arguments replays the same stream.
    let drawn = na.min(nb);
    let dist = Hypergeometric::new(na + nb, k, drawn).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let per_stream: Vec<(u64, u64)> = stream_sizes(config.replicates).collect();
    Ok(per_stream
        .into_par_iter()
        .map(|(stream, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(stream));
            (0..count)
                .filter(|_| {
                    let y = dist.sample(&mut rng);
                    let x = if na <= nb { y } else { k - y };
                    extreme(x)
                })
                .count() as u64
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(mode: PermutationMode, replicates: u64, seed: u64) -> PermutationConfig {
        PermutationConfig {
            replicates,
            seed,
            sidedness: Sidedness::TwoSided,
            mode,
        }
    }

    #[test]
    fn three_vs_three() {
        let r = permutation_test_with(&[1, 1, 1], &[0, 0, 0], &cfg(PermutationMode::Exhaustive, 0, 0)).unwrap();
        assert_eq!(r.p_value, 0.1);
        assert_eq!(r.statistic, 1.0);
        assert!(r.replicates.is_none());
        let mc = permutation_test_with(&[1, 1, 1], &[0, 0, 0], &cfg(PermutationMode::MonteCarlo, 10_000, 7)).unwrap();
        assert!((mc.p_value - 0.1).abs() < 0.03, "{}", mc.p_value);
        assert_eq!(mc.replicates, Some(10_000));
        assert_eq!(mc.generator.as_deref(), Some(GENERATOR));
    }

    #[test]
    fn identical_groups_are_not_significant() {
        let a = [1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1];
        let r = permutation_test_with(&a, &a, &cfg(PermutationMode::MonteCarlo, 1_000, 3)).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.p_value >= 0.99);
    }

    #[test]
    fn auto_switches_on_space_size() {
        let small = permutation_test(&[1; 6], &[0; 6], 100, 1, Sidedness::TwoSided).unwrap();
        assert_eq!(small.method, "permutation (exhaustive)");
        let big = permutation_test(&[1; 30], &[0; 30], 100, 1, Sidedness::TwoSided).unwrap();
        assert_eq!(big.method, "permutation (monte carlo)");
        assert!(big.p_value > 0.0 && big.p_value <= 1.0);
    }

    #[test]
    fn deterministic_and_swap_invariant() {
        let a: Vec<u8> = (0..300).map(|i| u8::from(i % 3 == 0)).collect();
        let b: Vec<u8> = (0..200).map(|i| u8::from(i % 4 == 0)).collect();
        let c = cfg(PermutationMode::MonteCarlo, 5_000, 11);
        let r1 = permutation_test_with(&a, &b, &c).unwrap();
        let r2 = permutation_test_with(&a, &b, &c).unwrap();
        assert_eq!(r1, r2);
        let swapped = permutation_test_with(&b, &a, &c).unwrap();
        assert_eq!(swapped.statistic, -r1.statistic);
        assert_eq!(swapped.p_value, r1.p_value);
    }

    #[test]
    fn one_sided_exact() {
        let greater = PermutationConfig {
            sidedness: Sidedness::Greater,
            ..cfg(PermutationMode::Exhaustive, 0, 0)
        };
        assert_eq!(permutation_test_with(&[1, 1, 1], &[0, 0, 0], &greater).unwrap().p_value, 0.05);
        let less = PermutationConfig {
            sidedness: Sidedness::Less,
            ..greater
        };
        assert_eq!(permutation_test_with(&[1, 1, 1], &[0, 0, 0], &less).unwrap().p_value, 1.0);
    }

    #[test]
    fn large_exhaustive_uses_log_ratio() {
        let r = permutation_test_counts(600, 1000, 500, 1000, &cfg(PermutationMode::Exhaustive, 0, 0)).unwrap();
        assert!(r.p_value > 0.0 && r.p_value < 1e-4);
    }

    #[test]
    fn validation() {
        let c = cfg(PermutationMode::Auto, 10, 0);
        assert!(permutation_test_with(&[], &[1], &c).is_err());
        assert!(permutation_test_with(&[2], &[1], &c).is_err());
        assert!(permutation_test_with(&[1; 40], &[0; 40], &cfg(PermutationMode::MonteCarlo, 0, 0)).is_err());
    }
}
