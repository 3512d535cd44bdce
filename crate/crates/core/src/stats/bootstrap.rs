use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{stream_sizes, ConfidenceInterval};
use crate::error::{Error, Result};

pub const DEFAULT_BOOTSTRAP_REPLICATES: u64 = 2_000;

/// Nearest-rank quantile of sorted data: the smallest value with at least
/// `q` of the sample at or below it.
fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Percentile bootstrap interval for the mean of `values`.
pub fn bootstrap_ci(values: &[f64], level: f64, replicates: u64, seed: u64) -> Result<ConfidenceInterval> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("bootstrap needs at least one value".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("confidence level {level} outside (0, 1)")));
    }
    if replicates == 0 {
        return Err(Error::InvalidArgument("replicates must be at least 1".into()));
    }
    let interval = |low, high| ConfidenceInterval {
        level,
        low,
        high,
        replicates,
        seed,
    };
    // A constant sample has a degenerate interval; resampled sums would only
    // add rounding noise.
    if values.iter().all(|&v| v == values[0]) {
        return Ok(interval(values[0], values[0]));
    }

    let n = values.len();
    let per_stream: Vec<(u64, u64)> = stream_sizes(replicates).collect();
    let mut means: Vec<f64> = per_stream
        .into_par_iter()
        .flat_map_iter(|(stream, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(stream));
            (0..count)
                .map(|_| (0..n).map(|_| values[rng.gen_range(0..n)]).sum::<f64>() / n as f64)
                .collect::<Vec<_>>()
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    Ok(interval(nearest_rank(&means, tail), nearest_rank(&means, 1.0 - tail)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_samples() {
        let ci = bootstrap_ci(&[2.5; 10], 0.95, 1000, 1).unwrap();
        assert_eq!((ci.low, ci.high), (2.5, 2.5));
        let ci = bootstrap_ci(&[0.1; 7], 0.95, 1000, 1).unwrap();
        assert_eq!((ci.low, ci.high), (0.1, 0.1));
        let ci = bootstrap_ci(&[4.2], 0.95, 10, 9).unwrap();
        assert_eq!((ci.low, ci.high), (4.2, 4.2));
    }

    #[test]
    fn balanced_binary_covers_half() {
        let values: Vec<f64> = (0..100).map(|i| (i % 2) as f64).collect();
        let covered = (0..100)
            .filter(|&seed| bootstrap_ci(&values, 0.95, 500, seed).unwrap().contains(0.5))
            .count();
        assert!(covered >= 99, "{covered}");
    }

    #[test]
    fn deterministic_and_ordered() {
        let values = [1.0, 2.0, 3.0, 10.0, 4.0];
        let a = bootstrap_ci(&values, 0.9, 777, 5).unwrap();
        assert_eq!(a, bootstrap_ci(&values, 0.9, 777, 5).unwrap());
        assert!(a.low <= a.high);
        assert!(a.low >= 1.0 && a.high <= 10.0);
    }

    #[test]
    fn nearest_rank_definition() {
        let s = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(nearest_rank(&s, 0.25), 1.0);
        assert_eq!(nearest_rank(&s, 0.26), 2.0);
        assert_eq!(nearest_rank(&s, 0.0), 1.0);
        assert_eq!(nearest_rank(&s, 1.0), 4.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bootstrap_ci(&[], 0.95, 10, 0).is_err());
        assert!(bootstrap_ci(&[1.0, 2.0], 1.0, 10, 0).is_err());
        assert!(bootstrap_ci(&[1.0, 2.0], 0.95, 0, 0).is_err());
    }
}
