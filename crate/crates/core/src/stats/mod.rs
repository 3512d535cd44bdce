//! Exact and resampling statistics.
//!
//! Resampling routines use [`rand_chacha::ChaCha8Rng`]. Replicates are split
//! over a fixed number of streams seeded `seed + stream`, so results do not
//! depend on how many threads rayon happens to use.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod binomial;
mod bootstrap;
pub mod permutation;

pub use binomial::binomial_test;
pub use bootstrap::{bootstrap_ci, DEFAULT_BOOTSTRAP_REPLICATES};
pub use permutation::{
    permutation_test, permutation_test_counts, permutation_test_with, PermutationConfig, PermutationMode,
    DEFAULT_PERMUTATION_REPLICATES, EXHAUSTIVE_LIMIT,
};

/// Name recorded in every seeded result.
pub const GENERATOR: &str = "ChaCha8Rng";

/// Number of independent random streams replicate loops are divided into.
pub const STREAMS: u64 = 16;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    #[default]
    TwoSided,
    Greater,
    Less,
}

impl Sidedness {
    pub fn as_str(self) -> &'static str {
        match self {
            Sidedness::TwoSided => "two-sided",
            Sidedness::Greater => "greater",
            Sidedness::Less => "less",
        }
    }
}

impl fmt::Display for Sidedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sidedness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-sided" | "two_sided" | "twosided" => Ok(Sidedness::TwoSided),
            "greater" => Ok(Sidedness::Greater),
            "less" => Ok(Sidedness::Less),
            other => Err(Error::InvalidArgument(format!("unknown sidedness {other:?}"))),
        }
    }
}

/// Outcome of a hypothesis test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: String,
    pub statistic: f64,
    pub p_value: f64,
    /// Sample sizes: trials for the binomial test, group sizes otherwise.
    pub n: Vec<u64>,
    pub seed: Option<u64>,
    /// Present exactly when the p-value was estimated by resampling.
    pub replicates: Option<u64>,
    pub sidedness: Sidedness,
    pub alpha_adjusted: Option<f64>,
    pub generator: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub level: f64,
    pub low: f64,
    pub high: f64,
    pub replicates: u64,
    pub seed: u64,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Adjusted {
    pub p_value: f64,
    pub reject: bool,
}

/// Bonferroni correction: each p is multiplied by the number of tests
/// (capped at 1) and rejected when the result is below `alpha`.
pub fn bonferroni_adjust(p_values: &[f64], alpha: f64) -> Result<Vec<Adjusted>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside (0, 1)")));
    }
    if let Some(p) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidArgument(format!("p-value {p} outside [0, 1]")));
    }
    let m = p_values.len() as f64;
    Ok(p_values
        .iter()
        .map(|&p| {
            let p_value = (m * p).min(1.0);
            Adjusted {
                p_value,
                reject: p_value < alpha,
            }
        })
        .collect())
}

/// Stable per-purpose seed: FNV-1a of `label` mixed into `base`. Lets many
/// intervals share one configured seed without sharing a random stream.
pub fn derive_seed(base: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    base ^ h
}

/// Splits `total` replicates over [`STREAMS`] streams.
pub(crate) fn stream_sizes(total: u64) -> impl Iterator<Item = (u64, u64)> {
    let base = total / STREAMS;
    let extra = total % STREAMS;
    (0..STREAMS).map(move |s| (s, base + u64::from(s < extra)))
}
