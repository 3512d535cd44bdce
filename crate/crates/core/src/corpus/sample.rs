//! Length-matched sampling across sentence groups.
//!
//! Sentence lengths are binned as `[1..w], (w..2w], ...` with lengths above
//! the cap sharing the top bin. The joint target histogram takes, per bin,
//! the minimum count over all groups and is then scaled down to the
//! requested size with largest-remainder rounding (ties go to the lower bin).
//! Each group is sampled without replacement inside every bin, so all
//! outputs share one histogram exactly.

use std::collections::BTreeMap;
use std::fmt::Debug;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Sentence;
use crate::error::{Error, Result};

pub const DEFAULT_BIN_WIDTH: usize = 5;
pub const DEFAULT_LENGTH_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthBins {
    pub width: usize,
    pub cap: usize,
}

impl Default for LengthBins {
    fn default() -> Self {
        LengthBins {
            width: DEFAULT_BIN_WIDTH,
            cap: DEFAULT_LENGTH_CAP,
        }
    }
}

impl LengthBins {
    pub fn new(width: usize) -> Self {
        LengthBins {
            width,
            ..LengthBins::default()
        }
    }

    pub fn count(&self) -> usize {
        self.cap.max(1).div_ceil(self.width)
    }

    /// Zero-based bin of a token length.
    pub fn bin_of(&self, len: usize) -> usize {
        (len.clamp(1, self.cap.max(1)) - 1) / self.width
    }

    pub fn histogram<'a, I: IntoIterator<Item = &'a Sentence>>(&self, sentences: I) -> Vec<usize> {
        let mut hist = vec![0; self.count()];
        for s in sentences {
            hist[self.bin_of(s.len())] += 1;
        }
        hist
    }
}

#[derive(Debug, Clone)]
pub struct LengthMatchedSample<K> {
    pub groups: BTreeMap<K, Vec<Sentence>>,
    /// Shared per-bin counts of every returned group.
    pub histogram: Vec<usize>,
}

impl<K> LengthMatchedSample<K> {
    pub fn group_size(&self) -> usize {
        self.histogram.iter().sum()
    }
}

/// Scales `minimum` down so it sums to `target` using largest remainders.
/// Returns `minimum` unchanged when it already sums to `target` or less.
fn scale_histogram(minimum: &[usize], target: usize) -> Vec<usize> {
    let total: usize = minimum.iter().sum();
    if total <= target {
        return minimum.to_vec();
    }
    let (total, target) = (total as u128, target as u128);
    let mut quota: Vec<usize> = Vec::with_capacity(minimum.len());
    let mut remainders: Vec<(u128, usize)> = Vec::with_capacity(minimum.len());
    for (bin, &m) in minimum.iter().enumerate() {
        let scaled = m as u128 * target;
        quota.push((scaled / total) as usize);
        remainders.push((scaled % total, bin));
    }
    let assigned: usize = quota.iter().sum();
    let missing = target as usize - assigned;
    // larger remainder first, then lower bin index
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, bin) in remainders.iter().take(missing) {
        quota[bin] += 1;
    }
    quota
}

/// Draws equally sized, identically length-distributed samples from every
/// group. Output sentences keep their input order within each group.
pub fn length_matched_sample<K>(
    groups: &BTreeMap<K, Vec<Sentence>>,
    per_group_n: usize,
    bins: LengthBins,
    seed: u64,
) -> Result<LengthMatchedSample<K>>
where
    K: Ord + Clone + Debug,
{
    if per_group_n == 0 {
        return Err(Error::InvalidArgument("per_group_n must be at least 1".into()));
    }
    if bins.width == 0 {
        return Err(Error::InvalidArgument("bin width must be at least 1".into()));
    }
    if groups.is_empty() {
        return Err(Error::Infeasible("no groups to sample from".into()));
    }
    if let Some((key, _)) = groups.iter().find(|(_, members)| members.is_empty()) {
        return Err(Error::Infeasible(format!("group {key:?} is empty")));
    }

    // per group, the member indices falling in each bin
    let by_bin: Vec<(&K, Vec<Vec<usize>>)> = groups
        .iter()
        .map(|(key, members)| {
            let mut bins_of = vec![Vec::new(); bins.count()];
            for (i, s) in members.iter().enumerate() {
                bins_of[bins.bin_of(s.len())].push(i);
            }
            (key, bins_of)
        })
        .collect();

    let minimum: Vec<usize> = (0..bins.count())
        .map(|b| by_bin.iter().map(|(_, per)| per[b].len()).min().unwrap_or(0))
        .collect();
    if minimum.iter().all(|&m| m == 0) {
        let limits: Vec<String> = (0..bins.count())
            .filter(|&b| by_bin.iter().any(|(_, per)| !per[b].is_empty()))
            .filter_map(|b| {
                by_bin
                    .iter()
                    .find(|(_, per)| per[b].is_empty())
                    .map(|(key, _)| format!("bin {} limited by group {key:?}", b + 1))
            })
            .collect();
        return Err(Error::Infeasible(format!(
            "no length bin is populated in every group ({})",
            limits.join("; ")
        )));
    }

    let histogram = scale_histogram(&minimum, per_group_n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BTreeMap::new();
    for ((key, per_bin), (_, members)) in by_bin.iter().zip(groups.iter()) {
        let mut chosen: Vec<usize> = Vec::with_capacity(per_group_n);
        for (candidates, &want) in per_bin.iter().zip(&histogram) {
            if want == 0 {
                continue;
            }
            chosen.extend(
                index::sample(&mut rng, candidates.len(), want)
                    .into_iter()
                    .map(|i| candidates[i]),
            );
        }
        chosen.sort_unstable();
        let picked = chosen.into_iter().map(|i| members[i].clone()).collect();
        out.insert((*key).clone(), picked);
    }
    Ok(LengthMatchedSample {
        groups: out,
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Token, Upos};
    use proptest::prelude::*;

    fn sentence(id: usize, len: usize) -> Sentence {
        Sentence {
            id: format!("s{id}"),
            source: String::new(),
            tokens: (0..len).map(|_| Token::new("w", "w", Upos::Noun)).collect(),
        }
    }

    fn group(lengths: &[(usize, usize)], offset: usize) -> Vec<Sentence> {
        let mut out = Vec::new();
        for &(len, count) in lengths {
            for _ in 0..count {
                out.push(sentence(offset + out.len(), len));
            }
        }
        out
    }

    #[test]
    fn bins_cap_long_sentences() {
        let bins = LengthBins::new(5);
        assert_eq!(bins.bin_of(1), 0);
        assert_eq!(bins.bin_of(5), 0);
        assert_eq!(bins.bin_of(6), 1);
        assert_eq!(bins.bin_of(100), 19);
        assert_eq!(bins.bin_of(250), 19);
        assert_eq!(bins.count(), 20);
    }

    #[test]
    fn identical_groups_returned_whole() {
        let mut groups = BTreeMap::new();
        groups.insert("a", group(&[(3, 4), (9, 2)], 0));
        groups.insert("b", group(&[(9, 2), (3, 4)], 100));
        let out = length_matched_sample(&groups, 6, LengthBins::new(5), 1).unwrap();
        assert_eq!(out.groups, groups);
    }

    #[test]
    fn minimum_histogram_example() {
        // A = {len 3 x10}, B = {len 3 x4, len 8 x6}: joint minimum is (4, 0)
        let mut groups = BTreeMap::new();
        groups.insert("A", group(&[(3, 10)], 0));
        groups.insert("B", group(&[(3, 4), (8, 6)], 100));
        let out = length_matched_sample(&groups, 4, LengthBins::new(5), 7).unwrap();
        assert_eq!(out.histogram[..2], [4, 0]);
        for members in out.groups.values() {
            assert_eq!(members.len(), 4);
            assert!(members.iter().all(|s| s.len() == 3));
        }
    }

    #[test]
    fn largest_remainder_scaling() {
        assert_eq!(scale_histogram(&[5, 5, 5], 10), [4, 3, 3]);
        // remainders tie between bins 0 and 2; the lower bin wins
        assert_eq!(scale_histogram(&[1, 2, 7], 5), [1, 1, 3]);
        assert_eq!(scale_histogram(&[3, 0], 10), [3, 0]);
        assert_eq!(scale_histogram(&[2, 2], 3).iter().sum::<usize>(), 3);
    }

    #[test]
    fn infeasible_names_limiting_group() {
        let mut groups = BTreeMap::new();
        groups.insert("A", group(&[(3, 10)], 0));
        groups.insert("B", group(&[(8, 6)], 100));
        let err = length_matched_sample(&groups, 4, LengthBins::new(5), 7).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bin 1 limited by group \"B\""), "{msg}");
        assert!(msg.contains("bin 2 limited by group \"A\""), "{msg}");

        let mut groups = BTreeMap::new();
        groups.insert("A", group(&[(3, 10)], 0));
        groups.insert("B", Vec::new());
        assert!(matches!(
            length_matched_sample(&groups, 4, LengthBins::new(5), 7),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn bad_parameters() {
        let mut groups = BTreeMap::new();
        groups.insert("A", group(&[(3, 1)], 0));
        assert!(length_matched_sample(&groups, 0, LengthBins::new(5), 0).is_err());
        assert!(length_matched_sample(&groups, 1, LengthBins::new(0), 0).is_err());
    }

    proptest! {
        #[test]
        fn histograms_equal_and_seed_invariant(
            lens in prop::collection::vec(prop::collection::vec(1usize..40, 1..60), 2..5),
            n in 1usize..50,
            seed_a in any::<u64>(),
            seed_b in any::<u64>(),
        ) {
            let mut groups = BTreeMap::new();
            for (g, ls) in lens.iter().enumerate() {
                groups.insert(g, ls.iter().enumerate().map(|(i, &l)| sentence(g * 1000 + i, l)).collect::<Vec<_>>());
            }
            let bins = LengthBins::new(5);
            match length_matched_sample(&groups, n, bins, seed_a) {
                Ok(a) => {
                    let b = length_matched_sample(&groups, n, bins, seed_b).unwrap();
                    prop_assert_eq!(&a.histogram, &b.histogram);
                    prop_assert!(a.group_size() <= n);
                    for members in a.groups.values().chain(b.groups.values()) {
                        prop_assert_eq!(&bins.histogram(members), &a.histogram);
                    }
                }
                Err(Error::Infeasible(_)) => {}
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}
