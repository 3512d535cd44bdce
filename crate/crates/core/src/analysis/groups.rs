use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::annotate::{AnnotationIndex, Sentiment};
use crate::corpus::{length_matched_sample, LengthBins, PersonClass, Sentence};
use crate::error::{Error, Result};
use crate::stats::{bonferroni_adjust, permutation_test_counts, PermutationConfig, TestResult, STREAMS};

/// One of the six sentiment-by-person groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupKey {
    pub sentiment: Sentiment,
    pub person: PersonClass,
}

impl GroupKey {
    pub const ALL: [GroupKey; 6] = [
        GroupKey::new(Sentiment::Positive, PersonClass::First),
        GroupKey::new(Sentiment::Positive, PersonClass::Third),
        GroupKey::new(Sentiment::Neutral, PersonClass::First),
        GroupKey::new(Sentiment::Neutral, PersonClass::Third),
        GroupKey::new(Sentiment::Negative, PersonClass::First),
        GroupKey::new(Sentiment::Negative, PersonClass::Third),
    ];

    pub const fn new(sentiment: Sentiment, person: PersonClass) -> Self {
        GroupKey { sentiment, person }
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.sentiment, self.person)
    }
}

/// A sampled sentence, as written to the group store.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMember {
    pub sentiment: Sentiment,
    pub person: PersonClass,
    pub sentence_id: String,
    pub length: usize,
}

#[derive(Debug, Clone)]
pub struct GroupSamples {
    pub groups: BTreeMap<GroupKey, Vec<Sentence>>,
    /// Sentences available per group before sampling.
    pub available: BTreeMap<GroupKey, usize>,
    /// Shared per-bin counts of every sampled group.
    pub histogram: Vec<usize>,
    pub bins: LengthBins,
}

impl GroupSamples {
    pub fn group_size(&self) -> usize {
        self.histogram.iter().sum()
    }

    pub fn members(&self) -> Vec<GroupMember> {
        self.groups
            .iter()
            .flat_map(|(key, sentences)| {
                sentences.iter().map(move |s| GroupMember {
                    sentiment: key.sentiment,
                    person: key.person,
                    sentence_id: s.id.clone(),
                    length: s.len(),
                })
            })
            .collect()
    }
}

/// Sentence ids per group, from stored members.
pub fn group_ids(members: &[GroupMember]) -> BTreeMap<GroupKey, Vec<String>> {
    let mut out: BTreeMap<GroupKey, Vec<String>> = BTreeMap::new();
    for m in members {
        out.entry(GroupKey::new(m.sentiment, m.person))
            .or_default()
            .push(m.sentence_id.clone());
    }
    out
}

/// Splits sentences into the six groups and draws a length-matched sample
/// of up to `per_group_n` from each. `persons` is aligned with `sentences`;
/// sentences whose subject is neither first nor third person are dropped.
pub fn build_groups(
    sentences: &[Sentence],
    sentiments: &AnnotationIndex,
    persons: &[PersonClass],
    per_group_n: usize,
    bins: LengthBins,
    seed: u64,
) -> Result<GroupSamples> {
    if sentences.len() != persons.len() {
        return Err(Error::InvalidArgument(format!(
            "{} sentences but {} person classes",
            sentences.len(),
            persons.len()
        )));
    }
    let mut groups: BTreeMap<GroupKey, Vec<Sentence>> = BTreeMap::new();
    for (s, &person) in sentences.iter().zip(persons) {
        if person == PersonClass::Other {
            continue;
        }
        let sentiment = sentiments.sentiment_of(&s.id)?;
        groups.entry(GroupKey::new(sentiment, person)).or_default().push(s.clone());
    }
    let missing: Vec<String> = GroupKey::ALL
        .iter()
        .filter(|k| !groups.contains_key(k))
        .map(ToString::to_string)
        .collect();
    if !missing.is_empty() {
        return Err(Error::Infeasible(format!("no sentences for group(s) {}", missing.join(", "))));
    }
    let available = groups.iter().map(|(k, v)| (*k, v.len())).collect();
    let sample = length_matched_sample(&groups, per_group_n, bins, seed)?;
    Ok(GroupSamples {
        groups: sample.groups,
        available,
        histogram: sample.histogram,
        bins,
    })
}

/// Per-sentence "contains a metaphor" flags for every group.
pub type GroupFlags = BTreeMap<GroupKey, Vec<u8>>;

pub fn group_flags(ids: &BTreeMap<GroupKey, Vec<String>>, annotations: &AnnotationIndex) -> Result<GroupFlags> {
    ids.iter()
        .map(|(key, members)| {
            let flags = members
                .iter()
                .map(|id| Ok(u8::from(annotations.metaphor_labels(id)?.contains(&1))))
                .collect::<Result<Vec<u8>>>()?;
            Ok((*key, flags))
        })
        .collect()
}

/// Metaphor usage rate: the share of a group's sentences with at least one
/// metaphorical token. Empty groups are omitted.
pub fn group_usage_rates(flags: &GroupFlags) -> BTreeMap<GroupKey, f64> {
    flags
        .iter()
        .filter(|(_, f)| !f.is_empty())
        .map(|(k, f)| (*k, f.iter().map(|&x| u64::from(x)).sum::<u64>() as f64 / f.len() as f64))
        .collect()
}

/// The four comparisons, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Neutral,
    Positive,
    Negative,
    FirstVsThird,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Neutral, Scheme::Positive, Scheme::Negative, Scheme::FirstVsThird];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::Neutral => "Neutral",
            Scheme::Positive => "Positive",
            Scheme::Negative => "Negative",
            Scheme::FirstVsThird => "1st person",
        }
    }

    pub fn other_label(self) -> &'static str {
        match self {
            Scheme::FirstVsThird => "3rd person",
            _ => "Otherwise",
        }
    }

    fn sides(self, key: &GroupKey) -> Option<bool> {
        let sentiment = match self {
            Scheme::Neutral => Sentiment::Neutral,
            Scheme::Positive => Sentiment::Positive,
            Scheme::Negative => Sentiment::Negative,
            Scheme::FirstVsThird => return Some(key.person == PersonClass::First),
        };
        Some(key.sentiment == sentiment)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub scheme: Scheme,
    pub samples: u64,
    pub other_samples: u64,
    pub mur: f64,
    pub other_mur: f64,
    /// `mur - other_mur`, unrounded.
    pub diff: f64,
    pub test: TestResult,
    /// Bonferroni-adjusted p-value over all comparisons.
    pub adjusted_p: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonConfig {
    pub permutation: PermutationConfig,
    pub alpha: f64,
}

impl Default for ComparisonConfig {
    fn default() -> Self {
        ComparisonConfig {
            permutation: PermutationConfig::default(),
            alpha: 0.01,
        }
    }
}

/// Runs the four comparisons. Each side pools the sentences of its groups;
/// "Otherwise" merges both complementary sentiments across both persons.
/// Comparison `i` draws from streams starting at `seed + i * STREAMS`, so no
/// two comparisons share a random stream.
pub fn compare_groups(flags: &GroupFlags, config: &ComparisonConfig) -> Result<Vec<Comparison>> {
    for key in GroupKey::ALL {
        if flags.get(&key).is_none_or(Vec::is_empty) {
            return Err(Error::Data(format!("group {key} has no sentences")));
        }
    }
    let counts: BTreeMap<GroupKey, (u64, u64)> = flags
        .iter()
        .map(|(k, f)| (*k, (f.iter().map(|&x| u64::from(x)).sum(), f.len() as u64)))
        .collect();

    let mut rows = Vec::with_capacity(Scheme::ALL.len());
    for (i, scheme) in Scheme::ALL.into_iter().enumerate() {
        let (mut k1, mut n1, mut k2, mut n2) = (0, 0, 0, 0);
        for (key, &(k, n)) in &counts {
            match scheme.sides(key) {
                Some(true) => (k1, n1) = (k1 + k, n1 + n),
                Some(false) => (k2, n2) = (k2 + k, n2 + n),
                None => {}
            }
        }
        let permutation = PermutationConfig {
            seed: config.permutation.seed.wrapping_add(i as u64 * STREAMS),
            ..config.permutation
        };
        let test = permutation_test_counts(k1, n1, k2, n2, &permutation)?;
        let (mur, other_mur) = (k1 as f64 / n1 as f64, k2 as f64 / n2 as f64);
        rows.push(Comparison {
            scheme,
            samples: n1,
            other_samples: n2,
            mur,
            other_mur,
            diff: mur - other_mur,
            test,
            adjusted_p: 0.0,
            reject: false,
        });
    }
    let p: Vec<f64> = rows.iter().map(|r| r.test.p_value).collect();
    let adjusted = bonferroni_adjust(&p, config.alpha)?;
    let alpha_adjusted = config.alpha / rows.len() as f64;
    for (row, adj) in rows.iter_mut().zip(adjusted) {
        row.adjusted_p = adj.p_value;
        row.reject = adj.reject;
        row.test.alpha_adjusted = Some(alpha_adjusted);
    }
    Ok(rows)
}
