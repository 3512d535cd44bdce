use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annotate::AnnotationIndex;
use crate::corpus::{Sentence, Upos, VerbObjectOccurrence};
use crate::error::{Error, Result};
use crate::norms::NormSet;

/// Occurrence counts for one distinct verb-object lemma pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairRecord {
    pub verb_lemma: String,
    pub object_lemma: String,
    pub total: u64,
    pub metaphorical: u64,
}

impl PairRecord {
    pub fn rate(&self) -> f64 {
        self.metaphorical as f64 / self.total as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairClass {
    Metaphorical,
    Literal,
    Ambiguous,
}

impl PairClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PairClass::Metaphorical => "metaphorical",
            PairClass::Literal => "literal",
            PairClass::Ambiguous => "ambiguous",
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DEFAULT_HI: f64 = 0.70;
pub const DEFAULT_LO: f64 = 0.30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub hi: f64,
    pub lo: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            hi: DEFAULT_HI,
            lo: DEFAULT_LO,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.lo && self.lo < self.hi && self.hi <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "thresholds need 0 <= lo < hi <= 1 (lo={}, hi={})",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

/// Rate strictly above `hi` is metaphorical, strictly below `lo` literal,
/// anything else (boundaries included) ambiguous.
pub fn classify_pair(record: &PairRecord, hi: f64, lo: f64) -> PairClass {
    let rate = record.rate();
    if rate > hi {
        PairClass::Metaphorical
    } else if rate < lo {
        PairClass::Literal
    } else {
        PairClass::Ambiguous
    }
}

/// A pair record with its class, as written to the pair store.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedPair {
    #[serde(flatten)]
    pub record: PairRecord,
    pub class: PairClass,
}

pub fn classify_pairs(records: &[PairRecord], thresholds: Thresholds) -> Result<Vec<ClassifiedPair>> {
    thresholds.validate()?;
    Ok(records
        .iter()
        .map(|r| ClassifiedPair {
            record: r.clone(),
            class: classify_pair(r, thresholds.hi, thresholds.lo),
        })
        .collect())
}

type PairCounts = HashMap<(String, String), (u64, u64)>;

/// Counts occurrences per distinct pair. An occurrence is metaphorical when
/// its verb token is labelled 1. Output is sorted by verb, then object.
pub fn aggregate_pairs(occurrences: &[VerbObjectOccurrence], annotations: &AnnotationIndex) -> Result<Vec<PairRecord>> {
    let counts = occurrences
        .par_iter()
        .try_fold(PairCounts::new, |mut acc, occ| {
            let labels = annotations.metaphor_labels(&occ.sentence_id)?;
            let label = *labels.get(occ.verb_index).ok_or_else(|| Error::Alignment {
                id: occ.sentence_id.clone(),
                message: format!("verb index {} beyond {} labels", occ.verb_index, labels.len()),
            })?;
            let entry = acc
                .entry((occ.verb_lemma.clone(), occ.object_lemma.clone()))
                .or_default();
            entry.0 += 1;
            entry.1 += u64::from(label == 1);
            Ok(acc)
        })
        .try_reduce(PairCounts::new, |mut a, b| {
            for (key, (t, m)) in b {
                let entry = a.entry(key).or_default();
                entry.0 += t;
                entry.1 += m;
            }
            Ok(a)
        })?;
    let mut records: Vec<PairRecord> = counts
        .into_iter()
        .map(|((verb_lemma, object_lemma), (total, metaphorical))| PairRecord {
            verb_lemma,
            object_lemma,
            total,
            metaphorical,
        })
        .collect();
    records.sort();
    Ok(records)
}

/// How often a verb lemma occurs, and how often with a direct object.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbStats {
    pub verb: String,
    pub instances: u64,
    pub transitive: u64,
}

impl VerbStats {
    pub fn transitive_fraction(&self) -> f64 {
        if self.instances == 0 {
            0.0
        } else {
            self.transitive as f64 / self.instances as f64
        }
    }
}

/// Per-verb instance counts: every VERB token is an instance, and it is
/// transitive when at least one occurrence uses it as the verb.
pub fn verb_occurrence_stats(sentences: &[Sentence], occurrences: &[VerbObjectOccurrence]) -> Vec<VerbStats> {
    let transitive: HashSet<(&str, usize)> = occurrences
        .iter()
        .map(|o| (o.sentence_id.as_str(), o.verb_index))
        .collect();
    let mut stats: BTreeMap<&str, VerbStats> = BTreeMap::new();
    for s in sentences {
        for (i, tok) in s.tokens.iter().enumerate() {
            if tok.upos != Upos::Verb {
                continue;
            }
            let entry = stats.entry(tok.lemma.as_str()).or_insert_with(|| VerbStats {
                verb: tok.lemma.clone(),
                ..VerbStats::default()
            });
            entry.instances += 1;
            entry.transitive += u64::from(transitive.contains(&(s.id.as_str(), i)));
        }
    }
    stats.into_values().collect()
}

/// Keeps pairs whose object has a score in every loaded norm table.
pub fn covered_pairs(pairs: &[ClassifiedPair], norms: &NormSet) -> Vec<ClassifiedPair> {
    pairs
        .iter()
        .filter(|p| norms.covers(&p.record.object_lemma))
        .cloned()
        .collect()
}
