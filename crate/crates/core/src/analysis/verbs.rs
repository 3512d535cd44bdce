use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::pairs::{ClassifiedPair, PairClass, VerbStats};
use crate::error::{Error, Result};
use crate::norms::{Norm, NormSet, NormTable};
use crate::stats::{bootstrap_ci, derive_seed, ConfidenceInterval, DEFAULT_BOOTSTRAP_REPLICATES};

/// Verb name used for the row pooling every selected verb.
pub const POOLED_LABEL: &str = "All verbs";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionCriteria {
    /// Transitive share of a verb's instances must exceed this.
    pub transitive_frac: f64,
    /// Distinct metaphorical and literal pairs must each exceed this.
    pub min_pairs: u64,
}

impl Default for SelectionCriteria {
    fn default() -> Self {
        SelectionCriteria {
            transitive_frac: 0.70,
            min_pairs: 10,
        }
    }
}

/// Selection bookkeeping for one verb.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerbCandidate {
    pub verb: String,
    pub instances: u64,
    pub transitive: u64,
    pub transitive_fraction: f64,
    pub metaphorical_pairs: u64,
    pub literal_pairs: u64,
    pub selected: bool,
}

/// Every verb seen in `pairs` or `stats`, with its counts and whether it
/// passes `criteria`. Pair counts are taken from `pairs` as given, so callers
/// decide whether norm-coverage exclusion happens first.
pub fn verb_candidates(pairs: &[ClassifiedPair], stats: &[VerbStats], criteria: &SelectionCriteria) -> Vec<VerbCandidate> {
    let mut counts: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    for p in pairs {
        let entry = counts.entry(p.record.verb_lemma.as_str()).or_default();
        match p.class {
            PairClass::Metaphorical => entry.0 += 1,
            PairClass::Literal => entry.1 += 1,
            PairClass::Ambiguous => {}
        }
    }
    let by_verb: BTreeMap<&str, &VerbStats> = stats.iter().map(|s| (s.verb.as_str(), s)).collect();
    let verbs: BTreeSet<&str> = counts.keys().chain(by_verb.keys()).copied().collect();
    verbs
        .into_iter()
        .map(|verb| {
            let (m, l) = counts.get(verb).copied().unwrap_or_default();
            let (instances, transitive) = by_verb.get(verb).map_or((0, 0), |s| (s.instances, s.transitive));
            let transitive_fraction = if instances == 0 {
                0.0
            } else {
                transitive as f64 / instances as f64
            };
            VerbCandidate {
                verb: verb.to_string(),
                instances,
                transitive,
                transitive_fraction,
                metaphorical_pairs: m,
                literal_pairs: l,
                selected: transitive_fraction > criteria.transitive_frac
                    && m > criteria.min_pairs
                    && l > criteria.min_pairs,
            }
        })
        .collect()
}

/// Verbs passing the transitivity and pair-count minima, sorted.
pub fn select_verbs(pairs: &[ClassifiedPair], stats: &[VerbStats], criteria: &SelectionCriteria) -> Vec<String> {
    verb_candidates(pairs, stats, criteria)
        .into_iter()
        .filter(|c| c.selected)
        .map(|c| c.verb)
        .collect()
}

/// Whether pair means count each distinct pair once or once per occurrence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    #[default]
    Type,
    Token,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryConfig {
    pub level: f64,
    pub replicates: u64,
    pub seed: u64,
    /// Number of example objects kept per usage class.
    pub top_k: usize,
    pub weighting: Weighting,
}

impl Default for SummaryConfig {
    fn default() -> Self {
        SummaryConfig {
            level: 0.95,
            replicates: DEFAULT_BOOTSTRAP_REPLICATES,
            seed: 0,
            top_k: 3,
            weighting: Weighting::Type,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleObject {
    pub object: String,
    pub occurrences: u64,
    pub score: f64,
}

/// One usage class of one verb under one norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UsageSummary {
    pub mean: Option<f64>,
    pub ci: Option<ConfidenceInterval>,
    /// Distinct pairs with a score in the table.
    pub pairs: usize,
    pub examples: Vec<ExampleObject>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSummary {
    pub norm: Norm,
    pub metaphorical: UsageSummary,
    pub literal: UsageSummary,
}

impl NormSummary {
    /// Metaphorical minus literal mean.
    pub fn diff(&self) -> Option<f64> {
        Some(self.metaphorical.mean? - self.literal.mean?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerbSummary {
    pub verb: String,
    /// Metaphorical share of the verb's classified distinct pairs.
    pub metaphor_rate: f64,
    pub metaphorical_pairs: usize,
    pub literal_pairs: usize,
    pub norms: Vec<NormSummary>,
}

impl VerbSummary {
    pub fn norm(&self, norm: Norm) -> Option<&NormSummary> {
        self.norms.iter().find(|n| n.norm == norm)
    }
}

fn usage_summary(
    label: &str,
    pairs: &[&ClassifiedPair],
    table: &NormTable,
    config: &SummaryConfig,
) -> Result<UsageSummary> {
    let scored: Vec<(&ClassifiedPair, f64)> = pairs
        .iter()
        .filter_map(|p| table.lookup(&p.record.object_lemma).map(|s| (*p, s)))
        .collect();
    let mut examples: Vec<ExampleObject> = scored
        .iter()
        .map(|(p, score)| ExampleObject {
            object: p.record.object_lemma.clone(),
            occurrences: p.record.total,
            score: *score,
        })
        .collect();
    examples.sort_by(|a, b| b.occurrences.cmp(&a.occurrences).then_with(|| a.object.cmp(&b.object)));
    examples.truncate(config.top_k);
    if scored.is_empty() {
        return Ok(UsageSummary {
            mean: None,
            ci: None,
            pairs: 0,
            examples,
        });
    }

    let values: Vec<f64> = match config.weighting {
        Weighting::Type => scored.iter().map(|(_, s)| *s).collect(),
        Weighting::Token => scored
            .iter()
            .flat_map(|(p, s)| std::iter::repeat_n(*s, p.record.total as usize))
            .collect(),
    };
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let mean = (values.iter().sum::<f64>() / values.len() as f64).clamp(lo, hi);
    let seed = derive_seed(config.seed, label);
    let ci = bootstrap_ci(&values, config.level, config.replicates, seed)?;
    Ok(UsageSummary {
        mean: Some(mean),
        ci: Some(ci),
        pairs: scored.len(),
        examples,
    })
}

fn summarize(label: &str, pairs: Vec<&ClassifiedPair>, norms: &NormSet, config: &SummaryConfig) -> Result<VerbSummary> {
    let metaphorical: Vec<&ClassifiedPair> = pairs.iter().copied().filter(|p| p.class == PairClass::Metaphorical).collect();
    let literal: Vec<&ClassifiedPair> = pairs.iter().copied().filter(|p| p.class == PairClass::Literal).collect();
    let classified = metaphorical.len() + literal.len();
    let metaphor_rate = if classified == 0 {
        0.0
    } else {
        metaphorical.len() as f64 / classified as f64
    };
    let mut summaries = Vec::new();
    for norm in norms.loaded() {
        let table = norms.get(norm).expect("loaded norm");
        summaries.push(NormSummary {
            norm,
            metaphorical: usage_summary(&format!("{label}/{norm}/metaphorical"), &metaphorical, table, config)?,
            literal: usage_summary(&format!("{label}/{norm}/literal"), &literal, table, config)?,
        });
    }
    Ok(VerbSummary {
        verb: label.to_string(),
        metaphor_rate,
        metaphorical_pairs: metaphorical.len(),
        literal_pairs: literal.len(),
        norms: summaries,
    })
}

/// Per-norm means over the verb's distinct metaphorical and literal pairs,
/// each with a bootstrap interval. Pairs whose object a table lacks are left
/// out of that table's mean only.
pub fn verb_summary(verb: &str, pairs: &[ClassifiedPair], norms: &NormSet, config: &SummaryConfig) -> Result<VerbSummary> {
    let own: Vec<&ClassifiedPair> = pairs.iter().filter(|p| p.record.verb_lemma == verb).collect();
    if own.is_empty() {
        return Err(Error::Data(format!("verb {verb:?} has no pairs")));
    }
    summarize(verb, own, norms, config)
}

/// The pooled row: every pair of every verb in `verbs`.
pub fn pooled_summary(verbs: &[String], pairs: &[ClassifiedPair], norms: &NormSet, config: &SummaryConfig) -> Result<VerbSummary> {
    let wanted: BTreeSet<&str> = verbs.iter().map(String::as_str).collect();
    let own: Vec<&ClassifiedPair> = pairs
        .iter()
        .filter(|p| wanted.contains(p.record.verb_lemma.as_str()))
        .collect();
    if own.is_empty() {
        return Err(Error::Data("no pairs for the selected verbs".into()));
    }
    summarize(POOLED_LABEL, own, norms, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::pairs::PairRecord;
    use crate::norms::NormKind;

    fn pair(verb: &str, object: &str, class: PairClass, total: u64) -> ClassifiedPair {
        ClassifiedPair {
            record: PairRecord {
                verb_lemma: verb.into(),
                object_lemma: object.into(),
                total,
                metaphorical: 0,
            },
            class,
        }
    }

    fn norms(scores: &[(&str, f64)]) -> NormSet {
        let mut set = NormSet::default();
        set.insert(NormTable::from_scores(NormKind::Concreteness, scores.iter().copied()));
        set
    }

    fn stats(verb: &str, instances: u64, transitive: u64) -> VerbStats {
        VerbStats {
            verb: verb.into(),
            instances,
            transitive,
        }
    }

    fn pairs_for(verb: &str, m: usize, l: usize) -> Vec<ClassifiedPair> {
        (0..m)
            .map(|i| pair(verb, &format!("m{i}"), PairClass::Metaphorical, 1))
            .chain((0..l).map(|i| pair(verb, &format!("l{i}"), PairClass::Literal, 1)))
            .collect()
    }

    #[test]
    fn selection_boundaries() {
        let mut pairs = pairs_for("keep", 11, 11);
        pairs.extend(pairs_for("few", 11, 10));
        pairs.extend(pairs_for("intrans", 20, 20));
        pairs.extend(pairs_for("edge", 11, 11));
        pairs.push(pair("keep", "amb", PairClass::Ambiguous, 1));
        let stats = [stats("keep", 100, 71), stats("few", 100, 90), stats("intrans", 100, 40), stats("edge", 10, 7)];
        let selected = select_verbs(&pairs, &stats, &SelectionCriteria::default());
        assert_eq!(selected, ["keep"]);
    }

    #[test]
    fn single_pair_is_degenerate() {
        let pairs = [pair("v", "x", PairClass::Metaphorical, 5)];
        let s = verb_summary("v", &pairs, &norms(&[("x", 2.0)]), &SummaryConfig::default()).unwrap();
        let c = s.norm(Norm::Concreteness).unwrap();
        assert_eq!(c.metaphorical.mean, Some(2.0));
        let ci = c.metaphorical.ci.unwrap();
        assert_eq!((ci.low, ci.high), (2.0, 2.0));
        assert_eq!(c.literal.mean, None);
        assert_eq!(s.metaphor_rate, 1.0);
    }

    #[test]
    fn type_weighted_mean() {
        let pairs = [
            pair("v", "a", PairClass::Literal, 1),
            pair("v", "b", PairClass::Literal, 50),
            pair("v", "c", PairClass::Literal, 3),
            pair("v", "oov", PairClass::Literal, 9),
        ];
        let table = norms(&[("a", 1.0), ("b", 2.0), ("c", 3.0)]);
        let s = verb_summary("v", &pairs, &table, &SummaryConfig::default()).unwrap();
        let lit = &s.norm(Norm::Concreteness).unwrap().literal;
        assert_eq!(lit.mean, Some(2.0));
        assert_eq!(lit.pairs, 3);
        assert_eq!(lit.examples[0].object, "b");
        let token = SummaryConfig {
            weighting: Weighting::Token,
            ..SummaryConfig::default()
        };
        let s = verb_summary("v", &pairs, &table, &token).unwrap();
        let mean = s.norm(Norm::Concreteness).unwrap().literal.mean.unwrap();
        assert!((mean - 110.0 / 54.0).abs() < 1e-12);
    }

    #[test]
    fn absent_verb_is_an_error() {
        assert!(verb_summary("nope", &pairs_for("v", 1, 1), &norms(&[]), &SummaryConfig::default()).is_err());
    }

    #[test]
    fn pooled_row_spans_verbs() {
        let mut pairs = pairs_for("a", 1, 1);
        pairs.extend(pairs_for("b", 3, 1));
        let table = norms(&[("m0", 1.0), ("m1", 2.0), ("m2", 3.0), ("l0", 4.0)]);
        let pooled = pooled_summary(&["a".into(), "b".into()], &pairs, &table, &SummaryConfig::default()).unwrap();
        assert_eq!(pooled.verb, POOLED_LABEL);
        assert_eq!((pooled.metaphorical_pairs, pooled.literal_pairs), (4, 2));
        // m0 twice (once per verb) plus m1 and m2
        assert_eq!(pooled.norm(Norm::Concreteness).unwrap().metaphorical.mean, Some(7.0 / 4.0));
    }

    #[test]
    fn mean_stays_within_scores() {
        let pairs: Vec<ClassifiedPair> = (0..3).map(|i| pair("v", &format!("o{i}"), PairClass::Literal, 1)).collect();
        let table = norms(&[("o0", 0.1), ("o1", 0.1), ("o2", 0.1)]);
        let s = verb_summary("v", &pairs, &table, &SummaryConfig::default()).unwrap();
        assert_eq!(s.norm(Norm::Concreteness).unwrap().literal.mean, Some(0.1));
    }
}
