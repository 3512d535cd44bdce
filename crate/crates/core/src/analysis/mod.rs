//! Pair aggregation, verb selection, per-verb norm summaries and the claim
//! evaluations built on them.

pub mod claims;
pub mod groups;
pub mod pairs;
pub mod verbs;

pub use claims::{evaluate_claims_abc, evaluate_claims_de, Claim, ClaimResult};
pub use groups::{
    build_groups, compare_groups, group_flags, group_ids, group_usage_rates, Comparison, ComparisonConfig,
    GroupFlags, GroupKey, GroupMember, GroupSamples, Scheme,
};
pub use pairs::{
    aggregate_pairs, classify_pair, classify_pairs, covered_pairs, verb_occurrence_stats, ClassifiedPair, PairClass,
    PairRecord, Thresholds, VerbStats,
};
pub use verbs::{
    pooled_summary, select_verbs, verb_candidates, verb_summary, NormSummary, SelectionCriteria, SummaryConfig,
    UsageSummary, VerbCandidate, VerbSummary, Weighting, POOLED_LABEL,
};
