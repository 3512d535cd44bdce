use std::fmt;

use serde::{Deserialize, Serialize};

use super::groups::{Comparison, Scheme};
use super::verbs::VerbSummary;
use crate::error::{Error, Result};
use crate::norms::Norm;
use crate::stats::{binomial_test, Sidedness, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Claim {
    A,
    B,
    C,
    D,
    E,
}

impl Claim {
    pub fn statement(self) -> &'static str {
        match self {
            Claim::A => "Direct objects of metaphorical uses are less concrete",
            Claim::B => "Direct objects of metaphorical uses are less imageable",
            Claim::C => "Direct objects of metaphorical uses are less familiar",
            Claim::D => "Metaphors are used less in emotionally neutral sentences",
            Claim::E => "Metaphors are used more with a first person subject",
        }
    }

    pub fn for_norm(norm: Norm) -> Claim {
        match norm {
            Norm::Concreteness => Claim::A,
            Norm::Imageability => Claim::B,
            Norm::Familiarity => Claim::C,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim: Claim,
    pub norm: Option<Norm>,
    pub verbs_agreeing: Option<usize>,
    pub verbs_total: Option<usize>,
    /// Verbs that do not agree with the claim.
    pub exceptions: Vec<String>,
    pub binomial: Option<TestResult>,
    pub comparisons: Vec<Comparison>,
    pub supported: bool,
}

/// Claims A to C, one per loaded norm. A verb agrees when its metaphorical
/// mean is strictly below its literal mean; the agreement count is tested
/// against a fair coin. A claim is supported when most verbs agree and the
/// test rejects at `alpha`.
pub fn evaluate_claims_abc(summaries: &[VerbSummary], alpha: f64) -> Result<Vec<ClaimResult>> {
    if summaries.is_empty() {
        return Err(Error::InvalidArgument("no verb summaries to evaluate".into()));
    }
    let mut out = Vec::new();
    for norm in Norm::ALL {
        if summaries.iter().all(|s| s.norm(norm).is_none()) {
            continue;
        }
        let exceptions: Vec<String> = summaries
            .iter()
            .filter(|s| {
                let agrees = s
                    .norm(norm)
                    .and_then(|n| Some(n.metaphorical.mean? < n.literal.mean?))
                    .unwrap_or(false);
                !agrees
            })
            .map(|s| s.verb.clone())
            .collect();
        let total = summaries.len();
        let agreeing = total - exceptions.len();
        let binomial = binomial_test(agreeing as u64, total as u64, 0.5, Sidedness::TwoSided)?;
        let supported = 2 * agreeing > total && binomial.p_value < alpha;
        out.push(ClaimResult {
            claim: Claim::for_norm(norm),
            norm: Some(norm),
            verbs_agreeing: Some(agreeing),
            verbs_total: Some(total),
            exceptions,
            binomial: Some(binomial),
            comparisons: Vec::new(),
            supported,
        });
    }
    Ok(out)
}

/// Claims D and E from the four group comparisons. D holds when neutral
/// sentences use metaphor significantly less than the rest; E when first
/// person sentences use it significantly more than third person ones.
pub fn evaluate_claims_de(comparisons: &[Comparison]) -> Result<Vec<ClaimResult>> {
    let row = |scheme: Scheme| {
        comparisons
            .iter()
            .find(|c| c.scheme == scheme)
            .ok_or_else(|| Error::Data(format!("missing {} comparison", scheme.label())))
    };
    let neutral = row(Scheme::Neutral)?;
    let person = row(Scheme::FirstVsThird)?;
    let sentiment_rows: Vec<Comparison> = comparisons
        .iter()
        .filter(|c| c.scheme != Scheme::FirstVsThird)
        .cloned()
        .collect();
    let result = |claim, comparisons, supported| ClaimResult {
        claim,
        norm: None,
        verbs_agreeing: None,
        verbs_total: None,
        exceptions: Vec::new(),
        binomial: None,
        comparisons,
        supported,
    };
    Ok(vec![
        result(Claim::D, sentiment_rows, neutral.diff < 0.0 && neutral.reject),
        result(Claim::E, vec![person.clone()], person.diff > 0.0 && person.reject),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::verbs::{NormSummary, UsageSummary};

    fn usage(mean: f64) -> UsageSummary {
        UsageSummary {
            mean: Some(mean),
            ci: None,
            pairs: 1,
            examples: Vec::new(),
        }
    }

    fn summary(verb: &str, m: f64, l: f64) -> VerbSummary {
        VerbSummary {
            verb: verb.into(),
            metaphor_rate: 0.5,
            metaphorical_pairs: 1,
            literal_pairs: 1,
            norms: vec![NormSummary {
                norm: Norm::Concreteness,
                metaphorical: usage(m),
                literal: usage(l),
            }],
        }
    }

    #[test]
    fn unanimous_agreement() {
        let s: Vec<VerbSummary> = (0..49).map(|i| summary(&format!("v{i}"), 2.0, 3.0)).collect();
        let r = evaluate_claims_abc(&s, 0.01).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].claim, Claim::A);
        assert_eq!((r[0].verbs_agreeing, r[0].verbs_total), (Some(49), Some(49)));
        assert!(r[0].binomial.as_ref().unwrap().p_value < 1e-4);
        assert!(r[0].supported);
    }

    #[test]
    fn ties_count_against() {
        let s = [summary("a", 2.0, 2.0), summary("b", 1.0, 2.0)];
        let r = evaluate_claims_abc(&s, 0.01).unwrap();
        assert_eq!(r[0].verbs_agreeing, Some(1));
        assert_eq!(r[0].exceptions, ["a"]);
        assert!(!r[0].supported);
    }

    #[test]
    fn affine_transform_keeps_decisions() {
        let base = [summary("a", 2.0, 3.0), summary("b", 3.5, 3.0), summary("c", 1.0, 1.5)];
        let moved: Vec<VerbSummary> = base
            .iter()
            .map(|s| {
                let n = &s.norms[0];
                summary(&s.verb, 2.5 * n.metaphorical.mean.unwrap() - 4.0, 2.5 * n.literal.mean.unwrap() - 4.0)
            })
            .collect();
        let a = evaluate_claims_abc(&base, 0.01).unwrap();
        let b = evaluate_claims_abc(&moved, 0.01).unwrap();
        assert_eq!(a[0].exceptions, b[0].exceptions);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(evaluate_claims_abc(&[], 0.01).is_err());
    }
}
