//! Result tables (TSV or Markdown) and run manifests.
//!
//! Rendering is a pure function of its inputs: no timestamps, no hash-map
//! iteration order. Means and scores use 2 decimals, usage rates 3 and
//! p-values 4, all rounded half away from zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{ClaimResult, Comparison, GroupKey, UsageSummary, VerbSummary};
use crate::annotate::Sentiment;
use crate::corpus::PersonClass;
use crate::error::{Error, Result};
use crate::norms::Norm;

pub mod format;
pub mod manifest;

pub use format::{format_mur, format_norm, format_p, round_half_away};
pub use manifest::{read_manifest, sha256_file, write_manifest, InputDigest, RunManifest};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Tsv,
    Markdown,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Markdown => "md",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(Into::into).collect());
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Tsv => {
                let clean = |c: &String| c.replace(['\t', '\n', '\r'], " ");
                for row in std::iter::once(&self.headers).chain(&self.rows) {
                    out.push_str(&row.iter().map(clean).collect::<Vec<_>>().join("\t"));
                    out.push('\n');
                }
            }
            Format::Markdown => {
                let clean = |c: &String| c.replace('|', "\\|").replace(['\n', '\r'], " ");
                let line = |row: &Vec<String>| format!("| {} |\n", row.iter().map(clean).collect::<Vec<_>>().join(" | "));
                out.push_str(&line(&self.headers));
                out.push_str(&format!("|{}\n", "---|".repeat(self.headers.len())));
                for row in &self.rows {
                    out.push_str(&line(row));
                }
            }
        }
        out
    }
}

fn mean_cell(usage: &UsageSummary, with_examples: bool) -> String {
    let Some(mean) = usage.mean else {
        return "NA".into();
    };
    let mut cell = format_norm(mean);
    if with_examples && !usage.examples.is_empty() {
        let mut parts: Vec<String> = usage
            .examples
            .iter()
            .map(|e| format!("{}: {}", e.object, format_norm(e.score)))
            .collect();
        if usage.pairs > usage.examples.len() {
            parts.push("...".into());
        }
        let _ = write!(cell, " ({})", parts.join(", "));
    }
    cell
}

fn diff_cell(diff: Option<f64>) -> String {
    diff.map_or_else(|| "NA".into(), format_norm)
}

/// Per-verb table for one norm: metaphor rate, both usage means with object
/// examples, and the difference of the unrounded means. The pooled row, when
/// given, comes last without examples.
pub fn render_verb_table(summaries: &[VerbSummary], pooled: Option<&VerbSummary>, norm: Norm, format: Format) -> String {
    let mut table = Table::new([
        "Verb (Metaphor rate)",
        "Metaphorical (Object examples)",
        "Non-metaphorical (Object examples)",
        "Diff",
    ]);
    let rows = summaries.iter().map(|s| (s, true)).chain(pooled.map(|p| (p, false)));
    for (s, examples) in rows {
        let label = format!("{} ({})", s.verb, format_norm(s.metaphor_rate));
        match s.norm(norm) {
            Some(n) => table.push([
                label,
                mean_cell(&n.metaphorical, examples),
                mean_cell(&n.literal, examples),
                diff_cell(n.diff()),
            ]),
            None => table.push([label, "NA".into(), "NA".into(), "NA".into()]),
        }
    }
    table.render(format)
}

fn interval_cell(usage: &UsageSummary) -> String {
    match (usage.mean, usage.ci) {
        (Some(m), Some(ci)) => format!("{} [{}, {}]", format_norm(m), format_norm(ci.low), format_norm(ci.high)),
        (Some(m), None) => format_norm(m),
        _ => "NA".into(),
    }
}

/// Means with confidence intervals for every loaded norm, two rows per verb
/// (metaphorical, then literal).
pub fn render_summary_table(summaries: &[VerbSummary], pooled: Option<&VerbSummary>, format: Format) -> String {
    let norms: Vec<Norm> = Norm::ALL
        .into_iter()
        .filter(|n| summaries.iter().chain(pooled).any(|s| s.norm(*n).is_some()))
        .collect();
    let mut headers = vec!["Verb".to_string(), "Usage".to_string()];
    headers.extend(norms.iter().map(|n| format!("{} [CI]", n.title())));
    let mut table = Table::new(headers);
    for s in summaries.iter().chain(pooled) {
        for (usage, metaphorical) in [("metaphorical", true), ("literal", false)] {
            let mut row = vec![s.verb.clone(), usage.to_string()];
            for n in &norms {
                row.push(s.norm(*n).map_or_else(
                    || "NA".into(),
                    |ns| interval_cell(if metaphorical { &ns.metaphorical } else { &ns.literal }),
                ));
            }
            table.push(row);
        }
    }
    table.render(format)
}

/// Usage rates as a sentiment-by-person matrix.
pub fn render_rate_matrix(rates: &BTreeMap<GroupKey, f64>, format: Format) -> String {
    let mut table = Table::new(["Emotion \\ Subject", "1st person", "3rd person"]);
    for (sentiment, title) in [
        (Sentiment::Positive, "Positive"),
        (Sentiment::Neutral, "Neutral"),
        (Sentiment::Negative, "Negative"),
    ] {
        let cell = |person| {
            rates
                .get(&GroupKey::new(sentiment, person))
                .map_or_else(|| "NA".into(), |r| format_mur(*r))
        };
        table.push([title.to_string(), cell(PersonClass::First), cell(PersonClass::Third)]);
    }
    table.render(format)
}

/// Two rows per comparison: the group with its diff and p-value, then the
/// group it is compared against.
pub fn render_comparison_table(comparisons: &[Comparison], format: Format) -> String {
    let mut table = Table::new(["Group", "Samples", "MUR", "Diff", "P-value"]);
    for c in comparisons {
        table.push([
            c.scheme.label().to_string(),
            c.samples.to_string(),
            format_mur(c.mur),
            format_mur(c.diff),
            format_p(c.test.p_value),
        ]);
        table.push([
            c.scheme.other_label().to_string(),
            c.other_samples.to_string(),
            format_mur(c.other_mur),
            String::new(),
            String::new(),
        ]);
    }
    table.render(format)
}

pub fn render_group_tables(rates: &BTreeMap<GroupKey, f64>, comparisons: &[Comparison], format: Format) -> String {
    format!("{}\n{}", render_rate_matrix(rates, format), render_comparison_table(comparisons, format))
}

/// One row per claim with its evidence and decision.
pub fn render_claims_table(claims: &[ClaimResult], format: Format) -> String {
    let mut table = Table::new(["Claim", "Statement", "Evidence", "P-value", "Supported"]);
    for c in claims {
        let (evidence, p) = match (&c.binomial, c.verbs_agreeing, c.verbs_total) {
            (Some(test), Some(agree), Some(total)) => {
                let mut e = format!("{agree}/{total} verbs agree");
                if !c.exceptions.is_empty() {
                    let _ = write!(e, "; exceptions: {}", c.exceptions.join(", "));
                }
                (e, format_p(test.p_value))
            }
            _ => {
                let e = c
                    .comparisons
                    .iter()
                    .map(|x| format!("{} vs {}: {}", x.scheme.label(), x.scheme.other_label(), format_mur(x.diff)))
                    .collect::<Vec<_>>()
                    .join("; ");
                let p = c
                    .comparisons
                    .first()
                    .map_or_else(String::new, |x| format!("{} (adjusted)", format_p(x.adjusted_p)));
                (e, p)
            }
        };
        table.push([
            c.claim.to_string(),
            c.claim.statement().to_string(),
            evidence,
            p,
            if c.supported { "yes" } else { "no" }.to_string(),
        ]);
    }
    table.render(format)
}
