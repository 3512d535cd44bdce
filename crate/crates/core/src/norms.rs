//! Lexical norm tables.
//!
//! Concreteness and imageability come from two-score TSV files
//! (`word<TAB>concreteness<TAB>imageability`) or single-score files
//! (`word<TAB>score`). Word complexity files are converted to familiarity
//! (`6 - c`) while loading, so every table handed out by this module reads
//! "higher = more concrete / imageable / familiar".

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The score a table provides downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Concreteness,
    Imageability,
    Familiarity,
}

impl Norm {
    pub const ALL: [Norm; 3] = [Norm::Concreteness, Norm::Imageability, Norm::Familiarity];

    pub fn as_str(self) -> &'static str {
        match self {
            Norm::Concreteness => "concreteness",
            Norm::Imageability => "imageability",
            Norm::Familiarity => "familiarity",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Norm::Concreteness => "Concreteness",
            Norm::Imageability => "Imageability",
            Norm::Familiarity => "Familiarity",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a norm file contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Concreteness,
    Imageability,
    Complexity,
}

impl NormKind {
    /// Score range published for the reference datasets.
    pub fn declared_range(self) -> (f64, f64) {
        match self {
            NormKind::Concreteness => (0.87, 5.35),
            NormKind::Imageability => (1.77, 5.26),
            NormKind::Complexity => (COMPLEXITY_MIN, COMPLEXITY_MAX),
        }
    }

    pub fn norm(self) -> Norm {
        match self {
            NormKind::Concreteness => Norm::Concreteness,
            NormKind::Imageability => Norm::Imageability,
            NormKind::Complexity => Norm::Familiarity,
        }
    }

    /// Column holding the score for files with `columns` fields.
    fn score_column(self, columns: usize) -> usize {
        match (self, columns) {
            (NormKind::Imageability, n) if n >= 3 => 2,
            _ => 1,
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "concreteness" => Ok(NormKind::Concreteness),
            "imageability" => Ok(NormKind::Imageability),
            "complexity" => Ok(NormKind::Complexity),
            other => Err(Error::InvalidArgument(format!("unknown norm kind {other:?}"))),
        }
    }
}

pub const COMPLEXITY_MIN: f64 = 1.0;
pub const COMPLEXITY_MAX: f64 = 6.0;

/// Familiarity score for a word complexity rating `c` in `[1, 6]`.
pub fn familiarity_from_complexity(c: f64) -> Result<f64> {
    if !(COMPLEXITY_MIN..=COMPLEXITY_MAX).contains(&c) {
        return Err(Error::InvalidArgument(format!("complexity {c} outside [1, 6]")));
    }
    Ok(COMPLEXITY_MAX - c)
}

/// A row that could not be loaded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowError {
    pub line: usize,
    pub message: String,
}

/// Bookkeeping from [`load_norm_table`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LoadReport {
    pub rows: usize,
    pub duplicates: usize,
    pub row_errors: Vec<RowError>,
    pub header_skipped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormTable {
    pub kind: NormKind,
    pub entries: HashMap<String, f64>,
    /// Range of the stored scores (post-transform for complexity files).
    pub declared_range: Option<(f64, f64)>,
}

impl NormTable {
    pub fn new(kind: NormKind) -> Self {
        let (lo, hi) = kind.declared_range();
        let declared_range = match kind {
            NormKind::Complexity => (COMPLEXITY_MAX - hi, COMPLEXITY_MAX - lo),
            _ => (lo, hi),
        };
        NormTable {
            kind,
            entries: HashMap::new(),
            declared_range: Some(declared_range),
        }
    }

    /// Builds a table from already-transformed scores.
    pub fn from_scores<I, S>(kind: NormKind, scores: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut table = NormTable::new(kind);
        table.declared_range = None;
        for (word, score) in scores {
            table.entries.entry(word.as_ref().to_lowercase()).or_insert(score);
        }
        table
    }

    pub fn norm(&self) -> Norm {
        self.kind.norm()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.lookup(lemma).is_some()
    }

    /// Exact-match lookup after lowercasing.
    pub fn lookup(&self, lemma: &str) -> Option<f64> {
        match self.entries.get(lemma) {
            Some(&score) => Some(score),
            None if lemma.chars().any(char::is_uppercase) => self.entries.get(&lemma.to_lowercase()).copied(),
            None => None,
        }
    }

    /// Smallest and largest stored score.
    pub fn observed_range(&self) -> Option<(f64, f64)> {
        self.entries.values().fold(None, |acc, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
    }
}

pub fn lookup(table: &NormTable, lemma: &str) -> Option<f64> {
    table.lookup(lemma)
}

/// Loads a norm file. Unparseable or out-of-range rows are skipped and listed
/// in the report; duplicate words keep their first score. A file without any
/// usable row is an error.
pub fn load_norm_table(path: &Path, kind: NormKind) -> Result<(NormTable, LoadReport)> {
    let reader = crate::io::open_input(path)?;
    let mut table = NormTable::new(kind);
    let (lo, hi) = kind.declared_range();
    let mut report = LoadReport::default();
    let mut seen_data = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        let col = kind.score_column(cols.len());
        let fail = |report: &mut LoadReport, message: String| {
            log::warn!("{}:{line_no}: {message}", path.display());
            report.row_errors.push(RowError { line: line_no, message });
        };
        if cols.len() < 2 || cols[0].is_empty() {
            fail(&mut report, format!("expected word<TAB>score, got {line:?}"));
            continue;
        }
        let raw: f64 = match cols[col].parse() {
            Ok(v) => v,
            Err(_) if !seen_data && !report.header_skipped && report.row_errors.is_empty() => {
                report.header_skipped = true;
                continue;
            }
            Err(_) => {
                fail(&mut report, format!("unparseable score {:?}", cols[col]));
                continue;
            }
        };
        seen_data = true;
        if !raw.is_finite() || raw < lo || raw > hi {
            fail(&mut report, format!("score {raw} outside declared range [{lo}, {hi}]"));
            continue;
        }
        let score = match kind {
            NormKind::Complexity => familiarity_from_complexity(raw)?,
            _ => raw,
        };
        report.rows += 1;
        let word = cols[0].to_lowercase();
        if table.entries.contains_key(&word) {
            report.duplicates += 1;
            log::warn!("{}:{line_no}: duplicate word {word:?}; keeping first", path.display());
            continue;
        }
        table.entries.insert(word, score);
    }
    if table.entries.is_empty() {
        return Err(Error::Data(format!("{}: no usable norm rows", path.display())));
    }
    Ok((table, report))
}

/// Token-weighted share of `lemmas` found in `table`.
pub fn coverage<'a, I>(table: &NormTable, lemmas: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a str>,
{
    let (mut hit, mut total) = (0usize, 0usize);
    for lemma in lemmas {
        total += 1;
        hit += usize::from(table.contains(lemma));
    }
    if total == 0 {
        return Err(Error::InvalidArgument("coverage of an empty lemma list".into()));
    }
    Ok(hit as f64 / total as f64)
}

/// Type-weighted variant of [`coverage`]: each distinct lemma counts once.
pub fn type_coverage<'a, I>(table: &NormTable, lemmas: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a str>,
{
    let distinct: HashSet<&str> = lemmas.into_iter().collect();
    coverage(table, distinct)
}

/// The three tables used by the analysis. Any of them may be absent.
#[derive(Debug, Clone, Default)]
pub struct NormSet {
    pub concreteness: Option<NormTable>,
    pub imageability: Option<NormTable>,
    pub familiarity: Option<NormTable>,
}

impl NormSet {
    pub fn get(&self, norm: Norm) -> Option<&NormTable> {
        match norm {
            Norm::Concreteness => self.concreteness.as_ref(),
            Norm::Imageability => self.imageability.as_ref(),
            Norm::Familiarity => self.familiarity.as_ref(),
        }
    }

    pub fn insert(&mut self, table: NormTable) {
        match table.norm() {
            Norm::Concreteness => self.concreteness = Some(table),
            Norm::Imageability => self.imageability = Some(table),
            Norm::Familiarity => self.familiarity = Some(table),
        }
    }

    pub fn loaded(&self) -> Vec<Norm> {
        Norm::ALL.into_iter().filter(|n| self.get(*n).is_some()).collect()
    }

    /// True when every loaded table has a score for `lemma`.
    pub fn covers(&self, lemma: &str) -> bool {
        Norm::ALL
            .iter()
            .filter_map(|n| self.get(*n))
            .all(|t| t.contains(lemma))
    }
}
