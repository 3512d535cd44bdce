//! Metaphor and sentiment annotation.
//!
//! Two annotator families are supported: deterministic lexicon baselines and
//! an external subprocess speaking the JSON Lines protocol in [`external`].
//! Annotations are persisted in an append-only store ([`store`]) so the
//! expensive step runs once per corpus.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Sentence;
use crate::error::{Error, Result};

pub mod eval;
pub mod external;
pub mod lexicon;
pub mod store;

pub use eval::eval_annotator;
pub use external::{run_external_annotator, ExternalAnnotator, RawResponse};
pub use lexicon::{MetaphorLexicon, SentimentLexicon};
pub use store::{append_annotations, load_annotations, AnnotationIndex, StoredAnnotation};

/// Default number of sentences per protocol flush.
pub const DEFAULT_BATCH_SIZE: usize = 64;
pub const DEFAULT_TIMEOUT_SECS: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaphorAnnotation {
    pub sentence_id: String,
    /// One flag per token; 1 marks a metaphorical use.
    pub labels: Vec<u8>,
}

impl MetaphorAnnotation {
    pub fn has_metaphor(&self) -> bool {
        self.labels.contains(&1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sentiment {
    Positive,
    Neutral,
    Negative,
}

impl Sentiment {
    pub const ALL: [Sentiment; 3] = [Sentiment::Positive, Sentiment::Neutral, Sentiment::Negative];

    pub fn as_str(self) -> &'static str {
        match self {
            Sentiment::Positive => "positive",
            Sentiment::Neutral => "neutral",
            Sentiment::Negative => "negative",
        }
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sentiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(Sentiment::Positive),
            "neutral" => Ok(Sentiment::Neutral),
            "negative" => Ok(Sentiment::Negative),
            other => Err(Error::InvalidArgument(format!("unknown sentiment {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentimentAnnotation {
    pub sentence_id: String,
    pub sentiment: Sentiment,
}

/// Annotation task names used on the wire and in the store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Metaphor,
    Sentiment,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Metaphor => "metaphor",
            Task::Sentiment => "sentiment",
        }
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "metaphor" => Ok(Task::Metaphor),
            "sentiment" => Ok(Task::Sentiment),
            other => Err(Error::InvalidArgument(format!("unknown task {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnnotatorKind {
    LexiconMetaphor,
    LexiconSentiment,
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatorSpec {
    pub kind: AnnotatorKind,
    pub resource: Option<PathBuf>,
    /// Program followed by its arguments.
    pub command: Option<Vec<String>>,
    pub timeout: Duration,
    pub batch_size: usize,
    /// Number of subprocesses run side by side (external annotators only).
    pub workers: usize,
}

impl AnnotatorSpec {
    pub fn lexicon_metaphor(path: impl Into<PathBuf>) -> Self {
        Self::with_kind(AnnotatorKind::LexiconMetaphor, Some(path.into()), None)
    }

    pub fn lexicon_sentiment(path: impl Into<PathBuf>) -> Self {
        Self::with_kind(AnnotatorKind::LexiconSentiment, Some(path.into()), None)
    }

    pub fn external<I, S>(command: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let command = command.into_iter().map(Into::into).collect();
        Self::with_kind(AnnotatorKind::External, None, Some(command))
    }

    fn with_kind(kind: AnnotatorKind, resource: Option<PathBuf>, command: Option<Vec<String>>) -> Self {
        AnnotatorSpec {
            kind,
            resource,
            command,
            timeout: Duration::from_secs_f64(DEFAULT_TIMEOUT_SECS),
            batch_size: DEFAULT_BATCH_SIZE,
            workers: 1,
        }
    }

    /// Parses the configuration shorthand `lexicon:<path>` or
    /// `external:<program> [args...]` for the given task.
    pub fn parse(text: &str, task: Task) -> Result<Self> {
        let (scheme, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("annotator {text:?}: expected lexicon:<path> or external:<command>")))?;
        let rest = rest.trim();
        let spec = match scheme.trim() {
            "lexicon" => match task {
                Task::Metaphor => Self::lexicon_metaphor(rest),
                Task::Sentiment => Self::lexicon_sentiment(rest),
            },
            "external" => Self::external(rest.split_whitespace()),
            other => return Err(Error::Config(format!("unknown annotator kind {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            AnnotatorKind::External => {
                if self.command.as_ref().is_none_or(|c| c.is_empty()) {
                    return Err(Error::Config("external annotator needs a command".into()));
                }
            }
            AnnotatorKind::LexiconMetaphor | AnnotatorKind::LexiconSentiment => {
                if self.resource.is_none() {
                    return Err(Error::Config("lexicon annotator needs a resource path".into()));
                }
            }
        }
        if self.batch_size == 0 || self.workers == 0 {
            return Err(Error::Config("batch size and workers must be at least 1".into()));
        }
        if self.timeout.is_zero() {
            return Err(Error::Config("annotator timeout must be positive".into()));
        }
        Ok(())
    }

    fn resource(&self) -> Result<&PathBuf> {
        self.resource
            .as_ref()
            .ok_or_else(|| Error::Config("lexicon annotator needs a resource path".into()))
    }
}

/// Labels every token of every sentence as metaphorical or not. Output is
/// aligned with the input order.
pub fn annotate_metaphor(sentences: &[Sentence], annotator: &AnnotatorSpec) -> Result<Vec<MetaphorAnnotation>> {
    annotator.validate()?;
    match annotator.kind {
        AnnotatorKind::LexiconMetaphor => {
            let lexicon = MetaphorLexicon::load(annotator.resource()?)?;
            Ok(sentences.par_iter().map(|s| lexicon.annotate(s)).collect())
        }
        AnnotatorKind::External => {
            let raw = run_external_annotator(sentences, annotator, Task::Metaphor)?;
            Ok(sentences
                .iter()
                .zip(raw)
                .map(|(s, r)| MetaphorAnnotation {
                    sentence_id: s.id.clone(),
                    labels: match r {
                        RawResponse::Labels(labels) => labels,
                        RawResponse::Sentiment(_) => unreachable!("validated by the protocol layer"),
                    },
                })
                .collect())
        }
        AnnotatorKind::LexiconSentiment => Err(Error::Config(
            "a sentiment lexicon cannot annotate metaphors".into(),
        )),
    }
}

/// Assigns one sentiment label per sentence, aligned with the input order.
pub fn annotate_sentiment(sentences: &[Sentence], annotator: &AnnotatorSpec) -> Result<Vec<SentimentAnnotation>> {
    annotator.validate()?;
    match annotator.kind {
        AnnotatorKind::LexiconSentiment => {
            let lexicon = SentimentLexicon::load(annotator.resource()?)?;
            Ok(sentences
                .par_iter()
                .map(|s| SentimentAnnotation {
                    sentence_id: s.id.clone(),
                    sentiment: lexicon.classify(s),
                })
                .collect())
        }
        AnnotatorKind::External => {
            let raw = run_external_annotator(sentences, annotator, Task::Sentiment)?;
            Ok(sentences
                .iter()
                .zip(raw)
                .map(|(s, r)| SentimentAnnotation {
                    sentence_id: s.id.clone(),
                    sentiment: match r {
                        RawResponse::Sentiment(sentiment) => sentiment,
                        RawResponse::Labels(_) => unreachable!("validated by the protocol layer"),
                    },
                })
                .collect())
        }
        AnnotatorKind::LexiconMetaphor => Err(Error::Config(
            "a metaphor lexicon cannot annotate sentiment".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_shorthand() {
        let spec = AnnotatorSpec::parse("lexicon:met.tsv", Task::Metaphor).unwrap();
        assert_eq!(spec.kind, AnnotatorKind::LexiconMetaphor);
        assert_eq!(spec.resource.as_deref(), Some(std::path::Path::new("met.tsv")));
        let spec = AnnotatorSpec::parse("external: python3 bridge.py --mode echo", Task::Sentiment).unwrap();
        assert_eq!(spec.command.unwrap(), ["python3", "bridge.py", "--mode", "echo"]);
        assert!(AnnotatorSpec::parse("external:", Task::Metaphor).is_err());
        assert!(AnnotatorSpec::parse("model:x", Task::Metaphor).is_err());
        assert!(AnnotatorSpec::parse("nothing", Task::Metaphor).is_err());
    }

    #[test]
    fn wrong_lexicon_kind_is_rejected() {
        let s = vec![Sentence::from_text("s", "", "hi")];
        let spec = AnnotatorSpec::lexicon_sentiment("x.tsv");
        assert!(annotate_metaphor(&s, &spec).is_err());
    }
}
