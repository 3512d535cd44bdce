//! Append-only annotation store.
//!
//! One JSON object per line, keyed by sentence id and task:
//!
//! ```text
//! {"task":"metaphor","id":"s1","labels":[0,1,0]}
//! {"task":"sentiment","id":"s1","sentiment":"neutral"}
//! ```
//!
//! When a key appears more than once the last line wins.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{MetaphorAnnotation, Sentiment, SentimentAnnotation, Task};
use crate::corpus::ErrorPolicy;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "lowercase")]
pub enum StoredAnnotation {
    Metaphor { id: String, labels: Vec<u8> },
    Sentiment { id: String, sentiment: Sentiment },
}

impl StoredAnnotation {
    pub fn id(&self) -> &str {
        match self {
            StoredAnnotation::Metaphor { id, .. } | StoredAnnotation::Sentiment { id, .. } => id,
        }
    }

    pub fn task(&self) -> Task {
        match self {
            StoredAnnotation::Metaphor { .. } => Task::Metaphor,
            StoredAnnotation::Sentiment { .. } => Task::Sentiment,
        }
    }
}

impl From<&MetaphorAnnotation> for StoredAnnotation {
    fn from(a: &MetaphorAnnotation) -> Self {
        StoredAnnotation::Metaphor {
            id: a.sentence_id.clone(),
            labels: a.labels.clone(),
        }
    }
}

impl From<&SentimentAnnotation> for StoredAnnotation {
    fn from(a: &SentimentAnnotation) -> Self {
        StoredAnnotation::Sentiment {
            id: a.sentence_id.clone(),
            sentiment: a.sentiment,
        }
    }
}

/// Appends annotations to the store, creating it if needed.
pub fn append_annotations<'a, I>(path: &Path, annotations: I) -> Result<()>
where
    I: IntoIterator<Item = &'a StoredAnnotation>,
{
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for a in annotations {
        serde_json::to_writer(&mut out, a).map_err(|e| Error::Data(e.to_string()))?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Loads a store, resolving duplicate keys last-write-wins. Records keep the
/// position of their first appearance. A missing file is an empty store.
pub fn load_annotations(path: &Path, policy: ErrorPolicy) -> Result<Vec<StoredAnnotation>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let reader = crate::io::open_input(path)?;
    let mut records: Vec<StoredAnnotation> = Vec::new();
    let mut position: HashMap<(String, Task), usize> = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: StoredAnnotation = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                let err = Error::Parse {
                    line: idx + 1,
                    message: format!("{}: {e}", path.display()),
                };
                match policy {
                    ErrorPolicy::Abort => return Err(err),
                    ErrorPolicy::Skip => {
                        log::warn!("{err}; line skipped");
                        continue;
                    }
                }
            }
        };
        let key = (record.id().to_string(), record.task());
        match position.get(&key) {
            Some(&at) => {
                log::warn!(
                    "{}: duplicate {} annotation for {}; keeping line {}",
                    path.display(),
                    key.1.as_str(),
                    key.0,
                    idx + 1
                );
                records[at] = record;
            }
            None => {
                position.insert(key, records.len());
                records.push(record);
            }
        }
    }
    Ok(records)
}

/// Lookup structure over loaded annotations.
#[derive(Debug, Clone, Default)]
pub struct AnnotationIndex {
    pub metaphor: HashMap<String, Vec<u8>>,
    pub sentiment: HashMap<String, Sentiment>,
}

impl AnnotationIndex {
    pub fn new<'a, I: IntoIterator<Item = &'a StoredAnnotation>>(records: I) -> Self {
        let mut index = AnnotationIndex::default();
        for r in records {
            match r {
                StoredAnnotation::Metaphor { id, labels } => {
                    index.metaphor.insert(id.clone(), labels.clone());
                }
                StoredAnnotation::Sentiment { id, sentiment } => {
                    index.sentiment.insert(id.clone(), *sentiment);
                }
            }
        }
        index
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(Self::new(&load_annotations(path, ErrorPolicy::Abort)?))
    }

    pub fn metaphor_labels(&self, id: &str) -> Result<&[u8]> {
        self.metaphor
            .get(id)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingAnnotation(id.to_string()))
    }

    pub fn sentiment_of(&self, id: &str) -> Result<Sentiment> {
        self.sentiment
            .get(id)
            .copied()
            .ok_or_else(|| Error::MissingAnnotation(id.to_string()))
    }
}
