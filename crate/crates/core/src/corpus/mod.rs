//! Sentence records and everything that turns raw corpora into them.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod conllu;
pub mod extract;
pub mod lemma;
pub mod person;
pub mod sample;
pub mod tokenize;

pub use conllu::{parse_conllu, write_conllu, ConlluReader};
pub use extract::{extract_verb_object, VerbObjectOccurrence};
pub use lemma::lemmatize;
pub use person::{classify_subject_person, PersonClass};
pub use sample::{length_matched_sample, LengthBins};
pub use tokenize::tokenize;

/// Coarse part-of-speech classes. Anything outside the five open classes
/// collapses to `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Upos {
    Verb,
    Noun,
    Pron,
    Adj,
    Adv,
    Other,
}

impl Upos {
    /// Maps a Universal Dependencies UPOS tag onto the coarse set. Proper
    /// nouns count as nouns; auxiliaries are not verbs.
    pub fn from_ud(tag: &str) -> Self {
        match tag {
            "VERB" => Upos::Verb,
            "NOUN" | "PROPN" => Upos::Noun,
            "PRON" => Upos::Pron,
            "ADJ" => Upos::Adj,
            "ADV" => Upos::Adv,
            _ => Upos::Other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Upos::Verb => "VERB",
            Upos::Noun => "NOUN",
            Upos::Pron => "PRON",
            Upos::Adj => "ADJ",
            Upos::Adv => "ADV",
            Upos::Other => "OTHER",
        }
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Upos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "OTHER" => Ok(Upos::Other),
            tag => match Upos::from_ud(tag) {
                Upos::Other => Err(Error::InvalidArgument(format!("unknown POS tag {tag:?}"))),
                upos => Ok(upos),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub upos: Upos,
    /// 1-based index of the dependency head; 0 marks the root.
    pub head: Option<usize>,
    pub deprel: Option<String>,
}

impl Token {
    /// A token without dependency information.
    pub fn new(surface: impl Into<String>, lemma: impl Into<String>, upos: Upos) -> Self {
        Token {
            surface: surface.into(),
            lemma: lemma.into(),
            upos,
            head: None,
            deprel: None,
        }
    }

    pub fn with_arc(mut self, head: usize, deprel: impl Into<String>) -> Self {
        self.head = Some(head);
        self.deprel = Some(deprel.into());
        self
    }

    /// Base relation without a subtype, e.g. `nsubj` for `nsubj:pass`.
    pub fn base_deprel(&self) -> Option<&str> {
        self.deprel
            .as_deref()
            .map(|rel| rel.split(':').next().unwrap_or(rel))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub id: String,
    pub source: String,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// True when every token carries a head.
    pub fn has_arcs(&self) -> bool {
        !self.tokens.is_empty() && self.tokens.iter().all(|t| t.head.is_some())
    }

    /// Builds a sentence from plain text using the heuristic tokenizer.
    pub fn from_text(id: impl Into<String>, source: impl Into<String>, text: &str) -> Self {
        Sentence {
            id: id.into(),
            source: source.into(),
            tokens: tokenize(text),
        }
    }

    /// Checks the record invariants: nonempty, well-formed lemmas and heads
    /// in range.
    pub fn validate(&self) -> Result<()> {
        if self.tokens.is_empty() {
            return Err(Error::Data(format!("sentence {} has no tokens", self.id)));
        }
        for (i, tok) in self.tokens.iter().enumerate() {
            let pos = i + 1;
            if tok.lemma.is_empty() || tok.lemma.chars().any(char::is_whitespace) {
                return Err(Error::Data(format!(
                    "sentence {} token {pos}: bad lemma {:?}",
                    self.id, tok.lemma
                )));
            }
            if let Some(head) = tok.head {
                if head > self.tokens.len() || head == pos {
                    return Err(Error::Data(format!(
                        "sentence {} token {pos}: head {head} out of range",
                        self.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Input corpus flavours accepted by `extract`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Conllu,
    Text,
}

impl InputFormat {
    /// Guesses from the file name, looking through a trailing `.gz`.
    pub fn detect(path: &Path) -> Self {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().to_lowercase())
            .unwrap_or_default();
        let name = name.strip_suffix(".gz").unwrap_or(&name);
        if name.ends_with(".conllu") || name.ends_with(".conll") {
            InputFormat::Conllu
        } else {
            InputFormat::Text
        }
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conllu" => Ok(InputFormat::Conllu),
            "text" => Ok(InputFormat::Text),
            other => Err(Error::Config(format!("unknown input format {other:?}"))),
        }
    }
}

/// What to do with a recoverable parse error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorPolicy {
    #[default]
    Skip,
    Abort,
}

impl FromStr for ErrorPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skip" => Ok(ErrorPolicy::Skip),
            "abort" => Ok(ErrorPolicy::Abort),
            other => Err(Error::Config(format!("unknown error policy {other:?}"))),
        }
    }
}

/// Reads every sentence from a corpus file. Plain text gets one sentence per
/// nonblank line with ids `<file>:<line>`.
pub fn read_corpus(path: &Path, format: InputFormat, policy: ErrorPolicy) -> Result<Vec<Sentence>> {
    use std::io::BufRead;

    let reader = crate::io::open_input(path)?;
    let source = path.display().to_string();
    let mut sentences = Vec::new();
    match format {
        InputFormat::Conllu => {
            for item in ConlluReader::new(reader, source) {
                match item {
                    Ok(sentence) => sentences.push(sentence),
                    Err(err) if policy == ErrorPolicy::Skip => {
                        log::warn!("{}: skipping sentence: {err}", path.display());
                    }
                    Err(err) => return Err(err),
                }
            }
        }
        InputFormat::Text => {
            for (idx, line) in reader.lines().enumerate() {
                let line = line.map_err(|e| crate::Error::io(path, e))?;
                let tokens = tokenize(&line);
                if tokens.is_empty() {
                    continue;
                }
                let id = format!("{source}:{}", idx + 1);
                sentences.push(Sentence {
                    id: id.clone(),
                    source: id,
                    tokens,
                });
            }
        }
    }
    Ok(sentences)
}
