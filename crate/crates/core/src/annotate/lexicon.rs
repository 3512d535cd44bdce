//! Lexicon baselines.
//!
//! Metaphor lexicon rows are `verb<TAB>object<TAB>M|L`; sentiment lexicon
//! rows are `lemma<TAB>P|N`. Blank lines and `#` comments are skipped.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;
use std::path::Path;

use super::{MetaphorAnnotation, Sentiment};
use crate::corpus::{extract_verb_object, Sentence};
use crate::error::{Error, Result};

fn rows(path: &Path, columns: usize) -> Result<Vec<(usize, Vec<String>)>> {
    let reader = crate::io::open_input(path)?;
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<String> = line.split('\t').map(|c| c.trim().to_string()).collect();
        if cols.len() != columns {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("{}: expected {columns} columns, found {}", path.display(), cols.len()),
            });
        }
        out.push((idx + 1, cols));
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct MetaphorLexicon {
    metaphorical: HashSet<(String, String)>,
    literal: HashSet<(String, String)>,
}

impl MetaphorLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        let mut lexicon = MetaphorLexicon::default();
        for (line, cols) in rows(path, 3)? {
            let key = (cols[0].to_lowercase(), cols[1].to_lowercase());
            match cols[2].as_str() {
                "M" => lexicon.metaphorical.insert(key),
                "L" => lexicon.literal.insert(key),
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("{}: label must be M or L, got {other:?}", path.display()),
                    })
                }
            };
        }
        Ok(lexicon)
    }

    pub fn insert(&mut self, verb: &str, object: &str, metaphorical: bool) {
        let key = (verb.to_string(), object.to_string());
        if metaphorical {
            self.metaphorical.insert(key);
        } else {
            self.literal.insert(key);
        }
    }

    pub fn is_metaphorical(&self, verb: &str, object: &str) -> bool {
        self.metaphorical
            .contains(&(verb.to_string(), object.to_string()))
    }

    /// Marks the verb token of every extracted pair listed as metaphorical.
    pub fn annotate(&self, sentence: &Sentence) -> MetaphorAnnotation {
        let mut labels = vec![0u8; sentence.len()];
        for occ in extract_verb_object(sentence) {
            if self.is_metaphorical(&occ.verb_lemma, &occ.object_lemma) {
                labels[occ.verb_index] = 1;
            }
        }
        MetaphorAnnotation {
            sentence_id: sentence.id.clone(),
            labels,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    entries: HashMap<String, Polarity>,
}

impl SentimentLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        for (line, cols) in rows(path, 2)? {
            let polarity = match cols[1].as_str() {
                "P" => Polarity::Positive,
                "N" => Polarity::Negative,
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("{}: polarity must be P or N, got {other:?}", path.display()),
                    })
                }
            };
            entries.entry(cols[0].to_lowercase()).or_insert(polarity);
        }
        Ok(SentimentLexicon { entries })
    }

    pub fn from_entries<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, Polarity)>,
        S: Into<String>,
    {
        SentimentLexicon {
            entries: entries.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    /// Majority of positive vs negative lemma hits; ties and no hits are
    /// neutral.
    pub fn classify(&self, sentence: &Sentence) -> Sentiment {
        let (mut pos, mut neg) = (0usize, 0usize);
        for tok in &sentence.tokens {
            match self.entries.get(&tok.lemma) {
                Some(Polarity::Positive) => pos += 1,
                Some(Polarity::Negative) => neg += 1,
                None => {}
            }
        }
        match pos.cmp(&neg) {
            std::cmp::Ordering::Greater => Sentiment::Positive,
            std::cmp::Ordering::Less => Sentiment::Negative,
            std::cmp::Ordering::Equal => Sentiment::Neutral,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;

    fn sentence(text: &str) -> Sentence {
        Sentence::from_text("s1", "", text)
    }

    #[test]
    fn metaphor_lexicon_labels_verb_token() {
        let mut lex = MetaphorLexicon::default();
        lex.insert("attack", "idea", true);
        lex.insert("attack", "ship", false);
        let ann = lex.annotate(&sentence("He attacked the idea."));
        assert_eq!(ann.labels, [0, 1, 0, 0, 0]);
        let ann = lex.annotate(&sentence("He attacked the ship."));
        assert_eq!(ann.labels, [0; 5]);
    }

    #[test]
    fn empty_lexicon_labels_nothing() {
        let lex = MetaphorLexicon::default();
        let s = sentence("You can't win this battle.");
        let ann = lex.annotate(&s);
        assert_eq!(ann.labels.len(), s.len());
        assert!(!ann.has_metaphor());
    }

    #[test]
    fn sentiment_majority_and_ties() {
        let lex = SentimentLexicon::from_entries([
            ("love", Polarity::Positive),
            ("great", Polarity::Positive),
            ("hate", Polarity::Negative),
        ]);
        assert_eq!(lex.classify(&sentence("I love this great movie")), Sentiment::Positive);
        assert_eq!(lex.classify(&sentence("I love and hate it")), Sentiment::Neutral);
        assert_eq!(lex.classify(&sentence("I hate it")), Sentiment::Negative);
        assert_eq!(lex.classify(&sentence("The dog barked")), Sentiment::Neutral);
    }

    #[test]
    fn load_files() {
        let dir = tempfile::tempdir().unwrap();
        let met = dir.path().join("met.tsv");
        std::fs::write(&met, "# verb\tobject\tlabel\nattack\tidea\tM\nattack\tship\tL\n").unwrap();
        let lex = MetaphorLexicon::load(&met).unwrap();
        assert!(lex.is_metaphorical("attack", "idea"));
        assert!(!lex.is_metaphorical("attack", "ship"));

        let bad = dir.path().join("bad.tsv");
        std::fs::write(&bad, "attack\tidea\tX\n").unwrap();
        assert!(matches!(MetaphorLexicon::load(&bad), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            MetaphorLexicon::load(&dir.path().join("missing.tsv")),
            Err(Error::Io { .. })
        ));

        let sent = dir.path().join("sent.tsv");
        std::fs::write(&sent, "love\tP\nhate\tN\n").unwrap();
        let lex = SentimentLexicon::load(&sent).unwrap();
        let toks = tokenize("love");
        let s = Sentence { id: "x".into(), source: String::new(), tokens: toks };
        assert_eq!(lex.classify(&s), Sentiment::Positive);
    }
}
