use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Sentence, Upos};
use crate::error::Error;

/// Grammatical person of a sentence's pronoun subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PersonClass {
    First,
    Third,
    Other,
}

pub const FIRST_PERSON: [&str; 2] = ["i", "we"];
pub const THIRD_PERSON: [&str; 3] = ["he", "she", "they"];

impl PersonClass {
    /// Class of a subject lemma. Only the closed pronoun sets count; `you`,
    /// `it` and everything else is `Other`.
    pub fn of_lemma(lemma: &str) -> Self {
        if FIRST_PERSON.contains(&lemma) {
            PersonClass::First
        } else if THIRD_PERSON.contains(&lemma) {
            PersonClass::Third
        } else {
            PersonClass::Other
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PersonClass::First => "first",
            PersonClass::Third => "third",
            PersonClass::Other => "other",
        }
    }
}

impl fmt::Display for PersonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PersonClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "first" => Ok(PersonClass::First),
            "third" => Ok(PersonClass::Third),
            "other" => Ok(PersonClass::Other),
            _ => Err(Error::InvalidArgument(format!("unknown person class {s:?}"))),
        }
    }
}

/// Decides the person class from the root predicate's `nsubj` when the
/// sentence is parsed, otherwise from the first pronoun before the first
/// verb.
pub fn classify_subject_person(sentence: &Sentence) -> PersonClass {
    let tokens = &sentence.tokens;
    if sentence.has_arcs() {
        let Some(root) = tokens.iter().position(|t| t.head == Some(0)) else {
            return PersonClass::Other;
        };
        return tokens
            .iter()
            .find(|t| t.head == Some(root + 1) && t.base_deprel() == Some("nsubj"))
            .map_or(PersonClass::Other, |t| PersonClass::of_lemma(&t.lemma));
    }
    let first_verb = tokens
        .iter()
        .position(|t| t.upos == Upos::Verb)
        .unwrap_or(tokens.len());
    tokens[..first_verb]
        .iter()
        .find(|t| t.upos == Upos::Pron)
        .map_or(PersonClass::Other, |t| PersonClass::of_lemma(&t.lemma))
}
