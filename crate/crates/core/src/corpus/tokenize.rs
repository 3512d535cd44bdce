//! Plain-text fallback: whitespace/punctuation tokenizer with clitic
//! splitting and a small lexicon-plus-suffix tagger. It produces no
//! dependency arcs.

use std::collections::HashSet;
use std::sync::OnceLock;

use super::{lemmatize, Token, Upos};

const PRONOUNS: &[&str] = &[
    "i", "me", "we", "us", "you", "he", "him", "she", "her", "it", "they", "them",
    "myself", "ourselves", "yourself", "yourselves", "himself", "herself", "itself",
    "themselves", "someone", "somebody", "anyone", "anybody", "everyone", "everybody",
    "nobody", "something", "anything", "everything", "nothing", "who", "whom",
    "mine", "ours", "yours", "hers", "theirs",
];

/// Words after which the next token cannot be a verb.
const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "my", "your", "his", "her", "its",
    "our", "their", "some", "any", "no", "every", "each", "another", "such", "what",
    "which", "whose", "much", "many", "several", "few", "both", "either", "neither",
];

const FUNCTION_WORDS: &[&str] = &[
    // auxiliaries and modals
    "be", "am", "is", "are", "was", "were", "been", "being", "'m", "'re", "'s",
    "have", "has", "had", "having", "'ve", "do", "does", "did", "can", "ca", "could",
    "will", "wo", "would", "'ll", "'d", "shall", "should", "may", "might", "must",
    "n't", "not", "to",
    // prepositions and conjunctions
    "in", "on", "at", "by", "for", "with", "about", "against", "between", "into",
    "through", "during", "before", "after", "above", "below", "from", "up", "down",
    "of", "off", "over", "under", "again", "further", "then", "once", "and", "but",
    "or", "nor", "so", "yet", "if", "because", "as", "until", "while", "than",
    "though", "although", "unless", "since", "whether", "without", "within", "upon",
    "across", "toward", "towards", "onto", "per", "via", "like",
    // interjections
    "hello", "hi", "oh", "yes", "ok", "okay", "please", "thanks", "wow",
];

const ADVERBS: &[&str] = &[
    "very", "too", "also", "just", "only", "even", "still", "already", "always",
    "never", "often", "sometimes", "soon", "now", "here", "there", "well", "almost",
    "quite", "rather", "really", "again", "ever", "perhaps", "maybe", "away", "back",
    "today", "tomorrow", "yesterday", "together", "instead", "however", "therefore",
];

const ADJECTIVES: &[&str] = &[
    "weak", "strong", "good", "bad", "great", "new", "old", "big", "small", "large",
    "long", "short", "high", "low", "young", "little", "own", "other", "same", "right",
    "wrong", "true", "false", "real", "whole", "free", "full", "hard", "easy", "best",
    "better", "worse", "worst", "last", "first", "next", "early", "late", "important",
    "happy", "sad", "hot", "cold", "warm", "dark", "bright", "clear", "red", "black",
    "white", "blue", "green", "open", "close", "deep", "wide", "rich", "poor", "sure",
    "fine", "nice", "beautiful", "terrible", "awful", "wonderful", "huge", "tiny",
];

/// Base forms recognised as verbs when not preceded by a determiner.
const VERBS: &[&str] = &[
    // the analysed verbs
    "pocket", "buy", "eat", "pull", "build", "exchange", "spell", "lift", "join", "piece",
    "allow", "milk", "gain", "pick", "break", "welcome", "tell", "view", "kiss", "save",
    "attack", "plant", "make", "watch", "track", "witness", "meet", "ride", "find",
    "raise", "express", "kill", "carry", "voice", "shed", "cross", "hand", "free", "cut",
    "harm", "hold", "waste", "send", "lose", "take", "raid", "put", "cost", "teach",
    // common transitive and intransitive verbs
    "win", "get", "give", "go", "come", "see", "know", "think", "want", "use", "look",
    "like", "love", "hate", "need", "feel", "try", "leave", "call", "keep", "let",
    "begin", "seem", "help", "show", "hear", "play", "run", "move", "live", "believe",
    "bring", "happen", "write", "sit", "stand", "pay", "learn", "change", "lead",
    "understand", "follow", "stop", "create", "speak", "read", "spend", "grow", "open",
    "walk", "offer", "remember", "consider", "appear", "wait", "serve", "die", "expect",
    "stay", "fall", "reach", "remain", "suggest", "require", "report", "decide", "pass",
    "sell", "drink", "drive", "fight", "throw", "catch", "draw", "choose", "wear",
    "sleep", "bark", "laugh", "cry", "smile", "arrive", "fix", "push", "touch", "drop",
    "destroy", "defend", "protect", "support", "accept", "enjoy", "describe", "explain",
    "share", "solve", "face", "forget", "hit", "lay", "set", "shoot", "sing", "steal",
    "visit", "answer", "ask", "say", "bear", "earn", "hide", "open", "close", "sign",
];

fn set(words: &'static [&'static str]) -> HashSet<&'static str> {
    words.iter().copied().collect()
}

macro_rules! lexicon {
    ($name:ident, $words:expr) => {
        fn $name() -> &'static HashSet<&'static str> {
            static SET: OnceLock<HashSet<&str>> = OnceLock::new();
            SET.get_or_init(|| set($words))
        }
    };
}

lexicon!(pronouns, PRONOUNS);
lexicon!(determiners, DETERMINERS);
lexicon!(function_words, FUNCTION_WORDS);
lexicon!(adverbs, ADVERBS);
lexicon!(adjectives, ADJECTIVES);
lexicon!(verbs, VERBS);

const CLITICS: &[&str] = &["n't", "'s", "'re", "'ve", "'ll", "'d", "'m"];

/// True for tokens made only of punctuation.
pub fn is_punct(surface: &str) -> bool {
    !surface.is_empty() && surface.chars().all(|c| c.is_ascii_punctuation() || "“”‘’…–—".contains(c))
}

/// Punctuation that ends a clause for the heuristic extractor.
pub fn is_clause_punct(surface: &str) -> bool {
    matches!(surface, "," | ";" | ":" | "." | "!" | "?" | "(" | ")" | "\"" | "“" | "”" | "…" | "--" | "–" | "—")
}

fn split_word(word: &str, out: &mut Vec<String>) {
    let chars: Vec<char> = word.chars().collect();
    let mut start = 0;
    let mut end = chars.len();
    while start < end && is_punct(&chars[start].to_string()) && chars[start] != '\'' {
        out.push(chars[start].to_string());
        start += 1;
    }
    let mut trailing = Vec::new();
    while end > start && is_punct(&chars[end - 1].to_string()) && chars[end - 1] != '\'' {
        trailing.push(chars[end - 1].to_string());
        end -= 1;
    }
    let core: String = chars[start..end].iter().collect::<String>().replace('’', "'");
    if !core.is_empty() {
        let lower = core.to_lowercase();
        let clitic = CLITICS
            .iter()
            .find(|c| lower.ends_with(*c) && lower.len() > c.len());
        match clitic {
            Some(c) => {
                let cut = core.len() - c.len();
                out.push(core[..cut].to_string());
                out.push(core[cut..].to_string());
            }
            None => out.push(core),
        }
    }
    out.extend(trailing.into_iter().rev());
}

fn split(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        split_word(word, &mut out);
    }
    out
}

fn guess_by_suffix(lower: &str) -> Upos {
    const ADV: &[&str] = &["ly"];
    const ADJ: &[&str] = &["ous", "ful", "able", "ible", "ive", "less", "ical", "ish", "ic"];
    const NOUN: &[&str] = &["tion", "sion", "ment", "ness", "ity", "ism", "ship", "hood", "ance", "ence"];
    if ADV.iter().any(|s| lower.ends_with(s)) && lower.len() > 4 {
        Upos::Adv
    } else if NOUN.iter().any(|s| lower.ends_with(s)) {
        Upos::Noun
    } else if ADJ.iter().any(|s| lower.ends_with(s)) && lower.len() > 4 {
        Upos::Adj
    } else {
        Upos::Noun
    }
}

fn tag(words: &[String]) -> Vec<Upos> {
    let mut tags = Vec::with_capacity(words.len());
    for (i, word) in words.iter().enumerate() {
        let lower = word.to_lowercase().replace('’', "'");
        let prev = if i > 0 { Some(words[i - 1].to_lowercase()) } else { None };
        let after_det = prev.as_deref().is_some_and(|p| determiners().contains(p));
        let after_adj = i > 0 && tags[i - 1] == Upos::Adj;
        let upos = if is_punct(&lower) && !CLITICS.contains(&lower.as_str()) {
            Upos::Other
        } else if lower == "her" {
            // possessive when a content word follows
            let next = words.get(i + 1).map(|w| w.to_lowercase());
            match next {
                Some(next)
                    if !is_punct(&next)
                        && !determiners().contains(next.as_str())
                        && !function_words().contains(next.as_str()) =>
                {
                    Upos::Other
                }
                _ => Upos::Pron,
            }
        } else if pronouns().contains(lower.as_str()) {
            Upos::Pron
        } else if determiners().contains(lower.as_str())
            || function_words().contains(lower.as_str())
            || lower.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',')
        {
            Upos::Other
        } else if adverbs().contains(lower.as_str()) {
            Upos::Adv
        } else if adjectives().contains(lower.as_str()) && (after_det || after_adj || i + 1 < words.len()) {
            Upos::Adj
        } else if after_det || after_adj {
            guess_by_suffix(&lower)
        } else if verbs().contains(lemmatize(&lower, Upos::Verb).as_str())
            || (lower.ends_with("ed") || lower.ends_with("ing"))
                && prev
                    .as_deref()
                    .is_some_and(|p| pronouns().contains(p) || function_words().contains(p))
        {
            Upos::Verb
        } else {
            guess_by_suffix(&lower)
        };
        tags.push(upos);
    }
    tags
}

/// Splits one sentence of text into tokens and assigns lemmas and coarse
/// tags. Deterministic; empty text yields no tokens.
pub fn tokenize(text: &str) -> Vec<Token> {
    let words = split(text);
    let tags = tag(&words);
    words
        .into_iter()
        .zip(tags)
        .map(|(surface, upos)| {
            // Contracted auxiliaries take their full form from the verb table.
            const CONTRACTED: &[&str] = &["n't", "ca", "wo", "'m", "'re", "'ve", "'ll"];
            let lower = surface.to_lowercase();
            let lemma = if upos == Upos::Other && CONTRACTED.contains(&lower.as_str()) {
                lemmatize(&surface, Upos::Verb)
            } else {
                lemmatize(&surface, upos)
            };
            Token::new(surface, lemma, upos)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn clitics_are_detached() {
        assert_eq!(surfaces("You can't win this battle."), ["You", "ca", "n't", "win", "this", "battle", "."]);
        assert_eq!(surfaces("It's John's idea"), ["It", "'s", "John", "'s", "idea"]);
        assert_eq!(surfaces("We’ll see"), ["We", "'ll", "see"]);
    }

    #[test]
    fn empty_and_single_word() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   ").is_empty());
        let toks = tokenize("Hello");
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].surface, "Hello");
        assert_eq!(toks[0].lemma, "hello");
    }

    #[test]
    fn punctuation_is_split_off() {
        assert_eq!(surfaces("(hello), world!"), ["(", "hello", ")", ",", "world", "!"]);
    }

    #[test]
    fn tags_for_example_sentences() {
        let toks = tokenize("You can't win this battle.");
        let tags: Vec<Upos> = toks.iter().map(|t| t.upos).collect();
        assert_eq!(
            tags,
            [Upos::Pron, Upos::Other, Upos::Other, Upos::Verb, Upos::Other, Upos::Noun, Upos::Other]
        );
        assert_eq!(toks[2].lemma, "not");

        let toks = tokenize("He attacked weak points in my argument.");
        assert_eq!(toks[1].upos, Upos::Verb);
        assert_eq!(toks[1].lemma, "attack");
        assert_eq!(toks[2].upos, Upos::Adj);
        assert_eq!(toks[3].upos, Upos::Noun);
        assert_eq!(toks[3].lemma, "point");
    }

    #[test]
    fn deterministic() {
        let text = "They lost hope after the storm broke the fences.";
        assert_eq!(tokenize(text), tokenize(text));
    }
}
