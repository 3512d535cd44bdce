//! Rule-based English lemmatizer.
//!
//! Lookup order: irregular-form table for the part of speech, then suffix
//! rules. Verbs get `-s`, `-ed` and `-ing` handling (with consonant
//! undoubling and silent-e restoration); nouns only get plural rules. Every
//! other class is lowercased and returned as is.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::Upos;

const IRREGULAR_VERBS: &[(&str, &str)] = &[
    ("am", "be"), ("is", "be"), ("are", "be"), ("was", "be"), ("were", "be"),
    ("been", "be"), ("being", "be"), ("'m", "be"), ("'re", "be"),
    ("has", "have"), ("had", "have"), ("having", "have"), ("'ve", "have"),
    ("does", "do"), ("did", "do"), ("done", "do"), ("doing", "do"),
    ("goes", "go"), ("went", "go"), ("gone", "go"),
    ("ca", "can"), ("wo", "will"), ("'ll", "will"), ("'d", "would"), ("n't", "not"), ("'m", "be"), ("'re", "be"), ("'ve", "have"),
    ("ate", "eat"), ("eaten", "eat"),
    ("began", "begin"), ("begun", "begin"),
    ("bent", "bend"), ("bet", "bet"),
    ("bit", "bite"), ("bitten", "bite"),
    ("bled", "bleed"), ("blew", "blow"), ("blown", "blow"),
    ("bore", "bear"), ("borne", "bear"),
    ("bought", "buy"), ("brought", "bring"),
    ("broke", "break"), ("broken", "break"),
    ("bred", "breed"), ("built", "build"), ("burnt", "burn"),
    ("caught", "catch"), ("chose", "choose"), ("chosen", "choose"),
    ("came", "come"), ("crept", "creep"),
    ("dealt", "deal"), ("dug", "dig"),
    ("drew", "draw"), ("drawn", "draw"),
    ("dreamt", "dream"),
    ("drank", "drink"), ("drunk", "drink"),
    ("drove", "drive"), ("driven", "drive"),
    ("fell", "fall"), ("fallen", "fall"),
    ("fed", "feed"), ("felt", "feel"), ("fought", "fight"),
    ("found", "find"), ("fled", "flee"),
    ("flew", "fly"), ("flown", "fly"),
    ("forgot", "forget"), ("forgotten", "forget"),
    ("forgave", "forgive"), ("forgiven", "forgive"),
    ("froze", "freeze"), ("frozen", "freeze"),
    ("got", "get"), ("gotten", "get"),
    ("gave", "give"), ("given", "give"),
    ("ground", "grind"),
    ("grew", "grow"), ("grown", "grow"),
    ("hung", "hang"), ("heard", "hear"),
    ("hid", "hide"), ("hidden", "hide"),
    ("held", "hold"),
    ("kept", "keep"),
    ("knelt", "kneel"),
    ("knew", "know"), ("known", "know"),
    ("laid", "lay"), ("led", "lead"),
    ("leapt", "leap"), ("learnt", "learn"),
    ("left", "leave"), ("lent", "lend"),
    ("lain", "lie"), ("lit", "light"),
    ("lost", "lose"),
    ("made", "make"), ("meant", "mean"), ("met", "meet"),
    ("paid", "pay"), ("proved", "prove"), ("proven", "prove"),
    ("ran", "run"),
    ("rode", "ride"), ("ridden", "ride"),
    ("rang", "ring"), ("rung", "ring"),
    ("rose", "rise"), ("risen", "rise"),
    ("said", "say"),
    ("saw", "see"), ("seen", "see"),
    ("sought", "seek"), ("sold", "sell"), ("sent", "send"),
    ("shook", "shake"), ("shaken", "shake"),
    ("shone", "shine"), ("shot", "shoot"),
    ("showed", "show"), ("shown", "show"),
    ("shrank", "shrink"), ("shrunk", "shrink"),
    ("sang", "sing"), ("sung", "sing"),
    ("sank", "sink"), ("sunk", "sink"),
    ("sat", "sit"), ("slept", "sleep"),
    ("slid", "slide"),
    ("spoke", "speak"), ("spoken", "speak"),
    ("sped", "speed"), ("spent", "spend"), ("spelt", "spell"),
    ("spun", "spin"), ("spat", "spit"),
    ("stood", "stand"), ("stole", "steal"), ("stolen", "steal"),
    ("stuck", "stick"), ("stung", "sting"),
    ("struck", "strike"), ("strove", "strive"), ("striven", "strive"),
    ("swore", "swear"), ("sworn", "swear"),
    ("swept", "sweep"),
    ("swam", "swim"), ("swum", "swim"),
    ("swung", "swing"),
    ("took", "take"), ("taken", "take"),
    ("taught", "teach"),
    ("tore", "tear"), ("torn", "tear"),
    ("told", "tell"), ("thought", "think"),
    ("threw", "throw"), ("thrown", "throw"),
    ("understood", "understand"),
    ("woke", "wake"), ("woken", "wake"),
    ("wore", "wear"), ("worn", "wear"),
    ("wove", "weave"), ("woven", "weave"),
    ("wept", "weep"),
    ("won", "win"), ("wound", "wind"),
    ("wrote", "write"), ("written", "write"),
    // regular forms the suffix rules get wrong
    ("added", "add"), ("adding", "add"), ("adds", "add"),
    ("agreed", "agree"), ("disagreed", "disagree"), ("freed", "free"),
    ("guaranteed", "guarantee"), ("decreed", "decree"),
    ("died", "die"), ("dying", "die"), ("lied", "lie"), ("lying", "lie"),
    ("tied", "tie"), ("tying", "tie"),
    ("changed", "change"), ("changing", "change"),
    ("exchanged", "exchange"), ("exchanging", "exchange"),
    ("arranged", "arrange"), ("arranging", "arrange"),
    ("challenged", "challenge"), ("challenging", "challenge"),
    ("ranged", "range"), ("ranging", "range"),
    ("wasted", "waste"), ("wasting", "waste"),
    ("tasted", "taste"), ("tasting", "taste"),
    ("pasted", "paste"), ("pasting", "paste"),
    ("embedded", "embed"), ("embedding", "embed"),
    ("focused", "focus"), ("focusing", "focus"), ("focuses", "focus"),
    ("visited", "visit"), ("visiting", "visit"),
    ("witnessed", "witness"), ("witnessing", "witness"), ("witnesses", "witness"),
];

const IRREGULAR_NOUNS: &[(&str, &str)] = &[
    ("men", "man"), ("women", "woman"), ("children", "child"),
    ("feet", "foot"), ("teeth", "tooth"), ("geese", "goose"),
    ("mice", "mouse"), ("lice", "louse"), ("oxen", "ox"),
    ("people", "people"), ("police", "police"),
    ("lives", "life"), ("wives", "wife"), ("knives", "knife"),
    ("leaves", "leaf"), ("halves", "half"), ("shelves", "shelf"),
    ("wolves", "wolf"), ("thieves", "thief"), ("selves", "self"),
    ("loaves", "loaf"), ("calves", "calf"),
    ("criteria", "criterion"), ("phenomena", "phenomenon"),
    ("analyses", "analysis"), ("crises", "crisis"), ("theses", "thesis"),
    ("hypotheses", "hypothesis"), ("diagnoses", "diagnosis"),
    ("data", "data"), ("media", "media"),
    ("news", "news"), ("series", "series"), ("species", "species"),
    ("means", "means"), ("politics", "politics"), ("physics", "physics"),
    ("mathematics", "mathematics"), ("economics", "economics"),
];

fn table(entries: &'static [(&'static str, &'static str)]) -> HashMap<&'static str, &'static str> {
    entries.iter().copied().collect()
}

fn irregular_verbs() -> &'static HashMap<&'static str, &'static str> {
    static TABLE: OnceLock<HashMap<&str, &str>> = OnceLock::new();
    TABLE.get_or_init(|| table(IRREGULAR_VERBS))
}

fn irregular_nouns() -> &'static HashMap<&'static str, &'static str> {
    static TABLE: OnceLock<HashMap<&str, &str>> = OnceLock::new();
    TABLE.get_or_init(|| table(IRREGULAR_NOUNS))
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn has_vowel(s: &str) -> bool {
    s.bytes().any(|c| is_vowel(c) || c == b'y')
}

fn vowel_groups(s: &str) -> usize {
    let mut groups = 0;
    let mut prev = false;
    for c in s.bytes() {
        let v = is_vowel(c);
        if v && !prev {
            groups += 1;
        }
        prev = v;
    }
    groups
}

/// Restores a silent `e` or undoubles a final consonant on a stem left by
/// stripping `-ing` or `-ed`.
fn repair_stem(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 2 && b[n - 1] == b[n - 2] && !is_vowel(b[n - 1]) {
        if matches!(b[n - 1], b'l' | b's' | b'z' | b'f') {
            return stem.to_string();
        }
        return stem[..n - 1].to_string();
    }
    let last = b[n - 1];
    let prev = if n >= 2 { b[n - 2] } else { 0 };
    let needs_e = match last {
        b'v' | b'u' => true,
        b'c' => prev != b'c',
        b'z' => is_vowel(prev),
        b's' => is_vowel(prev),
        b'g' => matches!(prev, b'r' | b'd' | b'l'),
        b'l' => matches!(prev, b't' | b'b' | b'd' | b'g' | b'k' | b'p' | b'z' | b'c' | b'f'),
        b'w' | b'x' | b'y' => false,
        _ => {
            // single-syllable consonant-vowel-consonant: make, take, hope
            n >= 3
                && !is_vowel(last)
                && is_vowel(prev)
                && !is_vowel(b[n - 3])
                && b[n - 3] != b'q'
                && vowel_groups(stem) == 1
        }
    };
    if needs_e {
        format!("{stem}e")
    } else {
        stem.to_string()
    }
}

fn strip_plural(word: &str) -> Option<String> {
    let n = word.len();
    if n <= 3 || !word.ends_with('s') {
        return None;
    }
    if let Some(stem) = word.strip_suffix("ies") {
        return Some(if stem.len() >= 2 {
            format!("{stem}y")
        } else {
            word[..n - 1].to_string()
        });
    }
    for suffix in ["sses", "shes", "ches", "xes", "zzes"] {
        if word.ends_with(suffix) {
            return Some(word[..n - 2].to_string());
        }
    }
    if word.ends_with("ss") || word.ends_with("us") || word.ends_with("is") {
        return None;
    }
    Some(word[..n - 1].to_string())
}

fn verb_lemma(word: &str) -> String {
    if let Some(&lemma) = irregular_verbs().get(word) {
        return lemma.to_string();
    }
    if let Some(stem) = word.strip_suffix("ing") {
        if stem.len() >= 2 && has_vowel(stem) {
            if stem.ends_with("ee") || stem.ends_with('y') || stem.ends_with("oe") {
                return stem.to_string();
            }
            return repair_stem(stem);
        }
        return word.to_string();
    }
    if let Some(stem) = word.strip_suffix("ied") {
        if stem.len() >= 2 {
            return format!("{stem}y");
        }
        return word[..word.len() - 1].to_string();
    }
    if word.ends_with("eed") {
        return word.to_string();
    }
    if let Some(stem) = word.strip_suffix("ed") {
        if stem.len() >= 2 && has_vowel(stem) {
            if stem.ends_with('e') || stem.ends_with('y') {
                return stem.to_string();
            }
            return repair_stem(stem);
        }
        return word.to_string();
    }
    strip_plural(word).unwrap_or_else(|| word.to_string())
}

fn noun_lemma(word: &str) -> String {
    if let Some(&lemma) = irregular_nouns().get(word) {
        return lemma.to_string();
    }
    strip_plural(word).unwrap_or_else(|| word.to_string())
}

/// Lemmatizes an English word form. Unknown forms come back lowercased.
pub fn lemmatize(surface: &str, upos: Upos) -> String {
    let word = surface.to_lowercase().replace('’', "'");
    let ascii = word.bytes().all(|c| c.is_ascii_alphabetic() || c == b'\'');
    if !ascii || word.is_empty() {
        return word;
    }
    match upos {
        Upos::Verb => verb_lemma(&word),
        Upos::Noun => noun_lemma(&word),
        _ => word,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(word: &str) -> String {
        lemmatize(word, Upos::Verb)
    }

    fn n(word: &str) -> String {
        lemmatize(word, Upos::Noun)
    }

    #[test]
    fn named_examples() {
        assert_eq!(v("attacks"), "attack");
        assert_eq!(v("won"), "win");
        assert_eq!(n("battle"), "battle");
    }

    #[test]
    fn regular_verb_suffixes() {
        let cases = [
            ("attacked", "attack"), ("attacking", "attack"),
            ("studies", "study"), ("studied", "study"), ("tried", "try"),
            ("watches", "watch"), ("passes", "pass"), ("fixes", "fix"),
            ("running", "run"), ("stopped", "stop"), ("planned", "plan"),
            ("killing", "kill"), ("kissed", "kiss"), ("kisses", "kiss"),
            ("making", "make"), ("taking", "take"), ("hoped", "hope"),
            ("hopping", "hop"), ("raised", "raise"), ("raising", "raise"),
            ("loved", "love"), ("giving", "give"), ("voicing", "voice"),
            ("piecing", "piece"), ("handling", "handle"), ("charging", "charge"),
            ("eating", "eat"), ("meeting", "meet"), ("opening", "open"),
            ("buying", "buy"), ("building", "build"), ("seeing", "see"),
            ("freeing", "free"), ("needed", "need"), ("writing", "write"),
            ("riding", "ride"), ("spelling", "spell"), ("shedding", "shed"),
            ("tracking", "track"), ("pocketed", "pocket"), ("continuing", "continue"),
            ("crossing", "cross"), ("lifting", "lift"), ("harmed", "harm"),
        ];
        for (form, lemma) in cases {
            assert_eq!(v(form), lemma, "{form}");
        }
    }

    #[test]
    fn base_forms_are_untouched() {
        for w in ["need", "feed", "sing", "bring", "shed", "express", "witness", "focus", "free"] {
            assert_eq!(v(w), w);
        }
        for w in ["bus", "glass", "analysis", "gas", "news", "people"] {
            assert_eq!(n(w), w);
        }
    }

    #[test]
    fn nouns_only_get_plural_rules() {
        assert_eq!(n("points"), "point");
        assert_eq!(n("building"), "building");
        assert_eq!(n("children"), "child");
        assert_eq!(n("ideas"), "idea");
        assert_eq!(n("knives"), "knife");
        assert_eq!(n("boxes"), "box");
        assert_eq!(n("cities"), "city");
        assert_eq!(n("Time"), "time");
    }

    #[test]
    fn other_classes_are_lowercased() {
        assert_eq!(lemmatize("I", Upos::Pron), "i");
        assert_eq!(lemmatize("Weak", Upos::Adj), "weak");
        assert_eq!(lemmatize("n't", Upos::Other), "n't");
    }

    #[test]
    fn curly_apostrophe_is_normalized() {
        assert_eq!(v("n’t"), "not");
    }

    #[test]
    fn idempotent_on_fixture_words() {
        let words = [
            "attacks", "won", "battles", "studies", "running", "raised", "makes", "eating",
            "needed", "children", "points", "ideas", "kisses", "wasting", "series", "crises",
            "breaking", "broken", "bought", "sends", "expressed", "pieces", "voiced", "lifted",
            "shed", "witnessed", "harmed", "freed", "taught", "saving", "milked", "plants",
        ];
        for w in words {
            for upos in [Upos::Verb, Upos::Noun, Upos::Adj] {
                let once = lemmatize(w, upos);
                assert_eq!(lemmatize(&once, upos), once, "{w} as {upos}");
            }
        }
    }
}
