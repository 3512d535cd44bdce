use serde::{Deserialize, Serialize};

use super::tokenize::is_clause_punct;
use super::{Sentence, Upos};

/// Maximum distance, in tokens, between a verb and the first noun of its
/// object when no dependency arcs are available.
pub const HEURISTIC_WINDOW: usize = 4;

/// One verb / direct-object pair found in a sentence. Indices are 0-based
/// positions in the token list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbObjectOccurrence {
    pub sentence_id: String,
    pub verb_index: usize,
    pub object_index: usize,
    pub verb_lemma: String,
    pub object_lemma: String,
}

fn is_object_relation(rel: Option<&str>) -> bool {
    matches!(rel, Some("obj") | Some("dobj"))
}

/// Finds verb-object pairs, from `obj` arcs when the sentence is parsed and
/// from the windowed noun heuristic otherwise. Output is ordered by verb
/// index, then object index.
pub fn extract_verb_object(sentence: &Sentence) -> Vec<VerbObjectOccurrence> {
    let pairs = if sentence.has_arcs() {
        from_arcs(sentence)
    } else {
        heuristic(sentence)
    };
    let mut out: Vec<VerbObjectOccurrence> = pairs
        .into_iter()
        .map(|(v, o)| VerbObjectOccurrence {
            sentence_id: sentence.id.clone(),
            verb_index: v,
            object_index: o,
            verb_lemma: sentence.tokens[v].lemma.clone(),
            object_lemma: sentence.tokens[o].lemma.clone(),
        })
        .collect();
    out.sort_by_key(|occ| (occ.verb_index, occ.object_index));
    out
}

fn from_arcs(sentence: &Sentence) -> Vec<(usize, usize)> {
    let tokens = &sentence.tokens;
    tokens
        .iter()
        .enumerate()
        .filter_map(|(i, tok)| {
            let head = tok.head?;
            if head == 0 || head > tokens.len() || head - 1 == i {
                return None;
            }
            let verb = head - 1;
            let ok = is_object_relation(tok.base_deprel())
                && tokens[verb].upos == Upos::Verb
                && matches!(tok.upos, Upos::Noun | Upos::Pron);
            ok.then_some((verb, i))
        })
        .collect()
}

fn heuristic(sentence: &Sentence) -> Vec<(usize, usize)> {
    let tokens = &sentence.tokens;
    let mut out = Vec::new();
    for (v, tok) in tokens.iter().enumerate() {
        if tok.upos != Upos::Verb {
            continue;
        }
        let end = (v + HEURISTIC_WINDOW).min(tokens.len() - 1);
        for j in v + 1..=end {
            let cand = &tokens[j];
            if cand.upos == Upos::Verb || is_clause_punct(&cand.surface) {
                break;
            }
            if cand.upos == Upos::Noun {
                let mut last = j;
                while last + 1 < tokens.len() && tokens[last + 1].upos == Upos::Noun {
                    last += 1;
                }
                out.push((v, last));
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_conllu, Token};

    fn pairs(s: &Sentence) -> Vec<(String, String)> {
        extract_verb_object(s)
            .into_iter()
            .map(|o| (o.verb_lemma, o.object_lemma))
            .collect()
    }

    fn pair(v: &str, o: &str) -> (String, String) {
        (v.to_string(), o.to_string())
    }

    #[test]
    fn parsed_sentence_uses_obj_arc() {
        let text = "1\tHe\the\tPRON\t_\t_\t2\tnsubj\t_\t_\n\
2\tattacked\tattack\tVERB\t_\t_\t0\troot\t_\t_\n\
3\tweak\tweak\tADJ\t_\t_\t4\tamod\t_\t_\n\
4\tpoints\tpoint\tNOUN\t_\t_\t2\tobj\t_\t_\n\
5\tin\tin\tADP\t_\t_\t7\tcase\t_\t_\n\
6\tmy\tmy\tPRON\t_\t_\t7\tnmod:poss\t_\t_\n\
7\targument\targument\tNOUN\t_\t_\t4\tnmod\t_\t_\n\
8\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_\n";
        let s = parse_conllu(text.as_bytes(), "x").next().unwrap().unwrap();
        let occ = extract_verb_object(&s);
        assert_eq!(occ.len(), 1);
        assert_eq!((occ[0].verb_index, occ[0].object_index), (1, 3));
        assert_eq!(pairs(&s), [pair("attack", "point")]);
    }

    #[test]
    fn plain_text_heuristic() {
        let s = Sentence::from_text("s", "", "You can't win this battle.");
        assert_eq!(pairs(&s), [pair("win", "battle")]);
        let s = Sentence::from_text("s", "", "He attacked weak points in my argument.");
        assert_eq!(pairs(&s), [pair("attack", "point")]);
        let s = Sentence::from_text("s", "", "She slept.");
        assert!(pairs(&s).is_empty());
    }

    #[test]
    fn heuristic_takes_last_noun_of_compound() {
        let toks = vec![
            Token::new("raise", "raise", Upos::Verb),
            Token::new("the", "the", Upos::Other),
            Token::new("interest", "interest", Upos::Noun),
            Token::new("rate", "rate", Upos::Noun),
        ];
        let s = Sentence { id: "s".into(), source: String::new(), tokens: toks };
        assert_eq!(pairs(&s), [pair("raise", "rate")]);
    }

    #[test]
    fn heuristic_window_and_barriers() {
        let mk = |words: &[(&str, Upos)]| Sentence {
            id: "s".into(),
            source: String::new(),
            tokens: words.iter().map(|(w, u)| Token::new(*w, *w, *u)).collect(),
        };
        // noun five tokens away is out of the window
        let far = mk(&[
            ("take", Upos::Verb),
            ("a", Upos::Other),
            ("very", Upos::Adv),
            ("very", Upos::Adv),
            ("big", Upos::Adj),
            ("step", Upos::Noun),
        ]);
        assert!(pairs(&far).is_empty());
        let comma = mk(&[("stop", Upos::Verb), (",", Upos::Other), ("man", Upos::Noun)]);
        assert!(pairs(&comma).is_empty());
        let verb = mk(&[("try", Upos::Verb), ("eat", Upos::Verb), ("cake", Upos::Noun)]);
        assert_eq!(pairs(&verb), [pair("eat", "cake")]);
    }

    #[test]
    fn arcs_require_verb_head_and_nominal_object() {
        let toks = vec![
            Token::new("big", "big", Upos::Adj).with_arc(0, "root"),
            Token::new("deal", "deal", Upos::Noun).with_arc(1, "obj"),
        ];
        let s = Sentence { id: "s".into(), source: String::new(), tokens: toks };
        assert!(extract_verb_object(&s).is_empty());
    }
}
