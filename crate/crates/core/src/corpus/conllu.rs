//! Streaming CoNLL-U reader and a debug writer.
//!
//! Only the columns the pipeline needs are kept: FORM, LEMMA, UPOS, HEAD and
//! DEPREL. Multiword-token ranges (`1-2`) and empty nodes (`1.1`) are dropped.

use std::fmt::Write as _;
use std::io::BufRead;

use super::{Sentence, Token, Upos};
use crate::error::{Error, Result};

/// Iterator over the sentences of a CoNLL-U stream.
///
/// A malformed line yields one `Err` carrying its line number; the rest of
/// that block is discarded, so a caller that keeps iterating skips the
/// sentence while a caller that stops aborts.
pub struct ConlluReader<R> {
    lines: std::io::Lines<R>,
    source: String,
    line_no: usize,
    done: bool,
}

impl<R: BufRead> ConlluReader<R> {
    pub fn new(reader: R, source: impl Into<String>) -> Self {
        ConlluReader {
            lines: reader.lines(),
            source: source.into(),
            line_no: 0,
            done: false,
        }
    }

    fn next_line(&mut self) -> Option<Result<String>> {
        let line = self.lines.next()?;
        self.line_no += 1;
        Some(line.map_err(|e| Error::Parse {
            line: self.line_no,
            message: e.to_string(),
        }))
    }

    fn skip_block(&mut self) {
        while let Some(Ok(line)) = self.next_line() {
            if line.trim().is_empty() {
                break;
            }
        }
    }
}

impl<R: BufRead> Iterator for ConlluReader<R> {
    type Item = Result<Sentence>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut sent_id = None;
        let mut start_line = 0;
        let mut tokens = Vec::new();
        loop {
            let line = match self.next_line() {
                None => {
                    self.done = true;
                    break;
                }
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(e));
                }
                Some(Ok(line)) => line,
            };
            if line.trim().is_empty() {
                if tokens.is_empty() && sent_id.is_none() {
                    continue;
                }
                break;
            }
            if start_line == 0 {
                start_line = self.line_no;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once('=') {
                    if key.trim() == "sent_id" {
                        sent_id = Some(value.trim().to_string());
                    }
                }
                continue;
            }
            match parse_token_line(&line, tokens.len() + 1) {
                Ok(Some(token)) => tokens.push(token),
                Ok(None) => {}
                Err(message) => {
                    let line = self.line_no;
                    self.skip_block();
                    return Some(Err(Error::Parse { line, message }));
                }
            }
        }
        if tokens.is_empty() {
            return None;
        }
        let source = format!("{}:{start_line}", self.source);
        let sentence = Sentence {
            id: sent_id.unwrap_or_else(|| source.clone()),
            source,
            tokens,
        };
        if let Err(err) = sentence.validate() {
            return Some(Err(Error::Parse {
                line: start_line,
                message: err.to_string(),
            }));
        }
        Some(Ok(sentence))
    }
}

/// Parses a CoNLL-U stream into sentences. See [`ConlluReader`].
pub fn parse_conllu<R: BufRead>(reader: R, source: &str) -> ConlluReader<R> {
    ConlluReader::new(reader, source)
}

/// `Ok(None)` for range and empty-node lines.
fn parse_token_line(line: &str, expected_id: usize) -> std::result::Result<Option<Token>, String> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(format!("expected 10 tab-separated columns, found {}", cols.len()));
    }
    let id = cols[0];
    if id.contains('-') || id.contains('.') {
        return Ok(None);
    }
    let id: usize = id.parse().map_err(|_| format!("bad token id {id:?}"))?;
    if id != expected_id {
        return Err(format!("token id {id} out of sequence (expected {expected_id})"));
    }
    let form = cols[1];
    if form.is_empty() {
        return Err("empty FORM".to_string());
    }
    let lemma = match cols[2] {
        "_" | "" if form != "_" => form.to_lowercase(),
        lemma => lemma.to_lowercase(),
    };
    let lemma: String = lemma
        .chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect();
    let head = match cols[6] {
        "_" => None,
        h => Some(h.parse::<usize>().map_err(|_| format!("bad HEAD {h:?}"))?),
    };
    let deprel = match cols[7] {
        "_" => None,
        rel => Some(rel.to_string()),
    };
    Ok(Some(Token {
        surface: form.to_string(),
        lemma,
        upos: Upos::from_ud(cols[3]),
        head,
        deprel,
    }))
}

/// Serializes a sentence back to CoNLL-U. Columns the reader does not keep
/// are written as `_`; OTHER is written as `X`.
pub fn write_conllu(sentence: &Sentence) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# sent_id = {}", sentence.id);
    for (i, tok) in sentence.tokens.iter().enumerate() {
        let upos = match tok.upos {
            Upos::Other => "X",
            other => other.as_str(),
        };
        let head = tok.head.map_or_else(|| "_".to_string(), |h| h.to_string());
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t_\t_\t{}\t{}\t_\t_",
            i + 1,
            tok.surface,
            tok.lemma,
            upos,
            head,
            tok.deprel.as_deref().unwrap_or("_")
        );
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_all(text: &str) -> Vec<Result<Sentence>> {
        parse_conllu(text.as_bytes(), "t.conllu").collect()
    }

    const I_EAT_APPLES: &str = "# sent_id = s1\n\
1\tI\tI\tPRON\tPRP\t_\t2\tnsubj\t_\t_\n\
2\teat\teat\tVERB\tVBP\t_\t0\troot\t_\t_\n\
3\tapples\tapple\tNOUN\tNNS\t_\t2\tobj\t_\t_\n\n";

    #[test]
    fn three_token_block() {
        let sents = parse_all(I_EAT_APPLES);
        assert_eq!(sents.len(), 1);
        let s = sents[0].as_ref().unwrap();
        assert_eq!(s.id, "s1");
        assert_eq!(s.tokens.len(), 3);
        let heads: Vec<_> = s.tokens.iter().map(|t| t.head.unwrap()).collect();
        assert_eq!(heads, [2, 0, 2]);
        assert_eq!(s.tokens[0].lemma, "i");
        assert_eq!(s.tokens[2].deprel.as_deref(), Some("obj"));
    }

    #[test]
    fn empty_input_is_empty_stream() {
        assert!(parse_all("").is_empty());
        assert!(parse_all("\n\n").is_empty());
    }

    #[test]
    fn multiword_range_and_empty_nodes_are_dropped() {
        // Shape of the format documentation's "vámonos" / "don't" examples.
        let text = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n\
1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_\n\
2\tn't\tnot\tPART\t_\t_\t3\tadvmod\t_\t_\n\
3\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n\
3.1\tgone\tgo\tVERB\t_\t_\t_\t_\t3:conj\t_\n\n";
        let s = parse_all(text).remove(0).unwrap();
        let forms: Vec<_> = s.tokens.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(forms, ["do", "n't", "go"]);
        assert_eq!(s.id, "t.conllu:1");
    }

    #[test]
    fn underscore_lemma_falls_back_to_lowercased_form() {
        let text = "1\tHello\t_\tINTJ\t_\t_\t0\troot\t_\t_\n";
        let s = parse_all(text).remove(0).unwrap();
        assert_eq!(s.tokens[0].lemma, "hello");
        assert_eq!(s.tokens[0].upos, Upos::Other);
    }

    #[test]
    fn malformed_line_reports_number_and_skips_block() {
        let text = "1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n\
2\tbroken line\n\
3\tc\tc\tNOUN\t_\t_\t1\tdep\t_\t_\n\n\
1\tok\tok\tNOUN\t_\t_\t0\troot\t_\t_\n";
        let items = parse_all(text);
        assert_eq!(items.len(), 2);
        match &items[0] {
            Err(Error::Parse { line, .. }) => assert_eq!(*line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert_eq!(items[1].as_ref().unwrap().tokens[0].surface, "ok");
    }

    #[test]
    fn out_of_range_head_is_an_error() {
        let text = "1\ta\ta\tNOUN\t_\t_\t5\tdep\t_\t_\n";
        assert!(parse_all(text)[0].is_err());
    }

    #[test]
    fn writer_round_trips() {
        let s = parse_all(I_EAT_APPLES).remove(0).unwrap();
        let again = parse_all(&write_conllu(&s)).remove(0).unwrap();
        assert_eq!(again, s);
    }
}
