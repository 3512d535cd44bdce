//! Client side of the external annotator protocol.
//!
//! The annotator is a subprocess reading newline-delimited JSON requests on
//! stdin and writing one JSON response per request on stdout:
//!
//! ```text
//! > {"id":"s1","task":"metaphor","tokens":["I","win"]}
//! > {"id":"s2","task":"sentiment","tokens":["I","win"]}
//! >
//! < {"id":"s2","sentiment":"positive"}
//! < {"id":"s1","labels":[0,1]}
//! ```
//!
//! A blank line flushes the batch; every id must be answered, in any order,
//! before the next batch is sent. A response of the form
//! `{"id": null, "error": "..."}` reports a request the annotator could not
//! read and fails the batch.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::Value;

use super::{AnnotatorSpec, Sentiment, Task};
use crate::corpus::Sentence;
use crate::error::{Error, Result};

#[derive(Debug, Serialize)]
struct Request<'a> {
    id: &'a str,
    task: Task,
    tokens: Vec<&'a str>,
}

/// A validated response payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawResponse {
    Labels(Vec<u8>),
    Sentiment(Sentiment),
}

/// A running annotator subprocess.
pub struct ExternalAnnotator {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    timeout: Duration,
    program: String,
}

impl ExternalAnnotator {
    pub fn spawn(spec: &AnnotatorSpec) -> Result<Self> {
        let command = spec
            .command
            .as_ref()
            .filter(|c| !c.is_empty())
            .ok_or_else(|| Error::Config("external annotator needs a command".into()))?;
        let mut child = Command::new(&command[0])
            .args(&command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Annotator(format!("cannot start {:?}: {e}", command[0])))?;
        let stdout = child.stdout.take().expect("stdout is piped");
        let stdin = child.stdin.take();
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(ExternalAnnotator {
            child,
            stdin,
            lines: rx,
            timeout: spec.timeout,
            program: command[0].clone(),
        })
    }

    /// Sends one batch and collects a validated response per sentence,
    /// returned in request order.
    pub fn annotate_batch(&mut self, task: Task, batch: &[Sentence]) -> Result<Vec<RawResponse>> {
        if batch.is_empty() {
            return Ok(Vec::new());
        }
        let mut index: HashMap<&str, usize> = HashMap::with_capacity(batch.len());
        for (i, s) in batch.iter().enumerate() {
            if index.insert(s.id.as_str(), i).is_some() {
                return Err(Error::Protocol {
                    id: Some(s.id.clone()),
                    message: "sentence id repeated within one batch".into(),
                });
            }
        }
        self.send(task, batch)?;

        let deadline = Instant::now() + self.timeout;
        let mut responses: Vec<Option<RawResponse>> = vec![None; batch.len()];
        let mut pending = batch.len();
        while pending > 0 {
            let wait = deadline.saturating_duration_since(Instant::now());
            let line = match self.lines.recv_timeout(wait) {
                Ok(Ok(line)) => line,
                Ok(Err(e)) => return Err(Error::Annotator(format!("{}: {e}", self.program))),
                Err(RecvTimeoutError::Timeout) => {
                    let _ = self.child.kill();
                    return Err(self.unanswered(batch, &responses, "timed out"));
                }
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(self.unanswered(batch, &responses, "exited"));
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            let (id, payload) = parse_response(&line, task)?;
            let Some(&slot) = index.get(id.as_str()) else {
                return Err(Error::Protocol {
                    id: Some(id),
                    message: "response for an id that was not requested".into(),
                });
            };
            if responses[slot].is_some() {
                return Err(Error::Protocol {
                    id: Some(id),
                    message: "duplicate response".into(),
                });
            }
            if let RawResponse::Labels(labels) = &payload {
                let expected = batch[slot].len();
                if labels.len() != expected {
                    return Err(Error::Protocol {
                        id: Some(id),
                        message: format!("{} labels for {expected} tokens", labels.len()),
                    });
                }
            }
            responses[slot] = Some(payload);
            pending -= 1;
        }
        Ok(responses.into_iter().map(|r| r.expect("all answered")).collect())
    }

    fn send(&mut self, task: Task, batch: &[Sentence]) -> Result<()> {
        let stdin = self
            .stdin
            .as_mut()
            .ok_or_else(|| Error::Annotator("annotator input already closed".into()))?;
        let mut buf = Vec::new();
        for s in batch {
            let req = Request {
                id: &s.id,
                task,
                tokens: s.tokens.iter().map(|t| t.surface.as_str()).collect(),
            };
            serde_json::to_writer(&mut buf, &req).expect("request serializes");
            buf.push(b'\n');
        }
        buf.push(b'\n');
        stdin
            .write_all(&buf)
            .and_then(|_| stdin.flush())
            .map_err(|e| Error::Annotator(format!("{}: write failed: {e}", self.program)))
    }

    fn unanswered(&self, batch: &[Sentence], responses: &[Option<RawResponse>], what: &str) -> Error {
        let missing: Vec<&str> = batch
            .iter()
            .zip(responses)
            .filter(|(_, r)| r.is_none())
            .map(|(s, _)| s.id.as_str())
            .collect();
        Error::Protocol {
            id: missing.first().map(|id| id.to_string()),
            message: format!(
                "{} {what} before answering {} of {} requests; batch [{}]",
                self.program,
                missing.len(),
                batch.len(),
                batch.iter().map(|s| s.id.as_str()).collect::<Vec<_>>().join(", ")
            ),
        }
    }

    /// Closes stdin and waits for the process to exit.
    pub fn finish(mut self) -> Result<()> {
        drop(self.stdin.take());
        let status = self
            .child
            .wait()
            .map_err(|e| Error::Annotator(format!("{}: {e}", self.program)))?;
        if !status.success() {
            log::warn!("annotator {} exited with {status}", self.program);
        }
        Ok(())
    }
}

impl Drop for ExternalAnnotator {
    fn drop(&mut self) {
        if self.stdin.is_some() {
            drop(self.stdin.take());
            let _ = self.child.kill();
            let _ = self.child.wait();
        }
    }
}

fn parse_response(line: &str, task: Task) -> Result<(String, RawResponse)> {
    let value: Value = serde_json::from_str(line).map_err(|e| Error::Protocol {
        id: None,
        message: format!("unreadable response {line:?}: {e}"),
    })?;
    let id = value.get("id").and_then(Value::as_str).map(str::to_string);
    if let Some(err) = value.get("error") {
        return Err(Error::Protocol {
            id,
            message: format!("annotator reported error: {err}"),
        });
    }
    let id = id.ok_or_else(|| Error::Protocol {
        id: None,
        message: format!("response without a string id: {line:?}"),
    })?;
    let bad = |message: String| Error::Protocol {
        id: Some(id.clone()),
        message,
    };
    let payload = match task {
        Task::Metaphor => {
            let labels = value
                .get("labels")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("metaphor response without labels".into()))?;
            let labels = labels
                .iter()
                .map(|l| match l.as_u64() {
                    Some(0) => Ok(0u8),
                    Some(1) => Ok(1u8),
                    _ => Err(bad(format!("label {l} is not 0 or 1"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            RawResponse::Labels(labels)
        }
        Task::Sentiment => {
            let text = value
                .get("sentiment")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("sentiment response without sentiment".into()))?;
            RawResponse::Sentiment(text.parse().map_err(|_| bad(format!("unknown sentiment {text:?}")))?)
        }
    };
    Ok((id, payload))
}

fn run_worker(spec: &AnnotatorSpec, task: Task, sentences: &[Sentence]) -> Result<Vec<RawResponse>> {
    let mut annotator = ExternalAnnotator::spawn(spec)?;
    let mut out = Vec::with_capacity(sentences.len());
    for batch in sentences.chunks(spec.batch_size.max(1)) {
        out.extend(annotator.annotate_batch(task, batch)?);
    }
    annotator.finish()?;
    Ok(out)
}

/// Annotates `sentences` through the external command in `spec`, splitting
/// the input into `spec.workers` contiguous ranges with one subprocess each.
/// Responses come back in input order.
pub fn run_external_annotator(sentences: &[Sentence], spec: &AnnotatorSpec, task: Task) -> Result<Vec<RawResponse>> {
    if sentences.is_empty() {
        return Ok(Vec::new());
    }
    let workers = spec.workers.clamp(1, sentences.len());
    if workers == 1 {
        return run_worker(spec, task, sentences);
    }
    let chunk = sentences.len().div_ceil(workers);
    let results: Vec<Result<Vec<RawResponse>>> = thread::scope(|scope| {
        let handles: Vec<_> = sentences
            .chunks(chunk)
            .map(|range| scope.spawn(move || run_worker(spec, task, range)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Annotator("worker panicked".into()))))
            .collect()
    });
    let mut out = Vec::with_capacity(sentences.len());
    for part in results {
        out.extend(part?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_wire_format() {
        let req = Request {
            id: "s1",
            task: Task::Metaphor,
            tokens: vec!["I", "win"],
        };
        assert_eq!(
            serde_json::to_string(&req).unwrap(),
            r#"{"id":"s1","task":"metaphor","tokens":["I","win"]}"#
        );
    }

    #[test]
    fn response_parsing() {
        let (id, r) = parse_response(r#"{"id":"s1","labels":[0,1]}"#, Task::Metaphor).unwrap();
        assert_eq!(id, "s1");
        assert_eq!(r, RawResponse::Labels(vec![0, 1]));
        let (_, r) = parse_response(r#"{"id":"s1","sentiment":"negative"}"#, Task::Sentiment).unwrap();
        assert_eq!(r, RawResponse::Sentiment(Sentiment::Negative));
        assert!(parse_response(r#"{"id":"s1","labels":[0,2]}"#, Task::Metaphor).is_err());
        assert!(parse_response(r#"{"id":null,"error":"bad json"}"#, Task::Metaphor).is_err());
        assert!(parse_response(r#"{"labels":[0]}"#, Task::Metaphor).is_err());
        assert!(parse_response(r#"{"id":"x","sentiment":"meh"}"#, Task::Sentiment).is_err());
        assert!(parse_response("not json", Task::Sentiment).is_err());
    }
}
