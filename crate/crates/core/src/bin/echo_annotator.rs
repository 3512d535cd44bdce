//! Deterministic annotator speaking the JSON Lines protocol, used to test the
//! external-annotator client without any model.
//!
//! A token is labelled 1 iff its surface form is in the word list; every
//! sentence gets the configured sentiment. `--fault` injects one protocol
//! violation per batch so client error handling can be exercised.

use std::collections::HashSet;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "metaverify-echo", about = "Echo annotator for protocol tests")]
struct Args {
    /// Comma-separated surface forms labelled metaphorical.
    #[arg(long, value_delimiter = ',', default_value = "")]
    wordlist: Vec<String>,
    /// File with one surface form per line, added to the word list.
    #[arg(long, value_name = "FILE")]
    wordlist_file: Option<PathBuf>,
    /// Sentiment returned for every sentence.
    #[arg(long, default_value = "neutral")]
    sentiment: String,
    /// Answer each batch in reverse request order.
    #[arg(long)]
    reverse: bool,
    #[arg(long, value_enum)]
    fault: Option<Fault>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Fault {
    /// One extra label on the first response.
    BadLength,
    /// The first response is sent again before the rest of the batch.
    Duplicate,
    /// The last response is never sent.
    Drop,
    /// Never answer.
    Hang,
}

fn respond(request: &Value, words: &HashSet<String>, sentiment: &str) -> Value {
    let id = request.get("id").cloned().unwrap_or(Value::Null);
    let tokens: Vec<&str> = request
        .get("tokens")
        .and_then(Value::as_array)
        .map(|t| t.iter().filter_map(Value::as_str).collect())
        .unwrap_or_default();
    match request.get("task").and_then(Value::as_str) {
        Some("metaphor") => {
            let labels: Vec<u8> = tokens.iter().map(|t| u8::from(words.contains(*t))).collect();
            json!({"id": id, "labels": labels})
        }
        Some("sentiment") => json!({"id": id, "sentiment": sentiment}),
        other => json!({"id": id, "error": format!("unknown task {other:?}")}),
    }
}

fn flush_batch(out: &mut impl Write, mut batch: Vec<Value>, args: &Args) -> io::Result<()> {
    if batch.is_empty() {
        return Ok(());
    }
    if args.reverse {
        batch.reverse();
    }
    match args.fault {
        Some(Fault::Hang) => loop {
            std::thread::sleep(Duration::from_secs(3600));
        },
        Some(Fault::BadLength) => {
            if let Some(labels) = batch[0].get_mut("labels").and_then(Value::as_array_mut) {
                labels.push(json!(0));
            }
        }
        Some(Fault::Duplicate) => {
            let first = batch[0].clone();
            batch.insert(1, first);
        }
        Some(Fault::Drop) => {
            batch.pop();
        }
        None => {}
    }
    for response in batch {
        writeln!(out, "{response}")?;
    }
    out.flush()
}

/// Parses one request line, or returns the error response for it.
fn parse_request(line: &str) -> Result<Value, Value> {
    let value: Value = serde_json::from_str(line).map_err(|e| json!({"id": null, "error": e.to_string()}))?;
    let valid = value.get("id").is_some_and(Value::is_string)
        && value.get("tokens").is_some_and(Value::is_array)
        && value.get("task").is_some_and(Value::is_string);
    if valid {
        Ok(value)
    } else {
        Err(json!({"id": null, "error": "request needs string id, task and tokens"}))
    }
}

fn main() -> io::Result<()> {
    let args = Args::parse();
    let mut words: HashSet<String> = args.wordlist.iter().filter(|w| !w.is_empty()).cloned().collect();
    if let Some(path) = &args.wordlist_file {
        for line in std::fs::read_to_string(path)?.lines() {
            let w = line.trim();
            if !w.is_empty() {
                words.insert(w.to_string());
            }
        }
    }
    let stdin = io::stdin();
    let mut out = io::BufWriter::new(io::stdout().lock());
    let mut batch: Vec<Value> = Vec::new();
    for line in stdin.lock().lines() {
        let line = line?;
        if line.trim().is_empty() {
            flush_batch(&mut out, std::mem::take(&mut batch), &args)?;
            continue;
        }
        match parse_request(&line) {
            Ok(request) => batch.push(respond(&request, &words, &args.sentiment)),
            Err(error) => {
                writeln!(out, "{error}")?;
                out.flush()?;
            }
        }
    }
    flush_batch(&mut out, batch, &args)
}
