//! Corpus pipeline for testing claims about verb metaphors.
//!
//! The crate is organised by pipeline stage:
//!
//! - [`corpus`]: sentence ingestion (CoNLL-U or plain text), lemmatization,
//!   verb-object extraction, subject-person classification and
//!   length-matched sampling.
//! - [`annotate`]: metaphor and sentiment annotators (lexicon baselines or an
//!   external subprocess speaking a JSON Lines protocol), annotation caching
//!   and annotator evaluation.
//! - [`norms`]: concreteness, imageability and familiarity tables.
//! - [`stats`]: exact binomial test, permutation test, bootstrap intervals and
//!   Bonferroni correction.
//! - [`analysis`]: pair aggregation, verb selection, per-verb summaries and
//!   the claim evaluations.
//! - [`report`]: table rendering and run manifests.
//! - [`config`]: the `key = value` pipeline configuration.

pub mod analysis;
pub mod annotate;
pub mod config;
pub mod corpus;
pub mod error;
pub mod io;
pub mod norms;
pub mod report;
pub mod stats;

pub use error::{Error, Result};
