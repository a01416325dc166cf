//! Sentential paraphrase mining from sentence-aligned parallel corpora.
//!
//! Target-language sentences that share a translation in one or more pivot
//! languages become paraphrase candidates. Candidates are ranked with
//! relative-frequency statistics (conditional and joint probability, PMI,
//! joint probability times PMI, and PMI summed over pivot corpora), a human
//! annotation workflow turns samples into labelled dev/test sets, and an
//! evaluation harness compares the rankings.
//!
//! The modules follow the data flow:
//!
//! * [`bitext`]: parse, normalise and partition aligned lines.
//! * [`stats`]: co-occurrence tables and relative-frequency estimates.
//! * [`scoring`]: the ranking functions.
//! * [`miner`]: candidate enumeration, ranking, quality curves and cut-offs.
//! * [`annotation`]: edit-distance pre-filter, set disjointness, adjudication, export.
//! * [`eval`]: synthetic corpora with planted paraphrases and precision@k reports.
//! * [`service`]: the HTTP backend that hands pairs to annotators.
//! * [`pipeline`]: configuration and stage orchestration used by the CLI.

pub mod annotation;
pub mod bitext;
pub mod config;
pub mod error;
pub mod eval;
pub mod io;
pub mod miner;
pub mod phrase;
pub mod pipeline;
pub mod scoring;
pub mod service;
pub mod stats;

pub use error::{Error, Result};
pub use phrase::{Lang, PairKey, Phrase};

/// Build identifier written into the header of every output file.
pub const BUILD_ID: &str = concat!("paramine ", env!("CARGO_PKG_VERSION"));
