//! Predicate-frequency bias diagnostics for natural language inference
//! datasets.
//!
//! The crate reads NLI pairs, attaches corpus frequencies to their
//! predicates, measures the frequency bias of each pair, splits datasets by
//! whether the gold label agrees with that bias, scores model predictions on
//! each side of the split, relates frequency to verb hypernymy in WordNet, and
//! renders the fine-tuning and few-shot prompts used to query models.

pub mod bias;
pub mod cli;
pub mod error;
pub mod eval;
pub mod frequency;
pub mod ingest;
pub mod partition;
pub mod prompts;
pub mod report;
pub mod stats;
pub mod wordnet;

pub use error::{Error, Result};
