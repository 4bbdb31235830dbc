//! Preprocessing and evaluation toolkit for Arabic sarcasm and sentiment
//! detection on tweets.
//!
//! The pipeline runs `normalize → segment → split → train → evaluate`:
//!
//! - [`normalizer`] cleans raw tweets (markup, emoji, elongation, entity
//!   placeholders, digit/letter boundaries, whitespace).
//! - [`segmenter`] splits Arabic clitics into `+`-marked tokens.
//! - [`dataset`] loads labelled CSV/JSONL data and builds stratified splits.
//! - [`metrics`] computes per-class and aggregate scores plus the two official
//!   shared-task metrics.
//! - [`baseline`] is a hashed n-gram logistic regression used in place of a
//!   fine-tuned transformer.
//! - [`cli`] wires everything into batch commands.

pub mod baseline;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod metrics;
pub mod normalizer;
pub mod script;
pub mod segmenter;

pub use error::{Error, Result};
