//! Auditing toolkit for minimal-pair acceptability benchmarks.
//!
//! The crate bundles everything needed to pit language-model scores against
//! deliberately non-structural baselines:
//!
//! * [`dataio`] ingests BLiMP, Zorro and LI-Adger into [`MinimalPair`]s.
//! * [`postag`] is an averaged-perceptron tagger feeding tag-level models.
//! * [`ngram`] trains word/tag n-gram models and scores sentences (LL, SLOR).
//! * [`rules`] is a small DSL for surface-pattern rules plus builtin rulepacks.
//! * [`eval`] runs forced-choice evaluation, pair-level oracles and summaries.
//! * [`gradient`] z-scores judgments and measures within-type variability and
//!   cross-scorer correlation against human judgments.

pub mod dataio;
pub mod error;
pub mod eval;
pub mod gradient;
pub mod ngram;
pub mod postag;
pub mod reference;
pub mod rules;
pub mod scorefile;
pub mod text;

pub use dataio::{Ingested, MinimalPair, SentenceType, Source, TrainingCorpus};
pub use error::{Error, Result};
pub use text::{tokenize, Sentence};
