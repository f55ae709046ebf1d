//! Building blocks for phrase-based SMT experiments: corpus preparation,
//! word-alignment symmetrization, n-gram language models, automatic
//! evaluation metrics and the statistics used to compare systems.
//!
//! Every module is pure and deterministic; the `mtkit` binary in the
//! `mtkit-cli` crate wires them together.

pub mod alignment;
pub mod lm;
pub mod metrics;
pub mod stats;
pub mod text;

pub use alignment::{AlignmentPoint, DirectedAlignment, Orientation, SymmetrizationHeuristic};
pub use lm::{InterpolatedModel, LanguageModel, NGramModel, Smoothing};
pub use metrics::{Band, BleuReport, EvalPair, MeteorReport, Metric, NistReport, TerReport};
pub use stats::{IccReport, ScoreTable, SignificanceReport};
pub use text::{RawLine, SentencePair, TokenizedSentence};
