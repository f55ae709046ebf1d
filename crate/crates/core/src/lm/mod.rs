//! Smoothed n-gram language models.
//!
//! Sentences are padded with `order - 1` begin markers and one end marker.
//! The predictable vocabulary is every token seen in training plus `</s>`
//! and a single `<unk>` type; `<s>` only ever appears in histories.

mod counts;
mod mix;
mod model;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::text::TokenizedSentence;

pub use counts::{count_ngrams, CountTable};
pub use mix::{interpolate, tune_weights, InterpolatedModel};
pub use model::{estimate, NGramModel, Smoothing};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

pub const DEFAULT_ORDER: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LmError {
    #[error("model order must be at least 1")]
    InvalidOrder,
    #[error("count table is empty")]
    EmptyTable,
    #[error("evaluation corpus is empty")]
    EmptyCorpus,
    #[error("invalid count table: {0}")]
    InvalidCounts(String),
    #[error("invalid interpolation weights: {0}")]
    WeightError(String),
    #[error("grid step must divide 1 evenly, got {0}")]
    InvalidGridStep(f64),
    #[error("model file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Anything that assigns conditional probabilities to tokens.
pub trait LanguageModel {
    fn order(&self) -> usize;

    /// `p(word | history)`. Only the last `order - 1` history tokens are
    /// used; tokens outside the vocabulary are scored as `<unk>`.
    fn prob(&self, history: &[&str], word: &str) -> f64;

    /// Predictable tokens, `<unk>` included.
    fn vocabulary(&self) -> Vec<String>;
}

impl<M: LanguageModel + ?Sized> LanguageModel for &M {
    fn order(&self) -> usize {
        (**self).order()
    }

    fn prob(&self, history: &[&str], word: &str) -> f64 {
        (**self).prob(history, word)
    }

    fn vocabulary(&self) -> Vec<String> {
        (**self).vocabulary()
    }
}

/// Equal probability for each of `size` symbols.
#[derive(Debug, Clone)]
pub struct UniformModel {
    vocabulary: Vec<String>,
}

impl UniformModel {
    pub fn new(vocabulary: Vec<String>) -> Self {
        assert!(!vocabulary.is_empty(), "uniform model needs at least one symbol");
        UniformModel { vocabulary }
    }
}

impl LanguageModel for UniformModel {
    fn order(&self) -> usize {
        1
    }

    fn prob(&self, _history: &[&str], _word: &str) -> f64 {
        1.0 / self.vocabulary.len() as f64
    }

    fn vocabulary(&self) -> Vec<String> {
        self.vocabulary.clone()
    }
}

/// Visits every scored event `(history, word)` of a corpus, end marker
/// included and begin padding excluded.
pub(crate) fn for_each_event<'a, F>(order: usize, corpus: impl IntoIterator<Item = &'a TokenizedSentence>, mut f: F)
where
    F: FnMut(&[&str], &str),
{
    let pad = order.saturating_sub(1);
    for sentence in corpus {
        let mut padded: Vec<&str> = vec![BOS; pad];
        padded.extend(sentence.iter().map(String::as_str));
        padded.push(EOS);
        for i in pad..padded.len() {
            f(&padded[i - pad..i], padded[i]);
        }
    }
}

/// `exp(-(1/N) * sum ln p(w_i | h_i))` over all tokens and end markers.
///
/// Evaluated as `prod_p p^(-c_p / N)` over the distinct probabilities `p`
/// with multiplicities `c_p`, so a model that is constant over the corpus
/// gives exactly `1 / p`.
pub fn perplexity<M: LanguageModel>(model: &M, corpus: &[TokenizedSentence]) -> Result<f64, LmError> {
    if corpus.is_empty() {
        return Err(LmError::EmptyCorpus);
    }
    let mut seen: BTreeMap<u64, u64> = BTreeMap::new();
    let mut n = 0u64;
    for_each_event(model.order(), corpus, |h, w| {
        *seen.entry(model.prob(h, w).to_bits()).or_insert(0) += 1;
        n += 1;
    });
    if seen.len() == 1 {
        let (&bits, _) = seen.iter().next().expect("one entry");
        return Ok(1.0 / f64::from_bits(bits));
    }
    let log_sum: f64 = seen.iter().map(|(&bits, &c)| c as f64 * f64::from_bits(bits).ln()).sum();
    Ok((-log_sum / n as f64).exp())
}
