//! Automatic MT evaluation: BLEU, NIST, METEOR (exact matching only) and
//! TER, plus the 0-100 normalization and interpretability bands used to
//! report them side by side.

mod bleu;
mod meteor;
mod nist;
mod ter;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::TokenizedSentence;

pub use bleu::{bleu, BleuConfig, BleuLevel, BleuReport, SENTENCE_EPSILON};
pub use meteor::{meteor, meteor_corpus, MeteorReport};
pub use nist::{nist, nist_beta, NistReport, NIST_DEFAULT_ORDER};
pub use ter::{edit_distance, ter, ter_corpus, TerReport, MAX_SHIFT_LENGTH};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("no sentence pairs to score")]
    EmptyInput,
    #[error("a pair needs at least one reference")]
    NoReferences,
    #[error("reference {index} is empty")]
    EmptyReference { index: usize },
    #[error("n-gram order must be at least 1")]
    InvalidOrder,
    #[error("invalid n-gram weights: {0}")]
    InvalidWeights(String),
    #[error("{metric} value {value} is outside its range")]
    RangeError { metric: String, value: f64 },
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
}

/// One candidate translation with its references.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalPair {
    candidate: TokenizedSentence,
    references: Vec<TokenizedSentence>,
}

impl EvalPair {
    pub fn new(candidate: TokenizedSentence, references: Vec<TokenizedSentence>) -> Result<Self, MetricError> {
        if references.is_empty() {
            return Err(MetricError::NoReferences);
        }
        Ok(EvalPair { candidate, references })
    }

    /// Whitespace-split convenience constructor, mostly for tests.
    pub fn from_strs(candidate: &str, references: &[&str]) -> Result<Self, MetricError> {
        EvalPair::new(
            TokenizedSentence::from_whitespace(candidate),
            references.iter().map(|r| TokenizedSentence::from_whitespace(r)).collect(),
        )
    }

    pub fn candidate(&self) -> &TokenizedSentence {
        &self.candidate
    }

    pub fn references(&self) -> &[TokenizedSentence] {
        &self.references
    }

    pub fn to_lowercase(&self) -> EvalPair {
        EvalPair {
            candidate: self.candidate.to_lowercase(),
            references: self.references.iter().map(TokenizedSentence::to_lowercase).collect(),
        }
    }
}

/// Counts of every n-gram of exactly length `n`.
pub(crate) fn ngram_counts(tokens: &[String], n: usize) -> BTreeMap<&[String], u32> {
    let mut out = BTreeMap::new();
    if n > 0 && tokens.len() >= n {
        for g in tokens.windows(n) {
            *out.entry(g).or_insert(0) += 1;
        }
    }
    out
}

/// For each n-gram, the largest count it has in any single reference.
pub(crate) fn max_reference_counts<'a>(references: &'a [TokenizedSentence], n: usize) -> BTreeMap<&'a [String], u32> {
    let mut out: BTreeMap<&[String], u32> = BTreeMap::new();
    for r in references {
        for (g, c) in ngram_counts(r.tokens(), n) {
            let e = out.entry(g).or_insert(0);
            *e = (*e).max(c);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Bleu,
    Nist,
    Meteor,
    Ter,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Bleu, Metric::Nist, Metric::Meteor, Metric::Ter];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Bleu => "bleu",
            Metric::Nist => "nist",
            Metric::Meteor => "meteor",
            Metric::Ter => "ter",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| MetricError::UnknownMetric(s.to_owned()))
    }
}

/// Upper end of the raw NIST range used for normalization.
pub const NIST_MAX: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedScore {
    pub metric: Metric,
    pub raw: f64,
    pub normalized: f64,
}

/// Maps a raw score onto 0-100, higher is better.
///
/// BLEU and METEOR (native 0-1) are multiplied by 100, NIST (0-15) by
/// 100/15, and TER (an edit rate in percent) becomes `100 - TER`, clamped at
/// 0 for rates above 100.
pub fn normalize_score(metric: Metric, raw: f64) -> Result<NormalizedScore, MetricError> {
    let out_of_range = || MetricError::RangeError { metric: metric.to_string(), value: raw };
    if !raw.is_finite() || raw < 0.0 {
        return Err(out_of_range());
    }
    let normalized = match metric {
        Metric::Bleu | Metric::Meteor if raw <= 1.0 => raw * 100.0,
        Metric::Nist if raw <= NIST_MAX => raw * 100.0 / NIST_MAX,
        Metric::Ter => (100.0 - raw).clamp(0.0, 100.0),
        _ => return Err(out_of_range()),
    };
    Ok(NormalizedScore { metric, raw, normalized })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Band {
    Unsatisfactory,
    Rough,
    Understandable,
    GoodFluent,
}

impl Band {
    pub fn name(self) -> &'static str {
        match self {
            Band::Unsatisfactory => "Unsatisfactory",
            Band::Rough => "Rough",
            Band::Understandable => "Understandable",
            Band::GoodFluent => "GoodFluent",
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Below 15 unsatisfactory, 15 to 30 rough, above 30 up to 50
/// understandable, above 50 good and fluent.
pub fn interpretability_band(score: f64) -> Result<Band, MetricError> {
    if !(0.0..=100.0).contains(&score) {
        return Err(MetricError::RangeError { metric: "normalized score".into(), value: score });
    }
    Ok(if score < 15.0 {
        Band::Unsatisfactory
    } else if score <= 30.0 {
        Band::Rough
    } else if score <= 50.0 {
        Band::Understandable
    } else {
        Band::GoodFluent
    })
}

pub(crate) fn check_pairs(pairs: &[EvalPair]) -> Result<(), MetricError> {
    if pairs.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_examples() {
        assert!((normalize_score(Metric::Ter, 23.60).unwrap().normalized - 76.40).abs() < 1e-9);
        assert_eq!(normalize_score(Metric::Nist, 15.0).unwrap().normalized, 100.0);
        assert!((normalize_score(Metric::Bleu, 0.7697).unwrap().normalized - 76.97).abs() < 1e-9);
        assert_eq!(normalize_score(Metric::Ter, 130.0).unwrap().normalized, 0.0);
    }

    #[test]
    fn normalization_range_errors() {
        assert!(normalize_score(Metric::Bleu, 1.01).is_err());
        assert!(normalize_score(Metric::Meteor, -0.1).is_err());
        assert!(normalize_score(Metric::Nist, 15.5).is_err());
        assert!(normalize_score(Metric::Ter, -1.0).is_err());
        assert!(normalize_score(Metric::Ter, f64::NAN).is_err());
    }

    #[test]
    fn band_examples_and_edges() {
        assert_eq!(interpretability_band(10.0).unwrap(), Band::Unsatisfactory);
        assert_eq!(interpretability_band(40.0).unwrap(), Band::Understandable);
        assert_eq!(interpretability_band(70.15).unwrap(), Band::GoodFluent);
        assert_eq!(interpretability_band(15.0).unwrap(), Band::Rough);
        assert_eq!(interpretability_band(30.0).unwrap(), Band::Rough);
        assert_eq!(interpretability_band(50.0).unwrap(), Band::Understandable);
        assert_eq!(interpretability_band(0.0).unwrap(), Band::Unsatisfactory);
        assert_eq!(interpretability_band(100.0).unwrap(), Band::GoodFluent);
        assert!(interpretability_band(100.5).is_err());
        assert!(interpretability_band(-0.5).is_err());
    }

    #[test]
    fn metric_names_parse() {
        for m in Metric::ALL {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
        assert!("rouge".parse::<Metric>().is_err());
    }

    #[test]
    fn pair_needs_reference() {
        assert_eq!(EvalPair::from_strs("a", &[]), Err(MetricError::NoReferences));
    }
}
