use serde::{Deserialize, Serialize};

use super::{check_pairs, max_reference_counts, ngram_counts, EvalPair, MetricError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BleuLevel {
    /// n-gram statistics pooled over all pairs.
    #[default]
    Corpus,
    /// Smoothed per-sentence scores combined by geometric mean.
    SentenceGeometric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BleuConfig {
    pub max_order: usize,
    /// Uniform `1/N` when absent.
    pub weights: Option<Vec<f64>>,
    pub level: BleuLevel,
    pub lowercase: bool,
}

impl Default for BleuConfig {
    fn default() -> Self {
        BleuConfig { max_order: 4, weights: None, level: BleuLevel::Corpus, lowercase: false }
    }
}

impl BleuConfig {
    fn resolved_weights(&self) -> Result<Vec<f64>, MetricError> {
        if self.max_order == 0 {
            return Err(MetricError::InvalidOrder);
        }
        let w = match &self.weights {
            None => vec![1.0 / self.max_order as f64; self.max_order],
            Some(w) => w.clone(),
        };
        if w.len() != self.max_order {
            return Err(MetricError::InvalidWeights(format!("{} weights for order {}", w.len(), self.max_order)));
        }
        if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(MetricError::InvalidWeights("weights must be non-negative".into()));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(MetricError::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    /// In `[0, 1]`.
    pub score: f64,
    pub precisions: Vec<f64>,
    /// Clipped matches and candidate n-gram totals behind each precision.
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub weights: Vec<f64>,
    pub brevity_penalty: f64,
    pub candidate_length: u64,
    pub effective_reference_length: u64,
    pub max_order: usize,
    pub level: BleuLevel,
}

/// Added to a zero numerator in the sentence-level variant.
pub const SENTENCE_EPSILON: f64 = 0.1;

struct Stats {
    matches: Vec<u64>,
    totals: Vec<u64>,
    c: u64,
    r: u64,
}

fn pair_stats(pair: &EvalPair, max_order: usize) -> Stats {
    let cand = pair.candidate().tokens();
    let mut matches = vec![0; max_order];
    let mut totals = vec![0; max_order];
    for n in 1..=max_order {
        let refs = max_reference_counts(pair.references(), n);
        for (g, c) in ngram_counts(cand, n) {
            matches[n - 1] += u64::from(c.min(refs.get(g).copied().unwrap_or(0)));
            totals[n - 1] += u64::from(c);
        }
    }
    let c = cand.len() as u64;
    // closest reference length, shorter on ties
    let r = pair
        .references()
        .iter()
        .map(|r| r.len() as u64)
        .min_by_key(|&len| (len.abs_diff(c), len))
        .unwrap_or(0);
    Stats { matches, totals, c, r }
}

fn brevity(c: u64, r: u64) -> f64 {
    if c == 0 {
        0.0
    } else if c > r {
        1.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    }
}

/// BLEU with clipped n-gram precisions and the closest-reference-length
/// brevity penalty.
///
/// At corpus level any zero precision makes the score 0. At sentence level
/// each zero numerator is replaced by [`SENTENCE_EPSILON`] (over a
/// denominator of at least 1) and the reported precisions and brevity
/// penalty are geometric means across sentences, so that the score still
/// equals `BP * exp(sum w_n ln p_n)`.
pub fn bleu(pairs: &[EvalPair], config: &BleuConfig) -> Result<BleuReport, MetricError> {
    check_pairs(pairs)?;
    let weights = config.resolved_weights()?;
    let n = config.max_order;
    let lowered;
    let pairs = if config.lowercase {
        lowered = pairs.iter().map(EvalPair::to_lowercase).collect::<Vec<_>>();
        &lowered[..]
    } else {
        pairs
    };
    let stats: Vec<Stats> = pairs.iter().map(|p| pair_stats(p, n)).collect();

    let mut matches = vec![0u64; n];
    let mut totals = vec![0u64; n];
    let (mut c, mut r) = (0u64, 0u64);
    for s in &stats {
        for k in 0..n {
            matches[k] += s.matches[k];
            totals[k] += s.totals[k];
        }
        c += s.c;
        r += s.r;
    }

    let (precisions, brevity_penalty, score) = match config.level {
        BleuLevel::Corpus => {
            let precisions: Vec<f64> =
                (0..n).map(|k| if totals[k] == 0 { 0.0 } else { matches[k] as f64 / totals[k] as f64 }).collect();
            let bp = brevity(c, r);
            let score = if precisions.iter().any(|&p| p == 0.0) || bp == 0.0 {
                0.0
            } else {
                bp * weights.iter().zip(&precisions).map(|(w, p)| w * p.ln()).sum::<f64>().exp()
            };
            (precisions, bp, score)
        }
        BleuLevel::SentenceGeometric => {
            let mut log_p = vec![0.0; n];
            let mut log_bp = 0.0;
            for s in &stats {
                for k in 0..n {
                    let num = if s.matches[k] == 0 { SENTENCE_EPSILON } else { s.matches[k] as f64 };
                    log_p[k] += (num / s.totals[k].max(1) as f64).ln();
                }
                log_bp += brevity(s.c, s.r).ln();
            }
            let m = stats.len() as f64;
            let precisions: Vec<f64> = log_p.iter().map(|l| (l / m).exp()).collect();
            let bp = (log_bp / m).exp();
            let score = if bp == 0.0 {
                0.0
            } else {
                (log_bp / m + weights.iter().zip(&log_p).map(|(w, l)| w * l / m).sum::<f64>()).exp()
            };
            (precisions, bp, score)
        }
    };

    Ok(BleuReport {
        score: score.min(1.0),
        precisions,
        matches,
        totals,
        weights,
        brevity_penalty,
        candidate_length: c,
        effective_reference_length: r,
        max_order: n,
        level: config.level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(c: &str, r: &[&str]) -> EvalPair {
        EvalPair::from_strs(c, r).unwrap()
    }

    #[test]
    fn identity_scores_one() {
        let p = vec![pair("the cat sat on the mat", &["the cat sat on the mat"]), pair("a b c d", &["a b c d"])];
        for level in [BleuLevel::Corpus, BleuLevel::SentenceGeometric] {
            let r = bleu(&p, &BleuConfig { level, ..Default::default() }).unwrap();
            assert_eq!(r.score, 1.0);
            assert_eq!(r.brevity_penalty, 1.0);
            assert!(r.precisions.iter().all(|&x| x == 1.0));
        }
    }

    #[test]
    fn clipping_example() {
        let p = pair("the the the the the the the", &["the cat is on the mat", "there is a cat on the mat"]);
        let r = bleu(&[p], &BleuConfig::default()).unwrap();
        assert_eq!((r.matches[0], r.totals[0]), (2, 7));
        assert_eq!(r.precisions[0], 2.0 / 7.0);
        assert_eq!(r.score, 0.0);
    }

    #[test]
    fn brevity_example() {
        let p = pair("a b c d e", &["a b c d e f g h i j"]);
        let r = bleu(&[p], &BleuConfig { max_order: 1, ..Default::default() }).unwrap();
        assert_eq!(r.precisions, vec![1.0]);
        assert!((r.score - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn closest_reference_ties_to_shorter() {
        let p = pair("a b c d", &["a b c d e f", "a b"]);
        assert_eq!(bleu(&[p], &BleuConfig::default()).unwrap().effective_reference_length, 2);
    }

    #[test]
    fn disjoint_vocabulary_is_zero() {
        let r = bleu(&[pair("x y z w", &["a b c d"])], &BleuConfig::default()).unwrap();
        assert_eq!(r.score, 0.0);
    }

    #[test]
    fn sentence_level_smooths_zero_counts() {
        let p = pair("a b x y", &["a b c d"]);
        let corpus = bleu(&[p.clone()], &BleuConfig::default()).unwrap();
        let sent = bleu(&[p], &BleuConfig { level: BleuLevel::SentenceGeometric, ..Default::default() }).unwrap();
        assert_eq!(corpus.score, 0.0);
        // p1 = 2/4, p2 = 1/3, p3 = 0.1/2, p4 = 0.1/1
        let expected = ((0.5f64).ln() + (1.0f64 / 3.0).ln() + (0.05f64).ln() + (0.1f64).ln()) / 4.0;
        assert!((sent.score - expected.exp()).abs() < 1e-12);
    }

    #[test]
    fn lowercase_flag() {
        let p = pair("The Cat", &["the cat"]);
        let cs = bleu(&[p.clone()], &BleuConfig { max_order: 2, ..Default::default() }).unwrap();
        let ci = bleu(&[p], &BleuConfig { max_order: 2, lowercase: true, ..Default::default() }).unwrap();
        assert_eq!(cs.score, 0.0);
        assert_eq!(ci.score, 1.0);
    }

    #[test]
    fn config_validation() {
        let p = vec![pair("a", &["a"])];
        assert!(bleu(&[], &BleuConfig::default()).is_err());
        assert!(bleu(&p, &BleuConfig { max_order: 0, ..Default::default() }).is_err());
        assert!(bleu(&p, &BleuConfig { weights: Some(vec![0.5, 0.5]), ..Default::default() }).is_err());
        assert!(bleu(&p, &BleuConfig { max_order: 2, weights: Some(vec![1.5, -0.5]), ..Default::default() }).is_err());
        assert!(bleu(&p, &BleuConfig { max_order: 2, weights: Some(vec![1.0, 0.0]), ..Default::default() }).is_ok());
    }
}
