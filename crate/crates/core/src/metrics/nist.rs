use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_pairs, max_reference_counts, ngram_counts, EvalPair, MetricError};

pub const NIST_DEFAULT_ORDER: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NistReport {
    pub score: f64,
    /// Information-weighted precision per order, before the brevity factor.
    pub per_order: Vec<f64>,
    pub brevity_penalty: f64,
    pub candidate_length: u64,
    /// Sum over pairs of the mean reference length.
    pub reference_length: f64,
    pub max_order: usize,
}

/// `beta` such that the brevity factor is exactly 0.5 at a length ratio of 2/3.
pub fn nist_beta() -> f64 {
    0.5f64.ln() / (2.0f64 / 3.0).ln().powi(2)
}

pub(crate) fn nist_brevity(c: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 1.0;
    }
    let ratio = (c / r).min(1.0);
    if ratio <= 0.0 {
        return 0.0;
    }
    (nist_beta() * ratio.ln().powi(2)).exp()
}

/// NIST: information-weighted n-gram matches, summed (not multiplied) over
/// orders `1..=max_order`.
///
/// `info(w_1..w_n) = log2(count(w_1..w_{n-1}) / count(w_1..w_n))` with counts
/// taken over every reference of every pair; the empty prefix counts all
/// reference tokens. Candidate n-gram matches are clipped by the largest
/// count in a single reference.
pub fn nist(pairs: &[EvalPair], max_order: usize) -> Result<NistReport, MetricError> {
    check_pairs(pairs)?;
    if max_order == 0 {
        return Err(MetricError::InvalidOrder);
    }

    let mut ref_counts: BTreeMap<&[String], u64> = BTreeMap::new();
    let mut ref_tokens = 0u64;
    for p in pairs {
        for r in p.references() {
            ref_tokens += r.len() as u64;
            for n in 1..=max_order {
                for (g, c) in ngram_counts(r.tokens(), n) {
                    *ref_counts.entry(g).or_insert(0) += u64::from(c);
                }
            }
        }
    }
    let info = |g: &[String]| -> f64 {
        let prefix = if g.len() == 1 { ref_tokens } else { ref_counts[&g[..g.len() - 1]] };
        (prefix as f64 / ref_counts[g] as f64).log2()
    };

    let mut gained = vec![0.0; max_order];
    let mut totals = vec![0u64; max_order];
    let mut c = 0u64;
    let mut r = 0.0;
    for p in pairs {
        let cand = p.candidate().tokens();
        c += cand.len() as u64;
        r += p.references().iter().map(|x| x.len() as f64).sum::<f64>() / p.references().len() as f64;
        for n in 1..=max_order {
            let refs = max_reference_counts(p.references(), n);
            for (g, k) in ngram_counts(cand, n) {
                totals[n - 1] += u64::from(k);
                if let Some(&rc) = refs.get(g) {
                    gained[n - 1] += f64::from(k.min(rc)) * info(g);
                }
            }
        }
    }

    let per_order: Vec<f64> =
        gained.iter().zip(&totals).map(|(g, &t)| if t == 0 { 0.0 } else { g / t as f64 }).collect();
    let brevity_penalty = nist_brevity(c as f64, r);
    let score = per_order.iter().sum::<f64>() * brevity_penalty;
    Ok(NistReport { score, per_order, brevity_penalty, candidate_length: c, reference_length: r, max_order })
}
