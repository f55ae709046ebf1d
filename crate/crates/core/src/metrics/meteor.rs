use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_pairs, EvalPair, MetricError};
use crate::text::TokenizedSentence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeteorReport {
    pub matches: u64,
    pub chunks: u64,
    pub precision: f64,
    pub recall: f64,
    pub fmean: f64,
    pub penalty: f64,
    pub score: f64,
    pub candidate_length: u64,
    pub reference_length: u64,
}

impl MeteorReport {
    fn from_counts(m: u64, ch: u64, cand_len: u64, ref_len: u64) -> MeteorReport {
        let (precision, recall, fmean, penalty) = if m == 0 {
            (0.0, 0.0, 0.0, 0.0)
        } else {
            let p = m as f64 / cand_len as f64;
            let r = m as f64 / ref_len as f64;
            let frag = ch as f64 / m as f64;
            (p, r, 10.0 * p * r / (r + 9.0 * p), 0.5 * frag.powi(3))
        };
        MeteorReport {
            matches: m,
            chunks: ch,
            precision,
            recall,
            fmean,
            penalty,
            score: fmean * (1.0 - penalty),
            candidate_length: cand_len,
            reference_length: ref_len,
        }
    }
}

/// Node budget for the chunk-minimizing search; beyond it the best
/// alignment found so far is used.
const SEARCH_BUDGET: u64 = 200_000;

struct Search<'a> {
    cand: &'a [String],
    /// Unused reference positions per token type.
    free: BTreeMap<&'a str, Vec<usize>>,
    /// Candidate occurrences per type that may stay unmatched.
    skips: BTreeMap<&'a str, usize>,
    used: Vec<bool>,
    best: u64,
    nodes: u64,
}

impl Search<'_> {
    /// `prev` is the reference position matched by the previous candidate
    /// token, if that token was matched.
    fn run(&mut self, i: usize, prev: Option<usize>, chunks: u64) {
        self.nodes += 1;
        if chunks >= self.best || self.nodes > SEARCH_BUDGET {
            return;
        }
        if i == self.cand.len() {
            self.best = chunks;
            return;
        }
        let tok = self.cand[i].as_str();
        let positions = self.free.get(tok).cloned().unwrap_or_default();
        // continuing the current chunk first finds good bounds early
        let mut order: Vec<usize> = positions.into_iter().filter(|&j| !self.used[j]).collect();
        if let Some(p) = prev {
            if let Some(k) = order.iter().position(|&j| j == p + 1) {
                let j = order.remove(k);
                order.insert(0, j);
            }
        }
        let can_skip = self.skips.get(tok).copied().unwrap_or(0) > 0;
        for j in order {
            self.used[j] = true;
            let extends = prev.is_some_and(|p| p + 1 == j);
            self.run(i + 1, Some(j), chunks + u64::from(!extends));
            self.used[j] = false;
        }
        if can_skip || !self.free.contains_key(tok) {
            if let Some(s) = self.skips.get_mut(tok) {
                *s -= 1;
            }
            self.run(i + 1, None, chunks);
            if let Some(s) = self.skips.get_mut(tok) {
                *s += 1;
            }
        }
    }
}

/// Maximum number of exact matches, and the fewest chunks any
/// maximum-match alignment can have.
pub(crate) fn align(cand: &[String], reference: &[String]) -> (u64, u64) {
    let mut free: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (j, t) in reference.iter().enumerate() {
        free.entry(t.as_str()).or_default().push(j);
    }
    let mut cand_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in cand {
        *cand_counts.entry(t.as_str()).or_insert(0) += 1;
    }
    let mut m = 0;
    let mut skips = BTreeMap::new();
    for (&t, &cc) in &cand_counts {
        let rc = free.get(t).map_or(0, Vec::len);
        m += cc.min(rc);
        if rc > 0 {
            skips.insert(t, cc - cc.min(rc));
        }
    }
    if m == 0 {
        return (0, 0);
    }
    let mut s = Search { cand, free, skips, used: vec![false; reference.len()], best: m as u64 + 1, nodes: 0 };
    s.run(0, None, 0);
    (m as u64, s.best.min(m as u64))
}

fn score_one(cand: &TokenizedSentence, reference: &TokenizedSentence) -> MeteorReport {
    let (m, ch) = align(cand.tokens(), reference.tokens());
    MeteorReport::from_counts(m, ch, cand.len() as u64, reference.len() as u64)
}

/// Exact-match METEOR against the best-scoring reference (first one on
/// ties).
pub fn meteor(pair: &EvalPair) -> MeteorReport {
    let mut best: Option<MeteorReport> = None;
    for r in pair.references() {
        let rep = score_one(pair.candidate(), r);
        if best.as_ref().is_none_or(|b| rep.score > b.score) {
            best = Some(rep);
        }
    }
    best.expect("pairs always have a reference")
}

/// Corpus METEOR: matches, chunks and lengths of each pair's best reference
/// are summed before the formula is applied once.
pub fn meteor_corpus(pairs: &[EvalPair]) -> Result<MeteorReport, MetricError> {
    check_pairs(pairs)?;
    let (mut m, mut ch, mut c, mut r) = (0, 0, 0, 0);
    for p in pairs {
        let rep = meteor(p);
        m += rep.matches;
        ch += rep.chunks;
        c += rep.candidate_length;
        r += rep.reference_length;
    }
    Ok(MeteorReport::from_counts(m, ch, c, r))
}
