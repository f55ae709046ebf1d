use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{check_pairs, EvalPair, MetricError};
use crate::text::TokenizedSentence;

/// Longest block that may be shifted in one move.
pub const MAX_SHIFT_LENGTH: usize = 10;

/// Edit-distance evaluations allowed for the exact shift search of one
/// candidate/reference pair.
const SEARCH_BUDGET: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerReport {
    pub insertions: u64,
    pub deletions: u64,
    pub substitutions: u64,
    pub shifts: u64,
    pub edits: u64,
    pub reference_length: u64,
    /// `100 * edits / reference_length`.
    pub score: f64,
    /// False when the shift search hit its budget and the reported edits
    /// are an upper bound.
    pub optimal: bool,
}

impl TerReport {
    fn new(ins: u64, del: u64, sub: u64, shifts: u64, reference_length: u64, optimal: bool) -> TerReport {
        let edits = ins + del + sub + shifts;
        TerReport {
            insertions: ins,
            deletions: del,
            substitutions: sub,
            shifts,
            edits,
            reference_length,
            score: 100.0 * edits as f64 / reference_length as f64,
            optimal,
        }
    }
}

/// Word-level Levenshtein distance with unit costs.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// (insertions, deletions, substitutions) of one minimal edit script from
/// `hyp` to `reference`. Ties prefer match/substitution, then deletion.
fn edit_counts(hyp: &[&str], reference: &[&str]) -> (u64, u64, u64) {
    let (n, m) = (hyp.len(), reference.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=m {
        d[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = d[i - 1][j - 1] + usize::from(hyp[i - 1] != reference[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    let (mut ins, mut del, mut sub) = (0, 0, 0);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + usize::from(hyp[i - 1] != reference[j - 1]) {
            sub += u64::from(hyp[i - 1] != reference[j - 1]);
            i -= 1;
            j -= 1;
        } else if i > 0 && d[i][j] == d[i - 1][j] + 1 {
            del += 1;
            i -= 1;
        } else {
            ins += 1;
            j -= 1;
        }
    }
    (ins, del, sub)
}

/// Every sequence reachable from `hyp` by moving one block of up to
/// [`MAX_SHIFT_LENGTH`] tokens that also occurs contiguously in the
/// reference, in a fixed order.
fn shifts_of<'a>(hyp: &[&'a str], blocks: &HashSet<Vec<&str>>) -> Vec<Vec<&'a str>> {
    let n = hyp.len();
    let mut out = Vec::new();
    for start in 0..n {
        for len in 1..=MAX_SHIFT_LENGTH.min(n - start) {
            let block = &hyp[start..start + len];
            if !blocks.contains(block) {
                continue;
            }
            let mut rest: Vec<&str> = Vec::with_capacity(n);
            rest.extend_from_slice(&hyp[..start]);
            rest.extend_from_slice(&hyp[start + len..]);
            for dest in 0..=rest.len() {
                if dest == start {
                    continue;
                }
                let mut moved = Vec::with_capacity(n);
                moved.extend_from_slice(&rest[..dest]);
                moved.extend_from_slice(block);
                moved.extend_from_slice(&rest[dest..]);
                out.push(moved);
            }
        }
    }
    out
}

/// Lower bound on the edit distance of any reordering of `hyp`.
fn bag_distance(hyp: &[&str], reference: &[&str]) -> usize {
    let mut pool: Vec<&str> = reference.to_vec();
    pool.sort_unstable();
    let mut common = 0;
    let mut sorted: Vec<&str> = hyp.to_vec();
    sorted.sort_unstable();
    let (mut i, mut j) = (0, 0);
    while i < sorted.len() && j < pool.len() {
        match sorted[i].cmp(pool[j]) {
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    hyp.len().max(reference.len()) - common
}

struct Best<'a> {
    total: usize,
    shifts: usize,
    seq: Vec<&'a str>,
}

/// Greedy shifting: apply the shift with the largest edit-distance
/// reduction until none reduces it.
fn greedy<'a>(hyp: &[&'a str], reference: &[&str], blocks: &HashSet<Vec<&str>>) -> Best<'a> {
    let mut cur = hyp.to_vec();
    let mut ed = edit_distance(&cur, reference);
    let mut shifts = 0;
    loop {
        let mut pick: Option<(usize, Vec<&str>)> = None;
        for cand in shifts_of(&cur, blocks) {
            let e = edit_distance(&cand, reference);
            if e < ed && pick.as_ref().is_none_or(|(b, _)| e < *b) {
                pick = Some((e, cand));
            }
        }
        match pick {
            Some((e, next)) => {
                cur = next;
                ed = e;
                shifts += 1;
            }
            None => break,
        }
    }
    Best { total: shifts + ed, shifts, seq: cur }
}

fn ter_single(hyp: &TokenizedSentence, reference: &TokenizedSentence) -> TerReport {
    let hyp: Vec<&str> = hyp.iter().map(String::as_str).collect();
    let reference: Vec<&str> = reference.iter().map(String::as_str).collect();
    let mut blocks: HashSet<Vec<&str>> = HashSet::new();
    for len in 1..=MAX_SHIFT_LENGTH.min(reference.len()) {
        for w in reference.windows(len) {
            blocks.insert(w.to_vec());
        }
    }

    // The greedy answer is an upper bound; a breadth-first search over
    // shift sequences then looks for fewer total edits. A state reached
    // with k shifts costs at least k + bag distance, which bounds the depth.
    let mut best = greedy(&hyp, &reference, &blocks);
    let lower = bag_distance(&hyp, &reference);
    let mut optimal = true;
    if best.total > lower {
        let mut seen: HashSet<Vec<&str>> = HashSet::new();
        seen.insert(hyp.clone());
        let mut frontier = vec![hyp.clone()];
        let mut evaluations = 0usize;
        let mut depth = 0usize;
        'search: while !frontier.is_empty() && depth + 1 + lower < best.total {
            let mut next = Vec::new();
            for state in &frontier {
                for cand in shifts_of(state, &blocks) {
                    if seen.contains(&cand) {
                        continue;
                    }
                    evaluations += 1;
                    if evaluations > SEARCH_BUDGET {
                        optimal = false;
                        break 'search;
                    }
                    let total = depth + 1 + edit_distance(&cand, &reference);
                    if total < best.total {
                        best = Best { total, shifts: depth + 1, seq: cand.clone() };
                    }
                    seen.insert(cand.clone());
                    next.push(cand);
                }
            }
            frontier = next;
            depth += 1;
        }
    }

    let (ins, del, sub) = edit_counts(&best.seq, &reference);
    TerReport::new(ins, del, sub, best.shifts as u64, reference.len() as u64, optimal)
}

/// TER against the reference needing the fewest edits (first one on
/// ties), normalized by that reference's length.
pub fn ter(pair: &EvalPair) -> Result<TerReport, MetricError> {
    if let Some(index) = pair.references().iter().position(TokenizedSentence::is_empty) {
        return Err(MetricError::EmptyReference { index });
    }
    let mut best: Option<TerReport> = None;
    for r in pair.references() {
        let rep = ter_single(pair.candidate(), r);
        if best.as_ref().is_none_or(|b| rep.edits < b.edits) {
            best = Some(rep);
        }
    }
    Ok(best.expect("pairs always have a reference"))
}

/// Corpus TER: edit counts and reference lengths summed over pairs.
pub fn ter_corpus(pairs: &[EvalPair]) -> Result<TerReport, MetricError> {
    check_pairs(pairs)?;
    let (mut ins, mut del, mut sub, mut sh, mut len) = (0, 0, 0, 0, 0);
    let mut optimal = true;
    for p in pairs {
        let r = ter(p)?;
        ins += r.insertions;
        del += r.deletions;
        sub += r.substitutions;
        sh += r.shifts;
        len += r.reference_length;
        optimal &= r.optimal;
    }
    Ok(TerReport::new(ins, del, sub, sh, len, optimal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(c: &str, r: &[&str]) -> EvalPair {
        EvalPair::from_strs(c, r).unwrap()
    }

    #[test]
    fn identity_is_zero() {
        let r = ter(&pair("a b c", &["a b c"])).unwrap();
        assert_eq!((r.edits, r.score), (0, 0.0));
    }

    #[test]
    fn single_block_shift() {
        let r = ter(&pair("c d a b", &["a b c d"])).unwrap();
        assert_eq!((r.shifts, r.edits, r.score), (1, 1, 25.0));
    }

    #[test]
    fn substitution_counts() {
        let r = ter(&pair("national and multilateral levels", &["national and international levels"])).unwrap();
        assert_eq!((r.substitutions, r.insertions, r.deletions, r.shifts), (1, 0, 0, 0));
        assert_eq!(r.score, 25.0);
    }

    #[test]
    fn insertions_and_deletions() {
        let r = ter(&pair("a b", &["a b c d"])).unwrap();
        assert_eq!((r.insertions, r.deletions, r.edits), (2, 0, 2));
        let r = ter(&pair("a b c d", &["a b"])).unwrap();
        assert_eq!((r.insertions, r.deletions, r.edits), (0, 2, 2));
        assert_eq!(r.score, 100.0);
        let r = ter(&pair("", &["a b"])).unwrap();
        assert_eq!(r.insertions, 2);
    }

    #[test]
    fn multi_reference_takes_fewest_edits() {
        let r = ter(&pair("a b c", &["x y z w", "a b d"])).unwrap();
        assert_eq!((r.edits, r.reference_length), (1, 3));
    }

    #[test]
    fn empty_reference_is_an_error() {
        assert_eq!(ter(&pair("a", &["a", ""])), Err(MetricError::EmptyReference { index: 1 }));
    }

    #[test]
    fn edit_distance_basics() {
        assert_eq!(edit_distance(&["a", "b"], &["a", "b"]), 0);
        assert_eq!(edit_distance(&["a"], &[] as &[&str]), 1);
        assert_eq!(edit_distance(&["k", "i", "t"], &["s", "i", "t", "s"]), 2);
    }

    #[test]
    fn corpus_pools_edits() {
        let r = ter_corpus(&[pair("a b", &["a b"]), pair("a x", &["a b"])]).unwrap();
        assert_eq!((r.edits, r.reference_length, r.score), (1, 4, 25.0));
    }
}
