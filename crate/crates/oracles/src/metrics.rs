//! Metric definitions evaluated by direct enumeration.

use std::collections::{BTreeSet, VecDeque};

/// Occurrences of `g` in `s`, by scanning every position.
fn occurrences(s: &[&str], g: &[&str]) -> usize {
    if g.is_empty() || g.len() > s.len() {
        return 0;
    }
    (0..=s.len() - g.len()).filter(|&i| &s[i..i + g.len()] == g).count()
}

/// Clipped matches and candidate n-gram totals for one order, summed over
/// the corpus. Each `(candidate, references)` item is one segment.
pub fn bleu_counts(corpus: &[(Vec<&str>, Vec<Vec<&str>>)], n: usize) -> (u64, u64) {
    let mut matches = 0;
    let mut total = 0;
    for (cand, refs) in corpus {
        if cand.len() < n {
            continue;
        }
        total += (cand.len() + 1 - n) as u64;
        let mut done: Vec<&[&str]> = Vec::new();
        for i in 0..=cand.len() - n {
            let g = &cand[i..i + n];
            if done.contains(&g) {
                continue;
            }
            done.push(g);
            let c = occurrences(cand, g);
            let r = refs.iter().map(|r| occurrences(r, g)).max().unwrap_or(0);
            matches += c.min(r) as u64;
        }
    }
    (matches, total)
}

/// Corpus BLEU with uniform weights, straight from the definition.
pub fn bleu(corpus: &[(Vec<&str>, Vec<Vec<&str>>)], max_order: usize) -> f64 {
    let mut log_sum = 0.0;
    for n in 1..=max_order {
        let (m, t) = bleu_counts(corpus, n);
        if m == 0 {
            return 0.0;
        }
        log_sum += (m as f64 / t as f64).ln() / max_order as f64;
    }
    let c: usize = corpus.iter().map(|(c, _)| c.len()).sum();
    let mut r = 0;
    for (cand, refs) in corpus {
        let mut lens: Vec<usize> = refs.iter().map(Vec::len).collect();
        lens.sort();
        let mut best = lens[0];
        for &l in &lens {
            if l.abs_diff(cand.len()) < best.abs_diff(cand.len()) {
                best = l;
            }
        }
        r += best;
    }
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    bp * log_sum.exp()
}

/// NIST straight from the definition.
pub fn nist(corpus: &[(Vec<&str>, Vec<Vec<&str>>)], max_order: usize) -> f64 {
    let all_refs: Vec<&Vec<&str>> = corpus.iter().flat_map(|(_, rs)| rs.iter()).collect();
    let ref_count = |g: &[&str]| -> f64 {
        if g.is_empty() {
            all_refs.iter().map(|r| r.len()).sum::<usize>() as f64
        } else {
            all_refs.iter().map(|r| occurrences(r, g)).sum::<usize>() as f64
        }
    };
    let mut score = 0.0;
    for n in 1..=max_order {
        let mut gained = 0.0;
        let mut total = 0.0;
        for (cand, refs) in corpus {
            if cand.len() < n {
                continue;
            }
            total += (cand.len() + 1 - n) as f64;
            let mut done: Vec<&[&str]> = Vec::new();
            for i in 0..=cand.len() - n {
                let g = &cand[i..i + n];
                if done.contains(&g) {
                    continue;
                }
                done.push(g);
                let r = refs.iter().map(|r| occurrences(r, g)).max().unwrap_or(0);
                if r > 0 {
                    let info = (ref_count(&g[..n - 1]) / ref_count(g)).log2();
                    gained += occurrences(cand, g).min(r) as f64 * info;
                }
            }
        }
        if total > 0.0 {
            score += gained / total;
        }
    }
    let c: f64 = corpus.iter().map(|(c, _)| c.len() as f64).sum();
    let r: f64 = corpus.iter().map(|(_, rs)| rs.iter().map(|x| x.len() as f64).sum::<f64>() / rs.len() as f64).sum();
    let ratio = (c / r).min(1.0);
    let beta = 0.5f64.ln() / (2.0f64 / 3.0).ln().powi(2);
    let bp = if ratio == 0.0 { 0.0 } else { (beta * ratio.ln().powi(2)).exp() };
    score * bp
}

fn levenshtein(a: &[&str], b: &[&str]) -> usize {
    let mut d = vec![vec![0; b.len() + 1]; a.len() + 1];
    for i in 0..=a.len() {
        for j in 0..=b.len() {
            d[i][j] = if i == 0 {
                j
            } else if j == 0 {
                i
            } else {
                let s = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
                s.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1)
            };
        }
    }
    d[a.len()][b.len()]
}

/// Minimum over every sequence of block shifts of (shifts + edit distance),
/// found by breadth-first search over all reachable orderings. A block may
/// move only if it occurs contiguously in the reference and has at most
/// `max_len` tokens. States deeper than the unshifted edit distance cannot
/// win and are not expanded.
pub fn ter_edits(hyp: &[&str], reference: &[&str], max_len: usize) -> usize {
    let occurs = |b: &[&str]| (0..reference.len()).any(|i| reference[i..].starts_with(b));
    let mut best = levenshtein(hyp, reference);
    let mut seen: BTreeSet<Vec<&str>> = BTreeSet::new();
    let mut queue: VecDeque<(Vec<&str>, usize)> = VecDeque::new();
    seen.insert(hyp.to_vec());
    queue.push_back((hyp.to_vec(), 0));
    while let Some((state, depth)) = queue.pop_front() {
        best = best.min(depth + levenshtein(&state, reference));
        if depth + 1 >= best {
            continue;
        }
        let n = state.len();
        for i in 0..n {
            for j in i + 1..=n.min(i + max_len) {
                let block = &state[i..j];
                if !occurs(block) {
                    continue;
                }
                let rest: Vec<&str> = state[..i].iter().chain(&state[j..]).copied().collect();
                for k in 0..=rest.len() {
                    let mut next = rest[..k].to_vec();
                    next.extend_from_slice(block);
                    next.extend_from_slice(&rest[k..]);
                    if seen.insert(next.clone()) {
                        queue.push_back((next, depth + 1));
                    }
                }
            }
        }
    }
    best
}

/// (matches, chunks) of the exact-match alignment with the most matches and,
/// among those, the fewest chunks, by trying every partial assignment.
pub fn meteor_alignment(cand: &[&str], reference: &[&str]) -> (usize, usize) {
    fn go(i: usize, cand: &[&str], reference: &[&str], links: &mut Vec<Option<usize>>, best: &mut (usize, usize)) {
        if i == cand.len() {
            let m = links.iter().flatten().count();
            let mut chunks = 0;
            for k in 0..links.len() {
                if let Some(j) = links[k] {
                    let continues = k > 0 && links[k - 1].is_some_and(|p| p + 1 == j);
                    if !continues {
                        chunks += 1;
                    }
                }
            }
            if m > best.0 || (m == best.0 && chunks < best.1) {
                *best = (m, chunks);
            }
            return;
        }
        links.push(None);
        go(i + 1, cand, reference, links, best);
        links.pop();
        for j in 0..reference.len() {
            if reference[j] == cand[i] && !links.contains(&Some(j)) {
                links.push(Some(j));
                go(i + 1, cand, reference, links, best);
                links.pop();
            }
        }
    }
    let mut best = (0, 0);
    go(0, cand, reference, &mut Vec::new(), &mut best);
    best
}
