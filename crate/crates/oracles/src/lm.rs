//! Direct recursive smoothing formulas, recomputed from raw sentences on
//! every call.

use std::collections::{BTreeMap, BTreeSet};

pub struct Counts {
    order: usize,
    ngrams: BTreeMap<Vec<String>, f64>,
    vocab: BTreeSet<String>,
}

impl Counts {
    pub fn new(sentences: &[Vec<&str>], order: usize) -> Counts {
        let mut ngrams = BTreeMap::new();
        let mut vocab = BTreeSet::new();
        vocab.insert("<unk>".to_string());
        for s in sentences {
            let mut padded: Vec<String> = vec!["<s>".to_string(); order - 1];
            padded.extend(s.iter().map(|t| t.to_string()));
            padded.push("</s>".to_string());
            for i in order - 1..padded.len() {
                vocab.insert(padded[i].clone());
                for n in 1..=order {
                    *ngrams.entry(padded[i + 1 - n..=i].to_vec()).or_insert(0.0) += 1.0;
                }
            }
        }
        Counts { order, ngrams, vocab }
    }

    pub fn vocab(&self) -> Vec<String> {
        self.vocab.iter().cloned().collect()
    }

    fn count(&self, g: &[String]) -> f64 {
        self.ngrams.get(g).copied().unwrap_or(0.0)
    }

    fn followers(&self, h: &[String], counts: &dyn Fn(&[String]) -> f64) -> (f64, f64) {
        let mut total = 0.0;
        let mut types = 0.0;
        for w in &self.vocab {
            let mut g = h.to_vec();
            g.push(w.clone());
            let c = counts(&g);
            if c > 0.0 {
                total += c;
                types += 1.0;
            }
        }
        (total, types)
    }

    fn map_word(&self, w: &str) -> String {
        if self.vocab.contains(w) { w.to_string() } else { "<unk>".to_string() }
    }

    pub fn witten_bell(&self, history: &[&str], word: &str) -> f64 {
        let keep = history.len().min(self.order - 1);
        let h: Vec<String> = history[history.len() - keep..].iter().map(|t| self.map_word_hist(t)).collect();
        self.wb(&h, &self.map_word(word))
    }

    fn map_word_hist(&self, t: &str) -> String {
        if t == "<s>" { t.to_string() } else { self.map_word(t) }
    }

    fn wb(&self, h: &[String], w: &str) -> f64 {
        let lower = if h.is_empty() { 1.0 / self.vocab.len() as f64 } else { self.wb(&h[1..], w) };
        let (total, types) = self.followers(h, &|g| self.count(g));
        if total == 0.0 {
            return lower;
        }
        let mut g = h.to_vec();
        g.push(w.to_string());
        (self.count(&g) + types * lower) / (total + types)
    }

    /// Number of distinct tokens seen immediately before `g`.
    fn continuation(&self, g: &[String]) -> f64 {
        self.ngrams.keys().filter(|k| k.len() == g.len() + 1 && k[1..] == *g).count() as f64
    }

    fn kn_count(&self, g: &[String]) -> f64 {
        if g.len() == self.order { self.count(g) } else { self.continuation(g) }
    }

    pub fn kn_discount(&self, k: usize) -> f64 {
        let (mut n1, mut n2) = (0.0, 0.0);
        for g in self.ngrams.keys().filter(|g| g.len() == k) {
            let c = self.kn_count(g);
            if c == 1.0 {
                n1 += 1.0;
            } else if c == 2.0 {
                n2 += 1.0;
            }
        }
        if n1 == 0.0 { 0.5 } else { n1 / (n1 + 2.0 * n2) }
    }

    pub fn kneser_ney(&self, history: &[&str], word: &str) -> f64 {
        let keep = history.len().min(self.order - 1);
        let h: Vec<String> = history[history.len() - keep..].iter().map(|t| self.map_word_hist(t)).collect();
        self.kn(&h, &self.map_word(word))
    }

    fn kn(&self, h: &[String], w: &str) -> f64 {
        let lower = if h.is_empty() { 1.0 / self.vocab.len() as f64 } else { self.kn(&h[1..], w) };
        let k = h.len() + 1;
        let d = self.kn_discount(k);
        let (total, types) = self.followers(h, &|g| self.kn_count(g));
        if total == 0.0 {
            return lower;
        }
        let mut g = h.to_vec();
        g.push(w.to_string());
        (self.kn_count(&g) - d).max(0.0) / total + d * types / total * lower
    }
}
