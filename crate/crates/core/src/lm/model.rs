use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CountTable, LanguageModel, LmError, BOS, UNK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothing {
    WittenBell,
    KneserNeyInterpolated,
}

impl Smoothing {
    pub fn name(self) -> &'static str {
        match self {
            Smoothing::WittenBell => "witten-bell",
            Smoothing::KneserNeyInterpolated => "kneser-ney",
        }
    }
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Smoothing {
    type Err = LmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "witten-bell" | "wb" => Ok(Smoothing::WittenBell),
            "kneser-ney" | "kn" => Ok(Smoothing::KneserNeyInterpolated),
            other => Err(LmError::Parse { line: 0, message: format!("unknown smoothing {other:?}") }),
        }
    }
}

type Key = Vec<u32>;

/// Stored per n-gram, both as log10: the interpolated probability of its
/// last token given the rest (absent for n-grams that only occur as
/// histories), and the weight given to the lower order when it is itself
/// used as a history. Keeping logs makes the text form round-trip exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    prob: Option<f64>,
    backoff: Option<f64>,
}

/// An estimated, immutable n-gram model.
///
/// Interpolated estimates are stored in backoff form: for a history `h` and
/// word `w`, `p(w|h)` is the stored value when `h w` was observed and
/// `backoff(h) * p(w|h')` otherwise.
#[derive(Debug, Clone)]
pub struct NGramModel {
    order: usize,
    smoothing: Smoothing,
    symbols: Vec<String>,
    index: HashMap<String, u32>,
    unk: u32,
    vocab_size: usize,
    levels: Vec<HashMap<Key, Entry>>,
    discounts: Vec<f64>,
    degenerate_orders: Vec<usize>,
}

/// Per-history totals at one level.
#[derive(Default, Clone, Copy)]
struct HistoryStats {
    total: f64,
    types: f64,
}

/// Estimates a smoothed model from raw counts.
///
/// Witten-Bell: `p(w|h) = (c(h w) + T(h) p(w|h')) / (c(h) + T(h))` with `T(h)`
/// the number of distinct successors of `h`, bottoming out at the uniform
/// distribution over the vocabulary.
///
/// Interpolated Kneser-Ney: the highest order uses raw counts, lower orders
/// use continuation counts `N1+(. g)`; each order `k` has one absolute
/// discount `D_k = n1 / (n1 + 2 n2)` computed from the counts-of-counts of
/// the counts used at that order. Orders with neither singletons nor
/// doubletons fall back to `D_k = 0.5` and are listed in
/// [`NGramModel::degenerate_orders`]. So do orders without singletons,
/// where the formula gives `D_k = 0` and unseen words would get no mass.
pub fn estimate(table: &CountTable, smoothing: Smoothing) -> Result<NGramModel, LmError> {
    if table.is_empty() {
        return Err(LmError::EmptyTable);
    }
    let order = table.order();

    let mut words: BTreeSet<&str> = BTreeSet::new();
    for (ngram, _) in table.iter() {
        words.extend(ngram.iter().map(String::as_str));
    }
    words.insert(UNK);
    let symbols: Vec<String> = words.iter().map(|s| s.to_string()).collect();
    let index: HashMap<String, u32> = symbols.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
    let unk = index[UNK];
    let bos = index.get(BOS).copied();
    let vocab_size = symbols.len() - usize::from(bos.is_some());

    // raw counts per level, keyed by symbol ids
    let mut raw: Vec<HashMap<Key, f64>> = vec![HashMap::new(); order];
    for (ngram, c) in table.iter() {
        let key: Key = ngram.iter().map(|w| index[w.as_str()]).collect();
        raw[key.len() - 1].insert(key, c as f64);
    }

    let counts: Vec<HashMap<Key, f64>> = match smoothing {
        Smoothing::WittenBell => raw,
        Smoothing::KneserNeyInterpolated => {
            let mut adjusted = vec![HashMap::new(); order];
            for k in 1..order {
                // N1+(. g): distinct left extensions of every level-k n-gram
                let mut cont: HashMap<Key, f64> = raw[k - 1].keys().map(|g| (g.clone(), 0.0)).collect();
                for longer in raw[k].keys() {
                    if let Some(c) = cont.get_mut(&longer[1..]) {
                        *c += 1.0;
                    }
                }
                adjusted[k - 1] = cont;
            }
            adjusted[order - 1] = raw[order - 1].clone();
            adjusted
        }
    };

    let mut discounts = Vec::new();
    let mut degenerate_orders = Vec::new();
    if smoothing == Smoothing::KneserNeyInterpolated {
        for (k, level) in counts.iter().enumerate() {
            let n1 = level.values().filter(|&&c| c == 1.0).count() as f64;
            let n2 = level.values().filter(|&&c| c == 2.0).count() as f64;
            if n1 == 0.0 {
                discounts.push(0.5);
                degenerate_orders.push(k + 1);
            } else {
                discounts.push(n1 / (n1 + 2.0 * n2));
            }
        }
    }

    let mut model = NGramModel {
        order,
        smoothing,
        symbols,
        index,
        unk,
        vocab_size,
        levels: vec![HashMap::new(); order],
        discounts,
        degenerate_orders,
    };

    for k in 1..=order {
        let level_counts = &counts[k - 1];
        let mut stats: HashMap<Key, HistoryStats> = HashMap::new();
        for (g, &c) in level_counts {
            if c > 0.0 {
                let s = stats.entry(g[..k - 1].to_vec()).or_default();
                s.total += c;
                s.types += 1.0;
            }
        }
        let discount = model.discounts.get(k - 1).copied().unwrap_or(0.0);
        // (alpha for a count, lower-order weight) for one history
        let split = |s: &HistoryStats, c: f64| -> (f64, f64) {
            match smoothing {
                Smoothing::WittenBell => (c / (s.total + s.types), s.types / (s.total + s.types)),
                Smoothing::KneserNeyInterpolated => ((c - discount).max(0.0) / s.total, discount * s.types / s.total),
            }
        };

        let mut keys: Vec<Key> = level_counts.keys().cloned().collect();
        if k == 1 && !level_counts.contains_key(&vec![unk]) {
            // every predictable symbol needs a unigram row
            keys.push(vec![unk]);
        }
        let mut entries: HashMap<Key, Entry> = HashMap::new();
        for g in keys {
            let c = level_counts.get(&g).copied().unwrap_or(0.0);
            let h = &g[..k - 1];
            let lower = if k == 1 { 1.0 / vocab_size as f64 } else { model.lookup(&h[1..], g[k - 1]) };
            let p = match stats.get(h) {
                Some(s) => {
                    let (alpha, gamma) = split(s, c);
                    alpha + gamma * lower
                }
                None => lower,
            };
            entries.insert(g, Entry { prob: Some(p.log10()), backoff: None });
        }
        if k > 1 {
            for (h, s) in &stats {
                let gamma = split(s, 0.0).1;
                model.levels[k - 2].entry(h.clone()).or_insert(Entry { prob: None, backoff: None }).backoff = Some(gamma.log10());
            }
        }
        model.levels[k - 1] = entries;
    }
    Ok(model)
}

impl NGramModel {
    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    /// Number of predictable symbols, `<unk>` and `</s>` included.
    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    /// Per-order discounts (Kneser-Ney only; empty for Witten-Bell).
    pub fn discounts(&self) -> &[f64] {
        &self.discounts
    }

    /// Orders whose discount fell back to 0.5 because no n-gram at that
    /// order occurred exactly once.
    pub fn degenerate_orders(&self) -> &[usize] {
        &self.degenerate_orders
    }

    fn id(&self, token: &str) -> u32 {
        self.index.get(token).copied().unwrap_or(self.unk)
    }

    /// Histories observed in training, as token sequences of length
    /// `0..order`, in sorted order.
    pub fn histories(&self) -> Vec<Vec<String>> {
        let mut out: BTreeSet<Vec<String>> = BTreeSet::new();
        out.insert(Vec::new());
        for level in &self.levels[..self.order - 1] {
            for (key, e) in level {
                if e.backoff.is_some() {
                    out.insert(key.iter().map(|&i| self.symbols[i as usize].clone()).collect());
                }
            }
        }
        out.into_iter().collect()
    }

    fn lookup(&self, history: &[u32], word: u32) -> f64 {
        let mut scale = 0.0;
        for start in 0..=history.len() {
            let h = &history[start..];
            let mut key = h.to_vec();
            key.push(word);
            if let Some(p) = self.levels[h.len()].get(&key).and_then(|e| e.prob) {
                return 10f64.powf(scale + p);
            }
            if !h.is_empty() {
                if let Some(g) = self.levels[h.len() - 1].get(h).and_then(|e| e.backoff) {
                    scale += g;
                }
            }
        }
        // only reachable for symbols without a unigram row, i.e. `<s>`
        self.levels[0].get(&vec![self.unk]).and_then(|e| e.prob).map_or(0.0, |p| 10f64.powf(scale + p))
    }

    /// Plain-text dump: a header followed by one row per stored n-gram,
    /// `order<TAB>ngram<TAB>log10 prob[<TAB>log10 backoff]`, sorted by order
    /// then by tokens. History-only rows carry `-inf` as probability.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# mtkit n-gram model");
        let _ = writeln!(out, "order\t{}", self.order);
        let _ = writeln!(out, "smoothing\t{}", self.smoothing);
        let _ = writeln!(out, "vocab_size\t{}", self.vocab_size);
        let discounts: Vec<String> = self.discounts.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "discounts\t{}", if discounts.is_empty() { "-".to_string() } else { discounts.join(",") });
        let degenerate: Vec<String> = self.degenerate_orders.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "degenerate_orders\t{}", if degenerate.is_empty() { "-".to_string() } else { degenerate.join(",") });
        out.push('\n');
        for (k, level) in self.levels.iter().enumerate() {
            let mut rows: Vec<(Vec<&str>, &Entry)> = level
                .iter()
                .map(|(key, e)| (key.iter().map(|&i| self.symbols[i as usize].as_str()).collect(), e))
                .collect();
            rows.sort_by(|a, b| a.0.cmp(&b.0));
            for (tokens, e) in rows {
                let prob = e.prob.unwrap_or(f64::NEG_INFINITY);
                let _ = write!(out, "{}\t{}\t{}", k + 1, tokens.join(" "), prob);
                if let Some(b) = e.backoff {
                    let _ = write!(out, "\t{}", b);
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<NGramModel, LmError> {
        let err = |line: usize, message: String| LmError::Parse { line, message };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut header: HashMap<&str, &str> = HashMap::new();
        for (no, line) in lines.by_ref() {
            if line.is_empty() {
                break;
            }
            if line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('\t').ok_or_else(|| err(no, "expected key<TAB>value".into()))?;
            header.insert(k, v);
        }
        let field = |k: &str| header.get(k).copied().ok_or_else(|| err(0, format!("missing header field {k}")));
        let order: usize = field("order")?.parse().map_err(|_| err(0, "bad order".into()))?;
        if order == 0 {
            return Err(LmError::InvalidOrder);
        }
        let smoothing: Smoothing = field("smoothing")?.parse()?;
        let vocab_size: usize = field("vocab_size")?.parse().map_err(|_| err(0, "bad vocab_size".into()))?;
        let parse_list = |s: &str| -> Result<Vec<String>, LmError> {
            Ok(if s == "-" { Vec::new() } else { s.split(',').map(str::to_owned).collect() })
        };
        let discounts = parse_list(field("discounts")?)?
            .iter()
            .map(|d| d.parse::<f64>().map_err(|_| err(0, format!("bad discount {d:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let degenerate_orders = parse_list(field("degenerate_orders")?)?
            .iter()
            .map(|d| d.parse::<usize>().map_err(|_| err(0, format!("bad order {d:?}"))))
            .collect::<Result<Vec<_>, _>>()?;

        let mut rows: Vec<(usize, Vec<String>, Entry)> = Vec::new();
        let mut words: BTreeSet<String> = BTreeSet::new();
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if !(3..=4).contains(&cols.len()) {
                return Err(err(no, "expected 3 or 4 tab-separated columns".into()));
            }
            let k: usize = cols[0].parse().map_err(|_| err(no, "bad order column".into()))?;
            let tokens: Vec<String> = cols[1].split(' ').map(str::to_owned).collect();
            if k == 0 || k > order || tokens.len() != k {
                return Err(err(no, format!("n-gram {:?} does not match order column {k}", cols[1])));
            }
            let log_p: f64 = cols[2].parse().map_err(|_| err(no, "bad probability".into()))?;
            let backoff = match cols.get(3) {
                Some(b) => Some(b.parse::<f64>().map_err(|_| err(no, "bad backoff".into()))?),
                None => None,
            };
            let prob = if log_p == f64::NEG_INFINITY { None } else { Some(log_p) };
            words.extend(tokens.iter().cloned());
            rows.push((k, tokens, Entry { prob, backoff }));
        }
        words.insert(UNK.to_owned());
        let symbols: Vec<String> = words.into_iter().collect();
        let index: HashMap<String, u32> = symbols.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        let mut levels = vec![HashMap::new(); order];
        for (k, tokens, e) in rows {
            let key: Key = tokens.iter().map(|t| index[t]).collect();
            levels[k - 1].insert(key, e);
        }
        let unk = index[UNK];
        let unigram_rows = levels[0].values().filter(|e: &&Entry| e.prob.is_some()).count();
        if unigram_rows != vocab_size || !levels[0].get(&vec![unk]).is_some_and(|e| e.prob.is_some()) {
            return Err(err(0, format!("vocab_size {vocab_size} does not match {unigram_rows} unigram rows with <unk>")));
        }
        Ok(NGramModel { order, smoothing, symbols, index, unk, vocab_size, levels, discounts, degenerate_orders })
    }
}

impl LanguageModel for NGramModel {
    fn order(&self) -> usize {
        self.order
    }

    fn prob(&self, history: &[&str], word: &str) -> f64 {
        let keep = history.len().min(self.order - 1);
        let ids: Vec<u32> = history[history.len() - keep..].iter().map(|t| self.id(t)).collect();
        let w = self.id(word);
        let w = if self.levels[0].get(&vec![w]).is_some_and(|e| e.prob.is_some()) { w } else { self.unk };
        self.lookup(&ids, w)
    }

    fn vocabulary(&self) -> Vec<String> {
        let mut v: Vec<String> = self.levels[0]
            .iter()
            .filter(|(_, e)| e.prob.is_some())
            .map(|(k, _)| self.symbols[k[0] as usize].clone())
            .collect();
        v.sort();
        v
    }
}
